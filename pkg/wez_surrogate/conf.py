import copy
import json
import os

from django.conf import settings

from .exceptions import ConfigError


# Name, min, max, unit of every launch-condition variable
DEFAULT_DESIGN_BOUNDS = [
    ('alt_sht', 1000.0, 45000.0, 'ft'),
    ('vel_sht', 400.0, 600.0, 'kt'),
    ('pit_sht', -45.0, 45.0, 'deg'),
    ('alt_tgt', 1000.0, 45000.0, 'ft'),
    ('vel_tgt', 400.0, 600.0, 'kt'),
    ('hdg_tgt', -180.0, 180.0, 'deg'),
    ('rgt_tgt', -60.0, 60.0, 'deg'),
]

DEFAULT_PLAUSIBILITY_RULES = [
    {
        'name': 'altitude_gap',
        'kind': 'max_abs_difference',
        'columns': ['alt_sht', 'alt_tgt'],
        'limit': 25000.0,
    },
]

CONFIG_KEYS = {
    'SEED', 'DESIGN_BOUNDS', 'MAXIMIN_ITERATIONS', 'MISSILE', 'ACTIVATION_FLOOR_NM',
    'PLAUSIBILITY_RULES', 'RULE_KINDS', 'TRAIN', 'SPLIT', 'SWEEP',
}


def get_conf(overrides=None):
    config = copy.deepcopy(getattr(settings, 'WEZ_SURROGATE', {}))
    config.update(copy.deepcopy(overrides or {}))
    config.setdefault('SEED', 0)
    config.setdefault('DESIGN_BOUNDS', DEFAULT_DESIGN_BOUNDS)
    config.setdefault('MAXIMIN_ITERATIONS', 100000)
    config.setdefault('MISSILE', {})
    config.setdefault('ACTIVATION_FLOOR_NM', 2000.0 / 1852.0)
    config.setdefault('PLAUSIBILITY_RULES', DEFAULT_PLAUSIBILITY_RULES)
    config.setdefault('RULE_KINDS', {})
    config.setdefault('TRAIN', {})
    config.setdefault('SPLIT', {'test_fraction': 0.2, 'k': 5})
    config.setdefault('SWEEP', {'start': -60.0, 'stop': 60.0, 'step': 0.5, 'ring_spacing_nm': 5.0})
    return config


def get_seed(flag=None, config=None):
    """
    Returns the seed to use: an explicit flag wins, then the WEZ_SEED
    environment variable, then the configured default.
    """
    if flag is not None:
        return int(flag)

    env = os.environ.get('WEZ_SEED')
    if env is not None and env.strip() != '':
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"WEZ_SEED must be an integer, got {env!r}")

    return int((config or get_conf())['SEED'])


def read_config_file(path):
    """
    Reads a JSON file of WEZ_SURROGATE overrides.
    """
    with open(path, encoding='utf-8') as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}: {e}")

    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a JSON object")

    unknown = set(data) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"{path}: unknown configuration keys: {', '.join(sorted(unknown))}")

    return data
