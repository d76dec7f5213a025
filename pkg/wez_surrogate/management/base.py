import json

from django.core.management.base import BaseCommand, CommandError

from ..conf import get_conf, get_seed, read_config_file
from ..exceptions import ConfigError, WezError
from ..missile import MissileConfig
from ..simulation import Scenario


class WezCommand(BaseCommand):
    """
    Base class for the pipeline commands.

    Subclasses implement `add_command_arguments`, `get_effective_config`
    and `run`. Effective configuration is layered as package defaults <
    Django settings < the `--config` JSON file < explicit flags.
    """
    uses_seed = False
    # Option dest -> flag, where the two differ
    flags = {}

    def add_arguments(self, parser):
        parser.add_argument('--config', help="JSON file of WEZ_SURROGATE overrides")
        parser.add_argument('--print-config', action='store_true', help="Print the effective configuration and exit")
        if self.uses_seed:
            parser.add_argument('--seed', type=int, help="Seed; defaults to $WEZ_SEED, then the configured SEED")
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def get_effective_config(self, options, conf):
        return {}

    def run(self, options, conf, effective):
        raise NotImplementedError

    def handle(self, *args, **options):
        try:
            conf = get_conf(read_config_file(options['config']) if options['config'] else None)
            if self.uses_seed:
                options['seed'] = get_seed(options['seed'], conf)

            effective = self.get_effective_config(options, conf)
            if options['print_config']:
                self.stdout.write(json.dumps(effective, indent=2, sort_keys=True))
                return

            self.run(options, conf, effective)
        except (WezError, OSError) as e:
            raise CommandError(str(e), returncode=1)

    def require(self, options, *names):
        """
        Reports a usage error (exit status 2) for missing required flags.
        Required flags are checked here rather than by argparse so that
        `--print-config` works on its own.
        """
        missing = [self.flags.get(name, '--' + name.replace('_', '-')) for name in names if options.get(name) is None]
        if missing:
            raise CommandError(f"the following arguments are required: {', '.join(missing)}", returncode=2)

    def missile_config(self, options, conf):
        data = dict(conf['MISSILE'])
        if options.get('missile'):
            data.update(self.read_json_object(options['missile']))
        return MissileConfig.from_dict(data)

    def read_scenario(self, path):
        return Scenario.from_dict(self.read_json_object(path))

    def read_json_object(self, path):
        with open(path, encoding='utf-8') as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as e:
                raise ConfigError(f"{path}: {e}")

        if not isinstance(data, dict):
            raise ConfigError(f"{path}: expected a JSON object")
        return data

    def write_json(self, data, path):
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            json.dump(data, f, indent=2, sort_keys=True)
            f.write('\n')
