import json
import os

import numpy as np
import pandas as pd

from wez_surrogate.dataset import DATASET_COLUMNS, Dataset

HEAD_ON = {
    'alt_sht': 20000.0,
    'vel_sht': 500.0,
    'pit_sht': 0.0,
    'alt_tgt': 20000.0,
    'vel_tgt': 500.0,
    'hdg_tgt': 180.0,
    'rgt_tgt': 0.0,
}


def synthetic_dataset(n, seed=0):
    """
    A dataset whose max_range is a smooth made-up function of the launch
    conditions, for exercising the pipeline without simulating.
    """
    rng = np.random.default_rng(seed)
    frame = pd.DataFrame({
        'alt_sht': rng.uniform(1000, 45000, n),
        'vel_sht': rng.uniform(400, 600, n),
        'pit_sht': rng.uniform(-45, 45, n),
        'alt_tgt': rng.uniform(1000, 45000, n),
        'vel_tgt': rng.uniform(400, 600, n),
        'hdg_tgt': rng.uniform(-180, 180, n),
        'rgt_tgt': rng.uniform(-60, 60, n),
    })
    frame['max_range'] = (
        5.0
        + frame['alt_sht'] / 2500.0
        + frame['vel_sht'] / 100.0
        - 4.0 * np.cos(np.radians(frame['hdg_tgt']))
        - np.abs(frame['rgt_tgt']) / 15.0
    )
    return Dataset(frame[DATASET_COLUMNS], {'seed': seed})


def write_json(data, directory, name):
    path = os.path.join(directory, name)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(data, f)
    return path
