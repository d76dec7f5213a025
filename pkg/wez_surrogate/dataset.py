import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .design import scenario_rows
from .exceptions import NoRange, NonFinite, WezError
from .ranges import DEFAULT_UPPER, find_max_range
from .simulation import SIM_VERSION, Scenario
from .tables import meta_path, read_table, write_table

logger = logging.getLogger(__name__)

SCENARIO_COLUMNS = Scenario.field_names()
TARGET_COLUMN = 'max_range'
DATASET_COLUMNS = SCENARIO_COLUMNS + [TARGET_COLUMN]


@dataclass(frozen=True)
class Sample:
    scenario: Scenario
    max_range: float


@dataclass(frozen=True)
class RowFailure:
    row: int
    scenario: dict
    error: str
    message: str

    def to_dict(self):
        return {'row': self.row, 'scenario': self.scenario, 'error': self.error, 'message': self.message}


@dataclass
class Dataset:
    """
    Scenario rows joined with their simulated maximum launch range in NM.
    """
    frame: pd.DataFrame
    metadata: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def __post_init__(self):
        if list(self.frame.columns) != DATASET_COLUMNS:
            raise WezError(f"dataset columns must be {','.join(DATASET_COLUMNS)}")

        self.frame = self.frame.astype(float).reset_index(drop=True)
        if not np.isfinite(self.frame.to_numpy()).all():
            raise NonFinite("dataset contains non-finite values")

    def __len__(self):
        return len(self.frame)

    @classmethod
    def from_samples(cls, samples, metadata=None):
        rows = [[*s.scenario.to_dict().values(), s.max_range] for s in samples]
        return cls(pd.DataFrame(rows, columns=DATASET_COLUMNS, dtype=float), metadata or {})

    @classmethod
    def from_frames(cls, frames, metadata=None):
        frame = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame(columns=DATASET_COLUMNS)
        return cls(frame, dict(metadata or {}))

    def column(self, name):
        return self.frame[name].to_numpy(dtype=float)

    @property
    def targets(self):
        return self.column(TARGET_COLUMN)

    def take(self, indices):
        """
        Returns a new Dataset with the given rows, in the given order.
        """
        return Dataset(self.frame.iloc[list(indices)].copy(), dict(self.metadata))

    def where(self, mask):
        return Dataset(self.frame[np.asarray(mask, dtype=bool)].copy(), dict(self.metadata))


def _solve_row(args):
    index, scenario, missile = args
    try:
        return index, find_max_range(scenario, missile), None
    except NoRange:
        return index, NoRange.sentinel, None
    except WezError as e:
        return index, None, RowFailure(index, scenario.to_dict(), type(e).__name__, str(e))


def generate_dataset(design, missile, jobs=1, progress=None):
    """
    Solves R_max for every design row and returns the Dataset, rows in
    design order whatever the number of jobs.

    Rows where the missile misses at every launch range searched get the
    NoRange sentinel. Rows still hitting at the search bound keep that bound
    and are counted in `saturated_rows`. Rows that fail for any other reason
    are left out and reported in `dataset.failures`. `progress(done, total)`
    is called every 1% of rows.
    """
    scenarios = scenario_rows(design)
    total = len(scenarios)
    tasks = [(i, scenario, missile) for i, scenario in enumerate(scenarios)]
    every = max(1, math.ceil(total / 100))

    samples = []
    failures = []

    def collect(results):
        for done, (index, value, failure) in enumerate(results, start=1):
            if failure is None:
                samples.append(Sample(scenarios[index], value))
            else:
                logger.warning("Row %d failed: %s", index, failure.message)
                failures.append(failure)

            if progress and (done % every == 0 or done == total):
                progress(done, total)

    if jobs <= 1:
        collect(map(_solve_row, tasks))
    else:
        chunksize = max(1, total // (jobs * 16))
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            collect(executor.map(_solve_row, tasks, chunksize=chunksize))

    metadata = {
        'seed': design.provenance.get('seed'),
        'missile_config_hash': missile.digest(),
        'sim_version': SIM_VERSION,
        'row_count': len(samples),
        'design_rows': total,
        'failed_rows': len(failures),
        'range_upper_bound': DEFAULT_UPPER,
        'saturated_rows': sum(1 for sample in samples if sample.max_range >= DEFAULT_UPPER),
    }

    dataset = Dataset.from_samples(samples, metadata)
    dataset.failures = failures
    return dataset


def write_dataset(dataset, path):
    write_table(dataset.frame, path)

    with open(meta_path(path), 'w', encoding='utf-8', newline='\n') as f:
        json.dump(dataset.metadata, f, indent=2, sort_keys=True)
        f.write('\n')


def read_dataset(path):
    frame = read_table(path, DATASET_COLUMNS)

    metadata = {}
    if os.path.exists(meta_path(path)):
        with open(meta_path(path), encoding='utf-8') as f:
            metadata = json.load(f)

    return Dataset(frame, metadata)
