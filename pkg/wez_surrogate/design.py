"""
Maximin Latin Hypercube designs over the launch-condition box.

Random numbers come from numpy's counter-based Philox generator. Each use
draws from its own stream, derived from the design seed with
`SeedSequence(seed, spawn_key=(stream,))`:

- stream 0: the per-variable stratum permutations
- stream 1: the position of each point inside its stratum
- stream 2: the maximin swap proposals
"""
import json
import logging
import os
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy.spatial import cKDTree

from .conf import get_conf
from .exceptions import ConfigError
from .simulation import Scenario
from .tables import meta_path, read_table, write_table
from .units import normalize_heading

logger = logging.getLogger(__name__)

STREAM_STRATA = 0
STREAM_JITTER = 1
STREAM_SWAPS = 2


def make_rng(seed, stream):
    if seed < 0 or seed >= 2 ** 64:
        raise ConfigError(f"seed must be an unsigned 64-bit integer, got {seed}")

    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(stream,))))


@dataclass(frozen=True)
class Variable:
    name: str
    min: float
    max: float
    unit: str = ''


@dataclass(frozen=True)
class DesignSpec:
    variables: tuple
    n_samples: int
    seed: int = 0
    maximin_iterations: int = 100000

    def __post_init__(self):
        variables = tuple(v if isinstance(v, Variable) else Variable(*v) for v in self.variables)
        object.__setattr__(self, 'variables', variables)

        if self.n_samples < 2:
            raise ConfigError(f"a design needs at least 2 samples, got {self.n_samples}")

        if self.maximin_iterations < 0:
            raise ConfigError("maximin_iterations must not be negative")

        names = [v.name for v in variables]
        if len(set(names)) != len(names):
            raise ConfigError("design variable names must be unique")

        for variable in variables:
            if not variable.min < variable.max:
                raise ConfigError(f"{variable.name}: min must be smaller than max")

    @classmethod
    def from_conf(cls, n_samples, seed, bounds=None, maximin_iterations=None):
        config = get_conf()
        return cls(
            variables=tuple(Variable(*b) for b in (bounds or config['DESIGN_BOUNDS'])),
            n_samples=n_samples,
            seed=seed,
            maximin_iterations=config['MAXIMIN_ITERATIONS'] if maximin_iterations is None else maximin_iterations,
        )

    @property
    def names(self):
        return [v.name for v in self.variables]

    @property
    def lows(self):
        return np.array([v.min for v in self.variables])

    @property
    def highs(self):
        return np.array([v.max for v in self.variables])


@dataclass(frozen=True)
class Design:
    spec: DesignSpec
    # n_samples x n_variables, in the variables' own units
    matrix: np.ndarray
    provenance: dict = field(default_factory=dict)

    @property
    def columns(self):
        return self.spec.names

    def to_frame(self):
        return pd.DataFrame(self.matrix, columns=self.columns)

    def to_csv(self, path):
        write_table(self.to_frame(), path)


class NearestNeighbours:
    """
    Nearest-neighbour distance of every design point, kept up to date while
    coordinates are swapped between points.
    """
    def __init__(self, points):
        self.points = points
        distances, indices = cKDTree(points).query(points, k=2, workers=-1)
        self.distance = distances[:, 1].copy()
        self.index = indices[:, 1].copy()

    @property
    def minimum(self):
        return float(self.distance.min())

    def closest_pair(self):
        i = int(np.argmin(self.distance))
        return i, int(self.index[i])

    def _distances_from(self, row):
        d = np.sqrt(((self.points - self.points[row]) ** 2).sum(axis=1))
        d[row] = np.inf
        return d

    def try_swap(self, a, b, column):
        """
        Swaps `column` between points a and b, and keeps the swap only if the
        minimum nearest-neighbour distance strictly increases. Returns True
        if the swap was kept.
        """
        points = self.points
        points[a, column], points[b, column] = points[b, column], points[a, column]

        distance = self.distance.copy()
        index = self.index.copy()

        stale = np.flatnonzero((self.index == a) | (self.index == b))
        stale = stale[(stale != a) & (stale != b)]

        for moved in (a, b):
            d = self._distances_from(moved)
            nearest = int(np.argmin(d))
            distance[moved] = d[nearest]
            index[moved] = nearest

            closer = d < distance
            closer[moved] = False
            closer[[a, b]] = False
            distance[closer] = d[closer]
            index[closer] = moved

        for row in stale:
            d = self._distances_from(row)
            nearest = int(np.argmin(d))
            distance[row] = d[nearest]
            index[row] = nearest

        if distance.min() > self.distance.min():
            self.distance = distance
            self.index = index
            return True

        points[a, column], points[b, column] = points[b, column], points[a, column]
        return False


def maximin(unit, iterations, rng):
    """
    Improves a Latin design in unit coordinates in place by swap-accept hill
    climbing on the minimum pairwise distance.

    Each proposal swaps one column between a point of the current closest
    pair and a random other point; a swap that leaves the closest pair
    untouched can never raise the minimum. Returns the provenance record.
    """
    n, k = unit.shape
    neighbours = NearestNeighbours(unit)
    initial = neighbours.minimum
    history = [initial]

    for _ in range(iterations):
        pair = neighbours.closest_pair()
        a = pair[int(rng.integers(2))]
        b = int(rng.integers(n - 1))
        if b >= a:
            b += 1
        column = int(rng.integers(k))

        if neighbours.try_swap(a, b, column):
            history.append(neighbours.minimum)

    logger.info(
        "Maximin pass: %d of %d swaps accepted, min distance %.6f -> %.6f",
        len(history) - 1, iterations, initial, neighbours.minimum,
    )

    return {
        'iterations': iterations,
        'accepted_swaps': len(history) - 1,
        'initial_min_distance': initial,
        'min_distance': neighbours.minimum,
        'min_distance_history': history,
    }


def latin_unit(n, k, seed):
    """
    Returns a plain random Latin design in [0, 1)^k: one point per stratum
    and per variable, placed uniformly inside its stratum.
    """
    strata = make_rng(seed, STREAM_STRATA)
    jitter = make_rng(seed, STREAM_JITTER)
    permutations = np.column_stack([strata.permutation(n) for _ in range(k)])
    return (permutations + jitter.random((n, k))) / n


def lhs_sample(spec):
    """
    Returns a maximin Latin Hypercube design for `spec`. Deterministic given
    the spec.
    """
    unit = latin_unit(spec.n_samples, len(spec.variables), spec.seed)
    provenance = maximin(unit, spec.maximin_iterations, make_rng(spec.seed, STREAM_SWAPS))
    provenance['seed'] = spec.seed

    matrix = spec.lows + unit * (spec.highs - spec.lows)

    if 'hdg_tgt' in spec.names:
        column = spec.names.index('hdg_tgt')
        matrix[:, column] = [normalize_heading(value) for value in matrix[:, column]]

    return Design(spec=spec, matrix=matrix, provenance=provenance)


def scenario_rows(design):
    """
    Returns the design rows as Scenarios, in row order.
    """
    names = design.columns
    return [Scenario(**dict(zip(names, row))) for row in design.matrix.tolist()]


def read_design(path, spec=None):
    """
    Reads a design CSV. Without a spec, the default bounds describe the
    columns and the row count sets n_samples.
    """
    names = spec.names if spec else [b[0] for b in get_conf()['DESIGN_BOUNDS']]
    frame = read_table(path, names)

    if spec is None:
        spec = DesignSpec.from_conf(n_samples=max(len(frame), 2), seed=0, maximin_iterations=0)

    provenance = {}
    if os.path.exists(meta_path(path)):
        with open(meta_path(path), encoding='utf-8') as f:
            provenance = json.load(f)
    provenance['source'] = str(path)

    return Design(spec=spec, matrix=frame.to_numpy(dtype=float), provenance=provenance)
