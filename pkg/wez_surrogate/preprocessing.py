"""
Turns dataset rows into network inputs: angles become sine/cosine pairs,
then every feature and the target are min-max scaled with bounds fitted on
training rows only.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from .dataset import SCENARIO_COLUMNS, TARGET_COLUMN
from .design import make_rng
from .exceptions import ConfigError, DegenerateFeature, NonFinite, ShapeMismatch, TooFewRows

logger = logging.getLogger(__name__)

STREAM_SPLIT = 3

ANGLE_COLUMNS = ('hdg_tgt', 'rgt_tgt')


@dataclass(frozen=True)
class FeatureCodec:
    columns: tuple = tuple(SCENARIO_COLUMNS)
    angles: tuple = ANGLE_COLUMNS

    @property
    def features(self):
        features = []
        for column in self.columns:
            if column in self.angles:
                features += [f'sin_{column}', f'cos_{column}']
            else:
                features.append(column)
        return features

    @property
    def size(self):
        return len(self.features)

    def encode(self, scenario):
        """
        Returns the feature vector of one Scenario.
        """
        values = scenario.to_dict()
        return self.encode_matrix(np.array([[values[c] for c in self.columns]], dtype=float))[0]

    def encode_matrix(self, raw):
        """
        Encodes an (n, len(columns)) matrix of scenario values, angles in
        degrees, into an (n, size) feature matrix.
        """
        raw = np.asarray(raw, dtype=float)
        if raw.ndim != 2 or raw.shape[1] != len(self.columns):
            raise ShapeMismatch(f"expected {len(self.columns)} scenario columns, got shape {raw.shape}")
        if not np.isfinite(raw).all():
            raise NonFinite("scenario values must be finite")

        parts = []
        for i, column in enumerate(self.columns):
            if column in self.angles:
                radians = np.radians(raw[:, i])
                parts += [np.sin(radians), np.cos(radians)]
            else:
                parts.append(raw[:, i])
        return np.column_stack(parts)

    def encode_dataset(self, dataset):
        """
        Returns (features, targets) for every row of a Dataset.
        """
        features = self.encode_matrix(dataset.frame[list(self.columns)].to_numpy(dtype=float))
        return features, dataset.column(TARGET_COLUMN)

    def to_dict(self):
        return {'columns': list(self.columns), 'angles': list(self.angles)}

    @classmethod
    def from_dict(cls, data):
        return cls(columns=tuple(data['columns']), angles=tuple(data['angles']))


@dataclass(frozen=True)
class ScalerParams:
    feature_mins: tuple
    feature_maxs: tuple
    target_min: float
    target_max: float
    # Features that were constant on the training rows; they scale to 0.0
    degenerate: tuple = ()

    def __post_init__(self):
        if len(self.feature_mins) != len(self.feature_maxs):
            raise ShapeMismatch("feature_mins and feature_maxs differ in length")
        if any(lo > hi for lo, hi in zip(self.feature_mins, self.feature_maxs)) or self.target_min > self.target_max:
            raise ConfigError("scaler minimum exceeds maximum")

    def to_dict(self):
        return {
            'feature_mins': list(self.feature_mins),
            'feature_maxs': list(self.feature_maxs),
            'target_min': self.target_min,
            'target_max': self.target_max,
            'degenerate': list(self.degenerate),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            feature_mins=tuple(float(v) for v in data['feature_mins']),
            feature_maxs=tuple(float(v) for v in data['feature_maxs']),
            target_min=float(data['target_min']),
            target_max=float(data['target_max']),
            degenerate=tuple(data.get('degenerate', ())),
        )


def fit_scaler(features, targets, names=None, strict=False):
    """
    Fits min-max bounds on training rows.

    A constant feature cannot be scaled: it is logged and recorded in
    `degenerate`, and transforms to 0.0. With `strict=True` it raises
    DegenerateFeature instead.
    """
    features = np.asarray(features, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if features.ndim != 2 or len(features) != len(targets):
        raise ShapeMismatch(f"features {features.shape} do not match targets {targets.shape}")
    if len(features) == 0:
        raise TooFewRows("cannot fit a scaler on no rows")

    names = names or [f'x{i}' for i in range(features.shape[1])]
    mins = features.min(axis=0)
    maxs = features.max(axis=0)

    degenerate = []
    for name, lo, hi in zip(names, mins, maxs):
        if lo == hi:
            if strict:
                raise DegenerateFeature(name)
            logger.warning("Feature %s is constant (%g) on the training rows; it will scale to 0", name, lo)
            degenerate.append(name)

    return ScalerParams(
        feature_mins=tuple(mins.tolist()),
        feature_maxs=tuple(maxs.tolist()),
        target_min=float(targets.min()),
        target_max=float(targets.max()),
        degenerate=tuple(degenerate),
    )


def _scale(values, lo, hi):
    span = hi - lo
    safe = np.where(span == 0, 1.0, span)
    return np.where(span == 0, 0.0, (values - lo) / safe)


def transform(params, features):
    """
    Scales a feature vector or matrix. Values outside the fitted bounds map
    outside [0, 1].
    """
    features = np.asarray(features, dtype=float)
    if features.shape[-1] != len(params.feature_mins):
        raise ShapeMismatch(f"expected {len(params.feature_mins)} features, got {features.shape[-1]}")
    return _scale(features, np.array(params.feature_mins), np.array(params.feature_maxs))


def transform_target(params, targets):
    return _scale(np.asarray(targets, dtype=float), params.target_min, params.target_max)


def inverse_target(params, scaled):
    """
    Maps scaled network outputs back to NM.
    """
    return params.target_min + np.asarray(scaled, dtype=float) * (params.target_max - params.target_min)


@dataclass(frozen=True)
class SplitSpec:
    test_fraction: float = 0.2
    k: int = 5
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.test_fraction < 1.0:
            raise ConfigError("test_fraction must be in [0, 1)")
        if self.k < 2:
            raise ConfigError("k must be at least 2")


@dataclass(frozen=True)
class Split:
    test: object
    folds: list

    def pairs(self):
        """
        Yields (train, validate) for every fold: the fold validates, the
        others, in fold order, train.
        """
        for i, validate in enumerate(self.folds):
            others = [fold.frame for j, fold in enumerate(self.folds) if j != i]
            train = type(validate).from_frames(others, validate.metadata)
            yield train, validate

    def triples(self):
        """
        Yields (train, validate, held_out) for every fold: the fold is held
        out, the next one (wrapping round) validates and the others, in fold
        order, train.
        """
        k = len(self.folds)
        for i, held_out in enumerate(self.folds):
            j = (i + 1) % k
            others = [fold.frame for m, fold in enumerate(self.folds) if m not in (i, j)]
            train = type(held_out).from_frames(others, held_out.metadata)
            yield train, self.folds[j], held_out


def split(dataset, spec):
    """
    Shuffles rows with the spec's seed, holds out `test_fraction` of them
    and divides the rest into k folds whose sizes differ by at most one,
    the first folds taking the remainder.
    """
    n = len(dataset)
    if n < spec.k + 1:
        raise TooFewRows(f"{n} rows cannot be split into a test set and {spec.k} folds")

    n_test = math.floor(n * spec.test_fraction + 0.5)
    if spec.test_fraction > 0:
        n_test = max(1, n_test)
    if n - n_test < spec.k:
        raise TooFewRows(f"{n - n_test} training rows cannot fill {spec.k} folds")

    order = make_rng(spec.seed, STREAM_SPLIT).permutation(n)
    test, rest = order[:n_test], order[n_test:]

    return Split(
        test=dataset.take(test),
        folds=[dataset.take(fold) for fold in np.array_split(rest, spec.k)],
    )
