"""
Training protocol: mini-batch Adam on the scaled training rows, early
stopping on validation MSE, and k-fold cross-validation.
"""
import logging
import math
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .conf import get_conf
from .design import make_rng
from .exceptions import ConfigError, Diverged, EmptyDataset, ShapeMismatch, TooFewRows
from .mlp import DEFAULT_LAYER_SIZES, AdamState, MlpModel, adam_step
from .preprocessing import FeatureCodec, SplitSpec, fit_scaler, split, transform, transform_target

logger = logging.getLogger(__name__)

STREAM_SHUFFLE = 4


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    batch_size: int = 64
    max_epochs: int = 500
    patience: int = 20
    seed: int = 0
    layer_sizes: tuple = tuple(DEFAULT_LAYER_SIZES)

    def __post_init__(self):
        object.__setattr__(self, 'layer_sizes', tuple(int(size) for size in self.layer_sizes))

        if self.patience < 1:
            raise ConfigError("patience must be at least 1")
        if not (0 < self.beta1 < 1 and 0 < self.beta2 < 1):
            raise ConfigError("Adam betas must lie in (0, 1)")
        if self.learning_rate <= 0 or self.epsilon <= 0:
            raise ConfigError("learning_rate and epsilon must be positive")
        if self.batch_size < 1 or self.max_epochs < 1:
            raise ConfigError("batch_size and max_epochs must be at least 1")
        if len(self.layer_sizes) < 2 or self.layer_sizes[-1] != 1:
            raise ConfigError("layer_sizes must end with a single output node")

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown training options: {', '.join(sorted(unknown))}")
        return cls(**data)

    @classmethod
    def from_conf(cls, config=None, seed=None):
        data = dict((config or get_conf())['TRAIN'])
        if seed is not None:
            data['seed'] = seed
        return cls.from_dict(data)

    def to_dict(self):
        data = asdict(self)
        data['layer_sizes'] = list(self.layer_sizes)
        return data

    def defaulted_options(self):
        """
        Returns the options still at their built-in defaults.
        """
        defaults = TrainConfig().to_dict()
        return sorted(name for name, value in self.to_dict().items() if name != 'seed' and value == defaults[name])


@dataclass(frozen=True)
class RegressionMetrics:
    mae: float
    mse: float
    rmse: float
    # None when the targets are constant
    r2: float = None

    def to_dict(self):
        return asdict(self)


def regression_metrics(targets, predictions):
    targets = np.asarray(targets, dtype=float)
    predictions = np.asarray(predictions, dtype=float)
    if targets.shape != predictions.shape:
        raise ShapeMismatch(f"{targets.shape} targets against {predictions.shape} predictions")
    if targets.size == 0:
        raise EmptyDataset("cannot evaluate on no rows")

    error = predictions - targets
    mse = float(np.mean(error ** 2))
    total = float(np.sum((targets - targets.mean()) ** 2))

    r2 = None
    if total > 0:
        r2 = 1.0 - float(np.sum(error ** 2)) / total
    else:
        logger.warning("Targets are constant; R^2 is undefined")

    return RegressionMetrics(mae=float(np.mean(np.abs(error))), mse=mse, rmse=math.sqrt(mse), r2=r2)


def evaluate(model, dataset):
    """
    Returns the regression metrics of `model` on a Dataset, in NM.
    """
    if len(dataset) == 0:
        raise EmptyDataset("cannot evaluate on no rows")
    features, targets = model.codec.encode_dataset(dataset)
    return regression_metrics(targets, model.predict_features(features))


@dataclass
class TrainingResult:
    model: MlpModel
    # One {'epoch', 'train_mse', 'validate_mse'} dict per epoch run, scaled units
    history: list = field(default_factory=list)
    best_epoch: int = 0


def train(train_set, validate_set, config):
    """
    Trains a model on `train_set`, stopping when validation MSE has not
    strictly improved for `config.patience` epochs, and returns the
    parameters of the best validation epoch.

    Raises Diverged, carrying the history so far, on a non-finite loss.
    """
    if len(train_set) == 0 or len(validate_set) == 0:
        raise TooFewRows("training needs non-empty training and validation rows")

    codec = FeatureCodec()
    train_x, train_y = codec.encode_dataset(train_set)
    validate_x, validate_y = codec.encode_dataset(validate_set)

    scaler = fit_scaler(train_x, train_y, codec.features)
    train_x, train_y = transform(scaler, train_x), transform_target(scaler, train_y)
    validate_x, validate_y = transform(scaler, validate_x), transform_target(scaler, validate_y)

    layer_sizes = list(config.layer_sizes)
    if layer_sizes[0] != codec.size:
        raise ConfigError(f"the input layer must have {codec.size} nodes, got {layer_sizes[0]}")

    model = MlpModel.initialize(layer_sizes, config.seed, codec, scaler)
    params = model.parameters()
    state = AdamState.zeros(params)
    rng = make_rng(config.seed, STREAM_SHUFFLE)

    history = []
    best_epoch, best_loss, best_params = 0, math.inf, params

    for epoch in range(config.max_epochs):
        order = rng.permutation(len(train_y))
        for start in range(0, len(order), config.batch_size):
            batch = order[start:start + config.batch_size]
            loss, grads = model.backward(train_x[batch], train_y[batch])
            if not math.isfinite(loss):
                raise Diverged(f"non-finite training loss in epoch {epoch}", history)

            params, state = adam_step(params, grads, state, config)
            model.set_parameters(params)

        record = {
            'epoch': epoch,
            'train_mse': model.loss(train_x, train_y),
            'validate_mse': model.loss(validate_x, validate_y),
        }
        history.append(record)

        if not (math.isfinite(record['train_mse']) and math.isfinite(record['validate_mse'])):
            raise Diverged(f"non-finite loss after epoch {epoch}", history)

        if record['validate_mse'] < best_loss:
            best_epoch, best_loss, best_params = epoch, record['validate_mse'], params
        elif epoch - best_epoch >= config.patience:
            logger.info("Early stopping after epoch %d; best epoch %d (validation MSE %.6g)", epoch, best_epoch, best_loss)
            break

        logger.debug("Epoch %d: train MSE %.6g, validation MSE %.6g", epoch, record['train_mse'], record['validate_mse'])

    model.set_parameters(best_params)
    model.metadata.update({
        'epochs_run': len(history),
        'best_epoch': best_epoch,
        'train_mse': history[best_epoch]['train_mse'],
        'validate_mse': history[best_epoch]['validate_mse'],
        'train_rows': len(train_set),
        'validate_rows': len(validate_set),
        'train_config': config.to_dict(),
        'defaulted_options': config.defaulted_options(),
    })

    return TrainingResult(model=model, history=history, best_epoch=best_epoch)


@dataclass
class FitResult:
    training: TrainingResult
    test_metrics: RegressionMetrics


def fit(dataset, split_spec, config):
    """
    Splits the dataset, trains on the first fold's (train, validate) pair
    and evaluates on the held-out test rows.
    """
    parts = split(dataset, split_spec)
    train_set, validate_set = next(parts.pairs())
    result = train(train_set, validate_set, config)
    result.model.metadata['split'] = asdict(split_spec)
    return FitResult(training=result, test_metrics=evaluate(result.model, parts.test))


@dataclass
class CrossValidation:
    folds: list
    mean: dict
    std: dict

    def rows(self):
        """
        Returns one row per fold followed by the mean and std rows.
        """
        rows = [dict(fold=str(i + 1), **m.to_dict()) for i, m in enumerate(self.folds)]
        rows.append(dict(fold='mean', **self.mean))
        rows.append(dict(fold='std', **self.std))
        return rows


def cross_validate(dataset, split_spec, config):
    """
    Trains one model per fold and evaluates it on that held-out fold only.
    Early stopping watches the next fold along; the remaining folds train
    and fit the scaling bounds.
    """
    if split_spec.k < 3:
        raise ConfigError(f"cross-validation needs at least 3 folds, got {split_spec.k}")

    parts = split(dataset, split_spec)
    folds = []

    for i, (train_set, validate_set, held_out) in enumerate(parts.triples()):
        result = train(train_set, validate_set, config)
        metrics = evaluate(result.model, held_out)
        logger.info("Fold %d: %s", i + 1, metrics)
        folds.append(metrics)

    mean, std = {}, {}
    for name in ('mae', 'mse', 'rmse', 'r2'):
        values = [getattr(m, name) for m in folds if getattr(m, name) is not None]
        mean[name] = float(np.mean(values)) if values else None
        std[name] = float(np.std(values, ddof=1)) if len(values) > 1 else None

    return CrossValidation(folds=folds, mean=mean, std=std)


def split_spec_from_conf(seed, config=None):
    data = dict((config or get_conf())['SPLIT'])
    return SplitSpec(test_fraction=float(data['test_fraction']), k=int(data['k']), seed=seed)
