"""
A fully connected ReLU regressor written directly against numpy: forward
pass, exact backpropagation of the batch-mean squared error, and Adam.
"""
import copy
import json
from dataclasses import dataclass

import numpy as np

from .design import make_rng
from .exceptions import CorruptFile, FormatVersionMismatch, NonFinite, ShapeMismatch
from .preprocessing import FeatureCodec, ScalerParams, inverse_target, transform

FORMAT_VERSION = '1'
STREAM_INIT = 5

# 12 layers of nodes, input and output included
DEFAULT_LAYER_SIZES = [9, 128, 128, 96, 96, 64, 64, 48, 48, 32, 16, 1]


def relu(x):
    return np.maximum(0.0, x)


class MlpModel:
    """
    Weights are (fan_in, fan_out) matrices applied as `x @ W + b`. Hidden
    layers use ReLU, the output layer is linear.

    `codec` and `scaler` turn a Scenario into network inputs and the network
    output back into NM; a model trained by `training.train` carries both.
    """
    def __init__(self, weights, biases, codec=None, scaler=None, metadata=None):
        self.weights = [np.array(w, dtype=float) for w in weights]
        self.biases = [np.array(b, dtype=float) for b in biases]
        self.codec = codec
        self.scaler = scaler
        self.metadata = dict(metadata or {})

        if len(self.weights) != len(self.biases) or not self.weights:
            raise ShapeMismatch("a model needs one bias vector per weight matrix")

        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or b.shape != (w.shape[1],):
                raise ShapeMismatch(f"layer {i}: weight {w.shape} does not match bias {b.shape}")
            if i and w.shape[0] != self.weights[i - 1].shape[1]:
                raise ShapeMismatch(f"layer {i}: expects {w.shape[0]} inputs, previous layer gives {self.weights[i - 1].shape[1]}")
            if not (np.isfinite(w).all() and np.isfinite(b).all()):
                raise NonFinite(f"layer {i} has non-finite parameters")

        if self.weights[-1].shape[1] != 1:
            raise ShapeMismatch("the output layer must have a single node")

    @classmethod
    def initialize(cls, layer_sizes, seed, codec=None, scaler=None):
        """
        He-uniform weights, zero biases.
        """
        if len(layer_sizes) < 2 or min(layer_sizes) < 1:
            raise ShapeMismatch(f"invalid layer sizes {layer_sizes}")

        rng = make_rng(seed, STREAM_INIT)
        weights, biases = [], []
        for fan_in, fan_out in zip(layer_sizes, layer_sizes[1:]):
            limit = np.sqrt(6.0 / fan_in)
            weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
            biases.append(np.zeros(fan_out))

        return cls(weights, biases, codec, scaler, {'seed': seed, 'init': 'he_uniform'})

    @property
    def layer_sizes(self):
        return [self.weights[0].shape[0]] + [w.shape[1] for w in self.weights]

    def parameters(self):
        """
        Returns every parameter array, layer by layer: W0, b0, W1, b1, ...
        """
        params = []
        for w, b in zip(self.weights, self.biases):
            params += [w, b]
        return params

    def set_parameters(self, params):
        self.weights = [np.array(p, dtype=float) for p in params[0::2]]
        self.biases = [np.array(p, dtype=float) for p in params[1::2]]

    def copy(self):
        return copy.deepcopy(self)

    def _check_input(self, features):
        features = np.asarray(features, dtype=float)
        single = features.ndim == 1
        if single:
            features = features[np.newaxis, :]
        if features.ndim != 2 or features.shape[1] != self.layer_sizes[0]:
            raise ShapeMismatch(f"expected {self.layer_sizes[0]} inputs, got shape {np.shape(features)}")
        return features, single

    def _layers(self, x):
        # Returns the input of every layer and the network output
        inputs = []
        last = len(self.weights) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            inputs.append(x)
            z = x @ w + b
            x = z if i == last else relu(z)
        return inputs, x[:, 0]

    def forward(self, features):
        """
        Returns the scaled output for one feature vector, or an array of
        outputs for a feature matrix.
        """
        features, single = self._check_input(features)
        output = self._layers(features)[1]
        return float(output[0]) if single else output

    def predict(self, scenario):
        """
        Returns the predicted maximum launch range of a Scenario in NM.
        """
        return float(self.predict_features(self.codec.encode(scenario)[np.newaxis, :])[0])

    def predict_features(self, encoded):
        """
        Predicts NM from encoded, unscaled feature rows.
        """
        if self.codec is None or self.scaler is None:
            raise ShapeMismatch("model has no feature codec or scaler")
        return inverse_target(self.scaler, self.forward(transform(self.scaler, encoded)))

    def loss(self, features, targets):
        features, _ = self._check_input(features)
        error = self._layers(features)[1] - np.asarray(targets, dtype=float)
        return float(np.mean(error ** 2))

    def backward(self, features, targets):
        """
        Returns (loss, gradients) of the batch-mean squared error, gradients
        ordered as `parameters()`.
        """
        features, _ = self._check_input(features)
        targets = np.asarray(targets, dtype=float).reshape(-1)
        if len(targets) != len(features) or len(targets) == 0:
            raise ShapeMismatch(f"batch of {len(features)} rows has {len(targets)} targets")

        inputs, output = self._layers(features)
        error = output - targets
        loss = float(np.mean(error ** 2))

        delta = (2.0 / len(targets)) * error[:, np.newaxis]
        grads = []
        for i in range(len(self.weights) - 1, -1, -1):
            grads.append(delta.sum(axis=0))
            grads.append(inputs[i].T @ delta)
            if i:
                # inputs[i] is relu of the previous pre-activation
                delta = (delta @ self.weights[i].T) * (inputs[i] > 0)

        grads.reverse()
        return loss, grads


@dataclass
class AdamState:
    m: list
    v: list
    step: int = 0

    @classmethod
    def zeros(cls, params):
        return cls([np.zeros_like(p) for p in params], [np.zeros_like(p) for p in params], 0)


def adam_step(params, grads, state, config):
    """
    One bias-corrected Adam update. Returns (new params, new state) and
    leaves the inputs untouched.
    """
    step = state.step + 1
    beta1, beta2 = config.beta1, config.beta2

    m = [beta1 * m + (1 - beta1) * g for m, g in zip(state.m, grads)]
    v = [beta2 * v + (1 - beta2) * g * g for v, g in zip(state.v, grads)]

    correction1 = 1 - beta1 ** step
    correction2 = 1 - beta2 ** step
    params = [
        p - config.learning_rate * (mi / correction1) / (np.sqrt(vi / correction2) + config.epsilon)
        for p, mi, vi in zip(params, m, v)
    ]

    return params, AdamState(m, v, step)


def save_model(model, path):
    data = {
        'format_version': FORMAT_VERSION,
        'layer_sizes': model.layer_sizes,
        'weights': [w.tolist() for w in model.weights],
        'biases': [b.tolist() for b in model.biases],
        'feature_order': model.codec.features if model.codec else None,
        'codec': model.codec.to_dict() if model.codec else None,
        'scaler': model.scaler.to_dict() if model.scaler else None,
        'metadata': model.metadata,
    }

    # json writes floats with repr, which reads back bit-identical
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        json.dump(data, f, indent=1, sort_keys=True)
        f.write('\n')


def load_model(path):
    with open(path, encoding='utf-8') as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise CorruptFile(f"{path}: {e}")

    if not isinstance(data, dict):
        raise CorruptFile(f"{path}: not a model file")

    version = data.get('format_version')
    if version != FORMAT_VERSION:
        raise FormatVersionMismatch(f"{path}: format_version {version!r}, expected {FORMAT_VERSION!r}")

    try:
        model = MlpModel(
            data['weights'],
            data['biases'],
            codec=FeatureCodec.from_dict(data['codec']) if data.get('codec') else None,
            scaler=ScalerParams.from_dict(data['scaler']) if data.get('scaler') else None,
            metadata=data.get('metadata'),
        )
    except (KeyError, TypeError, ValueError, ShapeMismatch, NonFinite) as e:
        raise CorruptFile(f"{path}: {e}")

    if model.layer_sizes != data.get('layer_sizes'):
        raise CorruptFile(f"{path}: layer_sizes do not match the stored weights")

    return model
