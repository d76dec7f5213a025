import json
import os
import tempfile

import numpy as np
from django.test import SimpleTestCase

from wez_surrogate.exceptions import CorruptFile, FormatVersionMismatch, NonFinite, ShapeMismatch
from wez_surrogate.mlp import DEFAULT_LAYER_SIZES, AdamState, MlpModel, adam_step, load_model, save_model
from wez_surrogate.preprocessing import FeatureCodec, fit_scaler
from wez_surrogate.simulation import Scenario
from wez_surrogate.training import TrainConfig

from ..oracles import fd_gradient
from .utils import HEAD_ON, synthetic_dataset


def trained_like_model(seed=0):
    codec = FeatureCodec()
    features, targets = codec.encode_dataset(synthetic_dataset(50))
    return MlpModel.initialize([9, 6, 4, 1], seed, codec, fit_scaler(features, targets, codec.features))


class TestForward(SimpleTestCase):
    def test_zero_weights(self):
        model = MlpModel([np.zeros((3, 4)), np.zeros((4, 1))], [np.zeros(4), np.zeros(1)])
        self.assertEqual(model.forward([1.0, -2.0, 3.0]), 0.0)

    def test_single_hidden_unit(self):
        # relu(2 * 1.5 - 1) * 3 + 0.5
        model = MlpModel([[[2.0]], [[3.0]]], [[-1.0], [0.5]])
        self.assertEqual(model.forward([1.5]), 6.5)
        # relu clips the hidden unit
        self.assertEqual(model.forward([0.0]), 0.5)

    def test_batch_matches_rows(self):
        model = MlpModel.initialize([4, 5, 1], seed=3)
        rows = np.random.default_rng(0).uniform(size=(6, 4))
        batch = model.forward(rows)
        self.assertEqual(batch.shape, (6,))
        for row, value in zip(rows, batch):
            self.assertAlmostEqual(model.forward(row), value, places=12)

    def test_wrong_input_width(self):
        model = MlpModel.initialize([4, 5, 1], seed=3)
        with self.assertRaises(ShapeMismatch):
            model.forward(np.zeros(3))

    def test_mismatched_layers(self):
        with self.assertRaises(ShapeMismatch):
            MlpModel([np.zeros((3, 4)), np.zeros((5, 1))], [np.zeros(4), np.zeros(1)])

        with self.assertRaises(ShapeMismatch):
            MlpModel([np.zeros((3, 2))], [np.zeros(2)])

    def test_non_finite_parameters(self):
        with self.assertRaises(NonFinite):
            MlpModel([[[np.nan]]], [[0.0]])

    def test_initialize(self):
        model = MlpModel.initialize(DEFAULT_LAYER_SIZES, seed=1)
        self.assertEqual(model.layer_sizes, DEFAULT_LAYER_SIZES)
        for w, b in zip(model.weights, model.biases):
            self.assertLessEqual(np.abs(w).max(), np.sqrt(6.0 / w.shape[0]))
            self.assertFalse(b.any())

        again = MlpModel.initialize(DEFAULT_LAYER_SIZES, seed=1)
        for a, b in zip(model.parameters(), again.parameters()):
            np.testing.assert_array_equal(a, b)

    def test_predict(self):
        model = trained_like_model()
        scenario = Scenario(**HEAD_ON)
        encoded = model.codec.encode(scenario)
        self.assertEqual(model.predict(scenario), model.predict_features(encoded[np.newaxis, :])[0])


class TestGradients(SimpleTestCase):
    def assertGradientsMatch(self, model, features, targets):
        loss, grads = model.backward(features, targets)
        self.assertAlmostEqual(loss, model.loss(features, targets), places=12)

        numeric = fd_gradient(model, features, targets)
        for (array, position), expected in numeric.items():
            actual = grads[array].reshape(-1)[position]
            error = abs(actual - expected) / max(abs(actual), abs(expected), 1e-6)
            self.assertLess(error, 1e-4, f"parameter array {array}, position {position}")

    def test_against_finite_differences(self):
        rng = np.random.default_rng(11)
        for layer_sizes in ([3, 1], [3, 4, 1], [2, 5, 3, 1], [4, 3, 3, 2, 1]):
            with self.subTest(layer_sizes=layer_sizes):
                model = MlpModel.initialize(layer_sizes, seed=7)
                # Non-zero biases keep pre-activations away from the ReLU kink
                model.set_parameters([p + rng.uniform(0.05, 0.1, p.shape) for p in model.parameters()])
                features = rng.uniform(-1, 1, size=(5, layer_sizes[0]))
                targets = rng.uniform(-1, 1, size=5)
                self.assertGradientsMatch(model, features, targets)

    def test_gradient_shapes(self):
        model = MlpModel.initialize([3, 4, 1], seed=0)
        _, grads = model.backward(np.ones((2, 3)), [0.0, 1.0])
        self.assertEqual([g.shape for g in grads], [p.shape for p in model.parameters()])

    def test_zero_error(self):
        model = MlpModel.initialize([3, 4, 1], seed=0)
        features = np.random.default_rng(0).uniform(size=(8, 3))
        loss, grads = model.backward(features, model.forward(features))
        self.assertEqual(loss, 0.0)
        for grad in grads:
            self.assertFalse(grad.any())

    def test_duplicated_batch(self):
        model = MlpModel.initialize([3, 4, 1], seed=0)
        rng = np.random.default_rng(2)
        features, targets = rng.uniform(size=(4, 3)), rng.uniform(size=4)

        _, grads = model.backward(features, targets)
        _, doubled = model.backward(np.vstack([features, features]), np.concatenate([targets, targets]))
        for a, b in zip(grads, doubled):
            np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-15)

    def test_target_count_mismatch(self):
        model = MlpModel.initialize([3, 4, 1], seed=0)
        with self.assertRaises(ShapeMismatch):
            model.backward(np.ones((2, 3)), [1.0])


class TestAdam(SimpleTestCase):
    def setUp(self):
        self.config = TrainConfig(learning_rate=0.01)
        self.params = [np.array([[1.0, -2.0]]), np.array([0.5])]

    def test_zero_gradient(self):
        grads = [np.zeros_like(p) for p in self.params]
        params, state = adam_step(self.params, grads, AdamState.zeros(self.params), self.config)
        for before, after in zip(self.params, params):
            np.testing.assert_array_equal(before, after)
        self.assertEqual(state.step, 1)

    def test_first_step_moves_by_learning_rate(self):
        grads = [np.array([[3.0, -0.2]]), np.array([100.0])]
        params, _ = adam_step(self.params, grads, AdamState.zeros(self.params), self.config)
        np.testing.assert_allclose(params[0], [[0.99, -1.99]], rtol=1e-6)
        np.testing.assert_allclose(params[1], [0.49], rtol=1e-6)

    def test_constant_gradient_does_not_accelerate(self):
        grads = [np.array([[1.0, 1.0]]), np.array([1.0])]
        state = AdamState.zeros(self.params)
        first, state = adam_step(self.params, grads, state, self.config)
        second, state = adam_step(first, grads, state, self.config)
        for p0, p1, p2 in zip(self.params, first, second):
            self.assertTrue(np.all(np.abs(p2 - p1) <= np.abs(p1 - p0) + 1e-12))

    def test_inputs_untouched(self):
        grads = [np.ones_like(p) for p in self.params]
        state = AdamState.zeros(self.params)
        adam_step(self.params, grads, state, self.config)
        np.testing.assert_array_equal(self.params[0], [[1.0, -2.0]])
        self.assertEqual(state.step, 0)
        self.assertFalse(state.m[0].any())


class TestModelFile(SimpleTestCase):
    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.directory.name, 'model.json')

    def tearDown(self):
        self.directory.cleanup()

    def test_reload_predicts_identically(self):
        model = trained_like_model()
        model.metadata['best_epoch'] = 3
        save_model(model, self.path)
        loaded = load_model(self.path)

        self.assertEqual(loaded.layer_sizes, model.layer_sizes)
        self.assertEqual(loaded.codec, model.codec)
        self.assertEqual(loaded.scaler, model.scaler)
        self.assertEqual(loaded.metadata['best_epoch'], 3)

        features = model.codec.encode_dataset(synthetic_dataset(20, seed=5))[0]
        np.testing.assert_array_equal(loaded.predict_features(features), model.predict_features(features))

    def test_file_layout(self):
        save_model(trained_like_model(), self.path)
        with open(self.path) as f:
            data = json.load(f)
        self.assertEqual(data['format_version'], '1')
        self.assertEqual(data['layer_sizes'], [9, 6, 4, 1])
        self.assertEqual(data['feature_order'][5:7], ['sin_hdg_tgt', 'cos_hdg_tgt'])

    def test_truncated(self):
        save_model(trained_like_model(), self.path)
        with open(self.path) as f:
            text = f.read()
        with open(self.path, 'w') as f:
            f.write(text[:len(text) // 2])

        with self.assertRaises(CorruptFile):
            load_model(self.path)

    def test_wrong_version(self):
        save_model(trained_like_model(), self.path)
        with open(self.path) as f:
            data = json.load(f)
        data['format_version'] = '2'
        with open(self.path, 'w') as f:
            json.dump(data, f)

        with self.assertRaises(FormatVersionMismatch):
            load_model(self.path)

    def test_missing_weights(self):
        save_model(trained_like_model(), self.path)
        with open(self.path) as f:
            data = json.load(f)
        del data['weights']
        with open(self.path, 'w') as f:
            json.dump(data, f)

        with self.assertRaises(CorruptFile):
            load_model(self.path)
