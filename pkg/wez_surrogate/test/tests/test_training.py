import math
from unittest import mock

import numpy as np
from django.test import SimpleTestCase, tag

from wez_surrogate.dataset import Dataset
from wez_surrogate.exceptions import ConfigError, Diverged, ShapeMismatch, TooFewRows
from wez_surrogate.preprocessing import SplitSpec, transform, transform_target
from wez_surrogate.training import TrainConfig, cross_validate, evaluate, fit, regression_metrics, train

from .utils import synthetic_dataset

SMALL = dict(layer_sizes=[9, 8, 1], batch_size=16, max_epochs=40, patience=5)


class TestRegressionMetrics(SimpleTestCase):
    def test_worked_example(self):
        metrics = regression_metrics([1.0, 2.0, 3.0], [1.0, 2.0, 4.0])
        self.assertAlmostEqual(metrics.mae, 1 / 3)
        self.assertAlmostEqual(metrics.mse, 1 / 3)
        self.assertAlmostEqual(metrics.rmse, 0.5774, places=4)
        self.assertAlmostEqual(metrics.r2, 0.5)

    def test_identities(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            targets = rng.normal(size=8)
            predictions = rng.normal(size=8)
            metrics = regression_metrics(targets, predictions)
            self.assertLessEqual(metrics.mae, metrics.rmse + 1e-12)
            self.assertAlmostEqual(metrics.rmse, math.sqrt(metrics.mse), places=12)
            self.assertLessEqual(metrics.r2, 1.0)

    def test_perfect_prediction(self):
        metrics = regression_metrics([1.0, 2.0, 5.0], [1.0, 2.0, 5.0])
        self.assertEqual((metrics.mae, metrics.mse, metrics.r2), (0.0, 0.0, 1.0))

    def test_mean_prediction(self):
        targets = np.array([1.0, 4.0, 7.0, 8.0])
        metrics = regression_metrics(targets, np.full(4, targets.mean()))
        self.assertAlmostEqual(metrics.r2, 0.0, places=12)

    def test_constant_targets(self):
        with self.assertLogs('wez_surrogate.training', 'WARNING'):
            metrics = regression_metrics([2.0, 2.0], [2.0, 3.0])
        self.assertIsNone(metrics.r2)
        self.assertEqual(metrics.mse, 0.5)

    def test_shape_mismatch(self):
        with self.assertRaises(ShapeMismatch):
            regression_metrics([1.0, 2.0], [1.0])


class TestTrainConfig(SimpleTestCase):
    def test_defaults(self):
        config = TrainConfig()
        self.assertEqual((config.learning_rate, config.beta1, config.beta2, config.epsilon), (1e-3, 0.9, 0.999, 1e-8))
        self.assertEqual((config.batch_size, config.max_epochs, config.patience), (64, 500, 20))
        self.assertEqual(config.layer_sizes, (9, 128, 128, 96, 96, 64, 64, 48, 48, 32, 16, 1))

    def test_invalid(self):
        for options in ({'patience': 0}, {'beta1': 1.0}, {'learning_rate': 0.0}, {'batch_size': 0}, {'layer_sizes': [9, 4, 2]}):
            with self.subTest(options=options):
                with self.assertRaises(ConfigError):
                    TrainConfig(**options)

    def test_unknown_option(self):
        with self.assertRaises(ConfigError):
            TrainConfig.from_dict({'momentum': 0.9})

    def test_defaulted_options(self):
        config = TrainConfig.from_dict({'learning_rate': 0.01, 'seed': 3})
        self.assertNotIn('learning_rate', config.defaulted_options())
        self.assertNotIn('seed', config.defaulted_options())
        self.assertIn('patience', config.defaulted_options())

    def test_from_conf(self):
        config = TrainConfig.from_conf({'TRAIN': {'max_epochs': 7}}, seed=11)
        self.assertEqual((config.max_epochs, config.seed), (7, 11))


class TestTrain(SimpleTestCase):
    def setUp(self):
        self.dataset = synthetic_dataset(120)
        self.train_set = self.dataset.take(np.arange(100))
        self.validate_set = self.dataset.take(np.arange(100, 120))

    def test_constant_target(self):
        frame = self.dataset.frame.copy()
        frame['max_range'] = 7.5
        dataset = Dataset(frame)
        config = TrainConfig(learning_rate=0.01, layer_sizes=[9, 8, 1], batch_size=16, max_epochs=200, patience=20)

        result = train(dataset.take(np.arange(100)), dataset.take(np.arange(100, 120)), config)
        self.assertLess(result.history[result.best_epoch]['validate_mse'], 1e-3)
        # The target scaler is degenerate; predictions come back at the constant
        predictions = result.model.predict_features(result.model.codec.encode_dataset(dataset)[0])
        np.testing.assert_allclose(predictions, 7.5)

    def test_early_stopping(self):
        config = TrainConfig(**SMALL)
        result = train(self.train_set, self.validate_set, config)

        self.assertLessEqual(len(result.history), min(config.max_epochs, result.best_epoch + config.patience + 1))
        best = min(record['validate_mse'] for record in result.history)
        self.assertEqual(result.history[result.best_epoch]['validate_mse'], best)
        self.assertEqual(result.best_epoch, [r['validate_mse'] for r in result.history].index(best))

    def test_restores_best_parameters(self):
        result = train(self.train_set, self.validate_set, TrainConfig(**SMALL))
        model = result.model

        features, targets = model.codec.encode_dataset(self.validate_set)
        loss = model.loss(transform(model.scaler, features), transform_target(model.scaler, targets))
        self.assertAlmostEqual(loss, result.history[result.best_epoch]['validate_mse'], places=12)

    def test_metadata(self):
        result = train(self.train_set, self.validate_set, TrainConfig(**SMALL))
        metadata = result.model.metadata
        self.assertEqual(metadata['epochs_run'], len(result.history))
        self.assertEqual(metadata['best_epoch'], result.best_epoch)
        self.assertEqual(metadata['train_rows'], 100)
        self.assertEqual(metadata['train_config']['layer_sizes'], [9, 8, 1])
        self.assertIn('learning_rate', metadata['defaulted_options'])

    def test_deterministic(self):
        first = train(self.train_set, self.validate_set, TrainConfig(seed=4, **SMALL))
        second = train(self.train_set, self.validate_set, TrainConfig(seed=4, **SMALL))
        self.assertEqual(first.history, second.history)
        for a, b in zip(first.model.parameters(), second.model.parameters()):
            np.testing.assert_array_equal(a, b)

    def test_learns(self):
        result = train(self.train_set, self.validate_set, TrainConfig(learning_rate=0.01, **SMALL))
        self.assertLess(result.history[result.best_epoch]['validate_mse'], result.history[0]['validate_mse'])

    def test_diverged(self):
        config = TrainConfig(learning_rate=1e100, layer_sizes=[9, 16, 16, 16, 16, 1], max_epochs=20, patience=20)
        with self.assertRaises(Diverged) as context:
            train(self.train_set, self.validate_set, config)
        self.assertIsInstance(context.exception.history, list)

    def test_input_layer_must_match_features(self):
        with self.assertRaises(ConfigError):
            train(self.train_set, self.validate_set, TrainConfig(layer_sizes=[7, 4, 1]))

    def test_empty_validation(self):
        with self.assertRaises(TooFewRows):
            train(self.train_set, self.dataset.take([]), TrainConfig(**SMALL))


class TestFit(SimpleTestCase):
    def test_fit(self):
        dataset = synthetic_dataset(60)
        result = fit(dataset, SplitSpec(seed=1), TrainConfig(**SMALL))

        self.assertEqual(result.training.model.metadata['split'], {'test_fraction': 0.2, 'k': 5, 'seed': 1})
        # 12 test rows, 48 in five folds of which the first validates
        self.assertEqual(result.training.model.metadata['validate_rows'], 10)
        self.assertEqual(result.training.model.metadata['train_rows'], 38)
        self.assertGreaterEqual(result.test_metrics.mse, 0.0)

    @tag('slow')
    def test_cross_validate(self):
        dataset = synthetic_dataset(60)
        cv = cross_validate(dataset, SplitSpec(seed=1), TrainConfig(**SMALL))

        rows = cv.rows()
        self.assertEqual(len(rows), 7)
        self.assertEqual([row['fold'] for row in rows], ['1', '2', '3', '4', '5', 'mean', 'std'])
        self.assertEqual(rows[5]['mse'], float(np.mean([m.mse for m in cv.folds])))
        self.assertEqual(rows[6]['mae'], float(np.std([m.mae for m in cv.folds], ddof=1)))

    def test_cross_validate_keeps_held_out_fold_unseen(self):
        dataset = synthetic_dataset(60)
        with mock.patch('wez_surrogate.training.train', wraps=train) as train_mock:
            with mock.patch('wez_surrogate.training.evaluate', wraps=evaluate) as evaluate_mock:
                cross_validate(dataset, SplitSpec(seed=1), TrainConfig(**SMALL))

        self.assertEqual(train_mock.call_count, 5)
        self.assertEqual(evaluate_mock.call_count, 5)
        for train_call, evaluate_call in zip(train_mock.call_args_list, evaluate_mock.call_args_list):
            train_set, validate_set = train_call.args[:2]
            held_out = evaluate_call.args[1]
            held_out_rows = set(held_out.column('alt_sht'))
            self.assertFalse(held_out_rows & set(train_set.column('alt_sht')))
            self.assertFalse(held_out_rows & set(validate_set.column('alt_sht')))

    def test_cross_validate_needs_three_folds(self):
        with self.assertRaises(ConfigError):
            cross_validate(synthetic_dataset(60), SplitSpec(k=2), TrainConfig(**SMALL))

    def test_evaluate_matches_metrics(self):
        dataset = synthetic_dataset(60)
        result = fit(dataset, SplitSpec(seed=1), TrainConfig(**SMALL))
        model = result.training.model
        features, targets = model.codec.encode_dataset(dataset)
        self.assertEqual(evaluate(model, dataset), regression_metrics(targets, model.predict_features(features)))
