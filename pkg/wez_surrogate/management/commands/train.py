import os
from dataclasses import asdict

from django.core.management.base import CommandError

from ...dataset import read_dataset
from ...exceptions import Diverged
from ...mlp import save_model
from ...training import TrainConfig, cross_validate, fit, split_spec_from_conf
from ..base import WezCommand


class Command(WezCommand):
    help = "Trains the surrogate network on a filtered dataset"
    uses_seed = True

    def add_command_arguments(self, parser):
        parser.add_argument('--data', help="Filtered dataset CSV")
        parser.add_argument('--out', default='model.json')
        parser.add_argument('--metrics', default='metrics.json')
        parser.add_argument('--cv', action='store_true', help="Also run k-fold cross-validation")
        parser.add_argument('--max-epochs', type=int)

    def get_train_config(self, options, conf):
        config = TrainConfig.from_conf(conf, seed=options['seed'])
        if options['max_epochs'] is not None:
            config = TrainConfig.from_dict(dict(config.to_dict(), max_epochs=options['max_epochs']))
        return config

    def get_effective_config(self, options, conf):
        return {
            'data': options['data'],
            'out': options['out'],
            'metrics': options['metrics'],
            'cv': options['cv'],
            'train': self.get_train_config(options, conf).to_dict(),
            'split': asdict(split_spec_from_conf(options['seed'], conf)),
        }

    def run(self, options, conf, effective):
        self.require(options, 'data')

        dataset = read_dataset(effective['data'])
        config = self.get_train_config(options, conf)
        split_spec = split_spec_from_conf(options['seed'], conf)

        try:
            result = fit(dataset, split_spec, config)
            cv = cross_validate(dataset, split_spec, config) if effective['cv'] else None
        except Diverged as e:
            path = os.path.splitext(effective['out'])[0] + '.history.json'
            self.write_json(e.history, path)
            raise CommandError(f"{e}; training history written to {path}", returncode=1)

        save_model(result.training.model, effective['out'])

        metrics = {
            'test': result.test_metrics.to_dict(),
            'best_epoch': result.training.best_epoch,
            'epochs_run': len(result.training.history),
            'history': result.training.history,
        }
        if cv is not None:
            metrics['cross_validation'] = cv.rows()
        self.write_json(metrics, effective['metrics'])

        test = result.test_metrics
        r2 = 'undefined' if test.r2 is None else f'{test.r2:.4f}'
        self.stdout.write(f"Test MAE {test.mae:.3f} NM, MSE {test.mse:.3f}, RMSE {test.rmse:.3f} NM, R2 {r2}")

        if cv is not None:
            self.stdout.write(f"{'fold':>6} {'mae':>8} {'mse':>8} {'rmse':>8} {'r2':>8}")
            for row in cv.rows():
                values = ' '.join('   undef' if row[name] is None else f'{row[name]:8.4f}' for name in ('mae', 'mse', 'rmse', 'r2'))
                self.stdout.write(f"{row['fold']:>6} {values}")
