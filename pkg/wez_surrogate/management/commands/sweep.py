from ...exceptions import ShapeMismatch
from ...mlp import load_model
from ...sweep import render_svg, sweep
from ..base import WezCommand


class Command(WezCommand):
    help = "Predicts maximum range across the off-boresight sector and optionally renders it"

    def add_command_arguments(self, parser):
        parser.add_argument('--model', help="Trained model JSON")
        parser.add_argument('--scenario', help="Base scenario JSON; its rgt_tgt is swept")
        parser.add_argument('--out', default='sweep.csv')
        parser.add_argument('--svg', help="Also write an SVG polar plot here")
        parser.add_argument('--step', type=float, help="Off-boresight step in degrees")

    def get_effective_config(self, options, conf):
        sweep_conf = dict(conf['SWEEP'])
        if options['step'] is not None:
            sweep_conf['step'] = options['step']
        return {
            'model': options['model'],
            'scenario': options['scenario'],
            'out': options['out'],
            'svg': options['svg'],
            'sweep': sweep_conf,
        }

    def run(self, options, conf, effective):
        self.require(options, 'model', 'scenario')

        model = load_model(effective['model'])
        if model.codec is None or model.scaler is None:
            raise ShapeMismatch(f"{effective['model']} has no embedded feature codec and scaler")

        base = self.read_scenario(effective['scenario'])
        settings = effective['sweep']
        result = sweep(model, base, step=settings['step'], start=settings['start'], stop=settings['stop'])
        result.to_csv(effective['out'])

        if effective['svg']:
            render_svg(result, effective['svg'], ring_spacing_nm=settings['ring_spacing_nm'])

        self.stdout.write(
            f"Wrote {len(result)} points to {effective['out']} "
            f"(range {result.ranges.min():.2f}-{result.ranges.max():.2f} NM, max step jump {result.max_jump:.3f} NM)"
        )
