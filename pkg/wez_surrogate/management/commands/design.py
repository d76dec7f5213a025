import os

from ...tables import meta_path
from ...design import DesignSpec, Variable, lhs_sample
from ..base import WezCommand


class Command(WezCommand):
    help = "Writes a maximin Latin Hypercube design of launch conditions to CSV"
    uses_seed = True

    def add_command_arguments(self, parser):
        parser.add_argument('--samples', type=int, help="Number of design rows (at least 2)")
        parser.add_argument('--out', default='design.csv')
        parser.add_argument('--maximin-iterations', type=int)

    def get_effective_config(self, options, conf):
        iterations = options['maximin_iterations']
        return {
            'samples': options['samples'],
            'seed': options['seed'],
            'out': options['out'],
            'design_bounds': [list(bound) for bound in conf['DESIGN_BOUNDS']],
            'maximin_iterations': conf['MAXIMIN_ITERATIONS'] if iterations is None else iterations,
        }

    def run(self, options, conf, effective):
        self.require(options, 'samples')

        spec = DesignSpec(
            variables=tuple(Variable(*bound) for bound in effective['design_bounds']),
            n_samples=effective['samples'],
            seed=effective['seed'],
            maximin_iterations=effective['maximin_iterations'],
        )
        design = lhs_sample(spec)
        design.to_csv(effective['out'])
        self.write_json(design.provenance, meta_path(effective['out']))

        self.stdout.write(
            f"Wrote {spec.n_samples} rows to {os.path.abspath(effective['out'])} "
            f"(min distance {design.provenance['initial_min_distance']:.6f} -> {design.provenance['min_distance']:.6f})"
        )
