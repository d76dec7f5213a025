import logging
import os

from django.core.management.base import CommandError

from ...dataset import generate_dataset, write_dataset
from ...design import read_design
from ..base import WezCommand

logger = logging.getLogger(__name__)


def failures_path(path):
    return os.path.splitext(str(path))[0] + '.failures.json'


class Command(WezCommand):
    help = "Simulates the maximum launch range of every design row"

    def add_command_arguments(self, parser):
        parser.add_argument('--design', help="Design CSV")
        parser.add_argument('--missile', help="JSON file of missile parameters")
        parser.add_argument('--jobs', type=int, default=1)
        parser.add_argument('--out', default='dataset.csv')

    def get_effective_config(self, options, conf):
        return {
            'design': options['design'],
            'jobs': options['jobs'],
            'out': options['out'],
            'missile': self.missile_config(options, conf).to_dict(),
        }

    def run(self, options, conf, effective):
        self.require(options, 'design')

        missile = self.missile_config(options, conf)
        design = read_design(effective['design'])

        def progress(done, total):
            logger.info("Simulated %d of %d rows (%d%%)", done, total, 100 * done // total)

        dataset = generate_dataset(design, missile, jobs=max(1, effective['jobs']), progress=progress)
        write_dataset(dataset, effective['out'])
        self.stdout.write(f"Wrote {len(dataset)} rows to {effective['out']}")

        if dataset.metadata['saturated_rows']:
            self.stderr.write(
                f"{dataset.metadata['saturated_rows']} rows still hit at the "
                f"{dataset.metadata['range_upper_bound']:g} NM search bound"
            )

        if dataset.failures:
            path = failures_path(effective['out'])
            self.write_json([failure.to_dict() for failure in dataset.failures], path)
            raise CommandError(f"{len(dataset.failures)} rows failed; see {path}", returncode=1)
