from ...dataset import read_dataset, write_dataset
from ...filters import FilterRules, filter_dataset
from ..base import WezCommand


class Command(WezCommand):
    help = "Drops rows below the activation floor, above the IQR fence and failing the plausibility rules"

    def add_command_arguments(self, parser):
        parser.add_argument('--data', help="Dataset CSV")
        parser.add_argument('--out', default='filtered.csv')
        parser.add_argument('--report', default='filter_report.json')
        parser.add_argument('--fence', type=float, help="Use this IQR fence (NM) instead of computing one")

    def get_effective_config(self, options, conf):
        return {
            'data': options['data'],
            'out': options['out'],
            'report': options['report'],
            'fence': options['fence'],
            'activation_floor_nm': conf['ACTIVATION_FLOOR_NM'],
            'plausibility_rules': conf['PLAUSIBILITY_RULES'],
        }

    def run(self, options, conf, effective):
        self.require(options, 'data')

        rules = FilterRules.from_conf(conf)
        if effective['fence'] is not None:
            rules = rules.frozen(effective['fence'])

        dataset, report = filter_dataset(read_dataset(effective['data']), rules)
        dataset.metadata['row_count'] = len(dataset)
        dataset.metadata['filter'] = report.to_dict()

        write_dataset(dataset, effective['out'])
        self.write_json(report.to_dict(), effective['report'])

        self.stdout.write(f"Kept {report.output_rows} of {report.input_rows} rows (fence {report.fence:.2f} NM)")
        for rule, count in report.removed.items():
            self.stdout.write(f"  {rule}: {count} removed")
