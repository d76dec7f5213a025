from ...dataset import TARGET_COLUMN, read_dataset
from ...filters import FilterRules, filter_dataset
from ...stats import boxplot_summary, describe, histogram, pearson_matrix
from ..base import WezCommand


class Command(WezCommand):
    help = "Prints descriptive statistics and the correlation matrix of a dataset"

    def add_command_arguments(self, parser):
        parser.add_argument('--data', help="Dataset CSV")
        parser.add_argument('--filter', action='store_true', help="Filter the dataset first")
        parser.add_argument('--bins', type=int, help="Also print a histogram of max_range with this many bins")

    def get_effective_config(self, options, conf):
        effective = {'data': options['data'], 'filter': options['filter'], 'bins': options['bins']}
        if options['filter']:
            effective['activation_floor_nm'] = conf['ACTIVATION_FLOOR_NM']
            effective['plausibility_rules'] = conf['PLAUSIBILITY_RULES']
        return effective

    def run(self, options, conf, effective):
        self.require(options, 'data')

        dataset = read_dataset(effective['data'])
        if effective['filter']:
            dataset, report = filter_dataset(dataset, FilterRules.from_conf(conf))
            self.stdout.write(f"Filtered {report.input_rows} -> {report.output_rows} rows (fence {report.fence:.2f} NM)")

        summary = describe(dataset)
        self.stdout.write(f"Descriptive statistics ({len(dataset)} rows)")
        self.stdout.write(summary.table.T.to_string(float_format=lambda v: f'{v:.2f}'))

        self.stdout.write("")
        self.stdout.write("Pearson correlation")
        self.stdout.write(pearson_matrix(dataset).to_string(float_format=lambda v: f'{v:.2f}'))

        if effective['bins']:
            edges, counts = histogram(dataset.targets, effective['bins'])
            self.stdout.write("")
            self.stdout.write(f"Histogram of {TARGET_COLUMN}")
            for lo, hi, count in zip(edges, edges[1:], counts):
                self.stdout.write(f"{lo:8.2f} {hi:8.2f} {count:8d}")

            box = boxplot_summary(dataset.targets)
            self.stdout.write("")
            self.stdout.write(f"Boxplot of {TARGET_COLUMN}")
            for name, value in box.items():
                self.stdout.write(f"{name:>14} {value}")
