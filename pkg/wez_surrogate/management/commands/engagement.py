from ...exceptions import NoRange
from ...ranges import find_max_range, find_nez_range
from ...units import m_to_nm
from ..base import WezCommand


class Command(WezCommand):
    help = "Prints the minimum, no-escape and maximum launch ranges of one scenario"

    def add_command_arguments(self, parser):
        parser.add_argument('--scenario', help="Scenario JSON")
        parser.add_argument('--missile', help="JSON file of missile parameters")
        parser.add_argument('--delay', type=float, default=0.0, help="Seconds before the target breaks away")
        parser.add_argument('--debug', action='store_true', help="Cross-check the bisection against a grid scan")

    def get_effective_config(self, options, conf):
        return {
            'scenario': options['scenario'],
            'delay': options['delay'],
            'debug': options['debug'],
            'missile': self.missile_config(options, conf).to_dict(),
        }

    def run(self, options, conf, effective):
        self.require(options, 'scenario')

        scenario = self.read_scenario(effective['scenario'])
        missile = self.missile_config(options, conf)

        self.stdout.write(f"R_min  {m_to_nm(missile.activation_distance):7.2f} NM")

        try:
            max_range = find_max_range(scenario, missile, debug=effective['debug'])
        except NoRange:
            self.stdout.write("R_max     none (no hit at any launch range searched)")
            return

        try:
            nez = f"{find_nez_range(scenario, missile, delay=effective['delay'], debug=effective['debug']):7.2f} NM"
        except NoRange:
            nez = "   none"

        self.stdout.write(f"R_NEZ  {nez}")
        self.stdout.write(f"R_max  {max_range:7.2f} NM")
