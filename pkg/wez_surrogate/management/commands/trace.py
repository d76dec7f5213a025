import os
from dataclasses import asdict

from ...simulation import TargetPolicy, simulate_flight
from ..base import WezCommand


class Command(WezCommand):
    help = "Flies one engagement and writes the missile trajectory to CSV"
    flags = {'launch_range': '--range'}

    def add_command_arguments(self, parser):
        parser.add_argument('--scenario', help="Scenario JSON")
        parser.add_argument('--range', type=float, dest='launch_range', help="Launch range in NM")
        parser.add_argument('--missile', help="JSON file of missile parameters")
        parser.add_argument('--evasive', action='store_true', help="Target breaks away at 5 G")
        parser.add_argument('--delay', type=float, default=0.0)
        parser.add_argument('--out', default='trace.csv')

    def get_effective_config(self, options, conf):
        return {
            'scenario': options['scenario'],
            'launch_range': options['launch_range'],
            'evasive': options['evasive'],
            'delay': options['delay'],
            'out': options['out'],
            'missile': self.missile_config(options, conf).to_dict(),
        }

    def run(self, options, conf, effective):
        self.require(options, 'scenario', 'launch_range')

        scenario = self.read_scenario(effective['scenario'])
        target = TargetPolicy.evasive(delay=effective['delay']) if effective['evasive'] else TargetPolicy.non_maneuvering()
        trace = simulate_flight(scenario, effective['launch_range'], self.missile_config(options, conf), target)

        trace.to_csv(effective['out'])
        outcome = dict(asdict(trace.outcome), closest_approach=trace.closest_approach, steps=len(trace.states))
        self.write_json(outcome, os.path.splitext(effective['out'])[0] + '.outcome.json')

        self.stdout.write(
            f"{trace.outcome.reason} at t={trace.outcome.time:.2f} s, "
            f"closest approach {trace.closest_approach:.1f} m, {len(trace.states)} states written to {effective['out']}"
        )
