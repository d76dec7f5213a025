import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConfigError


@dataclass(frozen=True)
class LoftCutoff:
    """
    When the post-launch climb is flown and when it ends.

    The climb is only commanded if the initial slant range to the target
    exceeds `min_range`. It ends once `range_fraction` of that range has been
    covered, or the missile reaches `ceiling`, or the target sits more than
    `max_look_down` degrees below the horizon.
    """
    min_range: float = 18520.0
    range_fraction: float = 0.4
    ceiling: float = 18000.0
    max_look_down: float = 30.0


@dataclass(frozen=True)
class MissileConfig:
    launch_mass: float = 152.0
    boost_thrust: float = 11000.0
    boost_duration: float = 6.0
    sustain_thrust: float = 2600.0
    sustain_duration: float = 20.0
    propellant_mass_boost: float = 45.0
    propellant_mass_sustain: float = 20.0
    # Mach -> zero-lift drag coefficient, interpolated linearly and held flat outside
    drag_coefficient_table: dict = field(default_factory=lambda: {0.8: 0.35, 1.2: 0.55, 2.0: 0.40, 4.0: 0.30})
    reference_area: float = 0.0324
    nav_gain: float = 4.0
    max_lateral_accel: float = 40.0
    seeker_gimbal_limit: float = 60.0
    activation_distance: float = 2000.0
    loft_pitch_bias: float = 20.0
    loft_cutoff: LoftCutoff = field(default_factory=LoftCutoff)
    hit_radius: float = 50.0
    max_flight_time: float = 200.0
    lift_slope: float = 20.0
    max_angle_of_attack: float = 25.0
    induced_drag_factor: float = 0.1
    seeker_acquisition_range: float = 15000.0
    stall_speed: float = 150.0
    loft_gain: float = 2.0
    time_step: float = 0.01

    def __post_init__(self):
        table = {float(mach): float(cd) for mach, cd in self.drag_coefficient_table.items()}
        object.__setattr__(self, 'drag_coefficient_table', dict(sorted(table.items())))

        if isinstance(self.loft_cutoff, dict):
            object.__setattr__(self, 'loft_cutoff', LoftCutoff(**self.loft_cutoff))

        self.validate()

        machs = list(self.drag_coefficient_table.keys())
        object.__setattr__(self, '_machs', np.array(machs))
        object.__setattr__(self, '_cds', np.array([self.drag_coefficient_table[m] for m in machs]))

    def validate(self):
        positive = [
            'launch_mass', 'boost_thrust', 'boost_duration', 'sustain_thrust', 'sustain_duration',
            'propellant_mass_boost', 'propellant_mass_sustain', 'reference_area', 'nav_gain',
            'hit_radius', 'max_flight_time', 'lift_slope', 'max_angle_of_attack',
            'stall_speed', 'loft_gain', 'time_step', 'seeker_acquisition_range',
        ]
        for name in positive:
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be strictly positive, got {value!r}")

        if self.propellant_mass_boost + self.propellant_mass_sustain >= self.launch_mass:
            raise ConfigError("propellant mass must be smaller than the launch mass")

        if self.seeker_gimbal_limit < 60.0:
            raise ConfigError(f"seeker_gimbal_limit must be at least 60 deg, got {self.seeker_gimbal_limit}")

        if self.max_lateral_accel < 1.0:
            raise ConfigError("max_lateral_accel must be at least 1 G")

        if self.activation_distance <= 0:
            raise ConfigError("activation_distance must be strictly positive")

        if self.induced_drag_factor < 0:
            raise ConfigError("induced_drag_factor must not be negative")

        if not self.drag_coefficient_table:
            raise ConfigError("drag_coefficient_table must not be empty")

        if any(cd <= 0 or mach < 0 for mach, cd in self.drag_coefficient_table.items()):
            raise ConfigError("drag coefficients must be positive at non-negative Mach numbers")

        if not 0 < self.loft_cutoff.range_fraction < 1:
            raise ConfigError("loft_cutoff.range_fraction must be in (0, 1)")

    @property
    def boost_mass_flow(self):
        return self.propellant_mass_boost / self.boost_duration

    @property
    def sustain_mass_flow(self):
        return self.propellant_mass_sustain / self.sustain_duration

    @property
    def burnout_time(self):
        return self.boost_duration + self.sustain_duration

    def thrust(self, t):
        if t < self.boost_duration:
            return self.boost_thrust
        if t < self.burnout_time:
            return self.sustain_thrust
        return 0.0

    def mass(self, t):
        """
        Returns the mass at time t: linear decay while each motor phase burns,
        constant after burnout.
        """
        if t < self.boost_duration:
            return self.launch_mass - self.boost_mass_flow * t

        after_boost = self.launch_mass - self.propellant_mass_boost
        if t < self.burnout_time:
            return after_boost - self.sustain_mass_flow * (t - self.boost_duration)

        return after_boost - self.propellant_mass_sustain

    def drag_coefficient(self, mach):
        return float(np.interp(mach, self._machs, self._cds))

    def to_dict(self):
        data = dataclasses.asdict(self)
        data['drag_coefficient_table'] = {repr(mach): cd for mach, cd in self.drag_coefficient_table.items()}
        return data

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown missile configuration keys: {', '.join(sorted(unknown))}")

        try:
            return cls(**data)
        except (TypeError, ValueError) as e:
            raise ConfigError(str(e))

    @classmethod
    def from_json(cls, path):
        with open(path, encoding='utf-8') as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as e:
                raise ConfigError(f"{path}: {e}")

        return cls.from_dict(data)

    def digest(self):
        """
        Returns a SHA-256 over the canonical JSON form of this configuration.
        """
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(canonical.encode('utf-8')).hexdigest()
