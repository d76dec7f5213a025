"""
Point-mass fly-out of an air-to-air missile against a target aircraft.

The missile has three translational degrees of freedom plus flight path
angle and heading (no roll): it steers by commanding normal acceleration,
which the airframe delivers exactly as long as it stays within the
structural G limit and the lift available at the current dynamic pressure.
Everything runs in SI units in a flat-earth North-East-Down frame with the
shooter at the origin, nose pointing north.
"""
import logging
import math
from dataclasses import dataclass, fields

import pandas as pd

from . import atmosphere
from .exceptions import ConfigError, InvalidScenario
from .tables import write_table
from .units import G0, FT, KT, NM, normalize_heading

logger = logging.getLogger(__name__)

SIM_VERSION = '1.1'

# Altitude limit in ft that the atmosphere model can evaluate
MAX_ALTITUDE_FT = atmosphere.CEILING / FT

# Gain of the target's heading loop while evading, 1/s
EVASION_HEADING_GAIN = 2.0

TRACE_COLUMNS = ['time', 'n', 'e', 'd', 'speed', 'gamma', 'chi', 'mass', 'alpha', 'seeker', 'ax', 'ay', 'az']


@dataclass(frozen=True)
class Scenario:
    """
    Launch conditions in engagement units: altitudes in ft, speeds in kt,
    angles in degrees. `hdg_tgt` is relative to the shooter's nose and
    `rgt_tgt` is the target's off-boresight bearing.
    """
    alt_sht: float
    vel_sht: float
    pit_sht: float
    alt_tgt: float
    vel_tgt: float
    hdg_tgt: float
    rgt_tgt: float

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise InvalidScenario(f"{f.name} must be a number, got {value!r}")

            if not math.isfinite(value):
                raise InvalidScenario(f"{f.name} must be finite, got {value!r}")

            object.__setattr__(self, f.name, value)

        object.__setattr__(self, 'hdg_tgt', normalize_heading(self.hdg_tgt))

        for name in ['alt_sht', 'alt_tgt']:
            if not 0.0 <= getattr(self, name) <= MAX_ALTITUDE_FT:
                raise InvalidScenario(f"{name} must be within [0, {MAX_ALTITUDE_FT:.0f}] ft")

        for name in ['vel_sht', 'vel_tgt']:
            if getattr(self, name) <= 0.0:
                raise InvalidScenario(f"{name} must be strictly positive")

        if not -90.0 <= self.pit_sht <= 90.0:
            raise InvalidScenario("pit_sht must be within [-90, 90] deg")

        if not -180.0 <= self.rgt_tgt <= 180.0:
            raise InvalidScenario("rgt_tgt must be within [-180, 180] deg")

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]

    def to_dict(self):
        return {name: getattr(self, name) for name in self.field_names()}

    @classmethod
    def from_dict(cls, data):
        missing = [name for name in cls.field_names() if name not in data]
        if missing:
            raise InvalidScenario(f"missing scenario fields: {', '.join(missing)}")

        return cls(**{name: data[name] for name in cls.field_names()})


@dataclass(frozen=True)
class TargetPolicy:
    NON_MANEUVERING = 'non_maneuvering'
    EVASIVE = 'evasive'

    mode: str = NON_MANEUVERING
    evasion_accel: float = 5.0
    evasion_delay: float = 0.0
    evasion_plane: str = 'horizontal'

    def __post_init__(self):
        if self.mode not in [self.NON_MANEUVERING, self.EVASIVE]:
            raise ConfigError(f"unknown target mode {self.mode!r}")

        if self.evasion_delay < 0:
            raise ConfigError("evasion_delay must not be negative")

        if self.evasion_accel <= 0:
            raise ConfigError("evasion_accel must be strictly positive")

        if self.evasion_plane != 'horizontal':
            raise ConfigError("only horizontal evasion is modelled")

    @classmethod
    def non_maneuvering(cls):
        return cls()

    @classmethod
    def evasive(cls, delay=0.0, accel=5.0):
        return cls(mode=cls.EVASIVE, evasion_accel=accel, evasion_delay=delay)


@dataclass(frozen=True)
class MissileState:
    time: float
    position: tuple
    speed: float
    flight_path_angle: float
    heading: float
    mass: float
    angle_of_attack: float
    seeker_angle: float
    acceleration: tuple
    # True while the active seeker holds lock on the target
    tracking: bool = False

    def as_row(self):
        return (
            self.time, *self.position, self.speed, self.flight_path_angle, self.heading,
            self.mass, self.angle_of_attack, self.seeker_angle, *self.acceleration,
        )


@dataclass(frozen=True)
class Outcome:
    HIT = 'hit'
    GROUND_IMPACT = 'ground_impact'
    ENERGY_EXHAUSTION = 'energy_exhaustion'
    SEEKER_LIMIT = 'seeker_limit'
    TIMEOUT = 'timeout'

    reason: str
    time: float
    miss_distance: float

    @property
    def is_hit(self):
        return self.reason == self.HIT


@dataclass(frozen=True)
class EngagementResult:
    outcome: Outcome
    closest_approach: float
    time_of_flight: float

    @property
    def is_hit(self):
        return self.outcome.is_hit


@dataclass(frozen=True)
class FlightTrace:
    states: tuple
    outcome: Outcome
    time_step: float
    closest_approach: float

    @property
    def is_hit(self):
        return self.outcome.is_hit

    def to_dataframe(self):
        return pd.DataFrame([state.as_row() for state in self.states], columns=TRACE_COLUMNS)

    def to_csv(self, path):
        write_table(self.to_dataframe(), path)


def _wrap_angle(angle):
    return (angle + math.pi) % (2.0 * math.pi) - math.pi


class FlyOut:
    """
    One missile launch integrated with fixed-step RK4.

    The discrete modes (loft, seeker lock, target evasion) are updated once
    per step from the state at the start of the step and held constant over
    the four stage evaluations.
    """
    def __init__(self, scenario, launch_range, missile, target):
        if not (isinstance(launch_range, (int, float)) and math.isfinite(launch_range) and launch_range > 0):
            raise InvalidScenario(f"launch range must be strictly positive, got {launch_range!r}")

        missile.validate()

        self.scenario = scenario
        self.missile = missile
        self.target = target

        range_m = launch_range * NM
        bearing = math.radians(scenario.rgt_tgt)

        self.target_speed = scenario.vel_tgt * KT
        self.y0 = (
            0.0, 0.0, -scenario.alt_sht * FT,
            scenario.vel_sht * KT, math.radians(scenario.pit_sht), 0.0,
            range_m * math.cos(bearing), range_m * math.sin(bearing), -scenario.alt_tgt * FT,
            math.radians(scenario.hdg_tgt),
        )

        self.initial_range = math.sqrt(
            range_m * range_m + (self.y0[8] - self.y0[2]) ** 2
        )
        self.lofting = self.initial_range > missile.loft_cutoff.min_range
        self.locked = False
        self.evading = False
        self.turn_rate = target.evasion_accel * G0 / self.target_speed

        self._max_accel = missile.max_lateral_accel * G0
        self._loft_bias = math.radians(missile.loft_pitch_bias)
        self._max_look_down = math.radians(missile.loft_cutoff.max_look_down)
        self._gimbal = math.radians(missile.seeker_gimbal_limit)
        # Beyond this seeker angle an opening target has been flown past
        self._passed = max(self._gimbal, 0.5 * math.pi)
        self._alpha_max = math.radians(missile.max_angle_of_attack)

    def derivatives(self, t, y):
        """
        Returns the state derivative together with the angle of attack and
        the NED acceleration of the missile at (t, y).
        """
        n, e, d, v, gamma, chi, tn, te, td, tchi = y
        missile = self.missile

        cg, sg = math.cos(gamma), math.sin(gamma)
        cc, sc = math.cos(chi), math.sin(chi)
        vn, ve, vd = v * cg * cc, v * cg * sc, -v * sg

        tvn = self.target_speed * math.cos(tchi)
        tve = self.target_speed * math.sin(tchi)

        rn, re, rd = tn - n, te - e, td - d
        r2 = rn * rn + re * re + rd * rd
        wn, we, wd = tvn - vn, tve - ve, -vd

        # Line-of-sight rotation rate, then pure proportional navigation: a = N * (omega x Vm)
        nav = missile.nav_gain
        ox = (re * wd - rd * we) / r2
        oy = (rd * wn - rn * wd) / r2
        oz = (rn * we - re * wn) / r2
        an = nav * (oy * vd - oz * ve)
        ae = nav * (oz * vn - ox * vd)
        ad = nav * (ox * ve - oy * vn)

        # Split into the pitch-plane and horizontal normal directions
        a_v = -an * sg * cc - ae * sg * sc - ad * cg
        a_h = -an * sc + ae * cc

        if self.lofting:
            elevation = math.atan2(-rd, math.hypot(rn, re))
            a_v = missile.loft_gain * v * (elevation + self._loft_bias - gamma)

        magnitude = math.hypot(a_v, a_h)
        if magnitude > self._max_accel:
            scale = self._max_accel / magnitude
            a_v *= scale
            a_h *= scale

        alt = atmosphere.clamped(-d)
        rho = atmosphere.atmosphere_density(alt)
        mach = v / atmosphere.speed_of_sound(alt)
        mass = missile.mass(t)
        qs = 0.5 * rho * v * v * missile.reference_area

        # The airframe carries gravity on top of the commanded kinematic acceleration
        lift_v = a_v + G0 * cg
        lift_h = a_h
        load = math.hypot(lift_v, lift_h)
        available = qs * missile.lift_slope * self._alpha_max / mass
        if load > available:
            scale = available / load
            lift_v *= scale
            lift_h *= scale
            load = available
            a_v = lift_v - G0 * cg
            a_h = lift_h

            magnitude = math.hypot(a_v, a_h)
            if magnitude > self._max_accel:
                a_v *= self._max_accel / magnitude
                a_h *= self._max_accel / magnitude

        cl = mass * load / qs if qs > 0 else 0.0
        alpha = math.copysign(cl / missile.lift_slope, lift_v)
        drag = qs * (missile.drag_coefficient(mach) + missile.induced_drag_factor * cl * cl)

        v_dot = (missile.thrust(t) - drag) / mass - G0 * sg
        gamma_dot = a_v / v
        chi_dot = a_h / (v * max(cg, 1e-6))

        if self.evading:
            away = math.atan2(re, rn)
            error = _wrap_angle(away - tchi)
            tchi_dot = min(max(EVASION_HEADING_GAIN * error, -self.turn_rate), self.turn_rate)
        else:
            tchi_dot = 0.0

        acceleration = (
            v_dot * cg * cc - a_v * sg * cc - a_h * sc,
            v_dot * cg * sc - a_v * sg * sc + a_h * cc,
            -v_dot * sg - a_v * cg,
        )

        return (vn, ve, vd, v_dot, gamma_dot, chi_dot, tvn, tve, 0.0, tchi_dot), alpha, acceleration

    def _geometry(self, y):
        n, e, d, v, gamma, chi, tn, te, td, tchi = y
        rn, re, rd = tn - n, te - e, td - d
        r = math.sqrt(rn * rn + re * re + rd * rd)

        cg = math.cos(gamma)
        ux, uy, uz = cg * math.cos(chi), cg * math.sin(chi), -math.sin(gamma)
        cosine = (rn * ux + re * uy + rd * uz) / r if r > 0 else 1.0
        seeker = math.acos(min(max(cosine, -1.0), 1.0))

        tvn = self.target_speed * math.cos(tchi)
        tve = self.target_speed * math.sin(tchi)
        range_rate = (rn * (tvn - v * ux) + re * (tve - v * uy) + rd * (-v * uz)) / r if r > 0 else 0.0

        elevation = math.atan2(-rd, math.hypot(rn, re))
        return r, seeker, range_rate, elevation

    def _update_modes(self, t, y, r, seeker, elevation):
        cutoff = self.missile.loft_cutoff

        if self.lofting:
            covered = r <= (1.0 - cutoff.range_fraction) * self.initial_range
            apogee = -y[2] >= cutoff.ceiling or elevation < -self._max_look_down
            if covered or apogee:
                self.lofting = False

        if not self.locked and r <= self.missile.seeker_acquisition_range and seeker <= self._gimbal:
            self.locked = True

        if self.target.mode == TargetPolicy.EVASIVE and t >= self.target.evasion_delay:
            self.evading = True

    def _reach(self, t, y):
        """
        Returns an upper bound on the distance the missile and target can
        still close in the flight time left, once the motor is out: no drag,
        all altitude traded for speed and the target flying straight at the
        missile.
        """
        top_speed = math.sqrt(y[3] * y[3] + 2.0 * G0 * max(-y[2], 0.0))
        return (top_speed + self.target_speed) * max(self.missile.max_flight_time - t, 0.0)

    def _rk4(self, t, y, k1, dt):
        half = 0.5 * dt
        k2 = self.derivatives(t + half, tuple(a + half * b for a, b in zip(y, k1)))[0]
        k3 = self.derivatives(t + half, tuple(a + half * b for a, b in zip(y, k2)))[0]
        k4 = self.derivatives(t + dt, tuple(a + dt * b for a, b in zip(y, k3)))[0]
        sixth = dt / 6.0
        return tuple(
            a + sixth * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
            for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4)
        )

    @staticmethod
    def _closest_on_segment(y0, y1):
        """
        Returns the closest missile-target distance over one step, assuming
        the relative motion is linear within the step, and the fraction of
        the step at which it happens.
        """
        p = (y0[6] - y0[0], y0[7] - y0[1], y0[8] - y0[2])
        q = (y1[6] - y1[0], y1[7] - y1[1], y1[8] - y1[2])
        dx, dy, dz = q[0] - p[0], q[1] - p[1], q[2] - p[2]
        length2 = dx * dx + dy * dy + dz * dz

        s = 0.0
        if length2 > 0:
            s = min(max(-(p[0] * dx + p[1] * dy + p[2] * dz) / length2, 0.0), 1.0)

        cx, cy, cz = p[0] + s * dx, p[1] + s * dy, p[2] + s * dz
        return math.sqrt(cx * cx + cy * cy + cz * cz), s

    def run(self, record=False):
        """
        Integrates until the flight ends and returns (outcome, states,
        closest approach). `states` is empty unless `record` is set.
        """
        missile = self.missile
        dt = missile.time_step
        stall = missile.stall_speed
        burnout = missile.burnout_time

        y = self.y0
        states = []
        closest = math.inf
        step = 0

        while True:
            t = step * dt
            r, seeker, range_rate, elevation = self._geometry(y)
            closest = min(closest, r)
            self._update_modes(t, y, r, seeker, elevation)

            k1, alpha, acceleration = self.derivatives(t, y)

            # Leaving the gimbal drops lock; midcourse guidance flies on and may reacquire
            if self.locked and seeker > self._gimbal:
                self.locked = False

            if record:
                states.append(MissileState(
                    time=t,
                    position=(y[0], y[1], y[2]),
                    speed=y[3],
                    flight_path_angle=y[4],
                    heading=y[5],
                    mass=missile.mass(t),
                    angle_of_attack=alpha,
                    seeker_angle=seeker,
                    acceleration=acceleration,
                    tracking=self.locked,
                ))

            reason = None
            if range_rate > 0.0 and seeker > self._passed:
                reason = Outcome.SEEKER_LIMIT
            elif y[2] > 0.0:
                reason = Outcome.GROUND_IMPACT
            elif y[3] < stall or (t >= burnout and (range_rate >= 0.0 or r - missile.hit_radius > self._reach(t, y))):
                reason = Outcome.ENERGY_EXHAUSTION
            elif t >= missile.max_flight_time:
                reason = Outcome.TIMEOUT

            if reason is not None:
                return Outcome(reason=reason, time=t, miss_distance=r), states, closest

            y_next = self._rk4(t, y, k1, dt)

            distance, fraction = self._closest_on_segment(y, y_next)
            closest = min(closest, distance)
            if distance <= missile.hit_radius:
                outcome = Outcome(reason=Outcome.HIT, time=t + fraction * dt, miss_distance=distance)
                return outcome, states, closest

            y = y_next
            step += 1


def simulate_flight(scenario, launch_range, missile, target=None):
    """
    Flies one missile launched at `launch_range` NM and returns the full
    FlightTrace. Deterministic: identical inputs give an identical trace.
    """
    target = target or TargetPolicy.non_maneuvering()
    outcome, states, closest = FlyOut(scenario, launch_range, missile, target).run(record=True)
    return FlightTrace(
        states=tuple(states),
        outcome=outcome,
        time_step=missile.time_step,
        closest_approach=closest,
    )


def engage(scenario, launch_range, missile, target=None):
    """
    Same flight as simulate_flight without recording the trace.
    """
    target = target or TargetPolicy.non_maneuvering()
    outcome, _, closest = FlyOut(scenario, launch_range, missile, target).run(record=False)
    return EngagementResult(outcome=outcome, closest_approach=closest, time_of_flight=outcome.time)
