"""
International Standard Atmosphere, troposphere and lower stratosphere.
"""
import math

from .exceptions import OutOfDomain
from .units import G0

CEILING = 20000.0
TROPOPAUSE = 11000.0

SEA_LEVEL_TEMPERATURE = 288.15
SEA_LEVEL_PRESSURE = 101325.0
LAPSE_RATE = 0.0065
GAS_CONSTANT = 287.05287
GAMMA = 1.4

TROPOPAUSE_TEMPERATURE = SEA_LEVEL_TEMPERATURE - LAPSE_RATE * TROPOPAUSE
_PRESSURE_EXPONENT = G0 / (GAS_CONSTANT * LAPSE_RATE)
TROPOPAUSE_PRESSURE = SEA_LEVEL_PRESSURE * (TROPOPAUSE_TEMPERATURE / SEA_LEVEL_TEMPERATURE) ** _PRESSURE_EXPONENT


def _check(alt):
    if not 0.0 <= alt <= CEILING:
        raise OutOfDomain(f"altitude {alt} m outside [0, {CEILING}] m")


def temperature(alt):
    _check(alt)
    if alt <= TROPOPAUSE:
        return SEA_LEVEL_TEMPERATURE - LAPSE_RATE * alt
    return TROPOPAUSE_TEMPERATURE


def pressure(alt):
    _check(alt)
    if alt <= TROPOPAUSE:
        return SEA_LEVEL_PRESSURE * (temperature(alt) / SEA_LEVEL_TEMPERATURE) ** _PRESSURE_EXPONENT
    return TROPOPAUSE_PRESSURE * math.exp(-G0 * (alt - TROPOPAUSE) / (GAS_CONSTANT * TROPOPAUSE_TEMPERATURE))


def atmosphere_density(alt):
    """
    Returns the air density in kg/m3 at the given geometric altitude in metres.

    Raises OutOfDomain outside 0 to 20,000 m.
    """
    return pressure(alt) / (GAS_CONSTANT * temperature(alt))


def speed_of_sound(alt):
    return math.sqrt(GAMMA * GAS_CONSTANT * temperature(alt))


def clamped(alt):
    """
    Clamps an altitude into the model's validity range.

    The simulation evaluates the atmosphere at the ceiling when a lofted
    missile climbs above it; ground contact ends a flight before a negative
    altitude is ever looked up.
    """
    return min(max(alt, 0.0), CEILING)
