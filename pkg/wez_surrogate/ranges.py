"""
Launch range solvers: the largest launch range at which the missile still
hits, against a non-maneuvering target (R_max) or a target that breaks away
at +5 G (R_NEZ).
"""
import logging

from .exceptions import ConfigError, NoRange
from .simulation import TargetPolicy, engage
from .units import m_to_nm

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 0.01
DEFAULT_UPPER = 60.0
# Grid the search for a first hit walks up from the activation distance
SEARCH_STEP = 1.0
CROSS_CHECK_STEP = 0.1
CROSS_CHECK_SPAN = 1.0


def bisect_range(hits, lower, upper, tolerance):
    """
    Returns the largest range r in [lower, upper] the bisection can certify:
    `hits(r)` is true and `hits` is false somewhere in (r, r + tolerance].

    `hits(lower)` must be true. If `hits(upper)` is true, `upper` is returned.
    """
    if hits(upper):
        return upper

    low, high = lower, upper
    while high - low > tolerance:
        middle = 0.5 * (low + high)
        if hits(middle):
            low = middle
        else:
            high = middle

    return low


def first_hit(hits, lower, upper, step=SEARCH_STEP):
    """
    Returns the first of `lower + k * step` (k = 0, 1, ...) and finally
    `upper` at which `hits` is true, or None if the missile misses at all
    of them.
    """
    k = 0
    while True:
        r = lower + k * step
        if r >= upper:
            break
        if hits(r):
            return r
        k += 1

    return upper if hits(upper) else None


def cross_check(hits, result, lower, upper, step=CROSS_CHECK_STEP, tolerance=DEFAULT_TOLERANCE):
    """
    Scans the grid `lower + k * step` up to `result + CROSS_CHECK_SPAN` and
    returns the grid points whose outcome contradicts a monotone hit set
    ending at `result`.
    """
    violations = []
    k = 0
    while True:
        r = lower + k * step
        if r > min(upper, result + CROSS_CHECK_SPAN) + 1e-9:
            break

        expected = r <= result
        if r <= result or r > result + tolerance:
            observed = hits(r)
            if observed != expected:
                violations.append({'range': r, 'expected_hit': expected, 'observed_hit': observed})

        k += 1

    return violations


def find_range(scenario, missile, target, upper=DEFAULT_UPPER, tolerance=DEFAULT_TOLERANCE, debug=False):
    """
    Returns the largest launch range in NM at which the missile hits.

    Close-in shots can miss where longer ones hit, so the search first walks
    up from the activation distance to the first hit and bisects above it.
    Raises NoRange only if nothing on that walk hits.
    """
    lower = m_to_nm(missile.activation_distance)
    if upper <= lower:
        raise ConfigError(f"upper search bound {upper} NM must exceed the activation distance {lower:.3f} NM")

    def hits(r):
        return engage(scenario, r, missile, target).is_hit

    start = first_hit(hits, lower, upper)
    if start is None:
        raise NoRange()

    if start > lower:
        logger.debug("%s misses at the activation distance; first hit at %.2f NM", scenario, start)

    result = bisect_range(hits, start, upper, tolerance)

    if debug:
        violations = cross_check(hits, result, lower, upper, tolerance=tolerance)
        for violation in violations:
            logger.warning(
                "Hit set is not monotone for %s: %.2f NM expected %s, simulated %s",
                scenario, violation['range'],
                'hit' if violation['expected_hit'] else 'miss',
                'hit' if violation['observed_hit'] else 'miss',
            )

    return result


def find_max_range(scenario, missile, upper=DEFAULT_UPPER, tolerance=DEFAULT_TOLERANCE, debug=False):
    """
    Returns R_max in NM for the scenario against a non-maneuvering target.

    Raises NoRange if the missile misses at every launch range searched.
    A result equal to `upper` means the missile still hits at the search
    bound; it is logged as saturated.
    """
    result = find_range(scenario, missile, TargetPolicy.non_maneuvering(), upper, tolerance, debug)
    if result >= upper:
        logger.warning("R_max for %s is saturated at the %.1f NM search bound", scenario, upper)
    return result


def find_nez_range(scenario, missile, delay=0.0, upper=DEFAULT_UPPER, tolerance=DEFAULT_TOLERANCE, debug=False):
    """
    Returns R_NEZ in NM: the largest launch range at which the missile still
    hits a target that starts a 5 G break away from it `delay` seconds after
    launch.

    The search is bounded above by R_max, so R_NEZ never exceeds it.
    """
    max_range = find_max_range(scenario, missile, upper, tolerance)
    target = TargetPolicy.evasive(delay=delay)

    lower = m_to_nm(missile.activation_distance)
    if max_range - lower <= tolerance:
        if not engage(scenario, lower, missile, target).is_hit:
            raise NoRange()
        return lower

    return find_range(scenario, missile, target, max_range, tolerance, debug)
