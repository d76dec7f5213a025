"""
Dataset filtering, applied in this order:

1. the activation floor: rows whose max_range is below the distance at which
   the missile arms are dropped (this removes the NoRange sentinel rows)
2. the IQR fence: rows above the upper Tukey fence of the floored targets
3. the plausibility rules: operationally implausible launch conditions
"""
import logging
from dataclasses import dataclass, field, replace

import numpy as np
from django.utils.module_loading import import_string

from .conf import get_conf
from .dataset import SCENARIO_COLUMNS, TARGET_COLUMN
from .exceptions import ConfigError
from .stats import iqr_upper_fence

logger = logging.getLogger(__name__)

FLOOR = 'activation_floor'
FENCE = 'iqr_fence'


class BaseRule:
    """
    A base class for plausibility rules. A rule is built from the keyword
    arguments of its config entry and marks the rows it keeps.
    """
    kind = None

    def __init__(self, name):
        self.name = name

    def keep(self, frame):
        """
        Returns a boolean array, True for every row of `frame` the rule keeps.
        """
        raise NotImplementedError

    def _check_columns(self, *columns):
        for column in columns:
            if column not in SCENARIO_COLUMNS + [TARGET_COLUMN]:
                raise ConfigError(f"rule {self.name!r}: unknown column {column!r}")


class MaxAbsDifferenceRule(BaseRule):
    """
    Keeps rows where two columns differ by at most `limit`.
    """
    kind = 'max_abs_difference'

    def __init__(self, name, columns, limit):
        super().__init__(name)
        if len(columns) != 2:
            raise ConfigError(f"rule {name!r}: max_abs_difference takes exactly two columns")
        self._check_columns(*columns)
        self.columns = list(columns)
        self.limit = float(limit)

    def keep(self, frame):
        a, b = self.columns
        return (frame[a] - frame[b]).abs().to_numpy() <= self.limit


class IntervalRule(BaseRule):
    """
    Keeps rows where a column lies in [min, max]; either end may be left open.
    """
    kind = 'interval'

    def __init__(self, name, column, min=None, max=None):
        super().__init__(name)
        self._check_columns(column)
        if min is not None and max is not None and min > max:
            raise ConfigError(f"rule {name!r}: min must not exceed max")
        self.column = column
        self.min = min
        self.max = max

    def keep(self, frame):
        values = frame[self.column].to_numpy(dtype=float)
        keep = np.ones(len(values), dtype=bool)
        if self.min is not None:
            keep &= values >= self.min
        if self.max is not None:
            keep &= values <= self.max
        return keep


BUILTIN_RULE_KINDS = {
    MaxAbsDifferenceRule.kind: MaxAbsDifferenceRule,
    IntervalRule.kind: IntervalRule,
}


def get_rule_kinds(config=None):
    rule_kinds = {}
    rule_kinds.update(BUILTIN_RULE_KINDS)

    for kind, path in (config or get_conf())['RULE_KINDS'].items():
        try:
            rule_kinds[kind] = import_string(path)
        except ImportError as e:
            raise ConfigError(f"cannot import rule kind {kind!r} from {path!r}: {e}")

    return rule_kinds


def build_rules(configs, config=None):
    """
    Builds rule instances from a list of dicts, each holding a `name`, a
    `kind` and the keyword arguments of that kind.
    """
    rule_kinds = get_rule_kinds(config)
    rules = []

    for entry in configs:
        entry = dict(entry)
        kind = entry.pop('kind', None)
        if kind not in rule_kinds:
            raise ConfigError(f"unknown plausibility rule kind {kind!r}")

        entry.setdefault('name', kind)
        try:
            rules.append(rule_kinds[kind](**entry))
        except TypeError as e:
            raise ConfigError(f"rule {entry['name']!r}: {e}")

    names = [rule.name for rule in rules]
    if len(set(names)) != len(names) or {FLOOR, FENCE} & set(names):
        raise ConfigError("plausibility rule names must be unique and must not reuse the floor or fence names")

    return rules


@dataclass(frozen=True)
class FilterRules:
    activation_floor: float
    plausibility: list = field(default_factory=list)
    # None means "compute from the floored dataset"
    fence: float = None

    @classmethod
    def from_conf(cls, config=None):
        config = config or get_conf()
        return cls(
            activation_floor=float(config['ACTIVATION_FLOOR_NM']),
            plausibility=build_rules(config['PLAUSIBILITY_RULES'], config),
        )

    def frozen(self, fence):
        return replace(self, fence=fence)


@dataclass
class FilterReport:
    input_rows: int
    output_rows: int
    fence: float
    # Removal counts per rule, in the order the rules ran
    removed: dict

    def to_dict(self):
        return {
            'input_rows': self.input_rows,
            'output_rows': self.output_rows,
            'fence': self.fence,
            'removed': dict(self.removed),
        }


def filter_dataset(dataset, rules):
    """
    Returns the rows surviving every rule and a FilterReport.

    The fence is computed once, on the floored dataset, unless `rules`
    carries one already. `report.fence` is that value, so filtering the
    output again with `rules.frozen(report.fence)` removes nothing.
    """
    removed = {}
    current = dataset

    keep = current.targets >= rules.activation_floor
    removed[FLOOR] = int((~keep).sum())
    current = current.where(keep)

    fence = rules.fence
    if fence is None:
        if len(current) == 0:
            fence = rules.activation_floor
        else:
            q1, q3 = np.quantile(current.targets, [0.25, 0.75])
            fence = float(iqr_upper_fence(q1, q3))
        logger.info("IQR fence computed on %d floored rows: %.4f NM", len(current), fence)

    keep = current.targets <= fence
    removed[FENCE] = int((~keep).sum())
    current = current.where(keep)

    for rule in rules.plausibility:
        keep = rule.keep(current.frame)
        removed[rule.name] = int((~keep).sum())
        current = current.where(keep)

    report = FilterReport(
        input_rows=len(dataset),
        output_rows=len(current),
        fence=fence,
        removed=removed,
    )

    logger.info("Filter kept %d of %d rows: %s", report.output_rows, report.input_rows, removed)
    return current, report
