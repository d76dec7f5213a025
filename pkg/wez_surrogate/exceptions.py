class WezError(Exception):
    """
    Base class for every failure raised by the pipeline.
    """


class InvalidScenario(WezError):
    pass


class ConfigError(WezError):
    pass


class OutOfDomain(WezError):
    pass


class NoRange(WezError):
    """
    Raised when the missile misses at every launch range the search tries,
    from the activation distance up to the bound. `sentinel` is the range
    recorded for such rows in datasets; it sits below the activation floor
    so filtering drops the row.
    """
    sentinel = 0.0

    def __init__(self, message="missile misses at every launch range searched"):
        super().__init__(message)


class EmptyDataset(WezError):
    pass


class ZeroVariance(WezError):
    def __init__(self, column):
        super().__init__(f"column {column!r} has zero variance")
        self.column = column


class NonFinite(WezError):
    pass


class DegenerateFeature(WezError):
    def __init__(self, feature):
        super().__init__(f"feature {feature!r} has max == min")
        self.feature = feature


class TooFewRows(WezError):
    pass


class ShapeMismatch(WezError):
    pass


class Diverged(WezError):
    def __init__(self, message, history):
        super().__init__(message)
        self.history = history


class FormatVersionMismatch(WezError):
    pass


class CorruptFile(WezError):
    pass


class MalformedCSV(WezError):
    def __init__(self, path, line, message):
        super().__init__(f"{path}, line {line}: {message}")
        self.path = path
        self.line = line
