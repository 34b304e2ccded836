class SpikeLvError(Exception):
    """Base class for data errors reported with exit code 2"""

    ...


class InvalidWindow(SpikeLvError, ValueError):
    """Raised when observation window is empty or reversed"""

    ...


class InvalidParameter(SpikeLvError, ValueError):
    """Raised when numeric argument is out of its domain"""

    ...


class TrainTooShort(SpikeLvError, ValueError):
    """Raised when spike train has too few spikes for requested quantity"""

    ...


class UndefinedLocalVariation(TrainTooShort):
    """Raised when local variation is requested for less than 3 spikes"""

    ...


class DegenerateShape(InvalidParameter):
    """Raised when L_V maps to a non-positive Gamma shape"""

    ...


class EmptyCorpus(SpikeLvError, ValueError):
    """Raised when operation needs at least one spike train"""

    ...


class PopularityExceedsSupport(SpikeLvError, ValueError):
    """Raised when null train would need more spikes than merged train has"""

    ...


class DegenerateCorrelation(SpikeLvError, ValueError):
    """Raised when correlation input has zero variance"""

    ...


class RateBoundViolation(SpikeLvError):
    """Raised when rate function exceeds its declared upper bound"""

    ...


class ResourceGuard(SpikeLvError):
    """Raised when generator would produce too many events"""

    ...


class UnreadableInput(SpikeLvError):
    """Raised when input event file cannot be opened or decoded"""

    ...


class StageFailed(SpikeLvError):
    """Raised when a pipeline stage fails on its input data"""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"Stage '{stage}' failed: {cause}")
