"""Exception hierarchy shared by every module.

The CLI reports ``type(exc).__name__`` on stderr, so class names double as
the error codes of the command-line interface.
"""


class PLGroupError(Exception):
    """Base class for domain errors."""


class NonMonotone(PLGroupError):
    pass


class CollinearBreak(PLGroupError):
    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"break {index} is collinear with its neighbours")


class OutOfDomain(PLGroupError):
    pass


class InvalidTuple(PLGroupError):
    pass


class DegenerateInterval(PLGroupError):
    pass


class VacuousCase(PLGroupError):
    pass


class ArityMismatch(PLGroupError):
    pass


class DisjointnessViolated(PLGroupError):
    pass


class SeparationViolated(PLGroupError):
    pass


class CertificateFailure(PLGroupError):
    def __init__(self, k, side, message, **values):
        self.k = k
        self.side = side
        self.values = values
        detail = ", ".join(f"{key}={val}" for key, val in values.items())
        super().__init__(f"k={k} side={side}: {message}" + (f" ({detail})" if detail else ""))


class AreaMismatch(PLGroupError):
    pass


class NonPositiveDerivative(PLGroupError):
    pass


class CaseUndecided(PLGroupError):
    pass


class IrrationalPower(PLGroupError):
    pass
