"""Exception types raised across the toolkit."""


class TrigsurfError(Exception):
    pass


class SeedOffCurve(TrigsurfError, ValueError):
    pass


class AmbiguousContinuation(TrigsurfError):
    pass


class BranchPointSingularity(TrigsurfError, ZeroDivisionError):
    pass


class DomainError(TrigsurfError, ValueError):
    pass


class ToleranceNotMet(TrigsurfError):
    def __init__(self, msg, value=None, error=None):
        super().__init__(msg)
        self.value = value
        self.error = error


class NonIntegrableSingularity(TrigsurfError):
    pass


class MismatchError(TrigsurfError):
    pass


class DimensionMismatch(TrigsurfError, ValueError):
    pass


class DegenerateAngle(TrigsurfError, ValueError):
    pass


class SingularPoint(TrigsurfError, ValueError):
    pass


class SampleOnSingularLocus(TrigsurfError, ValueError):
    pass


class NonClosure(TrigsurfError):
    pass


class BranchCollision(TrigsurfError, UserWarning):
    pass
