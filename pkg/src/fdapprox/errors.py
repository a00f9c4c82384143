"""Exception hierarchy shared by every module of the package."""


class FDApproxError(Exception):
    """Base class for all errors raised by fdapprox."""


# scheme

class ParamError(FDApproxError, ValueError):
    pass


class NonAllowed(ParamError):
    pass


class RootTooLarge(ParamError):
    pass


class BadPrefix(ParamError):
    pass


class SizeMismatch(FDApproxError, ValueError):
    pass


class NotDeltaSystem(FDApproxError, ValueError):
    pass


class NotInScheme(FDApproxError, KeyError):
    pass


class AxiomViolation(FDApproxError):
    def __init__(self, rank, witness, message=""):
        self.rank = rank
        self.witness = witness
        super().__init__(message or f"axiom violated at rank {rank}: {witness!r}")


# blockop

class OutOfShape(FDApproxError, ValueError):
    pass


class ShapeMismatch(FDApproxError, ValueError):
    pass


# poset

class AlreadyPresent(FDApproxError, ValueError):
    pass


class NotInSupport(FDApproxError, ValueError):
    pass


class NotConvenient(FDApproxError, ValueError):
    pass


class BadIsometry(FDApproxError, ValueError):
    pass


class NotOrthonormal(FDApproxError, ValueError):
    pass


class WidthMismatch(FDApproxError, ValueError):
    pass


class WidthCapExceeded(FDApproxError):
    def __init__(self, width, cap):
        self.width = width
        self.cap = cap
        super().__init__(f"column width {width} exceeds cap {cap}")


# limit

class BadIndex(FDApproxError, ValueError):
    pass


class NotCovered(FDApproxError, ValueError):
    pass


class Inconsistent(FDApproxError):
    def __init__(self, pair, where):
        self.pair = pair
        self.where = where
        super().__init__(f"conditions {pair[0]} and {pair[1]} disagree at {where}")


# verify

class NotNearProjection(FDApproxError, ValueError):
    pass


class NoCaptureAvailable(FDApproxError):
    pass
