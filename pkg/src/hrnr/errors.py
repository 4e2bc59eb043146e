"""Exception hierarchy shared by every module."""


class HRNRError(Exception):
    """Base class for all errors raised by this package."""


# numerics
class NotHermitian(HRNRError):
    pass


class NotNormal(HRNRError):
    pass


class NotUnitary(HRNRError):
    pass


class NoConvergence(HRNRError):
    pass


# geometry
class DegenerateChord(HRNRError):
    pass


class DegenerateTriangle(HRNRError):
    pass


class OutsideTriangle(HRNRError):
    pass


class CollinearOverlap(HRNRError):
    pass


class EmptyRegion(HRNRError):
    pass


# spectrum / omega
class DegenerateSpectrum(HRNRError):
    pass


class InvalidK(HRNRError, ValueError):
    pass


class TooLarge(HRNRError):
    pass


class HypothesisNotMet(HRNRError):
    pass


# codes
class NotInOmega(HRNRError):
    pass


class EmptyOmega(HRNRError):
    pass


class Unsupported(HRNRError):
    pass


class InconsistentLambda(HRNRError):
    pass


class CoverageFailure(HRNRError):
    pass


class SolverFailed(HRNRError):
    pass


class NotDivisible(HRNRError):
    pass


class NotOnBoundary(HRNRError):
    pass


class DimensionMismatch(HRNRError, ValueError):
    pass


# qec
class InvalidState(HRNRError):
    pass


class NotProjection(HRNRError):
    pass


class KLViolated(HRNRError):
    pass


class RankCollapse(HRNRError):
    pass
