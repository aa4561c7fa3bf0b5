"""Exception hierarchy.

Every error carries a stable ``code`` (the class name) which the CLI emits in
its machine-readable error payload.
"""


class OpenChainError(Exception):
    @property
    def code(self):
        return type(self).__name__


class SizeLimitExceeded(OpenChainError, ValueError):
    pass


class SingularSector(OpenChainError, ArithmeticError):
    pass


class SingularMatrix(OpenChainError, ArithmeticError):
    pass


class NotBlockDiagonal(OpenChainError, ValueError):
    pass


class DegenerateSpectrum(OpenChainError, ArithmeticError):
    pass


class NotEigenvector(OpenChainError, ValueError):
    pass


class InconsistentConstruction(OpenChainError, AssertionError):
    pass


class NonPolynomial(OpenChainError, ArithmeticError):
    pass


class PoleHit(OpenChainError, ZeroDivisionError):
    pass


class QZero(OpenChainError, ZeroDivisionError):
    pass


class MaxIterations(OpenChainError, RuntimeError):
    pass


class JacobianSingular(OpenChainError, ArithmeticError):
    pass


class CoefficientPole(OpenChainError, ZeroDivisionError):
    pass


class ZeroBoundaryParam(OpenChainError, ZeroDivisionError):
    pass


class OccupiedSite(OpenChainError, ValueError):
    pass


class TooManyHoles(OpenChainError, ValueError):
    pass


class SingularGamma(OpenChainError, ZeroDivisionError):
    pass


class ZeroBeta(OpenChainError, ZeroDivisionError):
    pass


class TruncationUnstable(OpenChainError, AssertionError):
    pass


class KernelDimension(OpenChainError, ArithmeticError):
    pass


class InvalidRates(OpenChainError, ValueError):
    pass


class UsageError(OpenChainError, ValueError):
    pass
