"""Exception types raised across the package."""


class QWalkError(Exception):
    """Base class for all package errors."""


class ConstraintViolation(QWalkError, ValueError):
    """(x, y) does not lie on the family's ellipse."""


class RangeError(QWalkError, ValueError):
    """x lies outside the range allowed for the coin family."""


class NormError(QWalkError, ValueError):
    """An initial coin state is not normalized."""


class PermutationCoin(QWalkError, ValueError):
    """The closed-form limit is singular; use the permutation table."""


class NotPermutation(QWalkError, ValueError):
    """A permutation-only routine was given a generic coin."""


class DegenerateEigenvector(QWalkError, ArithmeticError):
    """A closed-form eigenvector denominator vanishes."""


class IllConditioned(QWalkError, ArithmeticError):
    """The deflated quadratic has a (near) double root."""


class QuadratureUnderresolved(QWalkError, ValueError):
    """Too few k-nodes to resolve the oscillating phase."""


class BandEdge(QWalkError, ArithmeticError):
    """Group velocity requested where sin(omega) vanishes."""


class SpecialTheta(QWalkError, ValueError):
    """theta is a permutation or (negative) Grover point; use the table."""


class SizeExceeded(QWalkError, ValueError):
    """The dense reference operator would be too large."""
