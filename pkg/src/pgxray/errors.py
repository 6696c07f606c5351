"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`PgxrayError`
so callers (and the CLI) can separate domain failures from programming bugs.
"""

from __future__ import annotations


class PgxrayError(Exception):
    """Base class for all package errors."""


class BudgetExceeded(PgxrayError):
    pass


# -- fields ------------------------------------------------------------------


class NotPrime(PgxrayError, ValueError):
    pass


class DegreeZero(PgxrayError, ValueError):
    pass


class DivisionByZero(PgxrayError, ZeroDivisionError):
    pass


class FieldMismatch(PgxrayError, TypeError):
    pass


# -- geometry ------------------------------------------------------------------


class GeometryMismatch(PgxrayError, ValueError):
    pass


class UniformityViolation(PgxrayError):
    """An incidence count that must be constant was not; the geometry is broken."""


# -- linear algebra and transforms ----------------------------------------------


class NotSquare(PgxrayError, ValueError):
    pass


class LengthMismatch(PgxrayError, ValueError):
    pass


class VerificationError(PgxrayError, ArithmeticError):
    """A computed object failed its own post-condition check."""


# -- DRQs and the Cavalieri matrix -----------------------------------------------


class NotSkew(PgxrayError, ValueError):
    pass


class InvalidTriad(PgxrayError, ValueError):
    pass


class NoQuadric(PgxrayError):
    pass


class IncompleteEnumeration(PgxrayError):
    pass


class NotIdempotent(PgxrayError):
    def __init__(self, message: str, entry: tuple[int, int] | None = None):
        super().__init__(message)
        self.entry = entry


class RankMismatch(PgxrayError):
    pass


# -- line complexes ----------------------------------------------------------------


class WrongSize(PgxrayError, ValueError):
    pass


class NotAdmissible(PgxrayError):
    pass


class InconsistentData(PgxrayError):
    pass
