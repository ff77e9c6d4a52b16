"""Exception types shared across the package."""


class CubicTorsionError(Exception):
    """Base class for all library errors."""


class NotSquarefree(CubicTorsionError):
    """gcd(h, h') is nonconstant where a squarefree polynomial was required."""


class PrecisionExhausted(CubicTorsionError):
    """The numeric contract could not be met below the precision cap."""


class Reducible(CubicTorsionError):
    """A polynomial required to be irreducible has a rational root."""


class DiscMismatch(CubicTorsionError):
    """poly_disc / field_disc is not the square of a positive integer."""


class FieldMismatch(CubicTorsionError):
    """Operands belong to different fields."""


class DivisionByZero(CubicTorsionError, ZeroDivisionError):
    """Inversion of zero in an exact domain."""


class InexactDivision(CubicTorsionError):
    """Coefficient division does not land exactly (polynomial-in-t domain)."""


class NoGoodPrimes(CubicTorsionError):
    """Not enough admissible primes exist below the search bound."""


class ReducibleModulus(CubicTorsionError):
    """The modulus of a finite-field extension is reducible."""


class TooLarge(CubicTorsionError):
    """A finite enumeration exceeds its contractual size cap."""


class SingularCurve(CubicTorsionError):
    """The Weierstrass discriminant vanishes."""


class RamifiedOrIndexPrime(CubicTorsionError):
    """The prime divides the polynomial discriminant of the field."""


class BadReduction(CubicTorsionError):
    """The reduced curve is singular."""


class NonIntegral(CubicTorsionError):
    """A denominator is not invertible modulo p after integral rescaling."""


class HasseViolation(CubicTorsionError):
    """A point count violates the Hasse-Weil bound."""


class PreconditionFailed(CubicTorsionError):
    """An operation-specific precondition does not hold."""


class SchemaError(CubicTorsionError):
    """A manifest does not parse against the schema."""


class ValidationError(CubicTorsionError):
    """A manifest record violates a catalog invariant."""
