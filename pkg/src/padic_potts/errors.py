"""Exception taxonomy shared across the package.

Every failure mode that callers are expected to handle gets its own class;
generic ValueError/TypeError are reserved for plain misuse (wrong types,
mismatched primes and so on).
"""


class PadicError(Exception):
    """Base class for all domain errors raised by this package."""


class PrecisionExhausted(PadicError):
    """A value can no longer be distinguished from zero at working precision.

    Carries ``bound``: the computation only shows the ideal value is divisible
    by p**bound, so its valuation is >= bound but otherwise unknown.  Raised
    instead of fabricating a zero.
    """

    def __init__(self, message: str = "", *, bound: "int | None" = None):
        if not message:
            message = "cancellation consumed every significant digit"
            if bound is not None:
                message += f" (valuation known only to be >= {bound})"
        super().__init__(message)
        self.bound = bound


class DivisionByZero(PadicError, ZeroDivisionError):
    """Division or inversion of an exact zero."""


class DomainViolation(PadicError):
    """Argument lies outside the convergence disk of a p-adic series."""


class LiftStall(PadicError):
    """A residue branch of the root search neither separated into simple
    roots nor terminated within the depth cap.  Reported, never guessed."""


class PartitionFunctionDegenerate(PadicError):
    """The normalizing sum's valuation cannot be resolved at working
    precision, so no finite-volume measure can be formed."""


class EnumerationTooLarge(PadicError):
    """A configuration sum would exceed the enumeration guard."""


class DenominatorDegenerate(PadicError):
    """A recursion denominator is zero or has unresolvable valuation."""


class NotInvertible(PadicError):
    """The boundary-function change of coordinates has no inverse
    (two-state models)."""
