"""Exception types shared across the package."""


class FencesError(Exception):
    """Base class for all errors raised by this package."""


class ShapeInvalid(FencesError):
    """Composition does not define a fence (t<2, end part <2, or a part <1)."""


class IndexOutOfRange(FencesError):
    """Element index outside 1..n."""


class TooLarge(FencesError):
    """Instance exceeds the supported size (n > 64, or a sweep bound)."""


class NotAnIdeal(FencesError):
    """A set that must be downward closed is not."""


class NotAntichain(FencesError):
    """A set that must be pairwise incomparable is not."""


class CertificateMismatch(FencesError):
    """A closed-form toggle certificate failed componentwise verification."""


class DimensionMismatch(FencesError):
    """Matrix/vector dimensions are inconsistent."""


class NonIntegerExponent(FencesError):
    """Multiplicative lift requested with non-integer coefficients."""


class ExactArithmeticOverflow(FencesError):
    """Exact iteration exceeded the configured step or bit-size cap."""


class VerificationError(FencesError):
    """An identity asserted by a verification routine does not hold."""
