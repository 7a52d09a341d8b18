"""Exception types raised by the padefit library.

Every error raised on a contract violation derives from PadefitError so
callers (and the command line front end) can catch the whole family.
"""


class PadefitError(Exception):
    """Base class for all padefit errors."""


class DenominatorZero(PadefitError):
    """The denominator polynomial vanishes at a requested evaluation point."""

    def __init__(self, x, message=None):
        self.x = x
        super().__init__(message or f"denominator vanishes at x = {x!r}")


class UnsupportedSubstitution(PadefitError):
    """Operation requires the plain coordinate (x_power == 1)."""


class NormalizationImpossible(PadefitError):
    """Result denominator has a zero constant term and cannot be scaled to 1."""


class InsufficientData(PadefitError):
    """Fewer data points than free coefficients."""


class NegativeWeight(PadefitError):
    """A penalty weight was negative."""


class SingularSystem(PadefitError):
    """Elimination hit a negligible pivot, or the solution failed the residual check."""


class CountMismatch(PadefitError):
    """Reference point count does not match the number of free coefficients."""


class DuplicateAbscissa(PadefitError):
    """Two reference points share the same abscissa."""


class LengthMismatch(PadefitError):
    """Paired sequences have different lengths."""


class EmptyInput(PadefitError):
    """An operation received an empty sequence."""


class DegenerateAbscissae(PadefitError):
    """All abscissae coincide; no spread to fit."""


class NegativeAbscissa(PadefitError):
    """Negative abscissa with a non-integer substitution power."""


class NoFeasibleModel(PadefitError):
    """Every candidate in a model search failed."""


class EmptySweep(PadefitError):
    """A penalty sweep needs at least two rows."""


class NoBracket(PadefitError):
    """Root bracketing failed for the likelihood profile equation."""


class NonconvergentTail(PadefitError):
    """A model CDF never approaches 1 within the search cap."""


class PoleOnRange(PadefitError):
    """A pole lies inside an integration or evaluation range."""
