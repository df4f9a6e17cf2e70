"""Exception hierarchy.

Two families: :class:`InvalidInput` for requests that are outside the
supported domain (the CLI maps these to exit code 2) and
:class:`NumericalError` for failures of the numerics themselves, which
signal a defect rather than a bad request (exit code 1).
"""


class PretzelError(Exception):
    pass


class InvalidInput(PretzelError, ValueError):
    pass


class Unsupported(InvalidInput):
    """Knot parameters outside the proven range (mixed a1 = 1)."""


class DegenerateBracket(InvalidInput):
    pass


class OutOfRange(InvalidInput):
    """Surgery slope not covered by the elliptic path construction."""


class BelowThreshold(InvalidInput):
    """Cover order not above the arccos bound."""


class NotElliptic(InvalidInput):
    pass


class NumericalError(PretzelError, ArithmeticError):
    pass


class NoConvergence(NumericalError):
    pass


class NoCrossing(NumericalError):
    pass


class NoBracket(NumericalError):
    pass


class SingularSystem(NumericalError):
    pass


class NonUnimodular(NumericalError):
    pass


class DegenerateDenominator(NumericalError):
    pass
