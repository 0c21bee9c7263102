"""Exception hierarchy shared by the numerical modules and the CLI."""


class ConvergenceError(ArithmeticError):
    """A numerical procedure failed to converge or meet its tolerance."""


class AccuracyError(ConvergenceError):
    """A special function could not reach the requested relative error."""


class GammaPoleError(ValueError):
    """Gamma function evaluated at zero or a negative integer."""


class DegenerateChannelError(ValueError):
    """Channel with j = 0, where the |j|-dependent formulas are undefined."""


class MuPoleError(ArithmeticError):
    """The phase-shift ratio mu has a vanishing denominator."""
