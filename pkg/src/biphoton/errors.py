"""Exception hierarchy. The CLI maps the two branches to exit codes 2 and 3."""


class BiphotonError(Exception):
    pass


class ConfigError(BiphotonError, ValueError):
    """Invalid parameters or configuration file."""


class NumericalError(BiphotonError, ArithmeticError):
    """A computation could not produce a trustworthy result."""


class NormIsZero(NumericalError):
    pass


class NotNormalized(NumericalError):
    pass


class RankTooLarge(ConfigError):
    pass


class NotAProbabilityVector(NumericalError):
    pass


class NyquistViolated(NumericalError):
    pass


class NoOscillationFound(NumericalError):
    pass


class StepTooCoarse(NumericalError):
    pass


class WindowTooShort(NumericalError):
    pass


class InsufficientPoints(NumericalError):
    pass
