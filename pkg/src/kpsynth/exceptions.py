"""Exception types raised by kpsynth."""


class KPSynthError(Exception):
    """Base class for all library errors."""


class InvalidInputError(KPSynthError, ValueError):
    """An argument is outside the domain of the operation."""


class LiftError(KPSynthError):
    """No symmetry element conjugates one matrix onto another."""


class NumericalFailure(KPSynthError, ArithmeticError):
    """A root finder or inversion did not converge."""


class NoEstimateError(KPSynthError):
    """The brute-force search exhausted its budget without reaching the target."""
