"""Exception types raised across the package."""


class MCEntropyError(Exception):
    """Base class for all package errors."""


class InvalidInputError(MCEntropyError, ValueError):
    """Malformed arguments: wrong shapes, non-finite entries, bad parameters."""


class InvalidStateError(MCEntropyError, ValueError):
    """A thermodynamic state violates rho_k > 0 or T > 0."""

    def __init__(self, field, message=None, index=None):
        self.field = field
        self.index = index
        if message is None:
            message = f"invalid state: non-positive {field}"
        if index is not None:
            message = f"{message} (at index {index})"
        super().__init__(message)


class NoTemperatureError(MCEntropyError, ValueError):
    """Internal energy outside the range of the energy model."""


class BracketError(MCEntropyError, ValueError):
    """Root-finding bracket without a sign change."""


class ConvergenceError(MCEntropyError, RuntimeError):
    """Iteration limit exceeded; ``last`` holds the final iterate."""

    def __init__(self, message, last=None):
        super().__init__(message)
        self.last = last


class EvaluationError(MCEntropyError, ValueError):
    """A callable returned a non-finite value; ``point`` is the offending input."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class UnsupportedModelError(MCEntropyError, ValueError):
    """The requested check does not support this mixture model."""


class InternalConsistencyError(MCEntropyError, RuntimeError):
    """A structural identity failed; this signals a bug, not bad input."""


class CflError(MCEntropyError, ValueError):
    """Time step rejected; ``admissible_lambda`` is the largest accepted dt/dx."""

    def __init__(self, message, admissible_lambda):
        super().__init__(message)
        self.admissible_lambda = admissible_lambda


class PositivityError(MCEntropyError, RuntimeError):
    """An updated cell left the admissible set (rho_k <= 0 or no temperature)."""

    def __init__(self, message, cell):
        super().__init__(message)
        self.cell = cell


class HomotopyExitError(MCEntropyError, ValueError):
    """A sampled homotopy state is not a valid thermodynamic state."""

    def __init__(self, message, r, s):
        super().__init__(message)
        self.r = r
        self.s = s


class ConfigError(MCEntropyError, ValueError):
    """Run configuration failed schema or physical validation."""

    def __init__(self, message, path=None):
        self.path = path
        if path:
            message = f"{path}: {message}"
        super().__init__(message)
