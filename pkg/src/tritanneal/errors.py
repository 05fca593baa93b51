"""Exception types shared across the package."""


class TritannealError(Exception):
    """Base class for package-specific failures."""


class ResourceLimitError(TritannealError):
    """Raised when a dense-state operation would exceed the desk-scale size guard."""


class ConvergenceError(TritannealError):
    """Raised when time-step halving fails to stabilize the final fidelity.

    Carries the last two fidelity values and the finest step reached so the
    caller can report how far the sequence got.
    """

    def __init__(self, message: str, dt: float, fidelities: tuple[float, float]):
        super().__init__(message)
        self.dt = dt
        self.fidelities = fidelities


class DiagnosticUnavailableError(TritannealError):
    """Raised when a spectral diagnostic cannot be computed (e.g. every
    sampled slice has a degenerate ground state)."""
