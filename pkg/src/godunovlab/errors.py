"""Exception types raised by the solver stack."""


class SolverError(Exception):
    """Base class for every numerical failure raised by godunovlab."""


class NonPhysicalState(SolverError):
    """A state with non-positive density or pressure was produced or supplied."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class VacuumGenerated(SolverError):
    """The data violate the pressure positivity condition of the exact solver."""


class NoConvergence(SolverError):
    """The Newton iteration for the star pressure hit its iteration cap."""


class NonPhysicalStar(SolverError):
    """The linearised solver produced a non-positive star pressure or density."""


class DegenerateSpeeds(SolverError):
    """HLL wave-speed bounds are not strictly ordered."""


class ReferenceUnavailable(SolverError):
    """No exact or fine-grid reference exists for the requested case."""


class ConfigurationError(ValueError):
    """Invalid run configuration (bad CFL, boundary pairing, grid, ...)."""
