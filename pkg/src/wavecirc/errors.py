"""Exception types shared across the package."""


class WavecircError(Exception):
    """Base class for all package-specific errors."""

    code = "error"


class DegenerateShear(WavecircError):
    """Shear parameter has |mu| = 1, so the gate is singular."""

    code = "degenerate_shear"


class SizeMismatch(WavecircError):
    """Lattice or signal size incompatible with the circuit family."""

    code = "size_mismatch"


class WrongFamily(WavecircError):
    """Operation applied to a circuit family it is not defined for."""

    code = "wrong_family"


class LengthMismatch(WavecircError):
    """Two sequences that must have equal length do not."""

    code = "length_mismatch"


class NotOrthogonal(WavecircError):
    """Input sequence violates the shifted-orthogonality constraints."""

    code = "not_orthogonal"


class ResidualTooLarge(WavecircError):
    """Angle recovery did not terminate on a unit coordinate vector."""

    code = "residual_too_large"


class MaxIterExceeded(WavecircError):
    """Optimizer hit its iteration budget.  Carries the best point found."""

    code = "max_iter_exceeded"

    def __init__(self, message, best_x=None, best_f=None):
        super().__init__(message)
        self.best_x = best_x
        self.best_f = best_f


class ConvergenceFailure(WavecircError):
    """Design optimization failed to reach its residual target."""

    code = "convergence_failure"

    def __init__(self, message, best_x=None, best_f=None):
        super().__init__(message)
        self.best_x = best_x
        self.best_f = best_f


class NoSolution(WavecircError):
    """Boundary-angle solve has no root at some scale."""

    code = "no_solution"


class SpecMismatch(WavecircError):
    """Pyramid was produced by a different circuit description."""

    code = "spec_mismatch"


class MissingBoundaryAngles(WavecircError):
    """Open-boundary transform requested without boundary angles."""

    code = "missing_boundary_angles"


class NonContractiveWarning(UserWarning):
    """Refinement iteration appears to diverge."""
