"""Exception taxonomy shared by all modules.

Three roots: bad input (InputDomainError), a structural hypothesis that the
problem data fails to satisfy (HypothesisFailure), and a numerical method
that did not converge or resolve (SolverFailure).  CLI exit codes map the
roots to 2 / 3 / 4.
"""


class InputDomainError(ValueError):
    """Argument outside the documented domain of an operation."""


class NotApplicableError(InputDomainError):
    """Requested analysis does not apply to this system (for instance a
    critical-parameter search on a family whose stability never changes)."""


class HypothesisFailure(RuntimeError):
    """A structural hypothesis (real distinct characteristics, Lax counts,
    transversal connection) fails for the given data."""


class ConnectionFailure(HypothesisFailure):
    """No connecting orbit between the prescribed endpoint states."""


class SolverFailure(RuntimeError):
    """A numerical procedure failed to converge or to certify its result."""


class DomainResolutionError(SolverFailure):
    """Finite computational window too small for the requested tolerance;
    the message suggests a larger half-length."""


class StepSizeError(SolverFailure):
    """Time step violates an explicit stability restriction."""


class SplittingError(SolverFailure):
    """Operator-splitting step lost validity (non-finite update)."""


class FrontLostError(SolverFailure):
    """Front tracker could not locate the shock inside the window."""


class BranchLostError(SolverFailure):
    """Continuation of a root branch lost its root."""


class BranchPointError(SolverFailure):
    """Eigenvalue coalescence blocks the requested symbol eigenbasis; the
    offending frequency is carried in .location."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class ContourError(SolverFailure):
    """Winding-number contour could not be placed away from roots."""


class FitConditioningError(SolverFailure):
    """Least-squares design matrix too ill-conditioned to trust."""


class DegenerateRootError(SolverFailure):
    """Root is not simple enough for the requested coefficient extraction."""
