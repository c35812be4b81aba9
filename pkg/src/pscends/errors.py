"""Shared exception types."""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class DegenerateMetricError(ValueError):
    """Metric matrix is singular, indefinite, or too ill-conditioned to invert."""


class UnreliableStepError(RuntimeError):
    """Richardson ratio test failed: the finite-difference step cannot be trusted."""


class BoundaryEscapeError(RuntimeError):
    """A minimizer ran into the open-interval boundary beyond refinement tolerance."""


class HypothesisError(ValueError):
    """A stated hypothesis of an inequality is not met by the inputs."""
