"""Exception types shared across the package."""


class ClusterTreeError(Exception):
    """Base class for all errors raised by this package."""


class NotBipartiteError(ClusterTreeError):
    """The operation requires a bipartite graph."""


class NotRegularError(ClusterTreeError):
    """The operation requires a regular graph."""


class DegreeMismatchError(ClusterTreeError):
    """Two inputs were expected to be regular of the same degree."""


class EmptyGraphError(ClusterTreeError):
    """The operation requires at least one edge."""


class BoundViolatedError(ClusterTreeError):
    """A numeric precondition on the requested order was not met."""


class IterationLimitError(ClusterTreeError):
    """Defensive cap hit; indicates a bug, not a bad input."""


class SizeCapExceededError(ClusterTreeError):
    """The estimated output size exceeds the configured cap.

    Carries ``estimate`` and ``cap`` so callers can decide what to do.
    """

    def __init__(self, estimate: int, cap: int):
        self.estimate = estimate
        self.cap = cap
        super().__init__(
            f"estimated output size {estimate} exceeds cap {cap}"
        )


class GirthTooLowError(ClusterTreeError):
    """The graph's girth is below the minimum the operation needs."""


class PairingFailureError(ClusterTreeError):
    """Neighborhood buckets could not be paired; the input is not a valid
    cluster-tree graph or there is an internal bug."""


class NotATreeError(ClusterTreeError):
    """The operation requires an acyclic, connected input."""


class TooLargeError(ClusterTreeError):
    """Input exceeds the size limit of an exact solver."""
