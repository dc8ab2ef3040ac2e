"""Exception types shared across the package."""


class ClusterLabError(Exception):
    """Base class for all cluster-lab errors."""


class InvalidRegionError(ClusterLabError, ValueError):
    """A region violates its geometric invariants (zero radius, inverted box, ...)."""


class InvalidClusterError(ClusterLabError, ValueError):
    """Regions overlap beyond tolerance or the cluster is otherwise malformed."""


class InvalidArgumentError(ClusterLabError, ValueError):
    """A plain bad argument (wrong range, wrong count)."""


class MalformedMeshError(ClusterLabError, ValueError):
    """A boundary mesh segment does not carry exactly two distinct labels."""


class EmptyBoundaryError(ClusterLabError, ValueError):
    """An operation that needs a nonempty boundary received an empty mesh."""


class UnsupportedRepresentationError(ClusterLabError, TypeError):
    """The region representation is not supported by this functional."""


class HypothesisViolatedError(ClusterLabError, ValueError):
    """An area specification violates the finite sqrt-series standing hypothesis."""


class InsufficientDepthError(ClusterLabError, ValueError):
    """Packing cutoffs are too shallow/close to classify series growth."""


class NotFatError(ClusterLabError, ValueError):
    """The Cantor removal schedule leaves no surviving measure."""
