"""Exception types shared across the toolkit."""


class AbcommError(Exception):
    """Base class for every error raised by this package."""


class MalformedHeader(AbcommError):
    """Graph text or document is structurally invalid (header, line shape, keys)."""


class VertexOutOfRange(AbcommError):
    """Edge endpoint or vertex id outside 0..n-1."""


class SelfLoop(AbcommError):
    """Edge with identical endpoints."""


class DuplicateEdge(AbcommError):
    """Same undirected edge listed twice."""


class GenerationFailed(AbcommError):
    """Random generator exhausted its rejection budget."""


class InvalidParams(AbcommError):
    """Parameters outside a generator's or algorithm's domain."""


class ZeroDim(AbcommError):
    """Feature dimension of zero where at least one is required."""


class InfeasibleBalance(AbcommError):
    """No balanced assignment exists (e.g. more workers than vertices)."""


class TooLarge(AbcommError):
    """Instance exceeds a brute-force oracle's vertex cap."""


class NoVertexCut(AbcommError):
    """No vertex subset disconnects the graph (complete graphs)."""


class NotAVertexCut(AbcommError):
    """Supplied vertex set does not disconnect the graph."""


class DimMismatch(AbcommError):
    """Vector or matrix dimensions disagree."""


class KindMismatch(AbcommError):
    """Aggregator kinds disagree between operands."""


class MalformedFrame(AbcommError):
    """Wire frame failed to decode (truncation, version, type, length)."""


class PlanGraphMismatch(AbcommError):
    """Exchange plan applied to data it was not built from."""


class NoFeasibleWorker(AbcommError):
    """Every worker is at capacity for the arriving vertex."""


class InvalidConfig(AbcommError):
    """Verification suite configuration rejected."""
