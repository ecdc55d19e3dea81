"""Exception hierarchy for surfrig.

Input problems derive from ValueError so callers can treat every bad
graph, surface or certificate uniformly. RuntimeError subclasses mark
states that valid input can never reach.
"""


class GraphInputError(ValueError):
    """A graph description violates simplicity or labeling rules."""


class LoopError(GraphInputError):
    """An edge joins a vertex to itself."""


class DuplicateEdgeError(GraphInputError):
    """The same unordered pair appears twice."""


class VertexRangeError(GraphInputError):
    """A vertex label lies outside 0..n-1."""


class SparsityParameterError(ValueError):
    """The sparsity parameter k is outside 0..3."""


class GraphTooLargeError(ValueError):
    """The graph exceeds the brute-force enumeration limit."""


class MoveError(ValueError):
    """A construction move was requested on a pattern that is not there."""


class CertificateError(ValueError):
    """A certificate is malformed or fails its replay checks."""


class NotTightError(ValueError):
    """A graph is not (2,k)-tight where tightness is required."""


class SurfaceError(ValueError):
    """Base class for surface description and evaluation problems."""


class UnknownSurfaceError(SurfaceError):
    """No preset exists under the requested name."""


class SurfaceParameterError(SurfaceError):
    """Shape parameters are missing, malformed or out of range."""


class NoSamplerError(SurfaceError):
    """The surface has no exact rational parametrization."""


class PointOffSurfaceError(SurfaceError):
    """A point does not satisfy the surface polynomial."""


class SingularPointError(SurfaceError):
    """The surface gradient vanishes at a point."""


class SurfaceTypeError(SurfaceError):
    """An observed rank contradicts the type claimed for a surface."""


class FrameworkError(ValueError):
    """A placement is incompatible with its graph."""


class MatrixError(ValueError):
    """A matrix holds entries the requested rank method cannot use."""


class ReductionError(RuntimeError):
    """No admissible inverse move exists for a tight graph."""


class InvariantError(RuntimeError):
    """A forward move produced a graph that is not (2,k)-tight."""
