"""Pydantic models for surfrig.

Defines the graph, construction, surface and rigidity data structures
shared by the services, as well as the JSON shapes the command line
reads and writes.
"""

import enum
from collections.abc import Callable, Iterable
from fractions import Fraction
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr

# Exact or floating coordinates of one point in R^3.
Point = tuple[Any, Any, Any]
Rational3Point = tuple[Fraction, Fraction, Fraction]


class MoveKind(str, enum.Enum):
    """Enum for the construction moves."""

    HENNEBERG1 = "henneberg1"
    HENNEBERG2 = "henneberg2"
    VERTEX_TO_K4 = "vertex_to_k4"
    VERTEX_TO_4CYCLE = "vertex_to_4cycle"
    VERTEX_SPLIT = "vertex_split"
    EDGE_JOIN = "edge_join"


class BaseGraph(str, enum.Enum):
    """Enum for the base graphs of the inductive constructions."""

    K5_MINUS_EDGE = "K5-e"
    K1 = "K1"
    K2 = "K2"


class VerdictStrength(str, enum.Enum):
    """How much a rigidity verdict can be trusted."""

    CERTIFIED = "certified"
    EVIDENCE = "evidence"


class VerdictBasis(str, enum.Enum):
    """Which rule produced an isostatic verdict."""

    RANK = "rank"
    ENUMERATION = "enumeration"


# --- Graphs ---


class SimpleGraph(BaseModel):
    """A labeled simple undirected graph on vertices 0..n-1.

    Edges are stored once each as (u, v) with u < v, sorted. Instances
    are immutable; every operation returns a new graph. Build them with
    ``graphs.make_graph`` when the input is untrusted.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=0)
    edges: tuple[tuple[int, int], ...] = ()

    _adj: tuple[frozenset[int], ...] = PrivateAttr(default=())

    def model_post_init(self, __context: Any) -> None:
        """Build the adjacency table once per instance."""
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        self._adj = tuple(frozenset(s) for s in adj)

    @classmethod
    def from_edges(
        cls, n: int, edges: Iterable[tuple[int, int]]
    ) -> "SimpleGraph":
        """Normalize trusted edges into a graph without simplicity checks."""
        normalized = sorted({(min(u, v), max(u, v)) for u, v in edges})
        return cls(n=n, edges=tuple(normalized))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.n and v in self._adj[u]

    def induced_edge_count(self, vertex_set: Iterable[int]) -> int:
        """Count edges with both endpoints in ``vertex_set``."""
        members = set(vertex_set)
        return sum(
            1 for v in members for w in self._adj[v] if w in members and v < w
        )

    def relabel(self, mapping: list[int]) -> "SimpleGraph":
        """Rename vertex i to mapping[i]; mapping must be a permutation."""
        return SimpleGraph.from_edges(
            self.n, ((mapping[u], mapping[v]) for u, v in self.edges)
        )

    def to_json(self) -> dict[str, Any]:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}


class SparsityVerdict(BaseModel):
    """Outcome of a (2,k)-sparsity test.

    ``witness`` lists the vertices of an induced subgraph H with
    |E(H)| > 2|V(H)| - k; it is present exactly when the graph is not
    sparse.
    """

    k: int
    sparse: bool
    tight: bool
    witness: list[int] | None = None


# --- Construction certificates ---


class ConstructionStep(BaseModel):
    """One forward move, replayable on its pre-graph.

    ``params`` holds the move's vertex labels in pre-graph labels;
    new vertices take labels n, n+1, ... and the optional ``relabel``
    permutation then renames vertex i of the raw result to relabel[i].
    """

    op: MoveKind
    params: dict[str, Any] = Field(default_factory=dict)
    relabel: list[int] | None = None


class Certificate(BaseModel):
    """A replayable sequence of moves from a base graph to a target."""

    k: int
    base: BaseGraph
    steps: list[ConstructionStep] = Field(default_factory=list)
    base_relabel: list[int] | None = None


class InverseResult(BaseModel):
    """A successful inverse move.

    ``graph`` is the reduced graph with compacted labels and ``step``
    the forward move that rebuilds the original graph from it exactly.
    """

    graph: SimpleGraph
    step: ConstructionStep


# --- Surfaces and frameworks ---


class Surface(BaseModel):
    """An algebraic surface m(x, y, z) = 0 with rational coefficients.

    ``poly`` is a sympy ``Poly`` in x, y, z over QQ. ``chart`` is an
    exact rational parametrization taking ``chart_arity`` parameters
    and using field arithmetic only, so it accepts Fractions as well as
    sympy symbols; it is None for surfaces without a known one.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    name: str
    poly: Any
    declared_type: int | None = None
    params: dict[str, Fraction] = Field(default_factory=dict)
    chart: Callable[..., Point] | None = None
    chart_arity: int = 0

    _terms: tuple = PrivateAttr(default=())
    _gradient: tuple = PrivateAttr(default=())

    def model_post_init(self, __context: Any) -> None:
        """Cache monomial/coefficient lists for exact evaluation."""
        gens = self.poly.gens
        self._terms = _poly_terms(self.poly)
        self._gradient = tuple(
            _poly_terms(self.poly.diff(g)) for g in gens
        )

    @property
    def has_sampler(self) -> bool:
        return self.chart is not None

    @property
    def terms(self) -> tuple:
        return self._terms

    @property
    def gradient_terms(self) -> tuple:
        return self._gradient


def _poly_terms(poly: Any) -> tuple:
    return tuple(
        (monom, Fraction(int(coeff.p), int(coeff.q)))
        for monom, coeff in poly.terms()
        if coeff != 0
    )


class Framework(BaseModel):
    """A graph placed on a surface, one point per vertex."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    graph: SimpleGraph
    surface: Surface
    placement: list[Point]

    @property
    def exact(self) -> bool:
        return all(
            isinstance(c, (int, Fraction)) for p in self.placement for c in p
        )


class RigidityMatrix(BaseModel):
    """The (|E|+|V|) x 3|V| surface rigidity matrix.

    Edge rows come first in canonical edge order, then one normal row
    per vertex in label order.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    rows: list[list[Any]]
    n_cols: int
    row_labels: list[str]
    exact: bool = True

    @property
    def n_rows(self) -> int:
        return len(self.rows)


class MaxwellResult(BaseModel):
    """Result of the counting necessity gate."""

    k: int
    sparse: bool
    tight: bool
    witness: list[int] | None = None


class RigidityReport(BaseModel):
    """Rank summary and rigidity verdicts for a graph on a surface."""

    rank: int
    nullity: int
    rows: int
    cols: int
    k: int
    independent: bool
    rigid: bool
    isostatic: bool
    flex_dim_internal: int
    strength: VerdictStrength
    basis: VerdictBasis = VerdictBasis.RANK
    exact: bool = True
    trials: int
    seed: int | None = None
    maxwell: MaxwellResult | None = None


class TypeEstimate(BaseModel):
    """Estimated freedom number of a surface from complete graphs."""

    surface: str
    k: int
    nullities: dict[int, int]
    trials: int
    seed: int
    strength: VerdictStrength = VerdictStrength.EVIDENCE


class GeneratedGraph(BaseModel):
    """A generated graph with the certificate that built it."""

    k: int
    seed: int
    graph: SimpleGraph
    certificate: Certificate


# --- Batch verification ---


class VerifyOutcome(BaseModel):
    """One generated graph pushed through reduce, replay and analyze."""

    index: int
    n: int
    edges: int
    steps: int
    replay_ok: bool
    report: RigidityReport
    passed: bool


class VerifySummary(BaseModel):
    """Pass/fail counts of a verify run."""

    surface: str
    k: int
    n_max: int
    expect: str
    seed: int
    trials: int
    passed: int
    failed: int
    outcomes: list[VerifyOutcome] = Field(default_factory=list)
