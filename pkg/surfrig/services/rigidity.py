"""Surface rigidity matrices, their ranks and rigidity verdicts.

The matrix of a framework (G, p) on a surface M has one row per edge
uv, holding p(u) - p(v) in the columns of u and p(v) - p(u) in those
of v, followed by one row per vertex holding the surface normal at
p(v). Exact ranks and nullspaces come from sympy domain matrices over
QQ; floating ranks come from singular values.
"""

import logging
import random
from collections.abc import Sequence
from fractions import Fraction
from typing import Any

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from surfrig.config import Settings, get_settings
from surfrig.exceptions import (
    FrameworkError,
    MatrixError,
    SurfaceError,
    SurfaceTypeError,
)
from surfrig.models.schemas import (
    Framework,
    MaxwellResult,
    Point,
    RigidityMatrix,
    RigidityReport,
    SimpleGraph,
    Surface,
    TypeEstimate,
    VerdictBasis,
    VerdictStrength,
)
from surfrig.services.geometry import (
    normal,
    sample_placement,
    surface_label,
)
from surfrig.services.graphs import complete_graph, is_sparse

logger = logging.getLogger(__name__)

# Complete graphs isostatic on a surface of each type although the rank
# test does not cover them.
SMALL_COMPLETE: dict[int, range] = {
    3: range(1, 3),
    2: range(1, 4),
    1: range(1, 5),
}


# --- Matrix assembly ---


def _sub(p: Point, q: Point) -> list[Any]:
    return [a - b for a, b in zip(p, q)]


def _check_framework(framework: Framework) -> None:
    graph, placement = framework.graph, framework.placement
    if len(placement) != graph.n:
        raise FrameworkError(
            f"Placement has {len(placement)} points for {graph.n} vertices"
        )
    seen: dict[Point, int] = {}
    for v, point in enumerate(placement):
        key = tuple(point)
        if key in seen:
            raise FrameworkError(
                f"Vertices {seen[key]} and {v} are placed at the same point"
            )
        seen[key] = v


def build_matrix(framework: Framework) -> RigidityMatrix:
    """Assemble the (|E|+|V|) x 3|V| surface rigidity matrix.

    Float placements yield float entries; rational ones stay exact.

    Raises:
        FrameworkError: If the placement size is wrong or two vertices
            coincide.
        PointOffSurfaceError: If a point is not on the surface.
        SingularPointError: If a point is singular.
    """
    _check_framework(framework)
    graph, placement = framework.graph, framework.placement
    exact = framework.exact
    zero: Any = Fraction(0) if exact else 0.0
    n_cols = 3 * graph.n
    rows: list[list[Any]] = []
    labels: list[str] = []
    for u, v in graph.edges:
        row = [zero] * n_cols
        row[3 * u:3 * u + 3] = _sub(placement[u], placement[v])
        row[3 * v:3 * v + 3] = _sub(placement[v], placement[u])
        rows.append(row)
        labels.append(f"edge {u}-{v}")
    for v in graph.vertices():
        row = [zero] * n_cols
        row[3 * v:3 * v + 3] = list(normal(framework.surface, placement[v]))
        rows.append(row)
        labels.append(f"normal {v}")
    if not exact:
        rows = [[float(x) for x in row] for row in rows]
    return RigidityMatrix(
        rows=rows, n_cols=n_cols, row_labels=labels, exact=exact
    )


# --- Exact rank ---


def _to_domain(matrix: RigidityMatrix) -> DomainMatrix:
    entries = []
    for row in matrix.rows:
        if not all(
            isinstance(x, (int, Fraction)) and not isinstance(x, bool)
            for x in row
        ):
            raise MatrixError("Exact rank needs rational entries")
        entries.append([QQ(x.numerator, x.denominator) for x in row])
    return DomainMatrix(entries, (len(entries), matrix.n_cols), QQ)


def _fraction(q: Any) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _exact_rank(matrix: RigidityMatrix) -> int:
    domain = _to_domain(matrix)
    return domain.rank() if domain.shape[0] else 0


def rank_exact(
    matrix: RigidityMatrix,
) -> tuple[int, list[list[Fraction]]]:
    """Compute the exact rank and a rational nullspace basis over QQ.

    Args:
        matrix: A matrix with int or Fraction entries.

    Returns:
        The rank and one basis vector per non-pivot column, in column
        order, scaled to 1 at that column.

    Raises:
        MatrixError: If an entry is not rational.
    """
    n_cols = matrix.n_cols
    domain = _to_domain(matrix)
    if domain.shape[0] == 0:
        return 0, [
            [Fraction(int(i == j)) for j in range(n_cols)]
            for i in range(n_cols)
        ]
    basis = []
    # Each rref nullspace vector ends at its own free column.
    for row in domain.nullspace().to_list():
        vector = [_fraction(q) for q in row]
        last = max(c for c, x in enumerate(vector) if x)
        lead = vector[last]
        basis.append((last, [x / lead for x in vector]))
    basis.sort(key=lambda item: item[0])
    return n_cols - len(basis), [vector for _, vector in basis]


# --- Floating rank ---


def rank_float(
    matrix: RigidityMatrix | Sequence[Sequence[Any]],
    tolerance: float | None = None,
) -> int:
    """Numerical rank from singular values.

    Args:
        matrix: A rigidity matrix or plain nested rows.
        tolerance: Singular value threshold; numpy's default is
            max(rows, cols) * eps * largest singular value.

    Raises:
        MatrixError: If an entry is not finite.
    """
    rows = matrix.rows if isinstance(matrix, RigidityMatrix) else matrix
    a = np.array([[float(x) for x in row] for row in rows], dtype=float)
    if a.size == 0:
        return 0
    if not np.all(np.isfinite(a)):
        raise MatrixError("Matrix has non-finite entries")
    return int(np.linalg.matrix_rank(a, tol=tolerance))


# --- Verdicts ---


def maxwell_check(graph: SimpleGraph, k: int) -> MaxwellResult:
    """Counting necessity gate: (2,k)-sparsity with a violating set.

    A graph that is not (2,k)-sparse is dependent on every surface of
    type k, whatever the placement.
    """
    verdict = is_sparse(graph, k)
    return MaxwellResult(
        k=k,
        sparse=verdict.sparse,
        tight=verdict.tight,
        witness=verdict.witness,
    )


def _is_small_complete(graph: SimpleGraph, k: int) -> bool:
    return (
        graph.n in SMALL_COMPLETE.get(k, ())
        and graph.num_edges == graph.n * (graph.n - 1) // 2
    )


def _report(
    graph: SimpleGraph,
    k: int,
    rank: int,
    trials: int,
    seed: int | None,
    exact: bool,
    gate: MaxwellResult,
) -> RigidityReport:
    n_rows = graph.num_edges + graph.n
    n_cols = 3 * graph.n
    small = _is_small_complete(graph, k)
    if rank > n_cols - k and not small:
        raise SurfaceTypeError(
            f"Rank {rank} exceeds 3|V| - k = {n_cols - k}; the surface "
            f"does not have type {k}"
        )
    independent = rank == n_rows
    if independent and not gate.sparse:
        raise SurfaceTypeError(
            f"Vertices {gate.witness} span too many edges to be "
            f"independent on a surface of type {k}"
        )
    rigid = rank == n_cols - k
    isostatic = rigid and 2 * graph.n - graph.num_edges == k
    basis = VerdictBasis.RANK
    if small:
        rigid = isostatic = True
        basis = VerdictBasis.ENUMERATION
    certified = independent and exact
    return RigidityReport(
        rank=rank,
        nullity=n_cols - rank,
        rows=n_rows,
        cols=n_cols,
        k=k,
        independent=independent,
        rigid=rigid,
        isostatic=isostatic,
        flex_dim_internal=max(n_cols - rank - k, 0),
        strength=(
            VerdictStrength.CERTIFIED if certified
            else VerdictStrength.EVIDENCE
        ),
        basis=basis,
        exact=exact,
        trials=trials,
        seed=seed,
        maxwell=gate,
    )


def _float_placement(placement: list[Point]) -> list[Point]:
    return [tuple(float(c) for c in p) for p in placement]


class RigidityService:
    """Rigidity analysis of graphs on surfaces with sampled placements.

    Attributes:
        settings: Trial counts, sample height and float tolerance.
    """

    def __init__(self, settings: Settings | None = None) -> None:
        self.settings = settings or get_settings()

    def _rank(self, matrix: RigidityMatrix) -> int:
        if matrix.exact:
            return _exact_rank(matrix)
        return rank_float(matrix, self.settings.float_tolerance)

    def _sample(
        self, surface: Surface, n: int, seed: int
    ) -> list[Point]:
        return sample_placement(
            surface, n, random.Random(seed), self.settings.sample_height
        )

    def surface_type(
        self, surface: Surface, k: int | None = None, seed: int | None = None
    ) -> int:
        """Resolve the type used for a verdict.

        An explicit k wins, then the declared type; otherwise the type
        is computed from samples.

        Raises:
            SurfaceError: If the type is unknown and cannot be sampled.
        """
        if k is not None:
            return k
        if surface.declared_type is not None:
            return surface.declared_type
        if not surface.has_sampler:
            raise SurfaceError(
                f"Surface {surface.name} has no declared type; pass k"
            )
        return self.compute_type(surface, seed=seed).k

    def analyze(
        self,
        graph: SimpleGraph,
        surface: Surface,
        trials: int | None = None,
        seed: int | None = None,
        k: int | None = None,
        use_float: bool = False,
    ) -> RigidityReport:
        """Analyze a graph on a surface at random rational placements.

        Each trial samples a fresh placement from its own sub-seed and
        computes the rank; the report carries the largest rank seen.
        The loop stops early once the matrix has full row rank, which
        certifies generic independence. A graph failing the counting
        gate is dependent at every placement, so it gets one trial.

        Args:
            graph: The graph, with at least one vertex.
            surface: A surface with a sampler.
            trials: Maximum number of placements; defaults to settings.
            seed: Seed of the trial generator; defaults to settings.
            k: Surface type override.
            use_float: Evaluate ranks on float copies of the points.

        Returns:
            The rigidity report.

        Raises:
            FrameworkError: If the graph has no vertex.
            NoSamplerError: If the surface has no sampler.
            SurfaceTypeError: If a rank contradicts the surface type.
            SparsityParameterError: If the type lies outside 0..3.
        """
        if graph.n < 1:
            raise FrameworkError("Cannot analyze a graph without vertices")
        trials = self.settings.analyze_trials if trials is None else trials
        if trials < 1:
            raise ValueError("trials must be positive")
        seed = self.settings.seed if seed is None else seed
        k = self.surface_type(surface, k, seed)
        gate = maxwell_check(graph, k)
        if not gate.sparse:
            logger.info(
                "Vertices %s violate the (2,%d) count; one trial suffices",
                gate.witness,
                k,
            )
            trials = 1
        rng = random.Random(seed)
        n_rows = graph.num_edges + graph.n
        best = -1
        used = 0
        for trial in range(trials):
            used += 1
            placement = self._sample(surface, graph.n, rng.getrandbits(64))
            if use_float:
                placement = _float_placement(placement)
            matrix = build_matrix(
                Framework(graph=graph, surface=surface, placement=placement)
            )
            rank = self._rank(matrix)
            logger.debug("Trial %d on %s: rank %d", trial, surface.name, rank)
            best = max(best, rank)
            if best == n_rows:
                break
        return _report(
            graph, k, best, used, seed, exact=not use_float, gate=gate
        )

    def analyze_placement(
        self,
        graph: SimpleGraph,
        surface: Surface,
        placement: list[Point],
        k: int | None = None,
    ) -> RigidityReport:
        """Analyze a single given placement, rational or float.

        Raises:
            FrameworkError: If the placement does not fit the graph.
            SurfaceError: If a point is off the surface or singular, the
                surface type is unknown, or the rank contradicts it.
        """
        framework = Framework(graph=graph, surface=surface, placement=placement)
        k = self.surface_type(surface, k)
        gate = maxwell_check(graph, k)
        matrix = build_matrix(framework)
        return _report(
            graph,
            k,
            self._rank(matrix),
            1,
            None,
            exact=matrix.exact,
            gate=gate,
        )

    def compute_type(
        self,
        surface: Surface,
        trials: int | None = None,
        seed: int | None = None,
    ) -> TypeEstimate:
        """Estimate the type as the least nullity of complete graphs.

        Random placements can only raise the nullity above its generic
        value, so the minimum over trials is an upper estimate that
        reaches the type with high probability.

        Raises:
            NoSamplerError: If the surface has no sampler.
        """
        trials = self.settings.type_trials if trials is None else trials
        if trials < 1:
            raise ValueError("trials must be positive")
        seed = self.settings.seed if seed is None else seed
        rng = random.Random(seed)
        nullities: dict[int, int] = {}
        for n in self.settings.type_sizes:
            graph = complete_graph(n)
            for _ in range(trials):
                placement = self._sample(surface, n, rng.getrandbits(64))
                matrix = build_matrix(
                    Framework(graph=graph, surface=surface, placement=placement)
                )
                nullity = matrix.n_cols - _exact_rank(matrix)
                nullities[n] = min(nullities.get(n, nullity), nullity)
        k = min(nullities.values())
        logger.info("Type of %s estimated as %d", surface.name, k)
        return TypeEstimate(
            surface=surface_label(surface),
            k=k,
            nullities=nullities,
            trials=trials,
            seed=seed,
        )

    def sample_framework(
        self, graph: SimpleGraph, surface: Surface, seed: int | None = None
    ) -> Framework:
        """Place a graph at one random rational placement."""
        seed = self.settings.seed if seed is None else seed
        placement = self._sample(surface, graph.n, seed)
        return Framework(graph=graph, surface=surface, placement=placement)


# --- Flexes ---


def flex_basis(framework: Framework) -> list[list[Fraction]]:
    """Exact basis of the infinitesimal flexes of a rational framework.

    Each vector has 3|V| entries, the velocity of vertex v in entries
    3v..3v+2.

    Raises:
        MatrixError: If the placement is not rational.
    """
    if not framework.exact:
        raise MatrixError("Flex bases need a rational placement")
    return rank_exact(build_matrix(framework))[1]


def check_flex(framework: Framework, flex: Sequence[Any]) -> bool:
    """Check the edge and tangency equations of a velocity vector.

    Returns:
        True when (p_u - p_v).(x_u - x_v) = 0 for every edge and
        x_v.N(p_v) = 0 for every vertex; exact for rational input.

    Raises:
        FrameworkError: If the vector does not have 3|V| entries.
    """
    graph, placement = framework.graph, framework.placement
    if len(flex) != 3 * graph.n:
        raise FrameworkError(
            f"Flex has {len(flex)} entries, expected {3 * graph.n}"
        )

    def velocity(v: int) -> list[Any]:
        return list(flex[3 * v:3 * v + 3])

    for u, v in graph.edges:
        d = _sub(placement[u], placement[v])
        w = _sub(velocity(u), velocity(v))
        if sum(a * b for a, b in zip(d, w)) != 0:
            return False
    for v in graph.vertices():
        n_v = normal(framework.surface, placement[v])
        if sum(a * b for a, b in zip(n_v, velocity(v))) != 0:
            return False
    return True
