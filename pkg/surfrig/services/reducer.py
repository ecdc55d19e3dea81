"""Certificate-producing reduction and random generation of tight graphs.

A (2,1)-tight simple graph reduces to K5 minus an edge, a (2,2)-tight
one to K1 and a (2,3)-tight one to K2. ``reduce`` records the inverse
moves it performs as forward steps, so ``replay`` of its certificate
rebuilds the input with identical labels.
"""

import logging
import random

from pydantic import ValidationError

from surfrig.exceptions import (
    CertificateError,
    GraphInputError,
    InvariantError,
    NotTightError,
    ReductionError,
    SparsityParameterError,
)
from surfrig.models.schemas import (
    BaseGraph,
    Certificate,
    ConstructionStep,
    InverseResult,
    MoveKind,
    SimpleGraph,
)
from surfrig.services import moves
from surfrig.services.graphs import (
    complete_graph,
    graph_from_json,
    is_sparse,
    is_tight,
    k5_minus_edge,
)

logger = logging.getLogger(__name__)

REDUCIBLE_K = (1, 2, 3)

BASES: dict[int, BaseGraph] = {
    1: BaseGraph.K5_MINUS_EDGE,
    2: BaseGraph.K1,
    3: BaseGraph.K2,
}

# Relative move frequencies for generate; moves outside the k-th move
# set are dropped before sampling.
MOVE_WEIGHTS: dict[MoveKind, float] = {
    MoveKind.HENNEBERG1: 0.35,
    MoveKind.HENNEBERG2: 0.35,
    MoveKind.VERTEX_TO_K4: 0.1,
    MoveKind.VERTEX_TO_4CYCLE: 0.1,
    MoveKind.VERTEX_SPLIT: 0.05,
    MoveKind.EDGE_JOIN: 0.05,
}


def _check_k(k: int) -> None:
    if k not in REDUCIBLE_K:
        raise SparsityParameterError(f"k must be 1, 2 or 3, got {k}")


def base_graph(k: int) -> SimpleGraph:
    """Return the canonical base graph for k."""
    _check_k(k)
    if k == 1:
        return k5_minus_edge()
    return complete_graph(1 if k == 2 else 2)


def _is_base(graph: SimpleGraph, k: int) -> bool:
    if k == 1:
        return graph.n == 5 and graph.num_edges == 9
    if k == 2:
        return graph.n == 1
    return graph.n == 2 and graph.num_edges == 1


def _base_relabel(graph: SimpleGraph, k: int) -> list[int] | None:
    # Canonical K5-e misses (3, 4); put the actual missing pair there.
    if k != 1:
        return None
    missing = next(
        (u, v)
        for u in range(5)
        for v in range(u + 1, 5)
        if not graph.has_edge(u, v)
    )
    mapping = [x for x in range(5) if x not in missing] + list(missing)
    return None if mapping == list(range(5)) else mapping


def _in_k4(graph: SimpleGraph, v: int) -> bool:
    return graph.degree(v) == 3 and graph.induced_edge_count(
        graph.neighbors(v)
    ) == 3


def _next_inverse(graph: SimpleGraph, k: int) -> InverseResult | None:
    """Find the highest-priority admissible inverse move."""
    candidates = moves.inverse_henneberg1_candidates(graph, k)
    if candidates:
        return candidates[0][1]
    degree3 = [v for v in graph.vertices() if graph.degree(v) == 3]
    for v in degree3:
        if _in_k4(graph, v):
            continue
        result = moves.try_inverse_henneberg2(graph, v, k)
        if result is not None:
            return result
    if k == 3:
        return None
    in_k4 = [v for v in degree3 if _in_k4(graph, v)]
    tried: set[tuple[int, ...]] = set()
    for v in in_k4:
        quad = tuple(sorted({v, *graph.neighbors(v)}))
        if quad in tried:
            continue
        tried.add(quad)
        result = moves.try_k4_contraction(graph, quad, k)
        if result is not None:
            return result
    for v in in_k4:
        a, b, c = sorted(graph.neighbors(v))
        for x, y, z in ((a, b, c), (a, c, b), (b, c, a)):
            common = graph.neighbors(x) & graph.neighbors(y)
            for w in sorted(common - {v, x, y, z}):
                if graph.has_edge(w, z):
                    continue
                result = moves.try_4cycle_contraction(graph, v, w, x, y, z, k)
                if result is not None:
                    return result
    return None


def _reduce(graph: SimpleGraph, k: int) -> Certificate:
    undo: list[ConstructionStep] = []
    current = graph
    while not _is_base(current, k):
        result = _next_inverse(current, k)
        if result is not None:
            logger.debug(
                "n=%d: inverse %s", current.n, result.step.op.value
            )
            undo.append(result.step)
            current = result.graph
            continue
        split = moves.find_inverse_edge_join(current, k) if k == 1 else None
        if split is None:
            raise ReductionError(
                f"No admissible inverse move on a (2,{k})-tight graph with "
                f"{current.n} vertices"
            )
        edge, first, second = split
        logger.debug("n=%d: inverse edge join at %s", current.n, edge)
        left, right, _ = moves.edge_join_step(current, edge, first, second)
        left_certificate = _reduce(left, k)
        right_certificate = _reduce(right, k)
        _, _, join = moves.edge_join_step(
            current,
            edge,
            first,
            second,
            other_certificate=right_certificate.model_dump(mode="json"),
        )
        return Certificate(
            k=k,
            base=BASES[k],
            steps=[*left_certificate.steps, join, *reversed(undo)],
            base_relabel=left_certificate.base_relabel,
        )
    return Certificate(
        k=k,
        base=BASES[k],
        steps=list(reversed(undo)),
        base_relabel=_base_relabel(current, k),
    )


def reduce(graph: SimpleGraph, k: int) -> Certificate:
    """Reduce a (2,k)-tight simple graph to its base graph.

    At each stage the first applicable inverse move is taken, in this
    order: Henneberg 1; Henneberg 2 at a degree-3 vertex outside any
    K4; K4-to-vertex; 4-cycle contraction; and, for k = 1 once nothing
    else applies and the graph is not K5-e, an inverse edge join whose
    halves are reduced recursively. Ties go to the lowest label.

    Args:
        graph: The graph to reduce.
        k: 1, 2 or 3.

    Returns:
        A certificate whose replay yields ``graph`` exactly.

    Raises:
        SparsityParameterError: If k is not 1, 2 or 3.
        NotTightError: If the graph is not (2,k)-tight.
        ReductionError: If no admissible inverse move is found.
    """
    _check_k(k)
    verdict = is_sparse(graph, k)
    if not verdict.tight:
        reason = "not sparse" if not verdict.sparse else "sparse, not tight"
        raise NotTightError(f"Graph is not (2,{k})-tight ({reason})")
    certificate = _reduce(graph, k)
    logger.info(
        "Reduced n=%d, k=%d in %d steps", graph.n, k, len(certificate.steps)
    )
    return certificate


def _operand(step: ConstructionStep, k: int) -> SimpleGraph:
    if "other" in step.params:
        try:
            nested = Certificate.model_validate(step.params["other"])
        except ValidationError as e:
            raise CertificateError(f"Malformed joined certificate: {e}") from e
        if nested.k != k:
            raise CertificateError("Joined certificate has a different k")
        return replay(nested)
    if "graph" in step.params:
        try:
            other = graph_from_json(step.params["graph"])
        except GraphInputError as e:
            raise CertificateError(f"Malformed joined graph: {e}") from e
        if not is_tight(other, k):
            raise CertificateError(f"Joined graph is not (2,{k})-tight")
        return other
    raise CertificateError("Edge join step names no right-hand operand")


def replay(certificate: Certificate) -> SimpleGraph:
    """Rebuild the target graph of a certificate, checking every stage.

    Raises:
        CertificateError: If the base does not match k, a step is
            malformed, or an intermediate graph is not (2,k)-tight.
    """
    k = certificate.k
    _check_k(k)
    if certificate.base != BASES[k]:
        raise CertificateError(
            f"Base {certificate.base.value} does not belong to k={k}"
        )
    graph = base_graph(k)
    if certificate.base_relabel is not None:
        if sorted(certificate.base_relabel) != list(range(graph.n)):
            raise CertificateError("Base relabel is not a permutation")
        graph = graph.relabel(certificate.base_relabel)
    for index, step in enumerate(certificate.steps):
        operand = _operand(step, k) if step.op == MoveKind.EDGE_JOIN else None
        graph = moves.apply_step(graph, step, operand)
        if not is_tight(graph, k):
            raise CertificateError(
                f"Step {index} ({step.op.value}) leaves a graph that is "
                f"not (2,{k})-tight"
            )
    return graph


def _reachable(n: int, k: int) -> bool:
    if k == 1:
        return n >= 5
    if k == 2:
        return n == 1 or n >= 4
    return n >= 2


def _random_move(
    graph: SimpleGraph, kind: MoveKind, room: int, rng: random.Random
) -> tuple[SimpleGraph, ConstructionStep] | None:
    n = graph.n
    if kind == MoveKind.HENNEBERG1:
        if n < 2:
            return None
        v1, v2 = rng.sample(range(n), 2)
        return moves.henneberg1(graph, v1, v2)
    if kind == MoveKind.HENNEBERG2:
        if not graph.edges or n < 3:
            return None
        edge = rng.choice(graph.edges)
        v3 = rng.choice([x for x in range(n) if x not in edge])
        return moves.henneberg2(graph, edge, v3)
    if kind == MoveKind.VERTEX_TO_K4:
        if room < 3:
            return None
        v = rng.randrange(n)
        assignment = {x: rng.randrange(4) for x in sorted(graph.neighbors(v))}
        return moves.vertex_to_k4(graph, v, assignment)
    if kind == MoveKind.VERTEX_TO_4CYCLE:
        eligible = [v for v in range(n) if graph.degree(v) >= 2]
        if not eligible:
            return None
        v1 = rng.choice(eligible)
        v2, v3 = rng.sample(sorted(graph.neighbors(v1)), 2)
        sides = {
            x: rng.randrange(2)
            for x in sorted(graph.neighbors(v1) - {v2, v3})
        }
        return moves.vertex_to_4cycle(graph, v1, v2, v3, sides)
    if kind == MoveKind.VERTEX_SPLIT:
        if not graph.edges:
            return None
        u, v = rng.choice(graph.edges)
        if rng.random() < 0.5:
            u, v = v, u
        sides = {x: rng.randrange(2) for x in sorted(graph.neighbors(v) - {u})}
        return moves.vertex_split(graph, v, u, sides)
    if room < 5:
        return None
    size = rng.randint(5, room)
    other, certificate = generate(size, 1, rng.getrandbits(32))
    return moves.edge_join(
        graph,
        other,
        rng.randrange(n),
        rng.randrange(size),
        other_certificate=certificate.model_dump(mode="json"),
    )


def generate(
    n_target: int, k: int, seed: int
) -> tuple[SimpleGraph, Certificate]:
    """Grow a random (2,k)-tight graph from the base by forward moves.

    Move kinds are drawn with MOVE_WEIGHTS restricted to the k-th move
    set and redrawn whenever the drawn move does not apply or would
    overshoot ``n_target``. Edge joins build their right operand by a
    nested call seeded from the same generator.

    Args:
        n_target: Vertex count of the result.
        k: 1, 2 or 3.
        seed: Seed of the private random generator.

    Returns:
        The graph and its certificate.

    Raises:
        SparsityParameterError: If k is not 1, 2 or 3.
        GraphInputError: If no simple (2,k)-tight graph has n_target
            vertices.
    """
    _check_k(k)
    if not _reachable(n_target, k):
        raise GraphInputError(
            f"No simple (2,{k})-tight graph has {n_target} vertices"
        )
    rng = random.Random(seed)
    kinds = list(moves.MOVE_SETS[k])
    weights = [MOVE_WEIGHTS[kind] for kind in kinds]
    graph = base_graph(k)
    steps: list[ConstructionStep] = []
    while graph.n < n_target:
        kind = rng.choices(kinds, weights)[0]
        applied = _random_move(graph, kind, n_target - graph.n, rng)
        if applied is None:
            continue
        graph, step = applied
        steps.append(step)
    if not is_tight(graph, k):
        raise InvariantError(
            f"Generated graph on {graph.n} vertices is not (2,{k})-tight"
        )
    return graph, Certificate(k=k, base=BASES[k], steps=steps)
