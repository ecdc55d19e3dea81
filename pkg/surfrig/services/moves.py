"""Construction moves on simple graphs and their inverses.

Forward moves take a graph and the move's vertex labels and return the
new graph with a ConstructionStep recording them. New vertices always
take the next free labels n, n+1, ...

Inverse moves compact the surviving labels downward (a merged vertex
keeps the smallest participating label) and return an InverseResult
whose step rebuilds the input exactly, relabel map included. The
``try_*`` inverses re-check tightness with the pebble game and return
None when the reduced graph is not simple or not (2,k)-tight.
"""

import logging
from collections.abc import Iterable, Mapping

import networkx as nx

from surfrig.exceptions import CertificateError, MoveError
from surfrig.models.schemas import (
    ConstructionStep,
    InverseResult,
    MoveKind,
    SimpleGraph,
)
from surfrig.services.graphs import (
    components,
    induced_subgraph,
    is_tight,
    to_networkx,
)

logger = logging.getLogger(__name__)

# Moves that preserve (2,k)-tightness, per sparsity parameter.
MOVE_SETS: dict[int, tuple[MoveKind, ...]] = {
    3: (MoveKind.HENNEBERG1, MoveKind.HENNEBERG2),
    2: (
        MoveKind.HENNEBERG1,
        MoveKind.HENNEBERG2,
        MoveKind.VERTEX_TO_K4,
        MoveKind.VERTEX_TO_4CYCLE,
        MoveKind.VERTEX_SPLIT,
    ),
    1: tuple(MoveKind),
}


def _require_vertex(graph: SimpleGraph, *vertices: int) -> None:
    for v in vertices:
        if not 0 <= v < graph.n:
            raise MoveError(f"Vertex {v} is not in a graph on {graph.n}")


def _require_edge(graph: SimpleGraph, u: int, v: int) -> None:
    if not graph.has_edge(u, v):
        raise MoveError(f"Edge ({u}, {v}) is not in the graph")


def _pairs(items: Mapping[int, int]) -> list[list[int]]:
    return [[int(x), int(side)] for x, side in sorted(items.items())]


def _check_sides(
    graph: SimpleGraph, v: int, sides: Mapping[int, int], excluded: set[int]
) -> None:
    expected = set(graph.neighbors(v)) - excluded
    if set(sides) != expected:
        raise MoveError(
            f"Partition at {v} must cover exactly {sorted(expected)}, "
            f"got {sorted(sides)}"
        )
    if any(side not in (0, 1) for side in sides.values()):
        raise MoveError("Partition sides must be 0 or 1")


# --- Forward moves ---


def henneberg1(
    graph: SimpleGraph, v1: int, v2: int
) -> tuple[SimpleGraph, ConstructionStep]:
    """Add a vertex joined to two distinct vertices.

    Raises:
        MoveError: If v1 == v2 or either is not a vertex.
    """
    _require_vertex(graph, v1, v2)
    if v1 == v2:
        raise MoveError("Henneberg 1 needs two distinct neighbours")
    new = graph.n
    result = SimpleGraph.from_edges(
        new + 1, [*graph.edges, (v1, new), (v2, new)]
    )
    step = ConstructionStep(
        op=MoveKind.HENNEBERG1, params={"v1": v1, "v2": v2}
    )
    return result, step


def henneberg2(
    graph: SimpleGraph, edge: tuple[int, int], v3: int
) -> tuple[SimpleGraph, ConstructionStep]:
    """Remove edge v1v2 and add a vertex joined to v1, v2 and v3.

    Raises:
        MoveError: If the edge is missing or v3 is one of its ends.
    """
    v1, v2 = edge
    _require_vertex(graph, v1, v2, v3)
    _require_edge(graph, v1, v2)
    if v3 in (v1, v2):
        raise MoveError(f"v3={v3} coincides with an end of the removed edge")
    new = graph.n
    kept = [e for e in graph.edges if e != (min(v1, v2), max(v1, v2))]
    result = SimpleGraph.from_edges(
        new + 1, [*kept, (v1, new), (v2, new), (v3, new)]
    )
    step = ConstructionStep(
        op=MoveKind.HENNEBERG2, params={"edge": [v1, v2], "v3": v3}
    )
    return result, step


def vertex_to_k4(
    graph: SimpleGraph, v: int, assignment: Mapping[int, int]
) -> tuple[SimpleGraph, ConstructionStep]:
    """Replace v by a copy of K4 on corners [v, n, n+1, n+2].

    Args:
        graph: The graph.
        v: The vertex to replace.
        assignment: Maps each neighbour x of v to the corner index
            (0..3) that inherits the edge xv.

    Raises:
        MoveError: If the assignment misses or invents an edge at v.
    """
    _require_vertex(graph, v)
    if set(assignment) != set(graph.neighbors(v)):
        raise MoveError(
            f"Assignment must cover exactly the neighbours of {v}"
        )
    if any(c not in range(4) for c in assignment.values()):
        raise MoveError("K4 corner indices must lie in 0..3")
    corners = [v, graph.n, graph.n + 1, graph.n + 2]
    edges = [e for e in graph.edges if v not in e]
    edges += [
        (corners[i], corners[j]) for i in range(4) for j in range(i + 1, 4)
    ]
    edges += [(x, corners[c]) for x, c in assignment.items()]
    result = SimpleGraph.from_edges(graph.n + 3, edges)
    step = ConstructionStep(
        op=MoveKind.VERTEX_TO_K4,
        params={"v": v, "assignment": _pairs(assignment)},
    )
    return result, step


def vertex_to_4cycle(
    graph: SimpleGraph, v1: int, v2: int, v3: int, sides: Mapping[int, int]
) -> tuple[SimpleGraph, ConstructionStep]:
    """Split v1 into v1 and a new v0, both adjacent to v2 and v3.

    Args:
        graph: The graph.
        v1: The vertex to split.
        v2: First shared neighbour.
        v3: Second shared neighbour.
        sides: Maps every other neighbour of v1 to 0 (stays on v1) or
            1 (moves to v0).

    Raises:
        MoveError: If v1v2 or v1v3 is missing or ``sides`` is not a
            partition of the remaining edges at v1.
    """
    _require_vertex(graph, v1, v2, v3)
    if v2 == v3:
        raise MoveError("v2 and v3 must be distinct")
    _require_edge(graph, v1, v2)
    _require_edge(graph, v1, v3)
    _check_sides(graph, v1, sides, {v2, v3})
    v0 = graph.n
    moved = {x for x, side in sides.items() if side == 1}
    edges = [
        e for e in graph.edges
        if not (v1 in e and (e[0] if e[1] == v1 else e[1]) in moved)
    ]
    edges += [(v0, v2), (v0, v3), *((v0, x) for x in moved)]
    result = SimpleGraph.from_edges(graph.n + 1, edges)
    step = ConstructionStep(
        op=MoveKind.VERTEX_TO_4CYCLE,
        params={"v1": v1, "v2": v2, "v3": v3, "sides": _pairs(sides)},
    )
    return result, step


def vertex_split(
    graph: SimpleGraph, v: int, u: int, sides: Mapping[int, int]
) -> tuple[SimpleGraph, ConstructionStep]:
    """Replace edge uv and vertex v by a triangle u, v, n.

    Args:
        graph: The graph.
        v: The vertex to split; it keeps its label as the first copy.
        u: The neighbour joined to both copies.
        sides: Maps every other neighbour of v to 0 (first copy) or
            1 (the new vertex n).

    Raises:
        MoveError: If uv is missing or ``sides`` is not a partition.
    """
    _require_vertex(graph, v, u)
    _require_edge(graph, u, v)
    _check_sides(graph, v, sides, {u})
    new = graph.n
    moved = {x for x, side in sides.items() if side == 1}
    edges = [
        e for e in graph.edges
        if not (v in e and (e[0] if e[1] == v else e[1]) in moved)
    ]
    edges += [(u, new), (v, new), *((new, x) for x in moved)]
    result = SimpleGraph.from_edges(graph.n + 1, edges)
    step = ConstructionStep(
        op=MoveKind.VERTEX_SPLIT,
        params={"v": v, "u": u, "sides": _pairs(sides)},
    )
    return result, step


def edge_join(
    graph: SimpleGraph,
    other: SimpleGraph,
    g: int,
    h: int,
    other_certificate: dict | None = None,
) -> tuple[SimpleGraph, ConstructionStep]:
    """Join two graphs by the edge g(h + |V(graph)|).

    Args:
        graph: The left operand; its labels are kept.
        other: The right operand; its labels shift by graph.n.
        g: Vertex of ``graph``.
        h: Vertex of ``other``.
        other_certificate: Serialized certificate of ``other``. When
            given it is recorded so replay can rebuild ``other``;
            otherwise ``other`` itself is recorded.

    Raises:
        MoveError: If g or h is out of range.
    """
    _require_vertex(graph, g)
    _require_vertex(other, h)
    shift = graph.n
    edges = [
        *graph.edges,
        *((a + shift, b + shift) for a, b in other.edges),
        (g, h + shift),
    ]
    result = SimpleGraph.from_edges(graph.n + other.n, edges)
    params: dict = {"g": g, "h": h}
    if other_certificate is not None:
        params["other"] = other_certificate
    else:
        params["graph"] = other.to_json()
    return result, ConstructionStep(op=MoveKind.EDGE_JOIN, params=params)


def apply_step(
    graph: SimpleGraph,
    step: ConstructionStep,
    operand: SimpleGraph | None = None,
) -> SimpleGraph:
    """Replay one forward step, relabel permutation included.

    Args:
        graph: The pre-graph.
        step: The recorded move.
        operand: Right-hand graph of an edge join.

    Returns:
        The post-graph.

    Raises:
        CertificateError: If the step is malformed for this graph.
    """
    p = step.params
    try:
        match step.op:
            case MoveKind.HENNEBERG1:
                result, _ = henneberg1(graph, p["v1"], p["v2"])
            case MoveKind.HENNEBERG2:
                result, _ = henneberg2(graph, tuple(p["edge"]), p["v3"])
            case MoveKind.VERTEX_TO_K4:
                result, _ = vertex_to_k4(graph, p["v"], dict(p["assignment"]))
            case MoveKind.VERTEX_TO_4CYCLE:
                result, _ = vertex_to_4cycle(
                    graph, p["v1"], p["v2"], p["v3"], dict(p["sides"])
                )
            case MoveKind.VERTEX_SPLIT:
                result, _ = vertex_split(
                    graph, p["v"], p["u"], dict(p["sides"])
                )
            case MoveKind.EDGE_JOIN:
                if operand is None:
                    raise CertificateError("Edge join replay needs an operand")
                result, _ = edge_join(graph, operand, p["g"], p["h"])
    except (KeyError, TypeError) as e:
        raise CertificateError(
            f"Malformed {step.op.value} step: {e!r}"
        ) from e
    except MoveError as e:
        raise CertificateError(
            f"Step {step.op.value} does not apply: {e}"
        ) from e
    if step.relabel is None:
        return result
    if sorted(step.relabel) != list(range(result.n)):
        raise CertificateError(
            f"Relabel of {step.op.value} step is not a permutation of "
            f"0..{result.n - 1}"
        )
    return result.relabel(step.relabel)


# --- Inverse moves ---


def _compact(
    n: int, removed: Iterable[int], edges: Iterable[tuple[int, int]]
) -> tuple[SimpleGraph, list[int], dict[int, int]]:
    gone = set(removed)
    kept = [v for v in range(n) if v not in gone]
    index = {v: i for i, v in enumerate(kept)}
    graph = SimpleGraph.from_edges(
        len(kept), ((index[a], index[b]) for a, b in edges)
    )
    return graph, kept, index


def _relabel(kept: list[int], created: list[int]) -> list[int] | None:
    mapping = kept + created
    if mapping == list(range(len(mapping))):
        return None
    return mapping


def _with_relabel(
    step: ConstructionStep, kept: list[int], created: list[int]
) -> ConstructionStep:
    return step.model_copy(update={"relabel": _relabel(kept, created)})


def inverse_henneberg1_candidates(
    graph: SimpleGraph, k: int
) -> list[tuple[int, InverseResult]]:
    """Delete each degree-2 vertex in turn.

    Deleting a degree-2 vertex never breaks simplicity or (2,k)-
    tightness, so no check is made.

    Returns:
        (vertex, result) pairs in increasing vertex order.
    """
    candidates = []
    for v in graph.vertices():
        if graph.degree(v) != 2:
            continue
        a, b = sorted(graph.neighbors(v))
        reduced, kept, index = _compact(
            graph.n, [v], (e for e in graph.edges if v not in e)
        )
        _, step = henneberg1(reduced, index[a], index[b])
        result = InverseResult(
            graph=reduced, step=_with_relabel(step, kept, [v])
        )
        candidates.append((v, result))
    return candidates


def try_inverse_henneberg2(
    graph: SimpleGraph, v: int, k: int
) -> InverseResult | None:
    """Delete a degree-3 vertex and restore one edge among its neighbours.

    Candidate pairs are tried in lexicographic order; the first one
    giving a (2,k)-tight graph wins.

    Raises:
        MoveError: If v does not have degree 3.
    """
    _require_vertex(graph, v)
    if graph.degree(v) != 3:
        raise MoveError(f"Vertex {v} has degree {graph.degree(v)}, not 3")
    a, b, c = sorted(graph.neighbors(v))
    base_edges = [e for e in graph.edges if v not in e]
    for x, y, z in ((a, b, c), (a, c, b), (b, c, a)):
        if graph.has_edge(x, y):
            continue
        reduced, kept, index = _compact(graph.n, [v], [*base_edges, (x, y)])
        if not is_tight(reduced, k):
            continue
        _, step = henneberg2(reduced, (index[x], index[y]), index[z])
        logger.debug("Inverse Henneberg 2 at %d restores (%d, %d)", v, x, y)
        return InverseResult(graph=reduced, step=_with_relabel(step, kept, [v]))
    return None


def _require_k4(graph: SimpleGraph, quad: Iterable[int]) -> list[int]:
    members = sorted(set(quad))
    if len(members) != 4:
        raise MoveError("A K4 needs four distinct vertices")
    _require_vertex(graph, *members)
    if graph.induced_edge_count(members) != 6:
        raise MoveError(f"Vertices {members} do not induce K4")
    return members


def try_k4_contraction(
    graph: SimpleGraph, k4_vertices: Iterable[int], k: int
) -> InverseResult | None:
    """Contract a copy of K4 to its smallest vertex.

    Returns None when an outside vertex meets the K4 twice (the
    contraction would create a parallel edge) or the result is not
    (2,k)-tight.

    Raises:
        MoveError: If the vertices do not induce K4.
    """
    quad = _require_k4(graph, k4_vertices)
    merged = quad[0]
    corner = {q: i for i, q in enumerate(quad)}
    attached: dict[int, int] = {}
    edges = []
    for a, b in graph.edges:
        if a in corner and b in corner:
            continue
        if a in corner or b in corner:
            inside, outside = (a, b) if a in corner else (b, a)
            if outside in attached:
                return None
            attached[outside] = corner[inside]
            edges.append((merged, outside))
        else:
            edges.append((a, b))
    reduced, kept, index = _compact(graph.n, quad[1:], edges)
    if not is_tight(reduced, k):
        return None
    assignment = {index[x]: c for x, c in attached.items()}
    _, step = vertex_to_k4(reduced, index[merged], assignment)
    return InverseResult(
        graph=reduced, step=_with_relabel(step, kept, quad[1:])
    )


def _merge_pair(
    graph: SimpleGraph, keep: int, gone: int, drop: set[tuple[int, int]]
) -> list[tuple[int, int]]:
    edges = []
    for e in graph.edges:
        if e in drop:
            continue
        a, b = e
        if a == gone:
            a = keep
        if b == gone:
            b = keep
        edges.append((a, b))
    return edges


def try_4cycle_contraction(
    graph: SimpleGraph, v: int, w: int, a: int, b: int, c: int, k: int
) -> InverseResult | None:
    """Identify v with w across the 4-cycle v-a-w-b.

    {v, a, b, c} must induce K4 with deg(v) = 3 and w a non-neighbour
    of v adjacent to a and b. The merged vertex keeps min(v, w).

    Returns:
        The contraction, or None when wc is present ({v, w, a, b, c}
        then induce K5 minus an edge) or the result is not tight.

    Raises:
        MoveError: If the configuration is not present.
    """
    if len({v, w, a, b, c}) != 5:
        raise MoveError("v, w, a, b, c must be five distinct vertices")
    _require_k4(graph, (v, a, b, c))
    if graph.degree(v) != 3:
        raise MoveError(f"Vertex {v} has degree {graph.degree(v)}, not 3")
    if graph.has_edge(v, w):
        raise MoveError(f"Vertices {v} and {w} are adjacent")
    _require_edge(graph, w, a)
    _require_edge(graph, w, b)
    if graph.has_edge(w, c):
        return None
    keep, gone = min(v, w), max(v, w)
    edges = _merge_pair(graph, keep, gone, set())
    reduced, kept, index = _compact(graph.n, [gone], edges)
    if reduced.num_edges != graph.num_edges - 2 or not is_tight(reduced, k):
        return None
    sides = {
        index[x]: int(graph.has_edge(gone, x))
        for x in (graph.neighbors(v) | graph.neighbors(w)) - {a, b}
    }
    _, step = vertex_to_4cycle(
        reduced, index[keep], index[a], index[b], sides
    )
    return InverseResult(graph=reduced, step=_with_relabel(step, kept, [gone]))


def try_edge_contraction(
    graph: SimpleGraph, u: int, v1: int, v2: int, k: int
) -> InverseResult | None:
    """Contract edge v1v2 of the triangle u v1 v2 (inverse vertex split).

    Returns None if v1 and v2 share a neighbour other than u or the
    result is not (2,k)-tight.

    Raises:
        MoveError: If u, v1, v2 do not form a triangle.
    """
    _require_vertex(graph, u, v1, v2)
    if len({u, v1, v2}) != 3 or graph.induced_edge_count((u, v1, v2)) != 3:
        raise MoveError(f"Vertices {u}, {v1}, {v2} do not form a triangle")
    if (graph.neighbors(v1) & graph.neighbors(v2)) - {u}:
        return None
    keep, gone = min(v1, v2), max(v1, v2)
    drop = {(keep, gone), (min(u, gone), max(u, gone))}
    edges = _merge_pair(graph, keep, gone, drop)
    reduced, kept, index = _compact(graph.n, [gone], edges)
    if not is_tight(reduced, k):
        return None
    sides = {
        index[x]: int(graph.has_edge(gone, x))
        for x in (graph.neighbors(v1) | graph.neighbors(v2)) - {u, v1, v2}
    }
    _, step = vertex_split(reduced, index[keep], index[u], sides)
    return InverseResult(graph=reduced, step=_with_relabel(step, kept, [gone]))


def find_inverse_edge_join(
    graph: SimpleGraph, k: int = 1
) -> tuple[tuple[int, int], list[int], list[int]] | None:
    """Find a bridge splitting the graph into two (2,k)-tight halves.

    Bridges are scanned in canonical edge order.

    Returns:
        (edge, component1, component2) with component1 the half
        holding the smaller label, or None.
    """
    bridges = sorted(
        (min(e), max(e)) for e in nx.bridges(to_networkx(graph))
    )
    for u, v in bridges:
        cut = SimpleGraph(
            n=graph.n, edges=tuple(e for e in graph.edges if e != (u, v))
        )
        parts = components(cut)
        if len(parts) != 2:
            continue
        if all(is_tight(induced_subgraph(graph, p)[0], k) for p in parts):
            return (u, v), parts[0], parts[1]
    return None


def edge_join_step(
    graph: SimpleGraph,
    edge: tuple[int, int],
    first: list[int],
    second: list[int],
    other_certificate: dict | None = None,
) -> tuple[SimpleGraph, SimpleGraph, ConstructionStep]:
    """Split ``graph`` at a bridge into its halves and the join step.

    Returns:
        The compacted halves and the forward edge-join step (with
        relabel) rebuilding ``graph`` from them.
    """
    left, left_labels = induced_subgraph(graph, first)
    right, right_labels = induced_subgraph(graph, second)
    u, v = edge
    g, h = (u, v) if u in first else (v, u)
    _, step = edge_join(
        left,
        right,
        left_labels.index(g),
        right_labels.index(h),
        other_certificate=other_certificate,
    )
    step = _with_relabel(step, left_labels + right_labels, [])
    return left, right, step
