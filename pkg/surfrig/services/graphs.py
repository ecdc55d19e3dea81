"""Simple graphs and (2,k)-sparsity.

Implements graph construction with simplicity checks, the (2,k)
pebble game deciding sparsity and tightness for 0 <= k <= 3, and the
brute-force subgraph enumeration used as its oracle.
"""

import itertools
import json
import logging
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

import networkx as nx

from surfrig.config import get_settings
from surfrig.exceptions import (
    DuplicateEdgeError,
    GraphInputError,
    GraphTooLargeError,
    LoopError,
    SparsityParameterError,
    VertexRangeError,
)
from surfrig.models.schemas import SimpleGraph, SparsityVerdict

logger = logging.getLogger(__name__)

SPARSITY_RANGE = range(0, 4)


def _is_label(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def make_graph(n: int, edges: Iterable[Sequence[int]]) -> SimpleGraph:
    """Build a simple graph from untrusted input.

    Args:
        n: Number of vertices, labeled 0..n-1.
        edges: Unordered vertex pairs.

    Returns:
        The normalized graph, each edge stored once as (u, v), u < v.

    Raises:
        GraphInputError: If n is not a non-negative int, or a pair is
            not a pair of ints.
        LoopError: If an edge joins a vertex to itself.
        DuplicateEdgeError: If the same pair occurs twice.
        VertexRangeError: If an endpoint lies outside 0..n-1.
    """
    if not _is_label(n) or n < 0:
        raise GraphInputError(
            f"Vertex count must be a non-negative int, got {n!r}"
        )
    seen: set[tuple[int, int]] = set()
    for pair in edges:
        if isinstance(pair, (str, bytes)) or not isinstance(pair, Sequence):
            raise GraphInputError(f"Edge {pair!r} is not a vertex pair")
        if len(pair) != 2:
            raise GraphInputError(f"Edge {list(pair)} is not a vertex pair")
        if not all(_is_label(x) for x in pair):
            raise GraphInputError(f"Edge {list(pair)} has non-integer labels")
        u, v = pair
        if u == v:
            raise LoopError(f"Loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise VertexRangeError(
                f"Edge ({u}, {v}) has an endpoint outside 0..{n - 1}"
            )
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdgeError(f"Duplicate edge {key}")
        seen.add(key)
    return SimpleGraph(n=n, edges=tuple(sorted(seen)))


def complete_graph(n: int) -> SimpleGraph:
    """Return K_n on vertices 0..n-1."""
    return SimpleGraph(n=n, edges=tuple(itertools.combinations(range(n), 2)))


def k5_minus_edge() -> SimpleGraph:
    """Return K5 minus the edge (3, 4), the canonical (2,1) base graph."""
    return SimpleGraph.from_edges(
        5, (e for e in itertools.combinations(range(5), 2) if e != (3, 4))
    )


def k4_union_k4() -> SimpleGraph:
    """Return two copies of K4 sharing the edge (0, 1)."""
    first = itertools.combinations((0, 1, 2, 3), 2)
    second = itertools.combinations((0, 1, 4, 5), 2)
    return SimpleGraph.from_edges(6, itertools.chain(first, second))


def to_networkx(graph: SimpleGraph) -> nx.Graph:
    """Convert to a networkx graph keeping isolated vertices."""
    nx_graph = nx.Graph()
    nx_graph.add_nodes_from(graph.vertices())
    nx_graph.add_edges_from(graph.edges)
    return nx_graph


def components(graph: SimpleGraph) -> list[list[int]]:
    """Connected components as sorted vertex lists, ordered by minimum."""
    parts = [sorted(c) for c in nx.connected_components(to_networkx(graph))]
    return sorted(parts)


def induced_subgraph(
    graph: SimpleGraph, vertex_set: Iterable[int]
) -> tuple[SimpleGraph, list[int]]:
    """Extract the induced subgraph with labels compacted in order.

    Returns:
        The subgraph and the list mapping its labels back to ``graph``.
    """
    members = sorted(set(vertex_set))
    index = {v: i for i, v in enumerate(members)}
    edges = (
        (index[u], index[v])
        for u, v in graph.edges
        if u in index and v in index
    )
    return SimpleGraph.from_edges(len(members), edges), members


def _check_k(k: int) -> None:
    if k not in SPARSITY_RANGE:
        raise SparsityParameterError(f"k must lie in 0..3, got {k}")


def deficiency(graph: SimpleGraph, vertex_set: Iterable[int]) -> int:
    """Return 2|V(H)| - |E(H)| for the subgraph H induced on a vertex set.

    Raises:
        GraphInputError: If the set is empty or holds unknown vertices.
    """
    members = set(vertex_set)
    if not members:
        raise GraphInputError("Deficiency needs a nonempty vertex set")
    if not all(0 <= v < graph.n for v in members):
        raise VertexRangeError("Vertex set holds labels outside the graph")
    return 2 * len(members) - graph.induced_edge_count(members)


class _PebbleGame:
    """The (2,k) pebble game on a growing directed orientation.

    Every vertex starts with two pebbles. An edge uv is accepted once
    k+1 pebbles sit on u and v together; the accepted edge is oriented
    away from an endpoint that spends one of them.
    """

    def __init__(self, n: int, k: int) -> None:
        self.k = k
        self.pebbles = [2] * n
        self.out: list[set[int]] = [set() for _ in range(n)]

    def _find_pebble(self, root: int, blocked: int) -> bool:
        # Depth-first search along out-edges, never entering ``blocked``.
        parent: dict[int, int] = {root: root, blocked: blocked}
        stack = [root]
        while stack:
            x = stack.pop()
            for y in self.out[x]:
                if y in parent:
                    continue
                parent[y] = x
                if self.pebbles[y] > 0:
                    self._reverse_path(root, y, parent)
                    return True
                stack.append(y)
        return False

    def _reverse_path(self, root: int, end: int, parent: dict) -> None:
        self.pebbles[end] -= 1
        self.pebbles[root] += 1
        node = end
        while node != root:
            prev = parent[node]
            self.out[prev].remove(node)
            self.out[node].add(prev)
            node = prev

    def _reachable(self, sources: Iterable[int]) -> set[int]:
        seen = set(sources)
        stack = list(seen)
        while stack:
            x = stack.pop()
            for y in self.out[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    def add_edge(self, u: int, v: int) -> set[int] | None:
        """Try to accept edge uv.

        Returns:
            None when accepted, otherwise the vertex set reachable from
            u and v, which spans a subgraph violating the count once uv
            is included.
        """
        while self.pebbles[u] + self.pebbles[v] < self.k + 1:
            if self._find_pebble(u, v):
                continue
            if self._find_pebble(v, u):
                continue
            return self._reachable((u, v))
        tail, head = (u, v) if self.pebbles[u] > 0 else (v, u)
        self.pebbles[tail] -= 1
        self.out[tail].add(head)
        return None


def is_sparse(graph: SimpleGraph, k: int) -> SparsityVerdict:
    """Decide (2,k)-sparsity and tightness with the pebble game.

    Args:
        graph: The graph to test.
        k: Sparsity parameter in 0..3.

    Returns:
        The verdict; when the graph is not sparse the witness is the
        vertex set reachable at the first rejected edge.

    Raises:
        SparsityParameterError: If k is outside 0..3.
    """
    _check_k(k)
    game = _PebbleGame(graph.n, k)
    for u, v in graph.edges:
        rejected = game.add_edge(u, v)
        if rejected is not None:
            logger.debug("Edge (%d, %d) rejected at k=%d", u, v, k)
            return SparsityVerdict(
                k=k, sparse=False, tight=False, witness=sorted(rejected)
            )
    return SparsityVerdict(
        k=k, sparse=True, tight=graph.num_edges == 2 * graph.n - k
    )


def is_tight(graph: SimpleGraph, k: int) -> bool:
    return is_sparse(graph, k).tight


def is_sparse_bruteforce(graph: SimpleGraph, k: int) -> SparsityVerdict:
    """Decide (2,k)-sparsity by enumerating every vertex subset.

    Subsets are scanned by increasing size, so a witness is a smallest
    violating vertex set.

    Raises:
        SparsityParameterError: If k is outside 0..3.
        GraphTooLargeError: If the graph exceeds the enumeration limit.
    """
    _check_k(k)
    limit = get_settings().bruteforce_limit
    if graph.n > limit:
        raise GraphTooLargeError(
            f"Brute force is limited to {limit} vertices, got {graph.n}"
        )
    for size in range(2, graph.n + 1):
        for subset in itertools.combinations(range(graph.n), size):
            count = graph.induced_edge_count(subset)
            if count >= 1 and count > 2 * size - k:
                return SparsityVerdict(
                    k=k, sparse=False, tight=False, witness=list(subset)
                )
    return SparsityVerdict(
        k=k, sparse=True, tight=graph.num_edges == 2 * graph.n - k
    )


def graph_from_json(data: Any) -> SimpleGraph:
    """Parse the ``{"n": ..., "edges": [[u, v], ...]}`` form.

    Raises:
        GraphInputError: If the document does not have that shape.
    """
    if not isinstance(data, dict) or "n" not in data:
        raise GraphInputError("Graph JSON needs an object with key 'n'")
    edges = data.get("edges", [])
    if not isinstance(data["n"], int) or not isinstance(edges, list):
        raise GraphInputError("Graph JSON has malformed 'n' or 'edges'")
    return make_graph(data["n"], edges)


def load_graph(path: str | Path) -> SimpleGraph:
    """Read a graph JSON file.

    Raises:
        OSError: If the file cannot be read.
        GraphInputError: If the content is not a valid graph.
    """
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise GraphInputError(f"{path}: not valid JSON ({e.msg})") from e
    return graph_from_json(data)
