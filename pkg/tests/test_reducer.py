"""Unit tests for reduction, replay and generation."""

import pytest

from surfrig.exceptions import (
    CertificateError,
    GraphInputError,
    NotTightError,
    SparsityParameterError,
)
from surfrig.models.schemas import (
    BaseGraph,
    Certificate,
    ConstructionStep,
    MoveKind,
)
from surfrig.services import moves
from surfrig.services.graphs import complete_graph, is_tight, make_graph
from surfrig.services.reducer import base_graph, generate, reduce, replay


class TestReduce:
    """Tests for certificate-producing reduction."""

    def test_base_graph_needs_no_steps(self, k5e):
        """K5-e reduces in zero steps."""
        certificate = reduce(k5e, 1)
        assert certificate.base == BaseGraph.K5_MINUS_EDGE
        assert certificate.steps == []
        assert certificate.base_relabel is None

    def test_k4_union_k4_one_step(self, k4k4):
        """Two K4s on an edge reduce by one 4-cycle contraction."""
        certificate = reduce(k4k4, 1)
        assert len(certificate.steps) == 1
        assert certificate.steps[0].op == MoveKind.VERTEX_TO_4CYCLE
        assert replay(certificate) == k4k4

    def test_relabelled_base(self, k5e):
        """A K5-e missing another edge records where the gap sits."""
        graph = k5e.relabel([3, 1, 2, 0, 4])
        certificate = reduce(graph, 1)
        assert certificate.steps == []
        assert certificate.base_relabel is not None
        assert replay(certificate) == graph

    def test_edge_joined_graph(self, k5e):
        """A bridge between two K5-e copies is undone by an edge join."""
        graph, _ = moves.edge_join(k5e, k5e, 3, 4)
        certificate = reduce(graph, 1)
        ops = [s.op for s in certificate.steps]
        assert MoveKind.EDGE_JOIN in ops
        assert replay(certificate) == graph

    def test_k2_reduces_k4(self, k4):
        """K4 reduces to K1 for k=2."""
        certificate = reduce(k4, 2)
        assert certificate.base == BaseGraph.K1
        assert replay(certificate) == k4

    def test_triangle_for_k3(self):
        """A triangle reduces to K2 by one Henneberg 1 step."""
        triangle = complete_graph(3)
        certificate = reduce(triangle, 3)
        assert [s.op for s in certificate.steps] == [MoveKind.HENNEBERG1]
        assert replay(certificate) == triangle

    def test_not_tight(self):
        """Reduction refuses graphs that are not tight."""
        with pytest.raises(NotTightError):
            reduce(complete_graph(5), 1)
        with pytest.raises(NotTightError):
            reduce(make_graph(5, [[0, 1]]), 1)

    def test_bad_k(self, k5e):
        """Only k in 1..3 has a base graph."""
        with pytest.raises(SparsityParameterError):
            reduce(k5e, 0)

    def test_generated_graphs_round_trip(self):
        """Reductions of generated graphs replay to the same graph."""
        for k, sizes in ((1, range(5, 11)), (2, range(4, 10)), (3, (2, 6))):
            for n in sizes:
                graph, _ = generate(n, k, seed=n)
                assert replay(reduce(graph, k)) == graph


class TestReplay:
    """Tests for certificate replay checks."""

    def test_wrong_base(self):
        """The base must belong to k."""
        certificate = Certificate(k=1, base=BaseGraph.K2)
        with pytest.raises(CertificateError):
            replay(certificate)

    def test_base_relabel_not_permutation(self):
        """The base relabel must permute the base vertices."""
        certificate = Certificate(
            k=1, base=BaseGraph.K5_MINUS_EDGE, base_relabel=[0, 0, 1, 2, 3]
        )
        with pytest.raises(CertificateError):
            replay(certificate)

    def test_step_breaking_tightness(self):
        """A step outside the k=3 move set is caught by the tightness check."""
        certificate = Certificate(
            k=3,
            base=BaseGraph.K2,
            steps=[
                ConstructionStep(
                    op=MoveKind.HENNEBERG1, params={"v1": 0, "v2": 1}
                ),
                ConstructionStep(
                    op=MoveKind.VERTEX_SPLIT,
                    params={"v": 0, "u": 1, "sides": [[2, 1]]},
                ),
            ],
        )
        with pytest.raises(CertificateError):
            replay(certificate)

    def test_json_round_trip(self, k4k4):
        """A certificate survives serialization."""
        certificate = reduce(k4k4, 1)
        restored = Certificate.model_validate_json(
            certificate.model_dump_json()
        )
        assert replay(restored) == k4k4

    def test_base_graphs(self):
        """Base graphs per k."""
        assert base_graph(1).num_edges == 9
        assert base_graph(2).n == 1
        assert base_graph(3) == complete_graph(2)


class TestGenerate:
    """Tests for random generation."""

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_generates_tight_graph(self, k):
        """The generated graph is tight and replays from its certificate."""
        graph, certificate = generate(12, k, seed=7)
        assert graph.n == 12
        assert is_tight(graph, k)
        assert replay(certificate) == graph

    def test_deterministic(self):
        """The same seed gives the same graph and certificate."""
        assert generate(10, 1, seed=3) == generate(10, 1, seed=3)

    def test_k3_uses_henneberg_only(self):
        """The k=3 generator draws from its own move set."""
        _, certificate = generate(15, 3, seed=1)
        assert {s.op for s in certificate.steps} <= set(moves.MOVE_SETS[3])

    @pytest.mark.parametrize("n,k", [(4, 1), (2, 2), (3, 2), (1, 3)])
    def test_unreachable_size(self, n, k):
        """Sizes with no simple tight graph are refused."""
        with pytest.raises(GraphInputError):
            generate(n, k, seed=0)
