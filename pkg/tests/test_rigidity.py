"""Unit tests for rigidity matrices, ranks and verdicts."""

from fractions import Fraction

import numpy as np
import pytest

from surfrig.exceptions import (
    FrameworkError,
    MatrixError,
    NoSamplerError,
    SurfaceTypeError,
)
from surfrig.models.schemas import (
    Framework,
    RigidityMatrix,
    VerdictBasis,
    VerdictStrength,
)
from surfrig.services.geometry import custom_surface, preset
from surfrig.services.graphs import complete_graph, make_graph
from surfrig.services.rigidity import (
    RigidityService,
    build_matrix,
    check_flex,
    flex_basis,
    maxwell_check,
    rank_exact,
    rank_float,
)


def matrix_of(rows):
    rows = [[Fraction(x) for x in row] for row in rows]
    return RigidityMatrix(
        rows=rows,
        n_cols=len(rows[0]),
        row_labels=[f"row {i}" for i in range(len(rows))],
    )


@pytest.fixture()
def service(settings):
    return RigidityService(settings)


class TestBuildMatrix:
    """Tests for matrix assembly."""

    def test_dimensions(self, service, k5e):
        """K5-e on the torus gives a 14 x 15 matrix."""
        framework = service.sample_framework(k5e, preset("torus"), seed=1)
        matrix = build_matrix(framework)
        assert (matrix.n_rows, matrix.n_cols) == (14, 15)
        assert matrix.row_labels[0] == "edge 0-1"
        assert matrix.row_labels[-1] == "normal 4"

    def test_k2_on_cylinder(self, service):
        """K2 on the cylinder gives a 3 x 6 matrix."""
        framework = service.sample_framework(
            complete_graph(2), preset("cylinder"), seed=2
        )
        assert build_matrix(framework).n_rows == 3

    def test_row_layout(self):
        """Edge rows hold p(u)-p(v) and p(v)-p(u); normal rows hold N."""
        sphere = preset("sphere")
        framework = Framework(
            graph=complete_graph(2),
            surface=sphere,
            placement=[(1, 0, 0), (0, 1, 0)],
        )
        rows = build_matrix(framework).rows
        assert rows[0] == [1, -1, 0, -1, 1, 0]
        assert rows[1] == [2, 0, 0, 0, 0, 0]
        assert rows[2] == [0, 0, 0, 0, 2, 0]

    def test_coincident_points(self):
        """Two vertices at one point are refused."""
        framework = Framework(
            graph=complete_graph(2),
            surface=preset("sphere"),
            placement=[(1, 0, 0), (1, 0, 0)],
        )
        with pytest.raises(FrameworkError):
            build_matrix(framework)

    def test_placement_size(self):
        """Every vertex needs a point."""
        framework = Framework(
            graph=complete_graph(3),
            surface=preset("sphere"),
            placement=[(1, 0, 0)],
        )
        with pytest.raises(FrameworkError):
            build_matrix(framework)


class TestRank:
    """Tests for exact and floating rank."""

    def test_zero_matrix(self):
        """A 3 x 6 zero matrix has rank 0 and nullity 6."""
        rank, basis = rank_exact(matrix_of([[0] * 6] * 3))
        assert rank == 0
        assert len(basis) == 6

    def test_skipped_column(self):
        """Elimination skips columns without a pivot."""
        rank, basis = rank_exact(matrix_of([[0, 1, 2], [0, 2, 4], [0, 0, 1]]))
        assert rank == 2
        assert basis == [[1, 0, 0]]

    def test_nullspace_is_exact(self):
        """Basis vectors annihilate every row."""
        rows = [[1, 2, 3, 4], ["1/2", 1, 0, 1], [3, 6, 3, 8]]
        matrix = matrix_of(rows)
        rank, basis = rank_exact(matrix)
        assert rank == 2
        for vector in basis:
            for row in matrix.rows:
                assert sum(a * b for a, b in zip(row, vector)) == 0

    def test_exact_rejects_floats(self):
        """Floating entries cannot be ranked exactly."""
        matrix = RigidityMatrix(rows=[[0.5]], n_cols=1, row_labels=["r"])
        with pytest.raises(MatrixError):
            rank_exact(matrix)

    def test_float_identity(self):
        """The 3 x 3 identity has rank 3."""
        assert rank_float(np.eye(3).tolist()) == 3

    def test_float_duplicate_row(self):
        """A duplicated row drops the rank."""
        assert rank_float([[1.0, 2.0], [1.0, 2.0]]) == 1

    def test_float_non_finite(self):
        """NaN entries are refused."""
        with pytest.raises(MatrixError):
            rank_float([[float("nan"), 1.0]])

    def test_float_matches_exact(self, service, k5e):
        """The torus matrix of K5-e has rank 14 either way."""
        framework = service.sample_framework(k5e, preset("torus"), seed=4)
        matrix = build_matrix(framework)
        assert rank_exact(matrix)[0] == 14
        assert rank_float(matrix) == 14

    def test_float_agreement_on_many_matrices(self, service, rng):
        """Exact and float ranks agree on sampled surface matrices."""
        names = ["sphere", "torus", "ellipsoid", "spheroid"]
        for i in range(60):
            graph = complete_graph(rng.randint(2, 5))
            surface = preset(names[i % len(names)])
            framework = service.sample_framework(graph, surface, seed=i)
            matrix = build_matrix(framework)
            assert rank_float(matrix) == rank_exact(matrix)[0]


class TestAnalyze:
    """Tests for rigidity verdicts."""

    def test_k4_sphere_dependent(self, service, k4):
        """K4 is dependent on the sphere: rank 9 of 10 rows."""
        report = service.analyze(k4, preset("sphere"))
        assert report.rank == 9
        assert not report.independent
        assert not report.isostatic
        assert report.strength == VerdictStrength.EVIDENCE

    def test_k4_cylinder_isostatic(self, service, k4):
        """K4 is isostatic on the cylinder: rank 10 = 3*4 - 2."""
        report = service.analyze(k4, preset("cylinder"))
        assert report.rank == 10
        assert report.independent and report.isostatic
        assert report.strength == VerdictStrength.CERTIFIED
        assert report.trials == 1

    def test_k5e_cylinder_dependent(self, service, k5e):
        """K5-e fails the (2,2) count, so one trial settles dependence."""
        report = service.analyze(k5e, preset("cylinder"), trials=3)
        assert report.rank <= 13
        assert not report.independent
        assert report.trials == 1
        assert not report.maxwell.sparse

    @pytest.mark.parametrize("name", ["cone", "torus"])
    def test_k5e_isostatic(self, service, k5e, name):
        """K5-e is certified isostatic on the cone and the torus."""
        report = service.analyze(k5e, preset(name))
        assert report.rank == 14
        assert report.isostatic
        assert report.strength == VerdictStrength.CERTIFIED
        assert report.flex_dim_internal == 0

    def test_k3_sphere(self, service):
        """K3 on the sphere has rank 6 and is isostatic."""
        report = service.analyze(complete_graph(3), preset("sphere"))
        assert report.rank == 6
        assert report.isostatic

    def test_small_complete_by_enumeration(self, service):
        """K2 on a type 1 surface is isostatic from the small-graph list."""
        report = service.analyze(complete_graph(2), preset("torus"))
        assert report.isostatic
        assert report.basis == VerdictBasis.ENUMERATION
        assert report.rank == 3

    def test_wrong_type_detected(self, service, k4):
        """A rank above 3|V| - k contradicts the claimed type."""
        with pytest.raises(SurfaceTypeError):
            service.analyze(k4, preset("cylinder"), k=3)

    def test_wrong_type_is_input_error(self, service, k5e):
        """A contradicted type override is a ValueError, not a crash."""
        with pytest.raises(ValueError):
            service.analyze(k5e, preset("torus"), k=3)

    def test_counting_gate_recorded(self, service, k4):
        """K4 on the sphere carries its violating set and one trial."""
        report = service.analyze(k4, preset("sphere"), trials=5)
        assert report.maxwell.k == 3
        assert not report.maxwell.sparse
        assert report.maxwell.witness == [0, 1, 2, 3]
        assert report.trials == 1
        assert not report.isostatic

    def test_counting_gate_passes(self, service, k5e):
        """K5-e passes the (2,1) count on the torus."""
        report = service.analyze(k5e, preset("torus"))
        assert report.maxwell.sparse and report.maxwell.tight
        assert report.maxwell.witness is None

    def test_float_path(self, service, k4):
        """Float ranks are advisory only."""
        report = service.analyze(k4, preset("cylinder"), use_float=True)
        assert report.rank == 10
        assert not report.exact
        assert report.strength == VerdictStrength.EVIDENCE

    def test_report_json(self, service, k4):
        """Reports serialize with string enums."""
        data = service.analyze(k4, preset("sphere"), seed=5).model_dump(
            mode="json"
        )
        assert data["strength"] == "evidence"
        assert data["seed"] == 5

    def test_deterministic(self, service, k5e):
        """The same seed gives the same report."""
        torus = preset("torus")
        assert service.analyze(k5e, torus, seed=8) == service.analyze(
            k5e, torus, seed=8
        )

    def test_empty_graph(self, service):
        """A graph needs at least one vertex."""
        with pytest.raises(FrameworkError):
            service.analyze(make_graph(0, []), preset("sphere"))


class TestAnalyzePlacement:
    """Tests for user-supplied placements."""

    def test_custom_surface_placement(self, service):
        """A custom sphere with a given placement is analyzed exactly."""
        sphere = custom_surface(
            {"x^2": 1, "y^2": 1, "z^2": 1, "1": -1}, declared_type=3
        )
        report = service.analyze_placement(
            complete_graph(2), sphere, [(1, 0, 0), (0, 1, 0)]
        )
        assert report.rank == 3
        assert report.isostatic
        assert report.strength == VerdictStrength.CERTIFIED
        assert report.maxwell.sparse

    def test_float_placement(self, service):
        """Float placements use the floating rank."""
        report = service.analyze_placement(
            complete_graph(2), preset("sphere"), [(0.6, 0.8, 0.0), (0, 0, 1)]
        )
        assert report.rank == 3
        assert not report.exact

    def test_custom_surface_cannot_sample(self, service):
        """Sampling needs a chart."""
        plane = custom_surface({"z": 1}, declared_type=3)
        with pytest.raises(NoSamplerError):
            service.analyze(complete_graph(3), plane)


class TestComputeType:
    """Tests for surface type estimation."""

    @pytest.mark.parametrize(
        "name,k",
        [
            ("sphere", 3),
            ("plane", 3),
            ("cylinder", 2),
            ("cone", 1),
            ("torus", 1),
            ("elliptical_cylinder", 1),
            ("spheroid", 1),
            ("hyperboloid", 1),
            ("ellipsoid", 0),
        ],
    )
    def test_types(self, service, name, k):
        """The estimate matches the declared type."""
        estimate = service.compute_type(preset(name), trials=5, seed=0)
        assert estimate.k == k
        assert set(estimate.nullities) == {4, 5, 6}

    def test_undeclared_type_computed(self, service):
        """Surfaces without a declared type are typed on demand."""
        cylinder = preset("cylinder").model_copy(
            update={"declared_type": None}
        )
        assert service.surface_type(cylinder) == 2


class TestMaxwell:
    """Tests for the counting gate."""

    def test_k5e(self, k5e):
        """K5-e passes at k=1."""
        assert maxwell_check(k5e, 1).tight

    def test_k5(self):
        """K5 fails at k=1 with itself as witness."""
        result = maxwell_check(complete_graph(5), 1)
        assert not result.tight
        assert result.witness == [0, 1, 2, 3, 4]

    def test_k4_union_k4(self, k4k4):
        """Two K4s on an edge fail at k=2."""
        assert not maxwell_check(k4k4, 2).tight


class TestFlexes:
    """Tests for infinitesimal flexes."""

    def test_basis_vectors_are_flexes(self, service, k5e):
        """Every nullspace vector satisfies all equations exactly."""
        framework = service.sample_framework(k5e, preset("cylinder"), seed=3)
        basis = flex_basis(framework)
        assert len(basis) >= 2
        assert all(check_flex(framework, u) for u in basis)

    def test_axial_translation(self, service, k4):
        """Translation along the cylinder axis is a flex; along x is not."""
        framework = service.sample_framework(k4, preset("cylinder"), seed=6)
        assert check_flex(framework, [0, 0, 1] * 4)
        assert not check_flex(framework, [1, 0, 0] * 4)

    def test_flex_length_checked(self, service, k4):
        """A flex needs 3|V| entries."""
        framework = service.sample_framework(k4, preset("cylinder"), seed=6)
        with pytest.raises(FrameworkError):
            check_flex(framework, [0, 0, 1])

    def test_float_framework_has_no_exact_basis(self):
        """Flex bases need rational points."""
        framework = Framework(
            graph=complete_graph(2),
            surface=preset("sphere"),
            placement=[(0.6, 0.8, 0.0), (0.0, 0.0, 1.0)],
        )
        with pytest.raises(MatrixError):
            flex_basis(framework)
