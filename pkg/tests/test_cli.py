"""Tests for the command-line interface."""

import json

import pytest

from surfrig.main import main
from surfrig.models.schemas import Certificate, SimpleGraph
from surfrig.services.graphs import complete_graph
from surfrig.services.reducer import replay


@pytest.fixture()
def graph_file(write_json):
    """Write a graph to a JSON file and return its path."""

    def _graph_file(graph, name="graph.json"):
        return write_json(name, graph.to_json())

    return _graph_file


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestCheck:
    """Tests for the check command."""

    def test_tight_graph(self, capsys, graph_file, k5e):
        """K5-e at k=1 exits 0 with a tight verdict."""
        code, out, _ = run(capsys, "check", graph_file(k5e), "--k", "1")
        assert code == 0
        assert json.loads(out)["tight"] is True

    def test_not_sparse(self, capsys, graph_file):
        """K5 at k=1 exits 1 with a witness."""
        code, out, _ = run(
            capsys, "check", graph_file(complete_graph(5)), "--k", "1"
        )
        assert code == 1
        assert json.loads(out)["witness"] == [0, 1, 2, 3, 4]

    def test_bruteforce(self, capsys, graph_file, k4k4):
        """The brute-force oracle is selectable."""
        code, _, _ = run(
            capsys, "check", graph_file(k4k4), "--k", "2", "--bruteforce"
        )
        assert code == 1

    def test_missing_file(self, capsys, tmp_path):
        """A missing file is an input error."""
        code, out, err = run(
            capsys, "check", str(tmp_path / "none.json"), "--k", "1"
        )
        assert code == 2
        assert out == ""
        assert err.startswith("error:")

    def test_malformed_graph(self, capsys, write_json):
        """A loop in the input is an input error."""
        path = write_json("loop.json", {"n": 2, "edges": [[1, 1]]})
        assert run(capsys, "check", path, "--k", "1")[0] == 2

    def test_bad_k(self, capsys, graph_file, k5e):
        """k outside 0..3 is an input error."""
        assert run(capsys, "check", graph_file(k5e), "--k", "5")[0] == 2

    def test_usage_error(self, capsys):
        """Unknown subcommands exit 2."""
        assert run(capsys, "frobnicate")[0] == 2


class TestReduce:
    """Tests for the reduce command."""

    def test_k4_union_k4(self, capsys, graph_file, k4k4):
        """K4 union K4 gives a one-step certificate that replays."""
        code, out, _ = run(
            capsys, "reduce", graph_file(k4k4), "--k", "1", "--replay-check"
        )
        assert code == 0
        certificate = Certificate.model_validate_json(out)
        assert len(certificate.steps) == 1
        assert replay(certificate) == k4k4

    def test_base_graph(self, capsys, graph_file, k5e, tmp_path):
        """K5-e gives an empty certificate written to --out."""
        target = tmp_path / "cert.json"
        code, out, _ = run(
            capsys, "reduce", graph_file(k5e), "--out", str(target)
        )
        assert code == 0
        assert out == ""
        assert json.loads(target.read_text())["steps"] == []

    def test_not_tight(self, capsys, graph_file):
        """Non-tight input is a negative verdict."""
        code, _, _ = run(capsys, "reduce", graph_file(complete_graph(5)))
        assert code == 1


class TestGenerate:
    """Tests for the generate command."""

    def test_output(self, capsys):
        """The generated graph has 2n - k edges and a certificate."""
        code, out, _ = run(
            capsys, "generate", "--n", "12", "--k", "1", "--seed", "7"
        )
        assert code == 0
        data = json.loads(out)
        graph = SimpleGraph.model_validate(data["graph"])
        assert graph.num_edges == 23
        certificate = Certificate.model_validate(data["certificate"])
        assert replay(certificate) == graph

    def test_reproducible(self, capsys):
        """The same invocation prints the same bytes."""
        argv = ("generate", "--n", "9", "--k", "2", "--seed", "3")
        assert run(capsys, *argv)[1] == run(capsys, *argv)[1]

    def test_unreachable(self, capsys):
        """No (2,1)-tight graph has one vertex."""
        assert run(capsys, "generate", "--n", "1", "--k", "1")[0] == 2


class TestRigidity:
    """Tests for the rigidity command."""

    def test_k4_cylinder(self, capsys, graph_file, k4):
        """K4 is isostatic on the cylinder."""
        code, out, _ = run(
            capsys, "rigidity", graph_file(k4), "--surface", "cylinder"
        )
        assert code == 0
        report = json.loads(out)
        assert report["rank"] == 10
        assert report["strength"] == "certified"
        assert report["seed"] == 0

    def test_k4_sphere(self, capsys, graph_file, k4):
        """K4 is not isostatic on the sphere; expecting dependence passes."""
        path = graph_file(k4)
        assert run(capsys, "rigidity", path, "--surface", "sphere")[0] == 1
        code, _, _ = run(
            capsys, "rigidity", path, "--surface", "sphere",
            "--expect", "dependent",
        )
        assert code == 0

    def test_placement(self, capsys, graph_file, write_json):
        """A placement file is analyzed instead of samples."""
        placement = write_json("p.json", [[1, 0, 0], ["3/5", "4/5", 0]])
        code, out, _ = run(
            capsys, "rigidity", graph_file(complete_graph(2)),
            "--surface", "sphere", "--placement", placement,
        )
        assert code == 0
        assert json.loads(out)["rank"] == 3

    def test_custom_surface(self, capsys, graph_file, write_json):
        """A custom surface file works with a placement."""
        surface = write_json(
            "cone.json",
            {"terms": {"x^2": 1, "y^2": 1, "z^2": -1}, "type": 1},
        )
        placement = write_json("p.json", [[1, 0, 1], [0, 1, 1]])
        code, out, _ = run(
            capsys, "rigidity", graph_file(complete_graph(2)),
            "--surface", surface, "--placement", placement,
        )
        assert code == 0
        assert json.loads(out)["basis"] == "enumeration"

    def test_custom_surface_needs_placement(
        self, capsys, graph_file, write_json
    ):
        """Custom surfaces cannot be sampled."""
        surface = write_json("plane.json", {"terms": {"z": 1}, "type": 3})
        code, _, err = run(
            capsys, "rigidity", graph_file(complete_graph(2)),
            "--surface", surface,
        )
        assert code == 2
        assert "sampler" in err

    def test_point_off_surface(self, capsys, graph_file, write_json):
        """Placements must lie on the surface."""
        placement = write_json("p.json", [[1, 1, 0], [0, 0, 1]])
        code, _, _ = run(
            capsys, "rigidity", graph_file(complete_graph(2)),
            "--surface", "sphere", "--placement", placement,
        )
        assert code == 2

    def test_float_flag(self, capsys, graph_file, k4):
        """--float switches to floating ranks."""
        code, out, _ = run(
            capsys, "rigidity", graph_file(k4), "--surface", "cylinder",
            "--float", "--expect", "dependent",
        )
        report = json.loads(out)
        assert report["exact"] is False
        assert report["strength"] == "evidence"
        assert code == 1

    def test_contradicted_type(self, capsys, graph_file, k5e):
        """A --k the rank contradicts is an input error, not a verdict."""
        code, out, err = run(
            capsys, "rigidity", graph_file(k5e), "--surface", "torus",
            "--k", "3",
        )
        assert code == 2
        assert out == ""
        assert "type 3" in err

    def test_report_carries_count(self, capsys, graph_file, k4):
        """The JSON report includes the counting gate."""
        _, out, _ = run(
            capsys, "rigidity", graph_file(k4), "--surface", "sphere",
            "--expect", "dependent",
        )
        assert json.loads(out)["maxwell"]["witness"] == [0, 1, 2, 3]

    def test_unknown_surface(self, capsys, graph_file, k4):
        """Unknown presets are input errors."""
        code, _, _ = run(
            capsys, "rigidity", graph_file(k4), "--surface", "helicoid"
        )
        assert code == 2


class TestType:
    """Tests for the type command."""

    def test_torus(self, capsys):
        """The torus has type 1."""
        code, out, _ = run(capsys, "type", "--surface", "torus:R=3,r=1")
        assert code == 0
        assert json.loads(out)["k"] == 1

    def test_ellipsoid(self, capsys):
        """The ellipsoid has type 0."""
        code, out, _ = run(capsys, "type", "--surface", "ellipsoid")
        assert code == 0
        assert json.loads(out)["k"] == 0


class TestVerify:
    """Tests for the verify command."""

    def test_torus_isostatic(self, capsys):
        """Generated (2,1)-tight graphs are isostatic on the torus."""
        code, out, err = run(
            capsys, "verify", "--n", "9", "--k", "1", "--trials", "4",
            "--surface", "torus:R=2,r=1", "--seed", "1",
        )
        assert code == 0
        summary = json.loads(out)
        assert summary["passed"] == 4
        assert [o["index"] for o in summary["outcomes"]] == [0, 1, 2, 3]
        assert "4/4 passed" in err

    def test_sphere_dependent(self, capsys):
        """The same graphs are dependent on the sphere."""
        code, out, _ = run(
            capsys, "verify", "--n", "9", "--k", "1", "--trials", "4",
            "--surface", "sphere", "--expect", "dependent",
        )
        assert code == 0
        assert json.loads(out)["failed"] == 0

    def test_sphere_not_isostatic(self, capsys):
        """Expecting isostatic on the sphere fails every trial."""
        code, out, _ = run(
            capsys, "verify", "--n", "7", "--k", "1", "--trials", "2",
            "--surface", "sphere",
        )
        assert code == 1
        assert json.loads(out)["passed"] == 0

    def test_zero_trials(self, capsys):
        """trials=0 is a usage error."""
        code, _, _ = run(
            capsys, "verify", "--n", "9", "--trials", "0",
            "--surface", "torus",
        )
        assert code == 2

    def test_workers_keep_order(self, capsys):
        """A process pool returns the same summary as a serial run."""
        argv = (
            "verify", "--n", "8", "--k", "1", "--trials", "3",
            "--surface", "cone", "--seed", "2",
        )
        serial = run(capsys, *argv)[1]
        parallel = run(capsys, *argv, "--workers", "2")[1]
        assert serial == parallel
