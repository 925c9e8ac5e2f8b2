"""End-to-end tests of the command-line interface via main(argv)."""

from __future__ import annotations

import csv
import json

import pytest

from graphjastrow import graphs
from graphjastrow.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def run_json(capsys, *argv):
    rc, out, err = run(capsys, *argv)
    return rc, json.loads(out), err


class TestGraphCommand:
    def test_wheel_report(self, capsys):
        rc, rep, _ = run_json(capsys, "graph", "--family", "wheel", "--n", "7")
        assert rc == 0
        assert rep["n"] == 7
        assert rep["edge_count"] == 12
        assert rep["connected"] is True
        assert rep["simple"] is True
        assert sorted(rep["degree_sequence"]) == [3, 3, 3, 3, 3, 3, 6]
        assert len(rep["edges"]) == 12

    def test_product_expression(self, capsys):
        rc, rep, _ = run_json(
            capsys, "graph", "--product", "cartesian(path(7),path(2))"
        )
        assert rc == 0
        assert (rep["n"], rep["edge_count"]) == (14, 19)

    def test_single_vertex_path(self, capsys):
        rc, rep, _ = run_json(capsys, "graph", "--family", "path", "--n", "1")
        assert rc == 0
        assert (rep["n"], rep["edge_count"], rep["connected"]) == (1, 0, True)

    def test_disconnected_warning(self, capsys):
        rc, rep, err = run_json(
            capsys, "graph", "--product", "disjoint_union(path(2),path(2))"
        )
        assert rc == 0
        assert rep["connected"] is False
        assert "disconnected" in err

    def test_dot_and_edge_list_outputs(self, capsys, tmp_path):
        dot = tmp_path / "g.dot"
        edges = tmp_path / "g.edges"
        rc, rep, _ = run_json(
            capsys,
            "graph", "--family", "path", "--n", "3",
            "--dot", str(dot), "--edges-out", str(edges),
        )
        assert rc == 0
        assert dot.read_text(encoding="utf-8") == graphs.to_dot(graphs.path(3))
        back = graphs.from_edge_list(edges.read_text(encoding="utf-8"))
        assert back == graphs.path(3)

    def test_json_file_instead_of_stdout(self, capsys, tmp_path):
        out = tmp_path / "report.json"
        rc, stdout, _ = run(
            capsys, "graph", "--family", "cycle", "--n", "5", "--json", str(out)
        )
        assert rc == 0
        assert stdout == ""
        rep = json.loads(out.read_text(encoding="utf-8"))
        assert rep["edge_count"] == 5

    def test_exactly_one_source_required(self, capsys):
        rc, _, err = run(
            capsys,
            "graph", "--family", "path", "--n", "3",
            "--product", "complete(3)",
        )
        assert rc == 2
        assert "error:" in err

    def test_unknown_family(self, capsys):
        rc, _, err = run(capsys, "graph", "--family", "pentagram", "--n", "5")
        assert rc == 2
        assert "error:" in err

    def test_family_requires_n(self, capsys):
        rc, _, err = run(capsys, "graph", "--family", "cycle")
        assert rc == 2
        assert "needs n" in err


class TestModelCommand:
    def test_complete_exponential_structure(self, capsys):
        rc, rep, _ = run_json(
            capsys,
            "model", "--family", "complete", "--n", "3",
            "--pair", "exponential", "--g", "1.0",
        )
        assert rc == 0
        consts = rep["closed_form_constants"]
        assert consts["v2_constant"] == 3.0
        assert consts["v3_constant"] == 1.0
        assert consts["e0"] == -4.0
        assert rep["wedge_count"] == 3
        assert len(rep["delta_terms"]) == 3
        assert all(d["coefficient"] == 2.0 for d in rep["delta_terms"])

    def test_evaluate_at_coordinates(self, capsys):
        rc, rep, _ = run_json(
            capsys,
            "model", "--family", "complete", "--n", "3",
            "--pair", "power", "--g", "2.0", "--at", "0,1,3",
        )
        assert rc == 0
        at = rep["at"]
        assert at["v2_smooth"] == pytest.approx(49.0 / 18.0, rel=1e-12)
        total = at["v2_smooth"] + at["v3"] + at["v1"] + at["v2ll"]
        assert at["total_smooth"] == pytest.approx(total, rel=1e-12)

    def test_weighted_edge_list(self, capsys, tmp_path):
        import numpy as np

        w = np.array([[0.0, 2.0, 0.0], [2.0, 0.0, 0.5], [0.0, 0.5, 0.0]])
        listing = tmp_path / "weighted.edges"
        listing.write_text(graphs.to_edge_list(graphs.Graph(w)), encoding="utf-8")
        rc, rep, _ = run_json(
            capsys,
            "model", "--edge-list", str(listing),
            "--pair", "exponential", "--g", "0.5",
        )
        assert rc == 0
        assert rep["weighted"] is True
        assert rep["closed_form_constants"] is None
        bonds = {tuple(b["edge"]): b for b in rep["weighted_bonds"]}
        assert bonds[(0, 1)]["p"] == 2.0
        assert bonds[(0, 1)]["w_squared_coefficient"] == 2.0
        assert bonds[(1, 2)]["w_squared_coefficient"] == pytest.approx(-0.25)

    def test_custom_kinked_pair_unknown_delta(self, capsys):
        rc, rep, _ = run_json(
            capsys,
            "model", "--family", "complete", "--n", "2",
            "--pair-expr", "exp(g*abs(x))", "--param", "g=1.0",
        )
        assert rc == 0
        assert rep["closed_form_constants"] is None
        assert rep["delta_terms"][0]["coefficient"] is None

    def test_flag_overrides_config_file(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(
            json.dumps({
                "graph": {"family": "complete", "n": 3},
                "pair": {"kind": "exponential", "g": 0.5},
            }),
            encoding="utf-8",
        )
        rc, rep, _ = run_json(capsys, "model", "--config", str(cfg))
        assert rc == 0
        assert rep["config"]["pair"]["g"] == 0.5
        assert rep["closed_form_constants"]["e0"] == -1.0
        rc, rep, _ = run_json(capsys, "model", "--config", str(cfg), "--g", "1.0")
        assert rc == 0
        assert rep["config"]["pair"]["g"] == 1.0
        assert rep["closed_form_constants"]["e0"] == -4.0

    def test_pair_required(self, capsys):
        rc, _, err = run(capsys, "model", "--family", "complete", "--n", "3")
        assert rc == 2
        assert "pair" in err


class TestVerifyCommand:
    ARGS = (
        "verify", "--family", "complete", "--n", "3",
        "--pair", "exponential", "--g", "1.0", "--samples", "15",
    )

    def test_seed_required(self, capsys):
        rc, _, err = run(capsys, *self.ARGS)
        assert rc == 2
        assert "seed" in err

    def test_passing_run(self, capsys):
        rc, out, err = run(capsys, *self.ARGS, "--seed", "7")
        assert rc == 0
        rep = json.loads(out)
        assert rep["passed"] is True
        assert rep["e0_expected"] == -4.0
        assert rep["empirical_e0_mean"] == pytest.approx(-4.0, rel=1e-12)
        assert len(rep["samples"]) == 15
        assert "verify: PASS" in err

    def test_byte_identical_reruns(self, capsys):
        _, out1, _ = run(capsys, *self.ARGS, "--seed", "7")
        _, out2, _ = run(capsys, *self.ARGS, "--seed", "7")
        assert out1 == out2

    def test_wrong_eigenvalue_exits_nonzero(self, capsys):
        rc, out, err = run(capsys, *self.ARGS, "--seed", "7", "--e0", "-3.5")
        assert rc == 1
        assert json.loads(out)["passed"] is False
        assert "verify: FAIL" in err

    def test_csv_rows(self, capsys, tmp_path):
        path = tmp_path / "residuals.csv"
        rc, out, _ = run(capsys, *self.ARGS, "--seed", "7", "--csv", str(path))
        assert rc == 0
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["seed", "x0", "x1", "x2", "residual", "h"]
        assert len(rows) == 16
        assert all(row[0] == "7" for row in rows[1:])
        rep = json.loads(out)
        assert float(rows[1][4]) == rep["samples"][0]["relative_residual"]

    def test_json_file_output(self, capsys, tmp_path):
        out_path = tmp_path / "verify.json"
        rc, stdout, _ = run(
            capsys, *self.ARGS, "--seed", "7", "--json", str(out_path)
        )
        assert rc == 0
        assert stdout == ""
        assert json.loads(out_path.read_text(encoding="utf-8"))["passed"] is True


class TestSpectrumCommand:
    def test_single_particle_trap(self, capsys):
        rc, rep, err = run_json(
            capsys,
            "spectrum", "--family", "path", "--n", "1",
            "--pair", "gaussian", "--g", "-0.2", "--omega", "1.0",
            "--points", "31", "--box", "4.5",
        )
        assert rc == 0
        assert rep["passed"] is True
        assert rep["grid_nodes"] == 31
        assert abs(rep["lowest_eigenvalue"]) <= 5e-3
        assert "spectrum: PASS" in err

    def test_two_particle_smooth_pair(self, capsys):
        rc, rep, _ = run_json(
            capsys,
            "spectrum", "--family", "complete", "--n", "2",
            "--pair", "gaussian", "--g", "-0.2", "--omega", "1.0",
            "--points", "31", "--box", "4.5", "--lambda-tol", "2e-2",
        )
        assert rc == 0
        assert rep["grid_nodes"] == 961
        assert rep["capped_nodes"] == 0
        assert rep["ground_state_overlap"] >= 0.999
        assert rep["psd_probe_min"] >= -1e-3

    def test_tight_tolerance_fails(self, capsys):
        rc, out, err = run(
            capsys,
            "spectrum", "--family", "complete", "--n", "2",
            "--pair", "gaussian", "--g", "-0.2", "--omega", "1.0",
            "--points", "21", "--box", "4.5", "--lambda-tol", "1e-9",
        )
        assert rc == 1
        assert json.loads(out)["passed"] is False
        assert "spectrum: FAIL" in err

    def test_kinked_pair_rejected(self, capsys):
        rc, _, err = run(
            capsys,
            "spectrum", "--family", "complete", "--n", "2",
            "--pair", "exponential", "--g", "1.0", "--omega", "1.0",
            "--points", "16",
        )
        assert rc == 2
        assert "error:" in err

    def test_axis_budget_rejected(self, capsys):
        rc, _, err = run(
            capsys,
            "spectrum", "--family", "complete", "--n", "4",
            "--pair", "gaussian", "--g", "-0.2", "--omega", "1.0",
            "--points", "8",
        )
        assert rc == 2
        assert "budget" in err


class TestTopLevel:
    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0

    def test_subcommand_required(self, capsys):
        with pytest.raises(SystemExit):
            main([])
