"""Unit tests for the ising-lab command line."""

import json
import math
from unittest.mock import patch

import pytest

from src.cli import EXIT_INPUT, EXIT_OK, EXIT_VIOLATION, build_parser, main
from src.models.results import CheckReport, CheckViolation
from tests.conftest import DOMAINS

SQUARE = str(DOMAINS / "square1_pm.json")


def run_json(capsys, argv):
    assert main(argv) == EXIT_OK
    return json.loads(capsys.readouterr().out)


class TestRecords:
    """Scalar commands emit one JSON RunRecord."""

    def test_lowtemp_z(self, capsys):
        record = run_json(capsys, ["lowtemp", "z", SQUARE])
        assert record["command"] == "lowtemp z"
        assert record["value"] == pytest.approx(18 - 12 * math.sqrt(2))
        assert record["config_count"] == 2
        assert record["inputs"]["domain"] == SQUARE

    def test_seed_override_is_recorded(self, capsys):
        record = run_json(capsys, ["crossing", "g", "--kind", "pmpm", "--lambda", "0.5", "--seed", "11"])
        assert record["config"]["seed"] == 11
        assert record["value"]["G"] == pytest.approx(0.5, abs=1e-12)
        assert record["value"]["G_quad"] == pytest.approx(0.5, abs=1e-8)

    def test_cont_drift(self, capsys):
        record = run_json(capsys, ["cont", "drift", "--a", "0", "1", "--b", "2", "inf"])
        assert record["value"] == pytest.approx(2.75, rel=1e-6)

    def test_crossing_fk_subset_is_one_based(self, capsys):
        record = run_json(capsys, ["crossing", "fk", "--points", "-3", "-1", "1", "3", "--subset", "1", "2"])
        assert 0 < record["value"]["value"] < 1

    def test_crossing_spin(self, capsys):
        record = run_json(capsys, ["crossing", "spin", "--a1", "1", "--a2", "-1", "--b1", "2", "--b2", "-2"])
        assert record["value"]["plus"] + record["value"]["minus"] == pytest.approx(1.0)


class TestTables:
    """Grid and trace commands emit CSV with a config header line."""

    def test_cont_eval_csv(self, capsys):
        assert main(["cont", "eval", "--b", "0", "1", "--xs=-1:1:3", "--ys", "0.5", "--no-h"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("# config: ")
        assert json.loads(lines[0][len("# config: "):])["command"] == "cont eval"
        assert lines[1].split(",")[:2] == ["x", "y"]
        assert len(lines) == 2 + 3

    def test_lowtemp_sample_rows(self, capsys):
        assert main(["lowtemp", "sample", SQUARE, "--count", "3", "--method", "exact"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[1] == "sample,i,j,spin"
        assert len(lines) == 2 + 3


class TestExitCodes:
    def test_invalid_boundary_data(self, capsys):
        assert main(["cont", "drift", "--a", "0", "--b", "2", "1"]) == EXIT_INPUT
        assert "error:" in capsys.readouterr().err

    def test_missing_domain(self, tmp_path, capsys):
        assert main(["lowtemp", "z", str(tmp_path / "missing.json")]) == EXIT_INPUT

    def test_invalid_query(self, capsys):
        assert main(["crossing", "fk", "--points", "0", "1", "2", "--subset", "1"]) == EXIT_INPUT
        assert "invalid input" in capsys.readouterr().err

    def test_mc_needs_sites(self, capsys):
        assert main(["obs", "eval", SQUARE, "--mc-samples", "10"]) == EXIT_INPUT

    def test_failed_identity_suite(self, capsys):
        failing = CheckReport(
            name="H closure", max_defect=1.0, tol=1e-10, n_checked=1,
            violations=[CheckViolation(site="face(0,0)", defect=1.0)],
        )
        with patch("src.cli.verify_identities", return_value=[failing]):
            assert main(["obs", "verify", SQUARE]) == EXIT_VIOLATION
        captured = capsys.readouterr()
        report = json.loads(captured.out)
        assert report["ok"] is False
        assert report["checks"][0]["name"] == "square1_pm: H closure"
        assert "1 identity checks failed" in captured.err

    def test_identity_suite_passes(self, capsys):
        assert main(["obs", "verify", SQUARE]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["ok"] is True


class TestOutput:
    def test_out_directory(self, tmp_path, capsys):
        out = tmp_path / "results"
        assert main(["lowtemp", "z", SQUARE, "--out", str(out)]) == EXIT_OK
        assert capsys.readouterr().out == ""
        record = json.loads((out / "lowtemp_z.json").read_text())
        assert record["config"]["out"] == str(out)

    def test_parser_requires_command(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["lowtemp"])
