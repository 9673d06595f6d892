"""Tests for the command-line interface."""

import json
from pathlib import Path

import pytest

from wronski.checks import Outcome
from wronski.cli import build_parser, config_from_args, main, selftest_examples


def write(path: Path, document: object) -> Path:
    path.write_text(json.dumps(document))
    return path


class TestConfig:
    """Tests for argument handling."""

    def test_csv_inferred_from_suffix(self) -> None:
        """A .csv output path selects CSV without --format."""
        args = build_parser().parse_args(["matrix-check", "--random", "2", "--out", "r.csv"])
        assert config_from_args(args).fmt == "csv"

    def test_explicit_format_wins(self) -> None:
        """--format overrides the suffix."""
        args = build_parser().parse_args(
            ["matrix-check", "--random", "2", "--out", "r.csv", "--format", "json"]
        )
        assert config_from_args(args).fmt == "json"

    def test_flag_overrides(self) -> None:
        """--seed, --starts and --tol reach the settings."""
        args = build_parser().parse_args(
            ["inverse", "--seed", "7", "--starts", "12", "--tol", "1e-4"]
        )
        settings = config_from_args(args).settings()
        assert settings.solver.seed == 7
        assert settings.solver.starts == 12
        assert settings.tolerances.reality == 1e-4

    def test_bad_number_list(self) -> None:
        """Non-numeric lists are a usage error."""
        with pytest.raises(SystemExit) as info:
            build_parser().parse_args(["bethe-check", "--z", "a,b"])
        assert info.value.code == 2


class TestSingleInputs:
    """Tests for subcommands on one input."""

    def test_wronskian(self, tmp_path: Path) -> None:
        """Wr(x + 1, e^x) = x e^x has the single root 0."""
        space = write(
            tmp_path / "space.json",
            {
                "mode": "exponent",
                "members": [{"exponent": 0, "poly": [1, 1]}, {"exponent": 1, "poly": [1]}],
            },
        )
        out = tmp_path / "w.json"
        assert main(["wronskian", "--space", str(space), "--out", str(out)]) == 0
        report = json.loads(out.read_text())
        assert report["degree"] == 1
        assert report["roots"][0] == pytest.approx([0.0, 0.0], abs=1e-12)

    def test_bethe_gap_two(self, tmp_path: Path) -> None:
        """z = (2, 0) has smallest eigenvalue 1."""
        out = tmp_path / "b.json"
        argv = ["bethe-check", "--N", "2", "--z", "2,0", "--q", "1,2", "--out", str(out)]
        assert main(argv) == 0
        report = json.loads(out.read_text())
        assert report["min_eig"] == pytest.approx(1.0)
        assert report["positive_definite"] is True

    def test_bethe_shape_error(self) -> None:
        """Q must have N entries."""
        assert main(["bethe-check", "--N", "3", "--z", "2,0", "--q", "1,2"]) == 2

    def test_inverse_example(self, tmp_path: Path) -> None:
        """Example 1 at Q = 2, A = 1 matches its closed form."""
        out = tmp_path / "i.json"
        argv = ["inverse", "--example", "1", "--params", "2,1", "--starts", "60", "--out", str(out)]
        assert main(argv) == 0
        report = json.loads(out.read_text())
        assert report["closed_form_matches"] is True
        assert report["reality"]["all_real"] is True

    def test_dual_calibrate(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Calibration reports the default convention."""
        assert main(["dual-check", "--calibrate"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["convention"] == {
            "shift": "plus",
            "ordering": "coefficient_left",
            "y_shift": 1,
        }


class TestInputErrors:
    """Tests for exit status 2."""

    def test_malformed_json(self, tmp_path: Path) -> None:
        """Unparseable input documents are rejected."""
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["wronskian", "--space", str(bad)]) == 2

    def test_invalid_document(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Validation errors name the offending field."""
        bad = write(tmp_path / "bad.json", {"mode": "multiplicative", "members": [{"poly": [1]}]})
        assert main(["wronskian", "--space", str(bad)]) == 2
        assert "needs 'base'" in capsys.readouterr().err

    def test_missing_input(self) -> None:
        """A subcommand without its input exits 2."""
        assert main(["cm-check"]) == 2

    def test_missing_file(self, tmp_path: Path) -> None:
        """Unreadable paths exit 2."""
        assert main(["cm-check", "--pair", str(tmp_path / "absent.json")]) == 2


class TestRandomRuns:
    """Tests for --random sweeps."""

    def test_csv_report(self, tmp_path: Path) -> None:
        """Random matrix checks write a sorted CSV with a header."""
        out = tmp_path / "m.csv"
        assert main(["matrix-check", "--kind", "z", "--random", "3", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("check,index,outcome")
        assert len(lines) == 1 + 6

    def test_same_seed_same_bytes(self, tmp_path: Path) -> None:
        """Two runs with one seed write identical reports."""
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        for out in (first, second):
            argv = ["cm-check", "--random", "3", "--seed", "5", "--out", str(out)]
            assert main(argv) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_family_filter(self, tmp_path: Path) -> None:
        """--family restricts the sweeps."""
        out = tmp_path / "b.json"
        argv = ["bethe-check", "--random", "3", "--family", "bethe-positive", "--out", str(out)]
        assert main(argv) == 0
        assert list(json.loads(out.read_text())["sweeps"]) == ["bethe-positive"]

    def test_zero_count(self) -> None:
        """--random needs a positive count."""
        assert main(["cm-check", "--random", "0"]) == 2


class TestSelftestExamples:
    """Tests for the fixed selftest checks."""

    def test_examples_pass(self) -> None:
        """Gap-two eigenvalue, tangency and sharpness all hold."""
        results = selftest_examples()
        assert [r.check for r in results] == ["gap-two-min-eig", "tangency", "sharpness"]
        assert all(r.outcome is Outcome.PASS for r in results)
