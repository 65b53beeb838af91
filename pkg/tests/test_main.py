"""
Tests de l'interface en ligne de commande, des schémas et de l'agrégation du rapport.
"""

import json
from fractions import Fraction

import pytest
from pydantic import ValidationError

from app.core.errors import DeformationError, LinearizationError, NonExactDivisionError, OutsideKernelError
from app.main import COMMANDS, EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from app.models import SUITE_NAMES, RunConfig, RunReport, UsageError, canonical_json, parse_rational
from app.report import SUITES, SuiteEntry, SuiteTask, build_tasks, run_report, run_suite


def _raising(exc: Exception):
    def runner(*_args):
        raise exc

    return runner


# ═══════════════════════════════════════════════════════════════════════════════
# Schémas
# ═══════════════════════════════════════════════════════════════════════════════


class TestModels:
    """Tests de la configuration d'exécution."""

    def test_parse_rational(self):
        assert parse_rational("3") == 3
        assert parse_rational("-2/6") == Fraction(-1, 3)

    @pytest.mark.parametrize("text", ["0.5", "1e3", "a", "1/0", ""])
    def test_parse_rational_rejects(self, text: str):
        with pytest.raises(ValueError):
            parse_rational(text)

    def test_defaults(self):
        config = RunConfig(d=3)
        assert config.a_value == 1
        assert config.t_order == 2
        assert config.selected_suites == list(SUITE_NAMES)

    def test_symbolic(self):
        assert RunConfig(d=3, a="symbolic").a_value is None

    @pytest.mark.parametrize("d", [1, 9])
    def test_d_bounds(self, d: int):
        with pytest.raises(ValidationError):
            RunConfig(d=d)

    def test_unknown_suite(self):
        with pytest.raises(ValidationError):
            RunConfig(d=3, suite="nope")

    def test_canonical_json(self):
        assert canonical_json({"b": 1, "a": "é"}) == '{\n  "a": "é",\n  "b": 1\n}\n'


# ═══════════════════════════════════════════════════════════════════════════════
# Rapport
# ═══════════════════════════════════════════════════════════════════════════════


class TestReport:
    """Tests du registre des suites."""

    def test_registry_order(self):
        assert tuple(SUITES) == SUITE_NAMES

    def test_symbolic_a_runs_at_one(self):
        tasks = build_tasks(RunConfig(d=4, a="symbolic", suite="lie"))
        assert tasks[0].a_value == 1

    def test_explicit_suite_too_small(self):
        with pytest.raises(UsageError):
            build_tasks(RunConfig(d=3, suite="lie"))

    def test_skipped_suite(self):
        out = run_suite(SuiteTask("tau", 2, Fraction(1), 1, 10, False))
        assert out.status == "skipped"
        assert out.skipped == "requires d >= 3"

    def test_run_report(self):
        report = run_report(RunConfig(d=3, suite="z0"))
        assert report.passed
        assert [s.name for s in report.suites] == ["z0"]
        assert report.suites[0].elapsed_ms is None
        assert [c.id for c in report.suites[0].checks] == ["z0_presentation", "poisson_z0"]

    def test_timings(self):
        report = run_report(RunConfig(d=2, suite="psi", timings=True))
        assert report.suites[0].elapsed_ms is not None

    def test_engine_error_fails_suite(self, monkeypatch):
        """Une erreur du moteur donne une suite en échec, pas une exception."""
        monkeypatch.setitem(SUITES, "psi", SuiteEntry("psi", 2, _raising(NonExactDivisionError("x^2 / y"))))
        out = run_suite(SuiteTask("psi", 3, Fraction(1), 1, 10, False))
        assert out.status == "fail"
        assert out.checks[0].id == "psi_aborted"
        assert out.checks[0].witnesses[0].detail == "NonExactDivisionError: x^2 / y"

    def test_internal_fault_fails_report(self, monkeypatch):
        monkeypatch.setitem(SUITES, "psi", SuiteEntry("psi", 2, _raising(ValueError("negative power"))))
        report = run_report(RunConfig(d=3, suite="psi"))
        assert report.status == "fail"

    @pytest.mark.slow
    def test_parallel_matches_sequential(self):
        sequential = run_report(RunConfig(d=3, suite="all", jobs=1))
        parallel = run_report(RunConfig(d=3, suite="all", jobs=3))
        assert canonical_json(sequential) == canonical_json(parallel)


# ═══════════════════════════════════════════════════════════════════════════════
# Ligne de commande
# ═══════════════════════════════════════════════════════════════════════════════


class TestCli:
    """Tests des sous-commandes."""

    def test_psi(self, capsys):
        assert main(["psi", "--i", "2"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data == {"i": 2, "psi": "T^2 - T1*T2", "coefficients": {"0": "1", "1": "-1"}}

    def test_psi_negative(self):
        assert main(["psi", "--i", "-1"]) == EXIT_USAGE

    def test_bracket(self, capsys):
        assert main(["bracket", "--d", "3", "q", "Q"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert "s[0]" in data["bracket"]

    def test_bracket_unknown_generator(self):
        assert main(["bracket", "--d", "3", "q", "z"]) == EXIT_USAGE

    def test_verify(self, capsys):
        assert main(["verify", "--d", "3", "--suite", "z0"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["version"] == "cm-report/1"
        assert data["status"] == "pass"
        assert [s["name"] for s in data["suites"]] == ["z0"]

    def test_verify_deterministic(self, capsys):
        main(["verify", "--d", "2", "--suite", "psi"])
        first = capsys.readouterr().out
        main(["verify", "--d", "2", "--suite", "psi"])
        assert capsys.readouterr().out == first

    def test_verify_all_skips(self, capsys):
        """À d = 2, phi, lie et tau sont signalées comme sautées."""
        assert main(["verify", "--d", "2"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        skipped = {s["name"] for s in data["suites"] if s["status"] == "skipped"}
        assert skipped == {"phi", "lie", "tau"}

    @pytest.mark.parametrize(
        "argv",
        [
            ["verify", "--d", "2", "--suite", "phi"],
            ["verify", "--d", "9"],
            ["verify", "--d", "3", "--a", "0.5"],
            ["verify", "--d", "3", "--t-order", "0"],
            ["lie", "--d", "3"],
            ["fixed", "--d", "3", "--a", "0"],
            [],
        ],
    )
    def test_usage_errors(self, argv: list[str]):
        assert main(argv) == EXIT_USAGE

    def test_verify_engine_error(self, monkeypatch, capsys):
        """Le rapport est émis et le code de sortie vaut 1."""
        monkeypatch.setitem(SUITES, "z0", SuiteEntry("z0", 2, _raising(DeformationError("t^0 part"))))
        assert main(["verify", "--d", "3", "--suite", "z0"]) == EXIT_FAILED
        data = json.loads(capsys.readouterr().out)
        assert data["status"] == "fail"
        assert data["suites"][0]["checks"][0]["id"] == "z0_aborted"

    @pytest.mark.parametrize(
        "exc",
        [
            DeformationError("t^0 part"),
            NonExactDivisionError("remainder"),
            OutsideKernelError("not in kernel"),
            LinearizationError("not linear"),
            ValueError("negative power of a polynomial"),
        ],
    )
    def test_engine_errors_exit_failed(self, monkeypatch, exc: Exception):
        """Les erreurs de calcul, y compris sous-classes de ValueError, donnent 1."""
        monkeypatch.setitem(COMMANDS, "psi", _raising(exc))
        assert main(["psi", "--i", "2"]) == EXIT_FAILED

    def test_usage_error_exit_usage(self, monkeypatch):
        monkeypatch.setitem(COMMANDS, "psi", _raising(UsageError("bad flag")))
        assert main(["psi", "--i", "2"]) == EXIT_USAGE

    def test_bracket_index_out_of_range(self):
        assert main(["bracket", "--d", "3", "q", "a4"]) == EXIT_USAGE

    def test_out_and_report(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        assert main(["verify", "--d", "3", "--suite", "z0", "--out", str(out)]) == EXIT_OK
        RunReport.model_validate(json.loads(out.read_text(encoding="utf-8")))
        capsys.readouterr()
        assert main(["report", str(out)]) == EXIT_OK
        assert "status=pass" in capsys.readouterr().out

    def test_report_failed(self, tmp_path, capsys):
        report = RunReport(d=3, a="1", t_order=2, status="fail", suites=[])
        path = tmp_path / "failed.json"
        path.write_text(canonical_json(report), encoding="utf-8")
        assert main(["report", str(path)]) == EXIT_FAILED

    def test_report_missing_file(self, tmp_path):
        assert main(["report", str(tmp_path / "missing.json")]) == EXIT_USAGE

    def test_fixed(self, capsys):
        assert main(["fixed", "--d", "3"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["discrepancy"] is True

    def test_sl2(self, capsys):
        assert main(["sl2", "--d", "2"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["actions"]["h"]["a0"] == "(-2) a0"

    @pytest.mark.slow
    def test_lie(self, capsys):
        assert main(["lie", "--d", "4"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["classification"] == "sl3"
        assert data["dim"] == 8
