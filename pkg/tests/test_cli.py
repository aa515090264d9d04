#!/usr/bin/env python3
"""Tests for shintani.cli: manifests, reports and the command-line entry point."""

import json
from fractions import Fraction

import numpy as np
import pandas as pd
import pytest

from shintani.arith.padic import PadicNumber
from shintani.cli import suites
from shintani.cli.main import main
from shintani.cli.manifest import SUITES, load_manifest, parse_manifest
from shintani.cli.reports import Check, Report, print_summary, summary_frame, to_jsonable, write_json
from shintani.cli.suites import run_suite
from shintani.config import worker_count
from shintani.errors import InputFileError
from shintani.utils import parallel_map

TINY_MANIFEST = """
name = "tiny"
seed = 7
suites = ["lemma33", "fg", "identities"]
fg_max_q = 32
curious_max_n = 40
lemma33_max_k = 2

[[instances]]
name = "sqrt5"
field = "qsqrt5"
cn = "sqrt5"
p = 3
characters = [1]
"""


class TestManifest:
    """Tests for run manifests."""

    def test_parse(self):
        """Suites are sorted and defaults filled in."""
        manifest = parse_manifest(TINY_MANIFEST)
        assert manifest.suites == ["fg", "identities", "lemma33"]
        assert manifest.instances[0].levels == 1
        assert manifest.oracle_samples == 40
        assert manifest.gamma_precision == 4

    def test_bundled_flagship(self):
        """The bundled manifest names all suites and three instances."""
        manifest = load_manifest("flagship")
        assert manifest.suites == sorted(SUITES)
        assert [i.name for i in manifest.instances] == ["qsqrt5-sqrt5", "qsqrt5-p11", "qsqrt2-p7"]
        assert all(i.levels >= 2 for i in manifest.instances)
        assert manifest.gamma_precision == 4

    def test_select(self):
        """select narrows the suites and overrides the FG bound."""
        manifest = parse_manifest(TINY_MANIFEST).select(["fg"], fg_max_q=16)
        assert manifest.suites == ["fg"]
        assert manifest.fg_max_q == 16
        with pytest.raises(ValueError):
            manifest.select(["nonsense"])

    @pytest.mark.parametrize(
        "text",
        [
            'name = "x"\nsuites = ["nonsense"]\n',
            'name = "x"\nunknown = 1\n',
            'name = "x"\n[[instances]]\nname = "a"\nfield = "qsqrt5"\ncn = "sqrt5"\np = 2\n',
            'name = "x\n',
            "seed = 1\n",
            'name = "x"\ngamma_precision = 0\n',
        ],
    )
    def test_invalid(self, text):
        """Schema and syntax errors are input errors."""
        with pytest.raises(InputFileError):
            parse_manifest(text)

    def test_missing(self):
        """Unknown manifest names are input errors."""
        with pytest.raises(InputFileError):
            load_manifest("no_such_manifest")


class TestReports:
    """Tests for checks, reports and summaries."""

    def make_report(self) -> Report:
        return Report(
            manifest="m",
            seed=0,
            suites=["a", "b"],
            checks=[Check.make("a", "x", True), Check.make("a", "y", False), Check.make("b", "z", True)],
        )

    def test_to_jsonable(self):
        """Fractions become strings and p-adic numbers digit records."""
        assert to_jsonable({"v": Fraction(1, 3), 2: [Fraction(2)]}) == {"v": "1/3", "2": ["2"]}
        assert to_jsonable(PadicNumber.from_rational(3, 5, 2)) == PadicNumber.from_rational(3, 5, 2).to_json()

    def test_failure_check(self):
        """Exceptions are recorded with their type."""
        check = Check.failure("s", "n", InputFileError("boom"))
        assert not check.passed
        assert check.detail.startswith("InputFileError")

    def test_summary_frame(self):
        """Counts per suite."""
        report = self.make_report()
        frame = summary_frame(report)
        assert list(frame["suite"]) == ["a", "b"]
        assert list(frame["checks"]) == [2, 1]
        assert list(frame["failed"]) == [1, 0]
        assert not report.passed
        assert [c.name for c in report.failed] == ["y"]

    def test_empty_summary(self):
        """A report without checks has an empty frame."""
        report = Report(manifest="m", seed=0, suites=[], checks=[])
        assert summary_frame(report).empty
        assert report.passed

    def test_csv_and_json(self, tmp_path):
        """Both files are written; the JSON keys are sorted."""
        report = self.make_report()
        print_summary(report, tmp_path / "summary.csv")
        assert pd.read_csv(tmp_path / "summary.csv")["checks"].sum() == 3
        out = write_json(report.to_json(), tmp_path / "report.json")
        data = json.loads(out.read_text())
        assert list(data) == sorted(data)
        assert "generated_at" not in report.payload(include_timestamp=False)

    def test_runs_are_reproducible(self):
        """Two runs of the same manifest agree apart from the timestamp."""
        manifest = parse_manifest(TINY_MANIFEST).select(["lemma33", "fg"])
        first = run_suite(manifest)
        second = run_suite(manifest)
        assert first.to_json(include_timestamp=False) == second.to_json(include_timestamp=False)
        assert first.passed

    def test_lvalues_suite_checks_the_distance_bound(self):
        """Two levels on the flagship: the convergence check sees v_3(S_n - S_(n-1)) >= n - 2."""
        manifest = parse_manifest(TINY_MANIFEST.replace("characters = [1]", "characters = [1]\nlevels = 2\nprecision = 6"))
        report = run_suite(manifest.select(["lvalues"]))
        convergence = next(c for c in report.checks if c.name == "sqrt5 chi1 s=0")
        assert convergence.passed
        series = convergence.values["series"]
        assert [entry["level"] for entry in series] == [0, 1, 2]
        assert all(entry["distance_to_previous"] >= entry["level"] - 2 for entry in series[1:])

    def test_zero_sum_is_evaluated_once(self, monkeypatch):
        """The identities suite computes the zero-sum identity once per instance."""
        calls = []
        original = suites.zero_sum_identity

        def counting(dec, cn):
            calls.append(cn.name)
            return original(dec, cn)

        monkeypatch.setattr(suites, "zero_sum_identity", counting)
        checks = suites.suite_identities(parse_manifest(TINY_MANIFEST), np.random.default_rng(0))
        zero_sum = next(c for c in checks if c.name == "sqrt5 zero_sum")
        assert zero_sum.passed
        assert calls == ["sqrt5"]


class TestUtils:
    """Tests for the worker pool helpers."""

    def test_serial_by_default(self, monkeypatch):
        """Without SHINTANI_WORKERS the map runs in-process and keeps order."""
        monkeypatch.delenv("SHINTANI_WORKERS", raising=False)
        assert worker_count() == 1
        assert parallel_map(abs, [-3, 2, -1]) == [3, 2, 1]

    def test_bad_worker_count(self, monkeypatch):
        """Unparseable values fall back to serial."""
        monkeypatch.setenv("SHINTANI_WORKERS", "many")
        assert worker_count() == 1


class TestMain:
    """Tests for the shintani command."""

    def test_field(self, tmp_path):
        """The field summary can be written as JSON."""
        out = tmp_path / "field.json"
        assert main(["field", "qsqrt5", "--cn", "sqrt5", "--json", str(out)]) == 0
        data = json.loads(out.read_text())
        assert data["degree"] == 2
        assert len(data["characters"]) == 2

    def test_missing_field(self):
        """Input errors exit with status 2."""
        assert main(["field", "no_such_field"]) == 2

    def test_period_with_oracle(self):
        """The closed form and the oracle agree on a level-one cylinder."""
        assert main(["period", "qsqrt5", "--cn", "sqrt5", "--p", "3", "--n", "1", "--l", "1,2", "--oracle"]) == 0
        assert main(["period", "qsqrt5", "--cn", "sqrt5", "--kind", "dirichlet", "--p", "3", "--n", "1", "--oracle"]) == 0

    def test_lvalue(self, tmp_path):
        """The Dirichlet series on the flagship reaches S_1 = 2258."""
        out = tmp_path / "lvalue.json"
        args = ["lvalue", "qsqrt5", "--cn", "sqrt5", "--p", "3", "--char", "1", "--level", "1", "--json", str(out)]
        assert main(args) == 0
        data = json.loads(out.read_text())
        assert data["instance"]["q"] == 81
        assert [entry["level"] for entry in data["series"]] == [0, 1]
        assert data["series"][1]["distance_to_previous"] == 0

    def test_lvalue_two_levels(self, tmp_path):
        """Distances to the previous level stay above level - 2."""
        out = tmp_path / "lvalue.json"
        args = ["lvalue", "qsqrt5", "--cn", "sqrt5", "--p", "3", "--char", "1", "--level", "2", "--json", str(out)]
        assert main(args) == 0
        series = json.loads(out.read_text())["series"]
        assert [entry["level"] for entry in series] == [0, 1, 2]
        assert all(entry["distance_to_previous"] >= entry["level"] - 2 for entry in series[1:])

    def test_gamma(self):
        """Gamma at a point with denominator 5."""
        assert main(["gamma", "qsqrt5", "--p", "3", "--y", "1/5,2/5", "--precision", "2"]) == 0

    def test_derivative_gamma_precision(self):
        """The derivative caps Gamma_V digits independently of the sum precision."""
        args = ["derivative", "qsqrt5", "--cn", "sqrt5", "--p", "3", "--char", "1", "--precision", "6"]
        assert main(args + ["--gamma-precision", "2"]) == 0
        assert main(args + ["--gamma-precision", "0"]) == 2

    def test_parameter_error(self):
        """p dividing N is reported, not raised."""
        assert main(["lvalue", "qsqrt5", "--cn", "sqrt5", "--p", "5"]) == 2

    @pytest.mark.parametrize("which", ["curious", "zero-sum", "lemma33"])
    def test_identities(self, which):
        """The small identity checks pass."""
        assert main(["identity", which, "--max-n", "60", "--max-k", "2"]) == 0

    def test_lemma33_residues(self):
        """Explicit residues are checked; a residue divisible by 3 is a parameter error."""
        assert main(["identity", "lemma33", "--residues", "1,2"]) == 0
        assert main(["identity", "lemma33", "--residues", "2,4"]) == 0
        assert main(["identity", "lemma33", "--residues", "1,3"]) == 2

    def test_fg_identity(self):
        """A small FG grid passes."""
        assert main(["identity", "fg", "--max-q", "32"]) == 0

    def test_verify(self, tmp_path):
        """A tiny manifest verifies and writes both outputs."""
        manifest = tmp_path / "tiny.toml"
        manifest.write_text(TINY_MANIFEST)
        report = tmp_path / "report.json"
        summary = tmp_path / "summary.csv"
        assert main(["verify", str(manifest), "--json", str(report), "--csv", str(summary)]) == 0
        data = json.loads(report.read_text())
        assert data["manifest"] == "tiny"
        assert all(check["passed"] for check in data["checks"])
        assert set(pd.read_csv(summary)["suite"]) == {"fg", "identities", "lemma33"}
