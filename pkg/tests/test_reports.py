"""Report model: tagged values, checks, JSON/CSV round trips."""
from __future__ import annotations

import json
from fractions import Fraction

import pytest

from colourcount import (
    Check,
    InputError,
    InstanceInfo,
    Status,
    TaggedValue,
    VerificationReport,
    grid_from_csv,
    grid_to_csv,
    report_from_csv,
    report_from_json,
)


def sample_report() -> VerificationReport:
    checks = (
        Check("final-count", "star", TaggedValue.of_log(35.1),
              TaggedValue.of_log(21.5), ">=", Status.PASS, runtime_s=0.25),
        Check("prefix-7", "star", TaggedValue.of_int(1234),
              TaggedValue.of_rational(Fraction(617, 1)), ">=", Status.MARGINAL),
        Check("density", "thm1", TaggedValue.of_rational(Fraction(5, 2)),
              TaggedValue.of_real(2.0), "<=", Status.FAIL, note="measured d"),
        Check("delta-zero", "thm3", TaggedValue.of_text("unknown"),
              TaggedValue.of_text("n/a"), "=", Status.INFO),
    )
    info = InstanceInfo(source="corpus/a.graph", n=12, m=36, seed=7,
                        profile={"rho": "6", "max_degree": 6})
    return VerificationReport("verify-thm1", info, checks, "1.0.0")


class TestStatus:
    def test_values(self):
        assert Status.PASS.value == "pass"
        assert Status.INFO.value == "informational"

    def test_only_fail_is_failed(self):
        assert Status.FAIL.failed
        assert not Status.PASS.failed
        assert not Status.MARGINAL.failed
        assert not Status.INFO.failed


class TestTaggedValue:
    def test_constructors(self):
        assert TaggedValue.of_int(7) == TaggedValue("int", 7)
        assert TaggedValue.of_log(1.5) == TaggedValue("log", 1.5)
        assert TaggedValue.of_rational(Fraction(2, 6)) == TaggedValue("rational", "1/3")
        assert TaggedValue.of_real(0.25) == TaggedValue("real", 0.25)
        assert TaggedValue.of_text("skipped") == TaggedValue("text", "skipped")

    def test_unknown_kind_rejected(self):
        with pytest.raises(InputError):
            TaggedValue("complex", 1)

    def test_as_fraction(self):
        assert TaggedValue.of_rational(Fraction(22, 7)).as_fraction() == Fraction(22, 7)
        with pytest.raises(InputError):
            TaggedValue.of_int(3).as_fraction()

    def test_render(self):
        assert TaggedValue.of_log(2.0).render() == "exp(2)"
        assert TaggedValue.of_int(9).render() == "9"
        assert TaggedValue.of_rational(Fraction(1, 2)).render() == "1/2"

    def test_json_round_trip(self):
        for tv in (TaggedValue.of_int(10 ** 40), TaggedValue.of_log(-3.25),
                   TaggedValue.of_rational(Fraction(-7, 3)),
                   TaggedValue.of_real(1e-9), TaggedValue.of_text("x")):
            assert TaggedValue.from_jsonable(tv.to_jsonable()) == tv


class TestCheck:
    def test_runtime_excluded_by_default(self):
        c = sample_report().checks[0]
        assert "runtime_s" not in c.to_jsonable()
        assert c.to_jsonable(include_runtime=True)["runtime_s"] == 0.25

    def test_round_trip_with_runtime(self):
        c = sample_report().checks[0]
        assert Check.from_jsonable(c.to_jsonable(include_runtime=True)) == c

    def test_round_trip_without_runtime_drops_it(self):
        from dataclasses import replace

        c = sample_report().checks[0]
        back = Check.from_jsonable(c.to_jsonable())
        assert back.runtime_s is None
        assert back == replace(c, runtime_s=None)


class TestVerificationReport:
    def test_passed_and_exit_code(self):
        rep = sample_report()
        assert not rep.passed
        assert rep.exit_code == 1
        clean = VerificationReport(rep.command, rep.instance,
                                   tuple(c for c in rep.checks
                                         if c.status is not Status.FAIL),
                                   rep.version)
        assert clean.passed and clean.exit_code == 0

    def test_counts(self):
        assert sample_report().counts() == {
            "pass": 1, "fail": 1, "marginal": 1, "informational": 1}

    def test_json_is_byte_stable_and_runtime_free(self):
        rep = sample_report()
        a, b = rep.to_json(), rep.to_json()
        assert a == b
        assert a.endswith("\n")
        assert "runtime_s" not in a
        assert "runtime_s" in rep.to_json(include_runtime=True)

    def test_json_round_trip(self):
        rep = sample_report().with_runtimes_cleared()
        assert report_from_json(rep.to_json()) == rep

    def test_runtime_survives_opt_in_round_trip(self):
        rep = sample_report()
        back = report_from_json(rep.to_json(include_runtime=True))
        assert back.checks[0].runtime_s == 0.25

    def test_csv_round_trip(self):
        rep = sample_report().with_runtimes_cleared()
        assert report_from_csv(rep.to_csv()) == rep

    def test_csv_rejects_foreign_header(self):
        with pytest.raises(InputError):
            report_from_csv("a,b,c\n1,2,3\n")

    def test_csv_rejects_unknown_record(self):
        rep = sample_report()
        bad = rep.to_csv().replace("meta,command", "blob,command", 1)
        with pytest.raises(InputError):
            report_from_csv(bad)

    def test_with_runtimes_cleared(self):
        rep = sample_report().with_runtimes_cleared()
        assert all(c.runtime_s is None for c in rep.checks)


class TestGridCsv:
    def test_round_trip_with_missing_values(self):
        fields = ["delta", "f", "bound", "reason"]
        rows = [
            {"delta": 3, "f": 10, "bound": 12.25, "reason": None},
            {"delta": 300, "f": 3, "bound": None, "reason": "rho_at_most_one"},
        ]
        text = grid_to_csv(fields, rows)
        back = grid_from_csv(text)
        assert back == [
            {"delta": "3", "f": "10", "bound": "12.25", "reason": ""},
            {"delta": "300", "f": "3", "bound": "", "reason": "rho_at_most_one"},
        ]

    def test_header_order_is_preserved(self):
        text = grid_to_csv(["b", "a"], [{"a": 1, "b": 2}])
        assert text.splitlines()[0] == "b,a"
