# tests/test_suite.py
from dataclasses import replace

import pytest

from src import suite
from src.models import CriterionResult, SuiteReport
from src.reports import generate_suite_html

TINY = replace(
    suite.QUICK,
    grid_points=20,
    renorm_samples=5,
    renorm_max_support=4,
    ck_matrices=1,
    ck_filtrations=1,
    ck_trials=30,
    triangular_parts=1,
    triangular_random=30,
    identity_samples=40,
    fourier_signals=20,
    layer_cake_samples=30,
    lambda_samples=4,
    dual_seeds=1,
    iterations=20,
)


@pytest.mark.parametrize(
    "criterion",
    [
        suite.check_constants,
        suite.check_renormings,
        suite.check_ck_harness,
        suite.check_triangular,
        suite.check_maximal_identities,
        suite.check_fourier,
        suite.check_dual_harness,
    ],
)
def test_criterion_passes_on_small_samples(small_cfg, criterion):
    result = criterion(small_cfg, TINY)
    assert isinstance(result, CriterionResult)
    assert result.passed, result.details


def test_constants_details(small_cfg):
    details = suite.check_constants(small_cfg, TINY).details
    assert details["grid_points"] == 20
    assert details["strict_improvements"] == 20
    assert details["gamma_relative_error"] <= 1e-12
    assert 0 <= details["limit_gap"] <= 1e-3


def test_lorentz_details(small_cfg):
    details = suite.check_lorentz(small_cfg, TINY).details
    assert details["layer_cake_max_error"] <= 1e-12
    assert details["lorentz_weight_convex"] is True
    assert details["sqrt_weight_violation"] is not None
    assert details["max_searched_lower"] <= 1.0 + 1e-6


def test_criteria_are_seeded(small_cfg):
    first = suite.check_maximal_identities(small_cfg, TINY)
    second = suite.check_maximal_identities(small_cfg, TINY)
    assert first == second


def _stub(name, passed):
    def criterion(cfg, sizes):
        return CriterionResult(name=name, passed=passed, details={"seed": cfg.seed, "iterations": cfg.iterations})

    return criterion


def test_run_suite_collects_every_criterion(small_cfg, monkeypatch):
    monkeypatch.setattr(suite, "CRITERIA", (_stub("a", True), _stub("b", True)))
    report = suite.run_suite(small_cfg.with_seed(5), quick=True)
    assert report.passed
    assert report.seed == 5 and report.quick
    assert [c.name for c in report.criteria] == ["a", "b"]
    assert report.criteria[0].details["iterations"] == min(small_cfg.iterations, suite.QUICK.iterations)


def test_run_suite_fails_when_any_criterion_fails(small_cfg, monkeypatch):
    monkeypatch.setattr(suite, "CRITERIA", (_stub("a", True), _stub("b", False)))
    assert not suite.run_suite(small_cfg).passed


def test_suite_html(tmp_path):
    report = SuiteReport(
        seed=3,
        quick=True,
        criteria=[CriterionResult(name="constant formulas", passed=True, details={"x": 1.0}), CriterionResult(name="other", passed=False)],
        passed=False,
    )
    path = generate_suite_html(report, str(tmp_path / "suite.html"))
    html = (tmp_path / "suite.html").read_text(encoding="utf-8")
    assert path.endswith("suite.html")
    assert "constant formulas" in html
    assert "seed 3" in html
    assert "failed" in html
