# tests/test_constants.py
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.constants import (
    classical_ck,
    constants_report,
    corollary_pq_gamma,
    delta_ck,
    dual_feasible,
    dual_gamma,
    feasibility_bound,
    fourier_maximal_constant,
    gamma_ck,
    improvement_margin,
    lebesgue_kappa,
    tau,
)
from src.errors import DomainError, FeasibilityViolated
from src.lattice.index import INF, conjugate

SQRT2 = math.sqrt(2.0)


def test_gamma_for_l1_to_l2():
    assert gamma_ck(1.0, 2.0, 1.0, 1.0, 1.0) == pytest.approx(1.0 + SQRT2, rel=1e-12)
    assert corollary_pq_gamma(1.0, 2.0) == pytest.approx(1.0 + SQRT2, rel=1e-12)


def test_classical_constant():
    assert classical_ck(1.0, 2.0) == pytest.approx(2.0 + SQRT2, rel=1e-12)
    assert classical_ck(1.0, INF) == pytest.approx(2.0)


def test_corollary_at_infinity_is_one():
    assert corollary_pq_gamma(1.0, INF) == pytest.approx(1.0)
    assert corollary_pq_gamma(2.0, INF) == pytest.approx(1.0)


@pytest.mark.parametrize("p, q", [(1.0, 1e4), (5.0, 1e18), (2.0, 1e9)])
def test_corollary_tends_to_one(p, q):
    assert abs(corollary_pq_gamma(p, q) - 1.0) < 1e-3


@pytest.mark.parametrize("p, q", [(1.0, 2.0), (1.5, 3.0), (2.0, 6.0), (1.0, INF), (3.0, INF)])
def test_corollary_is_gamma_with_unit_constants(p, q):
    assert corollary_pq_gamma(p, q) == pytest.approx(gamma_ck(p, q, lebesgue_kappa(q), 1.0, 1.0), rel=1e-12)


@pytest.mark.parametrize("p, q", [(0.25, 0.5), (0.5, 0.8), (0.3, 0.9)])
def test_quasi_banach_branch_matches_general_formula(p, q):
    assert corollary_pq_gamma(p, q) == pytest.approx(gamma_ck(p, q, 2.0 ** (1.0 / q - 1.0), 1.0, 1.0), rel=1e-9)


@given(st.floats(1.0, 20.0), st.floats(1.05, 50.0))
@settings(max_examples=200, deadline=None)
def test_corollary_improves_on_classical(p, factor):
    q = p * factor
    assert corollary_pq_gamma(p, q) < classical_ck(p, q)
    assert improvement_margin(p, q) > 0


def test_improvement_needs_banach_range():
    with pytest.raises(DomainError):
        improvement_margin(0.5, 2.0)


def test_tau_and_feasibility_bound():
    assert tau(1.0, 2.0) == pytest.approx(2.0)
    assert tau(1.0, INF) == pytest.approx(1.0)
    assert feasibility_bound(1.0, INF, 1.0) == pytest.approx(2.0)
    assert feasibility_bound(1.0, 2.0, 1.0) == pytest.approx(SQRT2)


def test_infeasible_family():
    with pytest.raises(FeasibilityViolated):
        gamma_ck(1.0, 2.0, 1.0, 2.0, 2.0)


@pytest.mark.parametrize(
    "args",
    [(2.0, 1.0, 1.0, 1.0, 1.0), (INF, INF, 1.0, 1.0, 1.0), (1.0, 1.0, 1.0, 1.0, 1.0), (1.0, 2.0, 0.5, 1.0, 1.0), (0.0, 2.0, 1.0, 1.0, 1.0)],
)
def test_gamma_domain(args):
    with pytest.raises(DomainError):
        gamma_ck(*args)


def test_gamma_grows_with_the_estimate_constants():
    base = gamma_ck(1.0, 4.0, 1.0, 1.0, 1.0)
    assert gamma_ck(1.0, 4.0, 1.0, 1.05, 1.0) > base
    assert gamma_ck(1.0, 4.0, 1.0, 1.0, 1.05) > base


def test_constants_report_feasible():
    report = constants_report(1.0, 2.0, 1.0)
    assert report.feasible
    assert report.gamma == pytest.approx(1.0 + SQRT2)
    assert report.classical == pytest.approx(2.0 + SQRT2)
    assert report.corollary == pytest.approx(1.0 + SQRT2)
    assert report.delta == pytest.approx(1.0 + SQRT2)
    assert report.tau == pytest.approx(2.0)


def test_constants_report_infeasible():
    report = constants_report(1.0, 2.0, 1.0, 2.0, 2.0)
    assert not report.feasible
    assert report.gamma is None
    assert report.feasibility_bound == pytest.approx(SQRT2)


def test_constants_report_formats_infinity():
    assert constants_report(1.0, INF, 1.0).q == "inf"


def test_delta_quasi_banach_uses_the_renorming_constant():
    assert delta_ck(0.5, 2.0, 1.0, 1.0) == pytest.approx(gamma_ck(0.5, 2.0, 2.0, 1.0, 1.0))
    assert delta_ck(1.0, 2.0, 1.5, 2.0, banach=True) == pytest.approx(corollary_pq_gamma(1.0, 2.0) * 3.0)


def test_lebesgue_kappa():
    assert lebesgue_kappa(0.5) == pytest.approx(2.0)
    assert lebesgue_kappa(2.0) == 1.0
    assert lebesgue_kappa(INF) == 1.0


def test_fourier_maximal_constant():
    assert fourier_maximal_constant(1.0) == pytest.approx(4.0)
    assert fourier_maximal_constant(1.5) == pytest.approx(4.0 * corollary_pq_gamma(1.5, 3.0))
    for p in (0.5, 2.0):
        with pytest.raises(DomainError):
            fourier_maximal_constant(p)


@pytest.mark.parametrize("p, q", [(1.5, 3.0), (1.2, 2.0), (1.0, 2.0), (1.0, 4.0)])
def test_dual_gamma_is_the_conjugate_pair_constant(p, q):
    assert dual_gamma(p, q, 1.0, 1.0) == pytest.approx(corollary_pq_gamma(conjugate(q), conjugate(p)), rel=1e-12)


def test_dual_feasibility():
    assert dual_feasible(1.0, 2.0, 1.0, 1.0)
    assert not dual_feasible(1.0, 2.0, 1.5, 1.0)
    with pytest.raises(DomainError):
        dual_gamma(0.5, 2.0, 1.0, 1.0)
