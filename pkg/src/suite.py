# src/suite.py
"""The acceptance battery behind the ``suite`` command.

Every criterion draws from its own SeedSequence([seed, number]) and returns a
CriterionResult; ``quick`` shrinks the sample counts, never the tolerances.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from time import perf_counter
from typing import Callable

import numpy as np

from src.constants import classical_ck, corollary_pq_gamma, gamma_ck, improvement_margin
from src.estimates.closed_form import estimate_bound, two_term_closed_form
from src.estimates.conditions import convexity_check_w
from src.estimates.duality import duality_check
from src.estimates.estimate import searched_estimate_const
from src.estimates.renorm import renorm_lower_p, renorm_upper_q
from src.fourier import dft_operator, mpz_check, prefix_chain
from src.lattice.duality import exact_dual
from src.lattice.index import INF, conjugate, lp_combine
from src.lattice.norms import Amalgam, ClassicalLorentz, LorentzLambda, QuasiNorm, WeightedLp, layer_cake_lambda
from src.lattice.spaces import AtomicSpace, ComplexVector, LatticeVector
from src.lattice.weights import WeightFunction
from src.models import CriterionResult, SearchConfig, SuiteReport
from src.observability import get_tracer
from src.operators.filtration import random_filtration, subchain
from src.operators.harness import ck_verify, dual_maximal_verify, triangular_exhaustive, triangular_verify
from src.operators.linear import LinearOp, maximal_apply, selector_sets, triangular_apply

RELATIVE_SLACK = 1e-9
LEBESGUE_PAIRS = ((1.0, 2.0), (1.0, INF), (2.0, INF))


@dataclass(frozen=True)
class SuiteSizes:
    grid_points: int = 200
    amalgam_triples: int = 6
    duality_atoms: int = 4
    renorm_samples: int = 100
    renorm_max_support: int = 8
    ck_matrices: int = 50
    ck_filtrations: int = 10
    ck_trials: int = 200
    triangular_parts: int = 3
    triangular_random: int = 1000
    identity_samples: int = 1000
    fourier_signals: int = 1000
    fourier_sizes: tuple[int, ...] = (8, 64)
    layer_cake_samples: int = 1000
    lambda_samples: int = 50
    dual_seeds: int = 20
    iterations: int = 200


FULL = SuiteSizes()
QUICK = SuiteSizes(
    grid_points=40,
    amalgam_triples=2,
    duality_atoms=3,
    renorm_samples=10,
    renorm_max_support=5,
    ck_matrices=3,
    ck_filtrations=2,
    ck_trials=40,
    triangular_parts=2,
    triangular_random=100,
    identity_samples=100,
    fourier_signals=50,
    fourier_sizes=(8,),
    layer_cake_samples=100,
    lambda_samples=5,
    dual_seeds=3,
    iterations=40,
)

AMALGAM_TRIPLES = ((2.0, 1.0, 2.0), (1.0, 2.0, 3.0), (1.5, 1.0, INF), (3.0, 2.0, 1.0), (1.0, 3.0, 1.5), (2.0, 4.0, 3.0))


def _rng(seed: int, number: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, number]))


def _relative(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _lebesgue_pair(n: int, p: float, q: float) -> tuple[QuasiNorm, QuasiNorm, AtomicSpace]:
    space = AtomicSpace.unit(n)
    return WeightedLp(space, p), WeightedLp(space, q), space


def check_constants(cfg: SearchConfig, sizes: SuiteSizes) -> CriterionResult:
    """Closed-form anchors and the strict improvement over the classical constant."""
    gamma_error = _relative(gamma_ck(1.0, 2.0, 1.0, 1.0, 1.0), 1.0 + math.sqrt(2.0))
    classical_error = _relative(classical_ck(1.0, 2.0), 1.0 / (1.0 - 2.0**-0.5))
    per_p = max(1, sizes.grid_points // 10)
    grid = [
        (p, p + (100.0 - p) * k / 10.0)
        for p in np.linspace(1.0, 99.0, per_p)
        for k in range(1, 11)
    ]
    strict = [corollary_pq_gamma(p, q) < classical_ck(p, q) for p, q in grid]
    margins = [improvement_margin(p, q) for p, q in grid]
    limit_gap = corollary_pq_gamma(1.0, 1e4) - 1.0
    passed = (
        gamma_error <= 1e-12
        and classical_error <= 1e-12
        and all(strict)
        and min(margins) > 0
        and 0 <= limit_gap <= 1e-3
    )
    return CriterionResult(
        name="constant formulas",
        passed=passed,
        details={
            "gamma_relative_error": gamma_error,
            "classical_relative_error": classical_error,
            "grid_points": len(grid),
            "strict_improvements": int(sum(strict)),
            "min_improvement_margin": min(margins),
            "limit_gap": limit_gap,
        },
    )


def check_amalgam_closed_forms(cfg: SearchConfig, sizes: SuiteSizes) -> CriterionResult:
    """Searched two-term constants on 2 blocks x 3 atoms against the closed forms."""
    space = AtomicSpace.unit(6)
    rows = []
    for exponent, r, s in AMALGAM_TRIPLES[: sizes.amalgam_triples]:
        norm = Amalgam.equal_blocks(space, r, s, 2)
        for side in ("lower", "upper"):
            closed = two_term_closed_form(norm, exponent, side)
            searched = searched_estimate_const(norm, exponent, 2, cfg, side).value
            rows.append(
                {
                    "triple": [exponent, r, s],
                    "side": side,
                    "closed_form": closed,
                    "searched": searched,
                    "ok": closed is not None
                    and searched >= 0.99 * closed
                    and searched <= closed * (1.0 + RELATIVE_SLACK),
                }
            )
    return CriterionResult(name="amalgam two-term closed forms", passed=all(r["ok"] for r in rows), details={"cases": rows})


def check_duality(cfg: SearchConfig, sizes: SuiteSizes) -> CriterionResult:
    """ℓ_(p),2(E) against u^(p'),2(E'), closed form and searched on both sides."""
    rng = _rng(cfg.seed, 3)
    rows = []
    for p0 in (1.0, 2.0, 3.0):
        space = AtomicSpace(tuple(rng.uniform(0.5, 2.0, size=sizes.duality_atoms)))
        norm = WeightedLp(space, p0)
        dual = exact_dual(norm)
        for p in (1.0, 1.5, 2.0):
            report = duality_check(norm, p, 2, cfg)
            lower = searched_estimate_const(norm, p, 2, cfg, "lower").value
            upper = searched_estimate_const(dual, conjugate(p), 2, cfg, "upper").value
            searched_gap = abs(lower - upper) / max(lower, upper)
            rows.append(
                {
                    "p0": p0,
                    "p": p,
                    "closed_form_gap": report.gap,
                    "mirror_gap": report.mirror_gap,
                    "searched_lower": lower,
                    "searched_dual_upper": upper,
                    "ok": report.gap <= 1e-12 and report.mirror_gap <= 1e-12 and searched_gap <= 0.02,
                }
            )
    return CriterionResult(name="Köthe duality of estimate constants", passed=all(r["ok"] for r in rows), details={"cases": rows})


def _random_norm(space: AtomicSpace, rng: np.random.Generator) -> QuasiNorm:
    kind = int(rng.integers(3))
    if kind == 0:
        return WeightedLp(space, float(rng.choice([1.0, 1.5, 2.0, 3.0])))
    if kind == 1:
        cut = int(rng.integers(1, space.size))
        blocks = ((0, cut), (cut, space.size))
        return Amalgam(space, float(rng.choice([1.0, 2.0])), float(rng.choice([1.0, 2.0, INF])), blocks)
    return ClassicalLorentz(space, float(rng.choice([1.5, 2.0, 3.0])), float(rng.choice([1.0, 2.0])))


def _two_splits(f: LatticeVector):
    support = f.support()
    k = len(support)
    for bits in range(1, 1 << (k - 1)):
        left = [support[i] for i in range(k) if bits >> i & 1]
        right = [i for i in support if i not in left]
        yield f.restrict(left), f.restrict(right)


def check_renormings(cfg: SearchConfig, sizes: SuiteSizes) -> CriterionResult:
    """Sandwiches and unit re-estimates of the partition renormings, by exhaustive enumeration."""
    rng = _rng(cfg.seed, 4)
    worst = {"lower_sandwich": 0.0, "upper_sandwich": 0.0, "lower_reestimate": 0.0, "upper_reestimate": 0.0}
    for _ in range(sizes.renorm_samples):
        k = int(rng.integers(2, sizes.renorm_max_support + 1))
        space = AtomicSpace(tuple(rng.uniform(0.5, 2.0, size=k)))
        norm = _random_norm(space, rng)
        f = space.vector(rng.standard_normal(k))
        e = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
        base = float(norm(f))
        low = renorm_lower_p(norm, e, f)
        up = renorm_upper_q(norm, e, f)
        worst["lower_sandwich"] = max(worst["lower_sandwich"], (base - low) / base)
        worst["upper_sandwich"] = max(worst["upper_sandwich"], (up - base) / base)
        ell = estimate_bound(norm, e, k, "lower")
        u = estimate_bound(norm, e, k, "upper")
        if ell is not None and u is not None:
            worst["lower_sandwich"] = max(worst["lower_sandwich"], (low - ell * base) / base)
            worst["upper_sandwich"] = max(worst["upper_sandwich"], (base - u * up) / base)
        for g, h in _two_splits(f):
            pieces_low = lp_combine(np.array([renorm_lower_p(norm, e, g), renorm_lower_p(norm, e, h)]), e)
            pieces_up = lp_combine(np.array([renorm_upper_q(norm, e, g), renorm_upper_q(norm, e, h)]), e)
            worst["lower_reestimate"] = max(worst["lower_reestimate"], (pieces_low - low) / low)
            worst["upper_reestimate"] = max(worst["upper_reestimate"], (up - pieces_up) / up)
    return CriterionResult(
        name="partition renormings",
        passed=all(v <= 1e-6 for v in worst.values()),
        details={"samples": sizes.renorm_samples, "worst_relative_excess": worst},
    )


def check_ck_harness(cfg: SearchConfig, sizes: SuiteSizes) -> CriterionResult:
    """Random 8x8 matrices between Lebesgue spaces, random filtrations, exact ‖T‖."""
    rng = _rng(cfg.seed, 5)
    run_cfg = cfg.model_copy(update={"trials": sizes.ck_trials})
    rows = []
    for p, q in LEBESGUE_PAIRS:
        dom, cod, space = _lebesgue_pair(8, p, q)
        verdicts, worst_margin = [], 0.0
        for m in range(sizes.ck_matrices):
            T = LinearOp(rng.standard_normal((8, 8)), space, space)
            for j in range(sizes.ck_filtrations):
                A = random_filtration(space, rng)
                report = ck_verify(T, dom, cod, A, p, q, run_cfg.with_seed(cfg.seed + 1000 * m + j))
                verdicts.append(report.verdict)
                worst_margin = max(worst_margin, report.margin)
        rows.append(
            {
                "p": p,
                "q": "inf" if math.isinf(q) else q,
                "runs": len(verdicts),
                "violations": sum(v != "pass" for v in verdicts),
                "worst_margin": worst_margin,
            }
        )
    return CriterionResult(name="maximal inequality with exact ‖T‖", passed=all(r["violations"] == 0 for r in rows), details={"cases": rows})


def check_triangular(cfg: SearchConfig, sizes: SuiteSizes) -> CriterionResult:
    """Exhaustive small triangular cases plus randomized larger ones."""
    rng = _rng(cfg.seed, 6)
    rows = []
    mismatch = 0.0
    for p, q in LEBESGUE_PAIRS:
        dom, cod, space = _lebesgue_pair(4, p, q)
        T = LinearOp(rng.standard_normal((4, 4)), space, space)
        for parts in range(1, sizes.triangular_parts + 1):
            report = triangular_exhaustive(T, dom, cod, p, q, parts, cfg)
            mismatch = max(mismatch, report.extras["selector_mismatch"])
            rows.append({"kind": "exhaustive", "p": p, "q": report.q, "parts": parts, "cases": report.trial_count, "verdict": report.verdict})
        dom8, cod8, space8 = _lebesgue_pair(8, p, q)
        T8 = LinearOp(rng.standard_normal((8, 8)), space8, space8)
        report = triangular_verify(T8, dom8, cod8, p, q, 4, cfg.model_copy(update={"trials": sizes.triangular_random}))
        rows.append({"kind": "random", "p": p, "q": report.q, "parts": 4, "cases": report.trial_count, "verdict": report.verdict})
    return CriterionResult(
        name="triangular-sum inequality",
        passed=all(r["verdict"] == "pass" for r in rows),
        details={"cases": rows, "selector_mismatch": mismatch},
    )


def check_maximal_identities(cfg: SearchConfig, sizes: SuiteSizes) -> CriterionResult:
    """Selector reconstruction, sublinearity, homogeneity and filtration monotonicity."""
    rng = _rng(cfg.seed, 7)
    counts = {"selector": 0, "sublinearity": 0, "homogeneity": 0, "monotonicity": 0}
    worst_selector = 0.0
    for _ in range(sizes.identity_samples):
        n = int(rng.integers(2, 9))
        space = AtomicSpace.unit(n)
        T = LinearOp(rng.standard_normal((n, n)), space, space)
        A = random_filtration(space, rng)
        f = space.vector(rng.standard_normal(n))
        g = space.vector(rng.standard_normal(n))
        c = float(rng.standard_normal())
        Tf, Tg = maximal_apply(T, A, f).values, maximal_apply(T, A, g).values
        scale = 1.0 + np.abs(Tf).max() + np.abs(Tg).max()

        omega, omega_tilde = selector_sets(T, A, f)
        rebuilt = np.abs(triangular_apply(T, omega, omega_tilde, f).values)
        gap = float(np.abs(rebuilt - Tf).max())
        worst_selector = max(worst_selector, gap)
        counts["selector"] += bool(gap > 1e-12 * scale)
        counts["sublinearity"] += bool(np.any(maximal_apply(T, A, f + g).values > Tf + Tg + 1e-12 * scale))
        counts["homogeneity"] += bool(np.any(np.abs(maximal_apply(T, A, f * c).values - abs(c) * Tf) > 1e-12 * scale * (1 + abs(c))))
        keep = np.flatnonzero(rng.random(len(A)) < 0.5)
        if keep.size:
            coarse = maximal_apply(T, subchain(A, keep), f).values
            counts["monotonicity"] += bool(np.any(coarse > Tf + 1e-12 * scale))
    return CriterionResult(
        name="maximal operator identities",
        passed=not any(counts.values()),
        details={"samples": sizes.identity_samples, "violations": counts, "worst_selector_gap": worst_selector},
    )


def check_fourier(cfg: SearchConfig, sizes: SuiteSizes) -> CriterionResult:
    """DFT maximal bound ℓ^1 -> ℓ^inf on the prefix chain, and the pointwise interval inequality."""
    rng = _rng(cfg.seed, 8)
    dom, cod, space = _lebesgue_pair(8, 1.0, INF)
    report = ck_verify(dft_operator(8), dom, cod, prefix_chain(8, "positive"), 1.0, INF, cfg.model_copy(update={"trials": sizes.fourier_signals}))
    mpz = {}
    for n in sizes.fourier_sizes:
        signals = rng.standard_normal((sizes.fourier_signals, n)) + 1j * rng.standard_normal((sizes.fourier_signals, n))
        results = [mpz_check(ComplexVector(AtomicSpace.unit(n), z)) for z in signals]
        mpz[str(n)] = {"violations": sum(not r.holds for r in results), "min_slack": min(r.min_slack for r in results)}
    passed = report.verdict == "pass" and report.max_ratio <= 2.0 and all(v["violations"] == 0 for v in mpz.values())
    return CriterionResult(
        name="maximal Fourier anchor",
        passed=passed,
        details={"gamma": report.gamma, "op_norm": report.op_norm.value, "max_ratio": report.max_ratio, "verdict": report.verdict, "mpz": mpz},
    )


def _random_weight(rng: np.random.Generator) -> WeightFunction:
    if rng.random() < 0.5:
        return WeightFunction.power(float(rng.uniform(0.2, 3.0)), float(rng.uniform(-0.9, 2.0)))
    knots = np.cumsum(rng.uniform(0.2, 2.0, size=int(rng.integers(1, 4))))
    return WeightFunction.piecewise(knots.tolist(), rng.uniform(0.0, 3.0, size=knots.size + 1).tolist())


def check_lorentz(cfg: SearchConfig, sizes: SuiteSizes) -> CriterionResult:
    """Layer-cake identity, the convexity condition and its consequence ℓ_(p),2 = 1."""
    rng = _rng(cfg.seed, 9)
    layer_errors = []
    for _ in range(sizes.layer_cake_samples):
        n = int(rng.integers(1, 9))
        space = AtomicSpace(tuple(rng.uniform(0.2, 3.0, size=n)))
        norm = LorentzLambda(space, float(rng.uniform(0.5, 4.0)), _random_weight(rng))
        f = space.vector(rng.standard_normal(n))
        layer_errors.append(_relative(layer_cake_lambda(norm, f), max(float(norm(f)), 1e-300)))

    p = 3.0
    lorentz_weight = convexity_check_w(WeightFunction.lorentz(p, 1.0), p, 1.0)
    sqrt_weight = convexity_check_w(WeightFunction.power(0.5, -0.5), 1.0, 1.0)

    space = AtomicSpace.unit(4)
    checked, worst = 0, 0.0
    for _ in range(sizes.lambda_samples):
        r = float(rng.uniform(1.0, 3.0))
        exponent = float(rng.uniform(r, 4.0))
        weight = WeightFunction.power(float(rng.uniform(0.5, 2.0)), float(rng.uniform(-0.5, 1.5)))
        if not convexity_check_w(weight, exponent, r).holds:
            continue
        checked += 1
        value = searched_estimate_const(LorentzLambda(space, r, weight), exponent, 2, cfg, "lower").value
        worst = max(worst, value)
    passed = (
        max(layer_errors) <= 1e-12
        and lorentz_weight.holds
        and not sqrt_weight.holds
        and sqrt_weight.violation is not None
        and checked > 0
        and worst <= 1.0 + 1e-6
    )
    return CriterionResult(
        name="Lorentz machinery",
        passed=passed,
        details={
            "layer_cake_max_error": max(layer_errors),
            "lorentz_weight_convex": lorentz_weight.holds,
            "sqrt_weight_violation": sqrt_weight.violation,
            "convex_samples": checked,
            "max_searched_lower": worst,
        },
    )


def check_dual_harness(cfg: SearchConfig, sizes: SuiteSizes) -> CriterionResult:
    """The maximal operator of T' from ℓ^2 to ℓ^inf for T from ℓ^1 to ℓ^2."""
    rng = _rng(cfg.seed, 10)
    dom, cod, space = _lebesgue_pair(8, 1.0, 2.0)
    rows = []
    for k in range(sizes.dual_seeds):
        T = LinearOp(rng.standard_normal((8, 8)), space, space)
        report = dual_maximal_verify(T, dom, cod, random_filtration(space, rng), 1.0, 2.0, cfg.with_seed(cfg.seed + k))
        rows.append(
            {
                "verdict": report.verdict,
                "pairing_error": report.extras["pairing_error"],
                "consistent": report.extras["dual_op_norm_consistent"],
            }
        )
    passed = all(r["verdict"] == "pass" and r["pairing_error"] <= 1e-12 and r["consistent"] for r in rows)
    return CriterionResult(name="Köthe dual maximal harness", passed=passed, details={"runs": rows})


CRITERIA: tuple[Callable[[SearchConfig, SuiteSizes], CriterionResult], ...] = (
    check_constants,
    check_amalgam_closed_forms,
    check_duality,
    check_renormings,
    check_ck_harness,
    check_triangular,
    check_maximal_identities,
    check_fourier,
    check_lorentz,
    check_dual_harness,
)


def run_suite(cfg: SearchConfig, quick: bool = False) -> SuiteReport:
    sizes = QUICK if quick else FULL
    cfg = cfg.model_copy(update={"iterations": min(cfg.iterations, sizes.iterations)})
    tracer = get_tracer()
    results = []
    for number, criterion in enumerate(CRITERIA, 1):
        t0 = perf_counter()
        tracer.log_node("suite", "start", criterion=number, criterion_name=criterion.__name__)
        result = criterion(cfg, sizes)
        tracer.log_node("suite", "done", criterion=number, passed=result.passed, elapsed_seconds=round(perf_counter() - t0, 3))
        results.append(result)
    return SuiteReport(seed=cfg.seed, quick=quick, criteria=results, passed=all(r.passed for r in results))
