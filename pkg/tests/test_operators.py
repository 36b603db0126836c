# tests/test_operators.py
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.constants import corollary_pq_gamma
from src.errors import (
    CountMismatch,
    DimensionMismatch,
    DomainError,
    EmptyFiltration,
    HypothesisViolated,
    NotNormed,
    OverlapError,
)
from src.fourier import dft_operator
from src.lattice.index import INF
from src.lattice.norms import ClassicalLorentz, LorentzLambda, WeightedLp
from src.lattice.spaces import AtomicSpace
from src.lattice.weights import WeightFunction
from src.operators.filtration import Filtration, prefix_filtration, random_filtration, subchain
from src.operators.harness import (
    ck_verify,
    dual_maximal_verify,
    resolve_constants,
    triangular_exhaustive,
    triangular_verify,
    trial_vectors,
)
from src.operators.linear import (
    LinearOp,
    apply,
    kothe_dual_op,
    maximal_apply,
    pairing_gap,
    selector_sets,
    triangular_apply,
    triangular_matrix,
)
from src.operators.opnorm import op_norm_exact, op_norm_search, operator_norm

values4 = st.lists(st.floats(-5, 5, allow_nan=False, allow_infinity=False), min_size=4, max_size=4)


def _random_op(rng, n=4, m=None):
    m = m or n
    return LinearOp(rng.standard_normal((m, n)), AtomicSpace.unit(n), AtomicSpace.unit(m))


# ---------------------------------------------------------------- filtrations

def test_filtration_validation():
    space = AtomicSpace.unit(3)
    with pytest.raises(EmptyFiltration):
        Filtration(space, ())
    with pytest.raises(DomainError):
        Filtration(space, ((0, 1), (1, 2)))
    with pytest.raises(DimensionMismatch):
        Filtration(space, ((0,), (0, 3)))
    # empty sets and repeats are allowed
    chain = Filtration(space, ((), (2,), (2,), (0, 2)))
    assert chain.to_list() == [[], [2], [2], [0, 2]]


def test_prefix_and_subchain():
    space = AtomicSpace.unit(4)
    A = prefix_filtration(space, order=[2, 0, 3, 1])
    assert A.to_list() == [[2], [0, 2], [0, 2, 3], [0, 1, 2, 3]]
    assert subchain(A, [3, 1]).to_list() == [[0, 2], [0, 1, 2, 3]]
    assert A.extend([0, 1, 2, 3]).chain[-1] == (0, 1, 2, 3)


def test_random_filtration_is_nested(rng):
    space = AtomicSpace.unit(6)
    for _ in range(10):
        A = random_filtration(space, rng)
        assert A.chain[-1] == tuple(range(6))
        assert not np.any(A.masks[:-1] & ~A.masks[1:])


# ---------------------------------------------------------------- linear operators

def test_linear_op_validation():
    space = AtomicSpace.unit(2)
    with pytest.raises(DimensionMismatch):
        LinearOp(np.ones((3, 2)), space, space)
    with pytest.raises(DomainError):
        LinearOp(np.array([[1.0, np.inf], [0.0, 1.0]]), space, space)


def test_apply_and_space_check():
    space = AtomicSpace.unit(2)
    swap = LinearOp(np.array([[0.0, 1.0], [1.0, 0.0]]), space, space)
    assert apply(swap, space.vector([3, 5])).to_list() == [5.0, 3.0]
    with pytest.raises(DimensionMismatch):
        apply(swap, AtomicSpace.unit(3).zeros())


def test_maximal_identity_is_restriction():
    space = AtomicSpace.unit(4)
    A = Filtration(space, ((0,), (0, 2)))
    out = maximal_apply(LinearOp.identity(space), A, space.vector([1, -2, -3, 4]))
    assert out.to_list() == [1.0, 0.0, 3.0, 0.0]


def test_maximal_of_supported_vector_is_modulus(rng):
    space = AtomicSpace.unit(4)
    T = _random_op(rng)
    A = Filtration(space, ((0, 1), (0, 1, 2), (0, 1, 2, 3)))
    f = space.vector([0.5, -1.5, 0.0, 0.0])
    # every set of the chain contains supp f
    assert maximal_apply(T, A, f).values == pytest.approx(np.abs(apply(T, f).values))


@given(values4, values4)
@settings(max_examples=50, deadline=None)
def test_maximal_operator_is_sublinear(f, g):
    space = AtomicSpace.unit(4)
    T = LinearOp(np.arange(16, dtype=float).reshape(4, 4) - 7.0, space, space)
    A = prefix_filtration(space, order=[3, 1, 0, 2])
    vf, vg = space.vector(f), space.vector(g)
    lhs = maximal_apply(T, A, vf + vg).values
    rhs = maximal_apply(T, A, vf).values + maximal_apply(T, A, vg).values
    assert np.all(lhs <= rhs + 1e-9 * (1.0 + rhs))
    assert maximal_apply(T, A, vf * -3.0).values == pytest.approx(3.0 * maximal_apply(T, A, vf).values)


def test_maximal_dominates_each_restriction(rng):
    space = AtomicSpace.unit(5)
    T = _random_op(rng, 5)
    A = random_filtration(space, rng, length=4)
    f = space.vector(rng.standard_normal(5))
    star = maximal_apply(T, A, f).values
    for members in A.chain:
        assert np.all(np.abs(apply(T, f.restrict(members)).values) <= star + 1e-12)


def test_triangular_matrix_errors(rng):
    T = _random_op(rng)
    with pytest.raises(CountMismatch):
        triangular_matrix(T, [[0], [1]], [[0]])
    with pytest.raises(OverlapError):
        triangular_matrix(T, [[0, 1], [1]], [[0], [2]])
    with pytest.raises(OverlapError):
        triangular_matrix(T, [[0], [1]], [[2, 2], [3]])
    with pytest.raises(DimensionMismatch):
        triangular_matrix(T, [[0], [4]], [[0], [1]])


def test_triangular_sum_by_hand():
    space = AtomicSpace.unit(2)
    T = LinearOp(np.array([[1.0, 2.0], [3.0, 4.0]]), space, space)
    # k = 1: row 1 sees only column 0; k = 2: row 0 sees both
    out = triangular_apply(T, [[0], [1]], [[1], [0]], space.vector([1.0, 1.0]))
    assert out.to_list() == [3.0, 3.0]


def test_selectors_rebuild_the_maximal_operator(rng):
    space = AtomicSpace.unit(6)
    for _ in range(20):
        T = _random_op(rng, 6)
        A = random_filtration(space, rng)
        f = space.vector(rng.standard_normal(6))
        omega, omega_tilde = selector_sets(T, A, f)
        rebuilt = np.abs(triangular_apply(T, omega, omega_tilde, f).values)
        assert rebuilt == pytest.approx(maximal_apply(T, A, f).values, abs=1e-12)


def test_kothe_dual_operator(rng):
    dom = AtomicSpace((1.0, 2.0, 0.5))
    cod = AtomicSpace((3.0, 0.25))
    T = LinearOp(rng.standard_normal((2, 3)), dom, cod)
    dual = kothe_dual_op(T)
    assert dual.domain is cod and dual.codomain is dom
    assert kothe_dual_op(dual).matrix == pytest.approx(T.matrix)
    for _ in range(10):
        assert pairing_gap(T, rng.standard_normal(3), rng.standard_normal(2)) <= 1e-12
    unit = AtomicSpace.unit(3)
    S = LinearOp(rng.standard_normal((3, 3)), unit, unit)
    assert kothe_dual_op(S).matrix == pytest.approx(S.matrix.T)


# ---------------------------------------------------------------- operator norms

def test_exact_operator_norms(rng):
    space = AtomicSpace.unit(4)
    I = LinearOp.identity(space)
    assert op_norm_exact(I, WeightedLp(space, 1.0), WeightedLp(space, 1.0)) == pytest.approx(1.0)
    F = dft_operator(8)
    l1, linf = WeightedLp(F.domain, 1.0), WeightedLp(F.domain, INF)
    assert op_norm_exact(F, l1, linf) == pytest.approx(1.0)
    assert op_norm_exact(F, WeightedLp(F.domain, 2.0), WeightedLp(F.domain, 2.0)) == pytest.approx(math.sqrt(8.0))
    T = _random_op(rng)
    l2 = WeightedLp(space, 2.0)
    assert op_norm_exact(T, l2, WeightedLp(space, INF)) == pytest.approx(np.linalg.norm(T.matrix, axis=1).max())
    assert op_norm_exact(T, l2, l2) == pytest.approx(np.linalg.norm(T.matrix, 2))
    assert op_norm_exact(T, ClassicalLorentz(space, 2.0, 1.0), l2) is None
    assert op_norm_exact(T, WeightedLp(space, 3.0), WeightedLp(space, 4.0)) is None


def test_weighted_exact_norm_matches_search(small_cfg):
    dom = AtomicSpace((1.0, 4.0))
    T = LinearOp(np.array([[1.0, 0.0], [0.0, 1.0]]), dom, dom)
    # l^1(μ) -> l^1(μ) of the identity is 1 whatever the weights
    assert op_norm_exact(T, WeightedLp(dom, 1.0), WeightedLp(dom, 1.0)) == pytest.approx(1.0)
    searched = op_norm_search(T, WeightedLp(dom, 2.0), WeightedLp(dom, 2.0), small_cfg)
    assert searched.value == pytest.approx(1.0, rel=1e-9)


def test_searched_norm_is_a_lower_bound(small_cfg):
    space = AtomicSpace.unit(2)
    T = LinearOp(np.diag([2.0, 1.0]), space, space)
    result = operator_norm(T, ClassicalLorentz(space, 2.0, 2.0), ClassicalLorentz(space, 2.0, 2.0), small_cfg)
    assert not result.exact
    assert result.value <= 2.0 * (1.0 + 1e-12)
    assert result.value == pytest.approx(2.0, rel=1e-6)


# ---------------------------------------------------------------- harness

def test_trial_vectors_include_deltas(rng):
    X = trial_vectors(4, 20, rng, [1.0, 2.0, 3.0, 4.0])
    assert X.shape == (20, 4)
    assert X[:4] == pytest.approx(np.eye(4))
    assert X[8].tolist() == [1.0, 2.0, 3.0, 4.0]


def test_resolve_constants_needs_closed_forms():
    space = AtomicSpace.unit(4)
    odd = LorentzLambda(space, 1.0, WeightFunction.piecewise([1.0], [1.0, 2.0]))
    with pytest.raises(HypothesisViolated):
        resolve_constants(odd, WeightedLp(space, 2.0), 1.0, 2.0)
    assert resolve_constants(odd, WeightedLp(space, 2.0), 1.0, 2.0, ell=1.2) == (1.0, 1.2, 1.0)


def test_ck_verify_identity_passes(small_cfg):
    space = AtomicSpace.unit(6)
    report = ck_verify(
        LinearOp.identity(space), WeightedLp(space, 1.0), WeightedLp(space, 2.0), prefix_filtration(space), 1.0, 2.0, small_cfg
    )
    assert report.verdict == "pass"
    assert report.passed is True
    assert report.gamma == pytest.approx(corollary_pq_gamma(1.0, 2.0))
    assert report.max_ratio <= 1.0 + 1e-9


def test_ck_verify_dft_l1_linf(small_cfg):
    F = dft_operator(8)
    report = ck_verify(F, WeightedLp(F.domain, 1.0), WeightedLp(F.domain, INF), prefix_filtration(F.domain), 1.0, INF, small_cfg)
    assert report.verdict == "pass"
    assert report.gamma == pytest.approx(1.0)
    assert report.op_norm.exact and report.op_norm.value == pytest.approx(1.0)
    assert report.q == "inf"


def test_ck_verify_random_operators(rng, small_cfg):
    space = AtomicSpace.unit(5)
    for p, q in [(1.0, 2.0), (1.0, INF), (2.0, INF)]:
        T = _random_op(rng, 5)
        report = ck_verify(T, WeightedLp(space, p), WeightedLp(space, q), random_filtration(space, rng), p, q, small_cfg)
        assert report.verdict == "pass", (p, q, report.margin)
        assert report.margin <= 1.0 + 1e-9


def test_ck_verify_reproducible(rng, small_cfg):
    space = AtomicSpace.unit(5)
    T = _random_op(rng, 5)
    A = prefix_filtration(space)
    args = (T, WeightedLp(space, 1.0), WeightedLp(space, 2.0), A, 1.0, 2.0)
    a = ck_verify(*args, small_cfg)
    b = ck_verify(*args, small_cfg.model_copy(update={"workers": 2}))
    assert a.model_dump() == b.model_dump()


def test_ck_verify_searched_norm_has_no_verdict(small_cfg):
    space = AtomicSpace.unit(4)
    dom, cod = ClassicalLorentz(space, 2.0, 1.0), ClassicalLorentz(space, 4.0, INF)
    report = ck_verify(LinearOp.identity(space), dom, cod, prefix_filtration(space), 2.0, 4.0, small_cfg)
    assert report.verdict == "no-verdict"
    assert report.passed is None
    assert not report.op_norm.exact


def test_ck_verify_argument_checks(small_cfg):
    space = AtomicSpace.unit(3)
    I = LinearOp.identity(space)
    with pytest.raises(DomainError):
        ck_verify(I, WeightedLp(space, 2.0), WeightedLp(space, 1.0), prefix_filtration(space), 2.0, 1.0, small_cfg)
    with pytest.raises(DomainError):
        ck_verify(I, WeightedLp(space, 1.0), WeightedLp(space, 2.0), prefix_filtration(AtomicSpace.unit(4)), 1.0, 2.0, small_cfg)


def test_triangular_exhaustive_small(small_cfg):
    space = AtomicSpace.unit(2)
    T = LinearOp(np.array([[1.0, -2.0], [0.5, 1.0]]), space, space)
    report = triangular_exhaustive(T, WeightedLp(space, 1.0), WeightedLp(space, 2.0), 1.0, 2.0, 2, small_cfg)
    assert report.verdict == "pass"
    assert report.extras["selector_mismatch"] <= 1e-12
    assert report.trial_count == 9 * 25 * 9


def test_triangular_random(rng, small_cfg):
    T = _random_op(rng, 6)
    space = T.domain
    report = triangular_verify(T, WeightedLp(space, 1.0), WeightedLp(space, INF), 1.0, INF, 3, small_cfg)
    assert report.verdict == "pass"
    assert len(report.extras["worst_domain_parts"]) == 3
    with pytest.raises(DomainError):
        triangular_verify(T, WeightedLp(space, 1.0), WeightedLp(space, INF), 1.0, INF, 0, small_cfg)


def test_dual_maximal_harness(rng, small_cfg):
    T = _random_op(rng, 5)
    space = T.domain
    report = dual_maximal_verify(T, WeightedLp(space, 1.0), WeightedLp(space, 2.0), random_filtration(space, rng), 1.0, 2.0, small_cfg)
    assert report.verdict == "pass"
    assert report.extras["pairing_error"] <= 1e-12
    assert report.extras["dual_op_norm_consistent"] is True
    assert report.extras["dual_feasible"] is True
    # the dual run is l^2 -> l^inf
    assert report.p == 2.0 and report.q == "inf"


def test_dual_maximal_preconditions(small_cfg):
    space = AtomicSpace.unit(3)
    I = LinearOp.identity(space)
    A = prefix_filtration(space)
    with pytest.raises(DomainError):
        dual_maximal_verify(I, WeightedLp(space, 0.5), WeightedLp(space, 2.0), A, 0.5, 2.0, small_cfg)
    with pytest.raises(NotNormed):
        dual_maximal_verify(I, WeightedLp(space, 1.0), ClassicalLorentz(space, 2.0, 0.5), A, 1.0, 2.0, small_cfg)
