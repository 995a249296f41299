import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quantum_ou import hypercontractivity as hc
from quantum_ou.errors import DomainError
from quantum_ou.fock_space import GibbsSpec
from quantum_ou.ou_semigroup import EigenBasis, HSVector, Superop, apply_superop, solve_params
from quantum_ou.schatten_lp import schatten_norm
from quantum_ou.weighted_sequences import constants

seeds = st.integers(0, 2**32 - 1)


@pytest.fixture(scope="module")
def setup1():
    spec = GibbsSpec(1.0, hc.recommended_dim(1.0))
    prm = solve_params(1.0)
    return spec, prm, EigenBasis.build(spec, prm, 4)


def random_band(rng, n, D, k, complex_=True):
    X = rng.standard_normal((n, D, D)) + (1j * rng.standard_normal((n, D, D)) if complex_ else 0)
    i, j = np.indices((D, D))
    return np.where(np.abs(i - j) <= k, X, 0)


# --- band arithmetic --------------------------------------------------------


@given(seed=seeds, D=st.integers(2, 20), k=st.integers(0, 6))
def test_band_roundtrip(seed, D, k):
    k = min(k, D - 1)
    X = random_band(np.random.default_rng(seed), 2, D, k)
    np.testing.assert_array_equal(hc._from_band(hc._to_band(X, k), k), X)
    adj = hc._from_band(hc._band_adjoint(hc._to_band(X, k), k), k)
    np.testing.assert_array_equal(adj, np.conj(np.swapaxes(X, -1, -2)))


@given(seed=seeds, D=st.integers(2, 20), ka=st.integers(0, 5), kb=st.integers(0, 5))
def test_band_matmul_dense(seed, D, ka, kb):
    ka, kb = min(ka, D - 1), min(kb, D - 1)
    rng = np.random.default_rng(seed)
    A, B = random_band(rng, 3, D, ka), random_band(rng, 3, D, kb)
    C, kc = hc._band_matmul(hc._to_band(A, ka), ka, hc._to_band(B, kb), kb)
    np.testing.assert_allclose(hc._from_band(C, kc), A @ B, atol=1e-12)


@given(seed=seeds, D=st.integers(3, 24), k=st.integers(1, 4),
       p=st.sampled_from([2.0, 3.0, 4.0, 6.0, 8.0, 16.0, 18.0, math.inf]),
       complex_=st.booleans())
def test_band_pnorm_matches_svd(seed, D, k, p, complex_):
    k = min(k, D - 1)
    X = random_band(np.random.default_rng(seed), 3, D, k, complex_)
    got = hc._pnorm_band(hc._to_band(X, k), k, p)
    want = [schatten_norm(x, p) for x in X]
    np.testing.assert_allclose(got, want, rtol=1e-10)


# --- single vectors ---------------------------------------------------------


def test_recommended_dim():
    assert [hc.recommended_dim(b) for b in (0.5, 1.0, 2.0)] == [80, 40, 32]


def test_zero_mean_project_examples(setup1):
    spec, prm, basis = setup1
    assert hc.zero_mean_project(basis.vectors[(0, 0)], basis).norm() <= 1e-12
    xi10 = basis.vectors[(1, 0)]
    np.testing.assert_allclose(hc.zero_mean_project(xi10, basis).mat, xi10.mat, atol=1e-12)


@given(seed=seeds)
def test_zero_mean_project_orthogonal(setup1, seed):
    spec, prm, basis = setup1
    x = basis.assemble(np.random.default_rng(seed).standard_normal(len(basis.keys)))
    y = hc.zero_mean_project(x, basis)
    assert abs(basis.vectors[(0, 0)].inner(y)) <= 1e-12 * x.norm()


def test_contraction_ratio_examples(setup1):
    spec, prm, basis = setup1
    x = basis.assemble(np.random.default_rng(0).standard_normal(len(basis.keys)))
    assert hc.contraction_ratio(0.0, 2, x, spec, basis) == pytest.approx(1.0, rel=1e-10)
    xi10 = basis.vectors[(1, 0)]
    for t in (0.0, 0.3, 2.0):
        assert hc.contraction_ratio(t, 2, xi10, spec, basis) == pytest.approx(math.exp(-prm.tau1 * t), rel=1e-10)
    with pytest.raises(DomainError):
        hc.contraction_ratio(0.0, 2, np.zeros((spec.dim, spec.dim)), spec, basis)


@pytest.mark.parametrize("p", [3.0, 4.0])
def test_contraction_ratio_monotone(setup1, p):
    spec, prm, basis = setup1
    rng = np.random.default_rng(5)
    ts = np.linspace(0, 3, 7)
    for _ in range(10):
        c = rng.standard_normal(len(basis.keys))
        c[0] = 0.0
        x = basis.assemble(c)
        r = [hc.contraction_ratio(t, p, x, spec, basis) for t in ts]
        assert all(b <= a * (1 + 1e-12) for a, b in zip(r, r[1:]))


@given(seed=seeds, t=st.floats(0, 5), p=st.sampled_from([2.0, 3.0, 4.0, 8.0]))
def test_search_space_matches_dense(setup1, seed, t, p):
    spec, prm, basis = setup1
    space = hc._SearchSpace.build(basis, p, hc.TimeKind.ZERO_MEAN)
    c = np.random.default_rng(seed).standard_normal((2, len(space.keys)))
    fast = space.ratios(c, t, p)
    for row, r in zip(c, fast):
        full = np.zeros(len(basis.keys))
        full[[basis.keys.index(k) for k in space.keys]] = row
        x = basis.assemble(full)
        assert r == pytest.approx(hc.contraction_ratio(t, p, x, spec, basis), rel=1e-9)


# --- sup ratio --------------------------------------------------------------


def test_sup_ratio_fails_at_zero(setup1):
    spec, prm, basis = setup1
    assert hc.sup_ratio(0.0, 4, spec, basis, budget=16, steps=5) > 1


def test_sup_ratio_contracts_at_certificate(setup1):
    spec, prm, basis = setup1
    t_star = hc.certificate_time(4, prm)
    report = hc.check_hypercontractivity(t_star, 4, spec, basis, budget=64, steps=10)
    assert report.passed and report.worst_ratio <= 1


def test_sup_ratio_monotone_and_deterministic(setup1):
    spec, prm, basis = setup1
    ts = [0.0, 0.2, 0.5, 1.0, 2.0]
    r = [hc.sup_ratio(t, 3, spec, basis, budget=32, seed=4, steps=10) for t in ts]
    assert all(b <= a for a, b in zip(r, r[1:]))
    assert hc.sup_ratio(0.5, 3, spec, basis, budget=32, seed=4, steps=10) == r[2]


def test_sup_ratio_budget_prefix(setup1):
    spec, prm, basis = setup1
    small = hc.sup_ratio(0.4, 4, spec, basis, budget=16, seed=2, steps=8)
    big = hc.sup_ratio(0.4, 4, spec, basis, budget=32, seed=2, steps=8)
    assert big >= small


def test_sup_ratio_stop_above(setup1):
    spec, prm, basis = setup1
    assert hc.sup_ratio(0.0, 4, spec, basis, budget=100, stop_above=1.0) > 1


def test_sup_ratio_complex_field(setup1):
    spec, prm, basis = setup1
    assert hc.sup_ratio(0.0, 4, spec, basis, budget=8, steps=4, field="complex") > 1
    with pytest.raises(DomainError):
        hc.sup_ratio(0.0, 4, spec, basis, budget=8, field="quaternion")


def test_hcreport_rule():
    assert hc.HCReport(4, 1, 0.5, 1 + 5e-11, 10, 0).passed
    assert not hc.HCReport(4, 1, 0.5, 1 + 2e-10, 10, 0).passed


# --- witness ----------------------------------------------------------------


@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("p", [2.0, 3.0, 8.0])
def test_witness_entries_match_superoperator(beta, p):
    D = 96
    spec = GibbsSpec(beta, D)
    prm = solve_params(beta)
    x = apply_superop(Superop.A1adj, HSVector(np.diag(spec.rho_diag(0.5))), prm).mat
    w = spec.rho_diag(1 / (2 * p) - 0.25)
    z = w[:, None] * x * w[None, :]
    n = np.arange(40)
    np.testing.assert_allclose(np.abs(np.diag(z, 1)[:40]), hc.witness_entries(p, beta, n), rtol=1e-12)
    np.testing.assert_allclose(np.abs(np.diag(z, -1)[:40]), hc.witness_entries(p, beta, n), rtol=1e-12)
    assert np.max(np.abs(z - np.diag(np.diag(z, 1), 1) - np.diag(np.diag(z, -1), -1))) == 0


@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0, math.log(2)])
def test_witness_norm_p2_is_one(beta):
    nrm, err = hc.witness_norm(2, beta)
    assert nrm == pytest.approx(1.0, rel=1e-12)
    assert err <= 1e-13


@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("p", [3.0, 4.0, 8.0, 16.0])
def test_witness_norm_against_dense(beta, p):
    N = 600
    a = hc.witness_entries(p, beta, np.arange(N))
    dense = schatten_norm(np.diag(a, 1) + np.diag(a, -1), p)
    nrm, err = hc.witness_norm(p, beta)
    assert nrm == pytest.approx(dense, rel=1e-12)


@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("p", [2.0, 4.0, 8.0, 16.0])
def test_witness_lower_bound(beta, p):
    prm = solve_params(beta)
    t = hc.witness_lower_bound(p, beta, prm)
    nrm, _ = hc.witness_norm(p, beta)
    assert math.exp(prm.tau * t) == pytest.approx(max(nrm, 1.0), rel=1e-12)
    assert math.exp(prm.tau * t) >= min(1 / beta, beta**-0.5) / (6 * math.sqrt(math.e)) * math.sqrt(p)


@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
def test_witness_growth_slope(beta):
    assert 0.8 <= hc.witness_growth_slope(beta, solve_params(beta)) <= 1.2


# --- theory -----------------------------------------------------------------


@given(p=st.floats(2, 1e3), beta=st.floats(0.1, 5))
def test_ceiling_chain(p, beta):
    lo, hi = hc.theory_bounds(max(p, 2.0001), beta)
    assert hc.contraction_bound(p, beta) <= constants(beta).C_tilde * (p - 1) * (1 + 1e-12)
    assert hc.contraction_bound(p, beta) == pytest.approx(6 * constants(beta).C_of_beta * p / -math.expm1(-beta))
    witness_sq = (min(1 / beta, beta**-0.5) / (6 * math.sqrt(math.e))) ** 2 * p
    assert witness_sq >= constants(beta).c_tilde * (p - 1)


def test_theory_examples():
    lo, hi = hc.theory_bounds(4, 1.0)
    assert lo == pytest.approx(1 / (12 * math.e), rel=1e-14)
    glo, ghi = hc.theory_bounds(4, 1.0, hc.TimeKind.GENERAL)
    assert glo == pytest.approx(lo) and ghi == pytest.approx(4 * constants(1.0).c_p(4) ** 2)
    with pytest.raises(DomainError):
        hc.theory_bounds(2, 1.0)


def test_certificate_time_formula():
    prm = solve_params(1.0)
    assert hc.certificate_time(3, prm) == pytest.approx(math.log(hc.contraction_bound(3, 1.0)) / (2 * prm.tau))


# --- bisection --------------------------------------------------------------


def test_optimal_time_p2_is_zero(setup1):
    spec, prm, basis = setup1
    est = hc.optimal_time_estimate(2, spec, basis, budget=8, steps=4)
    assert est.t_hat == 0.0
    assert est.note == "restricted-class lower estimate"


def test_optimal_time_bracket_and_budget(setup1):
    spec, prm, basis = setup1
    a = hc.optimal_time_estimate(4, spec, basis, budget=8, seed=7, steps=10, tol=1e-3)
    b = hc.optimal_time_estimate(4, spec, basis, budget=16, seed=7, steps=10, tol=1e-3)
    for est in (a, b):
        assert est.witness_lower <= est.t_hat <= est.theory_upper + 1e-3
        assert est.theory_lower == pytest.approx(max(0, math.log(constants(1.0).c_tilde * 3) / (2 * prm.tau)))
    assert b.t_hat >= a.t_hat


def test_optimal_time_general_kind(setup1):
    spec, prm, basis = setup1
    est = hc.optimal_time_estimate(4, spec, basis, budget=8, steps=4, tol=1e-2, kind=hc.TimeKind.GENERAL)
    assert est.kind is hc.TimeKind.GENERAL
    assert est.t_hat <= est.theory_upper + 1e-2


def test_optimal_time_guards(setup1):
    spec, prm, basis = setup1
    with pytest.raises(DomainError):
        hc.optimal_time_estimate(4, spec, basis, tol=0)
    with pytest.raises(DomainError):
        hc.optimal_time_estimate(1.5, spec, basis)
