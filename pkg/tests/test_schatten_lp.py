import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from quantum_ou.errors import DimensionMismatchError, DomainError
from quantum_ou.fock_space import GibbsSpec, build_rho, number_operator
from quantum_ou.schatten_lp import (
    SingularSpectrum,
    band_norm_formula,
    band_norm_svd,
    bcl_check,
    kosaki_norm,
    norm_from_singular_values,
    sandwich_check,
    schatten_norm,
    symmetric_band,
)
from quantum_ou.weighted_sequences import OffDiagonalCoeffs

LN2 = math.log(2)
seeds = st.integers(0, 2**32 - 1)


def rand_complex(rng, d):
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def test_spectrum_sorted():
    sp = SingularSpectrum.of(np.diag([1.0, -3.0, 2.0]))
    np.testing.assert_allclose(sp.values, [3.0, 2.0, 1.0])
    assert sp.source_dim == 3


@pytest.mark.parametrize("p", [1, 1.5, 2, 7, math.inf])
def test_identity_norm(p):
    expected = 1.0 if math.isinf(p) else 9 ** (1 / p)
    assert schatten_norm(np.eye(9), p) == pytest.approx(expected, rel=1e-14)


def test_rho_trace_norm():
    assert schatten_norm(build_rho(GibbsSpec(LN2, 4)), 1) == pytest.approx(15 / 16, rel=1e-14)


@given(seed=seeds, d=st.integers(1, 20))
def test_p2_is_frobenius(seed, d):
    x = rand_complex(np.random.default_rng(seed), d)
    assert schatten_norm(x, 2) == pytest.approx(np.sqrt(np.sum(np.abs(x) ** 2)), rel=1e-12)


@given(seed=seeds, p=st.floats(1, 20))
def test_unitary_invariance(seed, p):
    rng = np.random.default_rng(seed)
    x = rand_complex(rng, 8)
    U = scipy.linalg.qr(rand_complex(rng, 8))[0]
    V = scipy.linalg.qr(rand_complex(rng, 8))[0]
    assert schatten_norm(U @ x @ V, p) == pytest.approx(schatten_norm(x, p), rel=1e-10)


@given(seed=seeds, p=st.floats(1, 10), dp=st.floats(0, 10))
def test_norm_nonincreasing_in_p(seed, p, dp):
    x = rand_complex(np.random.default_rng(seed), 6)
    x /= np.linalg.norm(x, 2)
    assert schatten_norm(x, p + dp) <= schatten_norm(x, p) * (1 + 1e-12)


def test_norm_domain():
    with pytest.raises(DomainError):
        schatten_norm(np.eye(2), 0.5)
    with pytest.raises(DomainError):
        norm_from_singular_values(np.ones(2), 0.9)


def test_norm_no_overflow():
    assert norm_from_singular_values(np.array([1e200, 1e200]), 4) == pytest.approx(1e200 * 2**0.25)


def test_kosaki_identity_renormalized():
    assert kosaki_norm(np.eye(10), 1, GibbsSpec(0.7, 10, renormalize=True)) == pytest.approx(1.0, rel=1e-14)


def test_kosaki_rank_one():
    e00 = np.zeros((4, 4))
    e00[0, 0] = 1
    assert kosaki_norm(e00, 2, GibbsSpec(LN2, 4)) == pytest.approx(math.sqrt(0.5), rel=1e-14)


@given(seed=seeds, beta=st.floats(0.2, 3))
def test_kosaki_p2_trace_formula(seed, beta):
    spec = GibbsSpec(beta, 12)
    x = rand_complex(np.random.default_rng(seed), 12)
    x = x + x.conj().T
    r = np.diag(spec.rho_diag(0.5))
    direct = math.sqrt(np.trace(r @ x.conj().T @ r @ x).real)
    assert kosaki_norm(x, 2, spec) == pytest.approx(direct, rel=1e-12)


def test_kosaki_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        kosaki_norm(np.eye(3), 2, GibbsSpec(1.0, 4))


# --- sandwich ---------------------------------------------------------------


@pytest.mark.parametrize("p", [1, 1.5, 2, 3, 8])
def test_sandwich_unit_vector(p):
    lo, mid, hi, ok = sandwich_check([1, 0, 0], p)
    assert mid == pytest.approx(2 ** (1 / p), rel=1e-14)
    assert lo == pytest.approx(2 ** (1 / p) / 3) and hi == pytest.approx(2.0)
    assert ok


def test_sandwich_ones():
    lo, mid, hi, ok = sandwich_check(np.ones(10), 2)
    assert mid == pytest.approx(math.sqrt(20), rel=1e-13)
    assert hi == pytest.approx(2 * math.sqrt(10)) and lo == pytest.approx(math.sqrt(20) / 3)
    assert ok


def test_sandwich_zero():
    assert sandwich_check([0.0], 3) == (0.0, 0.0, 0.0, True)


def test_symmetric_band_shape():
    A = symmetric_band([1.0, 2.0])
    np.testing.assert_array_equal(A, [[0, 1, 0], [1, 0, 2], [0, 2, 0]])


@given(a=st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=200), p=st.sampled_from([1, 1.5, 2, 3, 8]))
def test_sandwich_property(a, p):
    assert sandwich_check(a, p)[3]


# --- convexity --------------------------------------------------------------


def test_bcl_identity_equality():
    lhs, rhs, ok = bcl_check(np.eye(16), 3, GibbsSpec(1.0, 16, renormalize=True))
    assert lhs == pytest.approx(1.0, rel=1e-13) and rhs == pytest.approx(1.0, rel=1e-13) and ok


def test_bcl_number_operator():
    assert bcl_check(number_operator(64), 2, GibbsSpec(1.0, 64, renormalize=True))[2]


@given(seed=seeds, p=st.sampled_from([2.0, 3.0, 4.0]))
def test_bcl_random_hermitian(seed, p):
    x = rand_complex(np.random.default_rng(seed), 24)
    assert bcl_check(x + x.conj().T, p, GibbsSpec(1.0, 24, renormalize=True))[2]


def test_bcl_guards():
    with pytest.raises(DomainError):
        bcl_check(np.eye(4), 3, GibbsSpec(1.0, 4))
    with pytest.raises(DomainError):
        bcl_check(np.eye(4), 1.5, GibbsSpec(1.0, 4, renormalize=True))


# --- band oracle ------------------------------------------------------------


@given(k=st.integers(1, 6).flatmap(lambda k: st.tuples(st.just(k), st.integers(-k, k))),
       seed=seeds, p=st.sampled_from([2.0, 3.0, 4.0]), beta=st.sampled_from([0.5, 1.0, 2.0]))
def test_band_norm_oracle(k, seed, p, beta):
    k, m = k
    c = OffDiagonalCoeffs.random(k, m, np.random.default_rng(seed))
    svd = band_norm_svd(c, p, GibbsSpec(beta, 128))
    assert svd == pytest.approx(band_norm_formula(c, p, beta), rel=1e-9)


def test_band_norm_single_entry():
    # x_0 = rho^{1/2}, so the weighted matrix is the diagonal rho^{1/2 + 2(1/(2p) - 1/4)}
    c = OffDiagonalCoeffs(1, 0, {0: 1.0})
    beta, p = 1.0, 3.0
    q = math.exp(-beta)
    diag = (1 - q) ** 0.5 * q ** (np.arange(200) / 2) * ((1 - q) * q ** np.arange(200)) ** (2 * (1 / (2 * p) - 0.25))
    assert band_norm_formula(c, p, beta) == pytest.approx(np.sum(diag**p) ** (1 / p), rel=1e-12)
