import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quantum_ou.errors import DomainError, PrecisionModeError
from quantum_ou.meixner import (
    BoundKind,
    PrecisionMode,
    binom,
    eval_L,
    gamma_sandwich,
    log_power_tail_bound,
    meixner_pointwise,
    orthogonality_sum,
    orthogonality_target,
    power_sum_sandwich,
    verify_bounds,
    weighted_power_sum,
)

LN2 = math.log(2)
BETAS = [0.5, 1.0, 2.0]


def hyp_oracle(k, n, beta):
    """The alternating sum is a terminating 2F1(-k, -n; 1; 1 - e^beta)."""
    with mpmath.workdps(60):
        b = mpmath.mpf(beta)
        return float(mpmath.exp(-k * b) * mpmath.hyp2f1(-k, -n, 1, 1 - mpmath.exp(b)))


# --- eval_L -----------------------------------------------------------------


@pytest.mark.parametrize("n", [0, 1, 5, 40])
@pytest.mark.parametrize("beta", BETAS)
def test_L0_is_one(n, beta):
    assert eval_L(0, n, beta) == 1.0


def test_L1_at_ln2():
    assert eval_L(1, 0, LN2) == pytest.approx(0.5, rel=1e-15)
    assert eval_L(1, 3, LN2) == pytest.approx(-1.0, rel=1e-15)
    for n in range(20):
        assert eval_L(1, n, LN2) == pytest.approx(0.5 * (1 - n), abs=1e-14)


@given(k=st.integers(0, 25), beta=st.floats(0.1, 4.0))
def test_L_at_zero(k, beta):
    mode = PrecisionMode.DOUBLE if k <= 12 else PrecisionMode.EXTENDED
    assert eval_L(k, 0, beta, mode) == pytest.approx(math.exp(-k * beta), rel=1e-13)


@given(k=st.integers(0, 12), n=st.integers(0, 60), beta=st.sampled_from(BETAS))
def test_double_matches_hypergeometric(k, n, beta):
    ref = hyp_oracle(k, n, beta)
    scale = max(float(n) ** k, float(k) ** k) / math.factorial(k)
    assert abs(eval_L(k, n, beta) - ref) <= 1e-10 * max(scale, 1.0)


@given(k=st.integers(0, 20), n=st.integers(0, 200), beta=st.sampled_from(BETAS))
def test_extended_matches_hypergeometric(k, n, beta):
    ref = hyp_oracle(k, n, beta)
    assert eval_L(k, n, beta, "extended") == pytest.approx(ref, rel=1e-13, abs=1e-300)


def test_double_mode_guard():
    with pytest.raises(PrecisionModeError):
        eval_L(13, 4, 1.0, PrecisionMode.DOUBLE)


@pytest.mark.parametrize("k", range(1, 7))
def test_leading_coefficient(k):
    beta, n = 1.0, 10_000
    lead = (-1) ** k * math.expm1(beta) ** k * math.exp(-k * beta) / math.factorial(k)
    ratio = eval_L(k, n, beta, "extended") / n**k
    assert ratio == pytest.approx(lead, rel=0.01)


def test_binom_paths_agree():
    for n in (61, 100, 500):
        for j in (0, 1, 7, n // 2):
            assert binom(n, j) == pytest.approx(math.comb(n, j), rel=1e-12)


# --- sums -------------------------------------------------------------------


def test_orthogonality_examples():
    assert orthogonality_sum(0, 0, LN2) == pytest.approx(2.0, rel=1e-12)
    assert abs(orthogonality_sum(1, 0, LN2)) <= 1e-10
    assert orthogonality_sum(1, 1, LN2) == pytest.approx(1.0, rel=1e-12)


@given(m=st.integers(0, 10), l=st.integers(0, 10), beta=st.sampled_from(BETAS))
def test_orthogonality(m, l, beta):
    target = orthogonality_target(m, l, beta)
    norm = math.exp(-m * beta) / -math.expm1(-beta)
    assert abs(orthogonality_sum(m, l, beta) - target) <= 1e-8 * norm


@pytest.mark.parametrize("beta", BETAS + [LN2])
def test_power_sum_closed_forms(beta):
    q = math.exp(-beta)
    assert weighted_power_sum(0, beta) == pytest.approx(1 / (1 - q), rel=1e-12)
    assert weighted_power_sum(1, beta) == pytest.approx(q / (1 - q) ** 2, rel=1e-12)
    assert weighted_power_sum(2, beta) == pytest.approx(q * (1 + q) / (1 - q) ** 3, rel=1e-12)


def test_power_sum_examples():
    assert weighted_power_sum(0, LN2) == pytest.approx(2.0, rel=1e-14)
    assert weighted_power_sum(1, LN2) == pytest.approx(2.0, rel=1e-14)
    assert weighted_power_sum(1, 1.0) == pytest.approx(0.92067, abs=1e-5)


@given(s=st.floats(0.0, 40.0), beta=st.floats(0.2, 4.0))
def test_power_sum_matches_polylog(s, beta):
    ref = float(mpmath.polylog(-s, mpmath.exp(-beta))) + (1.0 if s == 0 else 0.0)
    assert weighted_power_sum(s, beta) == pytest.approx(ref, rel=1e-11)


@given(r=st.integers(0, 30), beta=st.floats(0.2, 3.0), extra=st.integers(0, 50))
def test_tail_bound_dominates(r, beta, extra):
    N = max(1, math.ceil(r / beta)) + extra
    n = np.arange(N, N + 20_000, dtype=float)
    tail = math.fsum(np.exp(-beta * n + r * np.log(n)))
    assert math.log(tail) <= log_power_tail_bound(r, beta, N) + 1e-12


def test_tail_bound_guard():
    with pytest.raises(DomainError):
        log_power_tail_bound(10, 1.0, 3)


# --- bounds -----------------------------------------------------------------


def test_gamma_sandwich_at_one_is_boundary():
    lo, val, hi = gamma_sandwich(1.0)
    assert math.exp(lo) == pytest.approx(math.sqrt(2 * math.pi) / math.e, rel=1e-14)
    assert hi - val == pytest.approx(0.0, abs=1e-15)
    report = verify_bounds(BoundKind.GAMMA_SANDWICH, {"s": [1.0]})
    assert not report.passed and report.strict


def test_power_sum_sandwich_example():
    lo, val, hi = (math.exp(v) for v in power_sum_sandwich(1.0, 1.0))
    assert lo == pytest.approx(0.1696, abs=1e-4)
    assert val == pytest.approx(0.92067, abs=1e-5)
    assert hi == pytest.approx(2.0, rel=1e-14)


def test_pointwise_example():
    value, bound = meixner_pointwise(1, 5, LN2)
    assert value == pytest.approx(2.0) and bound == 5.0


def test_verify_bounds_grids():
    g = verify_bounds(BoundKind.GAMMA_SANDWICH, {"s": np.linspace(1 + 1e-6, 50, 400)})
    assert g.passed and g.worst_slack > 0
    p = verify_bounds("power_sum_sandwich", {"s": np.linspace(1, 50, 100), "beta": BETAS})
    assert p.passed
    m = verify_bounds(BoundKind.MEIXNER_POINTWISE, {"k": range(21), "n": range(0, 201, 5), "beta": BETAS})
    assert m.passed and len(m.grid) == 21 * 41 * 3


def test_verify_bounds_domain():
    with pytest.raises(DomainError):
        verify_bounds(BoundKind.GAMMA_SANDWICH, {"s": [0.5]})
    with pytest.raises(DomainError):
        verify_bounds(BoundKind.POWER_SUM_SANDWICH, {"s": [2.0]})
