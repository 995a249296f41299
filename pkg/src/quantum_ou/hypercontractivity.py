"""L2 -> Lp contraction of the semigroup and its optimal time.

A zero-mean element is represented by its coefficients in the eigenbasis
``xi_{m,n}``.  After time ``t`` its Lp(rho) norm is the Schatten p-norm of

    rho^s (sum_k c_k exp(-lambda_k t) xi_k) rho^s,      s = 1/(2p) - 1/4,

and its L2 norm is ``sqrt(c* G c)`` with ``G`` the Gram matrix of the basis.
Every ``xi_{m,n}`` is supported on the diagonals ``|j - i| <= m + n``, so the
search works on banded matrices: even-integer ``p`` use exact band traces of
``(X* X)^(p/2)``, everything else falls back to dense eigenvalues.

The optimal time found here is over a truncated, degree-capped, sampled
class.  It is therefore a lower estimate of the true optimal time.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.linalg import eigvalsh_tridiagonal

from .errors import BracketError, DomainError, SpanInsufficientError
from .fock_space import GibbsSpec
from .meixner import log_power_tail_bound
from .ou_semigroup import EigenBasis, HSVector, OUParams, _as_hs, semigroup_apply
from .schatten_lp import norm_from_singular_values, schatten_norm
from .weighted_sequences import constants

RATIO_TOL = 1e-10
DEFAULT_STEPS = 50
DEFAULT_BUDGET = 1000
DEFAULT_BISECTION_TOL = 1e-4


class TimeKind(enum.Enum):
    ZERO_MEAN = "zero_mean"
    GENERAL = "general"


@dataclass
class HCReport:
    p: float
    beta: float
    t: float
    worst_ratio: float
    sample_size: int
    seed: int
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = bool(self.worst_ratio <= 1 + RATIO_TOL)


@dataclass
class TimeEstimate:
    """Bisection result; ``t_hat`` is a lower estimate of the optimal time."""

    p: float
    beta: float
    t_hat: float
    theory_lower: float
    theory_upper: float
    witness_lower: float
    kind: TimeKind
    evaluations: int = 0
    note: str = "restricted-class lower estimate"


def recommended_dim(beta: float) -> int:
    """Truncation that keeps the degree-4 basis orthonormal to ~1e-10."""
    return max(32, 8 * math.ceil(5 / beta))


# --- banded arithmetic ------------------------------------------------------
# A band matrix of half-width k is stored row-wise: R[..., i, d + k] = X[i, i + d].


def _to_band(mat: np.ndarray, k: int) -> np.ndarray:
    D = mat.shape[-1]
    R = np.zeros(mat.shape[:-2] + (D, 2 * k + 1), dtype=mat.dtype)
    for d in range(-k, k + 1):
        lo, hi = max(0, -d), min(D, D - d)
        R[..., lo:hi, d + k] = np.diagonal(mat, offset=d, axis1=-2, axis2=-1)
    return R


def _from_band(R: np.ndarray, k: int) -> np.ndarray:
    D = R.shape[-2]
    out = np.zeros(R.shape[:-2] + (D, D), dtype=R.dtype)
    for d in range(-k, k + 1):
        lo, hi = max(0, -d), min(D, D - d)
        rows = np.arange(lo, hi)
        out[..., rows, rows + d] = R[..., lo:hi, d + k]
    return out


def _band_adjoint(R: np.ndarray, k: int) -> np.ndarray:
    """``X*`` in band form: ``X*[i, i+d] = conj(X[i+d, i])``."""
    D = R.shape[-2]
    out = np.zeros_like(R)
    for d in range(-k, k + 1):
        lo, hi = max(0, -d), min(D, D - d)
        out[..., lo:hi, d + k] = np.conj(R[..., lo + d : hi + d, -d + k])
    return out


def _band_matmul(A: np.ndarray, ka: int, B: np.ndarray, kb: int) -> tuple[np.ndarray, int]:
    """Product of band matrices; returns the band of ``A B`` and its half-width."""
    D = A.shape[-2]
    # Bs[..., i, u, v] = B[i + u - ka, v] (zero outside the matrix)
    pad = [(0, 0)] * (B.ndim - 2) + [(ka, ka), (0, 0)]
    Bs = sliding_window_view(np.pad(B, pad), 2 * ka + 1, axis=-2)
    Bs = np.swapaxes(Bs, -1, -2)
    shape = np.broadcast_shapes(A.shape[:-2], B.shape[:-2]) + (D, 2 * (ka + kb) + 1)
    C = np.zeros(shape, dtype=np.result_type(A, B))
    for u in range(2 * ka + 1):
        C[..., u : u + 2 * kb + 1] += A[..., u, None] * Bs[..., u, :]
    kc = ka + kb
    if kc > D - 1:
        C, kc = C[..., kc - (D - 1) : kc + D], D - 1
    return C, kc


def _hermitian_square(R: np.ndarray, k: int) -> tuple[np.ndarray, int]:
    """``X* X`` in band form."""
    return _band_matmul(_band_adjoint(R, k), k, R, k)


def _even_trace_power(R: np.ndarray, k: int, r: int) -> np.ndarray:
    """``Tr (X* X)^r`` for integer ``r >= 1``."""
    H, kh = _hermitian_square(R, k)
    if r == 1:
        return np.real(H[..., kh]).sum(axis=-1)
    half, kk = H, kh
    for _ in range(r // 2 - 1):
        half, kk = _band_matmul(half, kk, H, kh)
    if r % 2 == 0:
        return (np.abs(half) ** 2).sum(axis=(-2, -1))
    B, kb = _band_matmul(half, kk, H, kh)
    # Tr(B A) = sum_ij B_ij conj(A_ij) for Hermitian A; pad A to B's width
    pad = kb - kk
    A = np.pad(half, [(0, 0)] * (half.ndim - 1) + [(pad, pad)])
    return np.real((B * np.conj(A)).sum(axis=(-2, -1)))


def _pnorm_band(R: np.ndarray, k: int, p: float) -> np.ndarray:
    """Schatten p-norms of a stack of band matrices."""
    r = p / 2
    if not math.isinf(p) and r == int(r) and r <= 8:
        tr = np.maximum(_even_trace_power(R, k, int(r)), 0.0)
        return tr ** (1.0 / p)
    H, kh = _hermitian_square(R, k)
    ev = np.maximum(np.linalg.eigvalsh(_from_band(H, kh)), 0.0)
    top = ev[..., -1:]
    safe = np.where(top > 0, top, 1.0)
    if math.isinf(p):
        return np.sqrt(top[..., 0])
    return np.sqrt(top[..., 0]) * ((ev / safe) ** r).sum(axis=-1) ** (1 / p)


# --- single-vector quantities -----------------------------------------------


def _weight(spec: GibbsSpec, p: float) -> np.ndarray:
    return spec.rho_diag(1.0 / (2 * p) - 0.25)


def lp_norm_of_hs(x, p: float, spec: GibbsSpec) -> float:
    """``||T(rho^{1/2} y rho^{1/2})||_{Lp(rho)}`` for ``x = rho^{1/4} y rho^{1/4}``."""
    w = _weight(spec, p)
    m = _as_hs(x)
    return schatten_norm(w[:, None] * m * w[None, :], p)


def zero_mean_project(x, basis: EigenBasis, span_tol: float = 1e-8) -> HSVector:
    """Drop the ``xi_{0,0}`` coefficient of ``x``."""
    coeffs, resid = basis.expand(x)
    scale = float(np.linalg.norm(_as_hs(x)))
    if resid > span_tol * max(scale, 1e-300):
        raise SpanInsufficientError(f"expansion residual {resid:.3g} exceeds {span_tol:g} * ||x||")
    coeffs = coeffs.copy()
    coeffs[basis.keys.index((0, 0))] = 0.0
    return basis.assemble(coeffs)


def contraction_ratio(t: float, p: float, x, spec: GibbsSpec, basis: EigenBasis) -> float:
    """``||T_t x||_{Lp} / ||x||_{L2}`` computed by dense SVD."""
    if p < 2:
        raise DomainError("p must be >= 2")
    denom = float(np.linalg.norm(_as_hs(x)))
    if denom == 0:
        raise DomainError("x must be nonzero")
    evolved, _ = semigroup_apply(t, x, basis)
    return lp_norm_of_hs(evolved, p, spec) / denom


# --- search over the span ---------------------------------------------------


@dataclass
class _SearchSpace:
    """Weighted basis matrices in band form for one ``(basis, p, kind)``."""

    bands: np.ndarray  # (M, D, 2K+1)
    k: int
    lam: np.ndarray
    gram: np.ndarray
    keys: list

    @classmethod
    def build(cls, basis: EigenBasis, p: float, kind: TimeKind) -> "_SearchSpace":
        keys = [k for k in basis.keys if kind is TimeKind.GENERAL or k != (0, 0)]
        idx = [basis.keys.index(k) for k in keys]
        w = _weight(basis.spec, p)
        K = basis.degree_cap
        mats = np.stack([w[:, None] * basis.vectors[k].mat * w[None, :] for k in keys])
        gram = basis._gram[np.ix_(idx, idx)]
        if not np.any(mats.imag):
            mats, gram = mats.real, gram.real
        return cls(_to_band(mats, K), K, basis.eigenvalues[idx], gram, keys)

    def ratios(self, coeffs: np.ndarray, t: float, p: float) -> np.ndarray:
        # factor out the slowest decay so the matrices stay well scaled
        lead = float(self.lam.min()) * t
        decayed = coeffs * np.exp(-(self.lam * t - lead))
        R = np.einsum("bm,mdk->bdk", decayed, self.bands)
        num = _pnorm_band(R, self.k, p) * math.exp(-lead)
        den = np.sqrt(np.maximum(np.real(np.einsum("bm,mn,bn->b", coeffs.conj(), self.gram, coeffs)), 0))
        return num / den


def _draws(budget: int, steps: int, M: int, seed: int, field: str = "real") -> np.ndarray:
    """Gaussian draws of shape ``(budget, steps + 1, M)``; a prefix of samples is seed-stable."""
    rng = np.random.default_rng(seed)
    if field == "real":
        return rng.standard_normal((budget, steps + 1, M))
    if field == "complex":
        z = rng.standard_normal((budget, steps + 1, M, 2))
        return z[..., 0] + 1j * z[..., 1]
    raise DomainError(f"field must be 'real' or 'complex', got {field!r}")


def _search(space: _SearchSpace, t, p, budget, seed, steps, stop_above=None, field="real"):
    """Seeds plus coordinate-ascent refinement; returns (best ratio, coefficients, evals)."""
    M = len(space.keys)
    seeds = np.eye(M)
    r_seed = space.ratios(seeds, t, p)
    best_i = int(np.argmax(r_seed))
    best, best_c, evals = float(r_seed[best_i]), seeds[best_i], M
    if stop_above is not None and best > stop_above:
        return best, best_c, evals
    if budget == 0:
        return best, best_c, evals

    z = _draws(budget, steps, M, seed, field)
    c = z[:, 0, :].copy()
    r = space.ratios(c, t, p)
    evals += budget
    for s in range(1, steps + 1):
        if stop_above is not None and r.max() > stop_above:
            break
        j = (s - 1) % M
        scale = 0.5 * np.linalg.norm(c, axis=1) / math.sqrt(M)
        trial = c.copy()
        trial[:, j] += scale * z[:, s, j]
        rt = space.ratios(trial, t, p)
        evals += budget
        up = rt > r
        c[up], r[up] = trial[up], rt[up]
    i = int(np.argmax(r))
    if r[i] > best:
        best, best_c = float(r[i]), c[i]
    return best, best_c, evals


def sup_ratio(
    t: float,
    p: float,
    spec: GibbsSpec,
    basis: EigenBasis,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    steps: int = DEFAULT_STEPS,
    kind: TimeKind = TimeKind.ZERO_MEAN,
    field: str = "real",
    stop_above: float | None = None,
) -> float:
    """Largest ``||T_t x||_p / ||x||_2`` found over the degree-capped span.

    The single basis vectors are always included, followed by ``budget``
    random coefficient vectors, each refined by ``steps`` rounds of
    coordinate ascent.  ``field`` selects real or complex coefficients; the
    basis matrices are real, so the real span is searched at half the cost.

    With ``stop_above`` set, the search returns as soon as some ratio exceeds
    it.  The value is then only a witness that the sup exceeds the threshold.
    """
    if budget < 0:
        raise DomainError("budget must be nonnegative")
    if p < 2:
        raise DomainError("p must be >= 2")
    if spec != basis.spec:
        raise DomainError("spec does not match the basis")
    space = _SearchSpace.build(basis, p, TimeKind(kind))
    return _search(space, t, p, budget, seed, steps, stop_above=stop_above, field=field)[0]


def check_hypercontractivity(t, p, spec, basis, budget=DEFAULT_BUDGET, seed=0, steps=DEFAULT_STEPS) -> HCReport:
    worst = sup_ratio(t, p, spec, basis, budget, seed, steps)
    return HCReport(p, spec.beta, t, worst, budget, seed)


# --- witness and theory -----------------------------------------------------


def witness_entries(p: float, beta: float, n: np.ndarray) -> np.ndarray:
    """Off-diagonal entries of ``rho^{1/(2p)-1/4} A1* xi_0 rho^{1/(2p)-1/4}``."""
    q = math.exp(-beta)
    pref = math.sqrt(math.sinh(beta / 2)) * ((1 - q) * math.exp(-beta / 2)) ** (1 / p)
    n = np.asarray(n, dtype=float)
    return pref * np.sqrt(n + 1) * np.exp(-n * beta / p)


def witness_norm(p: float, beta: float, rel_tol: float = 1e-13) -> tuple[float, float]:
    """Schatten p-norm of the infinite witness matrix and a bound on the truncation error."""
    if p < 2:
        raise DomainError("p must be >= 2")
    pref = float(witness_entries(p, beta, np.zeros(1))[0])
    r = p / 2
    N = max(64, math.ceil(r / beta) + 2)
    while True:
        a = witness_entries(p, beta, np.arange(N))
        ev = eigvalsh_tridiagonal(np.zeros(N + 1), a)
        head = norm_from_singular_values(np.abs(ev), p)
        # sum_{n>=N} a_n^p = pref^p e^beta sum_{n'>=N+1} n'^r e^{-n' beta}
        log_tail = p * math.log(pref) + beta + log_power_tail_bound(r, beta, N + 1)
        err = 2 * math.exp(log_tail / p)
        if err <= rel_tol * head:
            return head, err
        N = math.ceil(1.5 * N)


def witness_lower_bound(p: float, beta: float, params: OUParams) -> float:
    """Least ``t`` at which the witness stops violating contraction (clamped at 0)."""
    nrm, _ = witness_norm(p, beta)
    return max(0.0, math.log(nrm) / params.tau)


def theory_bounds(p: float, beta: float, kind=TimeKind.ZERO_MEAN) -> tuple[float, float]:
    """Bounds on ``exp(2 tau t_p)`` (zero-mean) or ``exp(2 tau t'_p)`` (general)."""
    kind = TimeKind(kind)
    chain = constants(beta)
    if kind is TimeKind.ZERO_MEAN:
        if p <= 2:
            raise DomainError("the zero-mean bounds need p > 2")
        return chain.c_tilde * (p - 1), chain.C_tilde * (p - 1)
    if p < 2:
        raise DomainError("p must be >= 2")
    return chain.c_tilde * (p - 1), p * chain.c_p(p) ** 2


def contraction_bound(p: float, beta: float) -> float:
    """Intermediate ceiling ``2 c_p^2 = 6 C(beta) p / (1 - e^{-beta})`` on ``exp(2 tau t_p)``."""
    return 2 * constants(beta).c_p(p) ** 2


def certificate_time(p: float, params: OUParams) -> float:
    """``t* = ln(2 c_p^2) / (2 tau)``."""
    return math.log(contraction_bound(p, params.beta)) / (2 * params.tau)


def witness_growth_slope(beta: float, params: OUParams, ps=(4, 8, 16, 32)) -> float:
    """Slope of ``ln exp(2 tau t_w)`` against ``ln(p - 1)``."""
    x = np.log(np.asarray(ps, dtype=float) - 1)
    y = np.array([2 * params.tau * witness_lower_bound(p, beta, params) for p in ps])
    return float(np.polyfit(x, y, 1)[0])


# --- bisection --------------------------------------------------------------


def optimal_time_estimate(
    p: float,
    spec: GibbsSpec,
    basis: EigenBasis,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    tol: float = DEFAULT_BISECTION_TOL,
    kind=TimeKind.ZERO_MEAN,
    steps: int = DEFAULT_STEPS,
    margin: float = 1.0,
    field: str = "real",
) -> TimeEstimate:
    """Least sampled time with ``sup_ratio <= 1``, found by bisection."""
    if tol <= 0:
        raise DomainError("tol must be positive")
    if p < 2:
        raise DomainError("p must be >= 2")
    kind = TimeKind(kind)
    params, beta = basis.params, spec.beta
    tau = params.tau
    chain = constants(beta)
    if kind is TimeKind.ZERO_MEAN:
        ceiling = contraction_bound(p, beta)
        lo_theory = chain.c_tilde * (p - 1) if p > 2 else 1.0
        hi_theory = chain.C_tilde * (p - 1) if p > 2 else ceiling
    else:
        lo_theory, hi_theory = theory_bounds(p, beta, kind)
        ceiling = hi_theory
    theory_lower = max(0.0, math.log(lo_theory) / (2 * tau))
    theory_upper = max(0.0, math.log(hi_theory) / (2 * tau))
    t_w = witness_lower_bound(p, beta, params)

    space = _SearchSpace.build(basis, p, kind)
    evals = 0

    def holds(t):
        nonlocal evals
        r, _, n = _search(space, t, p, budget, seed, steps, stop_above=1 + RATIO_TOL, field=field)
        evals += n
        return r <= 1 + RATIO_TOL

    def estimate(t_hat):
        return TimeEstimate(p, beta, t_hat, theory_lower, theory_upper, t_w, kind, evals)

    if holds(0.0):
        return estimate(0.0)
    lo, hi = 0.0, math.log(ceiling) / (2 * tau) + margin
    if not holds(hi):
        raise BracketError(
            f"sup_ratio exceeds 1 at the top of the bracket t={hi:.6g} (p={p}, beta={beta}); "
            "the sampled class violates the proven ceiling"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if holds(mid):
            hi = mid
        else:
            lo = mid
    return estimate(hi)
