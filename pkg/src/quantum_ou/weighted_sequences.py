"""Off-diagonal coefficient families, the sequences f_{k,n,m} and their norms.

An element ``x in L_k`` splits into bands ``x_m`` (``j - i = m``).  On band
``m`` the coefficients ``c_{i,i+m}`` with ``2i + m <= k``, ``i >= 0`` and
``i + m >= 0`` produce the sequence

    f(n) = sum_i c_{i,i+m} d_{n,i} d_{n+m,i+m},    d_{n,i} = sqrt(n! / (n-i)!)

and the whole argument reduces to comparing weighted l_p and l_2 norms of
``f`` under the weight ``exp(-n beta)``.  The explicit constants of that
comparison are collected in :class:`ConstantChain`.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import DomainError
from .meixner import log_power_tail_bound

EXACT_D_MAX_N = 60


# --- d_{n,i} ----------------------------------------------------------------


def d_coeff(n: int, i: int) -> float:
    """``sqrt(n! / (n - i)!)``; exact integer product up to n = 60, log-Gamma above."""
    if i < 0 or n < 0 or i > n:
        raise DomainError(f"d_(n,i) needs 0 <= i <= n, got n={n}, i={i}")
    if n <= EXACT_D_MAX_N:
        return math.sqrt(math.prod(range(n - i + 1, n + 1)))
    return math.exp(0.5 * (gammaln(n + 1) - gammaln(n - i + 1)))


@functools.lru_cache(maxsize=32)
def _d_table(n_max: int, i_max: int) -> np.ndarray:
    """``d[n, i]`` for ``0 <= n <= n_max``, ``0 <= i <= i_max``; zero where i > n."""
    n = np.arange(n_max + 1)[:, None]
    i = np.arange(i_max + 1)[None, :]
    valid = i <= n
    logd = 0.5 * (gammaln(n + 1) - gammaln(np.where(valid, n - i, 0) + 1))
    table = np.where(valid, np.exp(logd), 0.0)
    # exact path on the small corner
    for nn in range(min(n_max, EXACT_D_MAX_N) + 1):
        for ii in range(min(nn, i_max) + 1):
            table[nn, ii] = d_coeff(nn, ii)
    table.setflags(write=False)
    return table


def d_table(n_max: int, i_max: int) -> np.ndarray:
    return _d_table(int(n_max), int(i_max))


# --- coefficient families ---------------------------------------------------


def admissible_indices(k: int, m: int) -> range:
    """Indices ``i`` with ``i >= 0``, ``i + m >= 0`` and ``2i + m <= k``."""
    lo = max(0, -m)
    hi = (k - m) // 2
    return range(lo, hi + 1)


@dataclass(frozen=True)
class OffDiagonalCoeffs:
    """Coefficients ``c_{i,i+m}`` of one band, keyed by ``i``."""

    k: int
    m: int
    c: dict

    def __post_init__(self):
        if self.k < 0 or abs(self.m) > self.k:
            raise DomainError(f"need 0 <= |m| <= k, got k={self.k}, m={self.m}")
        allowed = set(admissible_indices(self.k, self.m))
        bad = set(self.c) - allowed
        if bad:
            raise DomainError(f"indices {sorted(bad)} are outside the admissible set {sorted(allowed)}")
        full = {i: complex(self.c.get(i, 0.0)) for i in sorted(allowed)}
        object.__setattr__(self, "c", full)

    @classmethod
    def random(cls, k: int, m: int, rng: np.random.Generator) -> "OffDiagonalCoeffs":
        idx = admissible_indices(k, m)
        z = rng.standard_normal(len(idx)) + 1j * rng.standard_normal(len(idx))
        return cls(k, m, dict(zip(idx, z)))

    @property
    def indices(self) -> list[int]:
        return list(self.c)

    @property
    def values(self) -> np.ndarray:
        return np.array(list(self.c.values()), dtype=complex)

    @property
    def l1(self) -> float:
        return float(np.abs(self.values).sum())


@dataclass(frozen=True)
class SequenceF:
    """Values ``f(0..N-1)``; ``coeffs`` (if known) lets norms extend the sequence."""

    k: int
    m: int
    values: np.ndarray
    coeffs: OffDiagonalCoeffs | None = None

    @property
    def N(self) -> int:
        return len(self.values)


def f_values(coeffs: OffDiagonalCoeffs, n: np.ndarray) -> np.ndarray:
    """Vectorised ``f(n)``; zero wherever ``n + m < 0``."""
    n = np.asarray(n, dtype=int)
    m = coeffs.m
    out = np.zeros(n.shape, dtype=complex)
    if n.size == 0:
        return out
    need_n = int(n.max()) + max(m, 0)
    need_i = max(coeffs.indices) + max(m, 0)
    table = d_table(1 << max(6, need_n.bit_length()), max(16, need_i))
    for i, ci in coeffs.c.items():
        if ci == 0:
            continue
        ok = (n >= i) & (n + m >= 0)
        nn = n[ok]
        out[ok] += ci * table[nn, i] * table[nn + m, i + m]
    return out


def eval_f(coeffs: OffDiagonalCoeffs, n_max: int) -> SequenceF:
    vals = f_values(coeffs, np.arange(n_max + 1))
    return SequenceF(coeffs.k, coeffs.m, vals, coeffs)


# --- structure maps ---------------------------------------------------------


class TransformMode(enum.Enum):
    FACTOR_OUT = "factor_out"
    SHIFT_UP = "shift_up"
    NEGATIVE_MIRROR = "negative_mirror"


def transform(coeffs: OffDiagonalCoeffs, mode) -> OffDiagonalCoeffs:
    """Coefficients of the companion sequence ``g`` for the three structure maps.

    * ``FACTOR_OUT``: f in F_{k,m}, m >= 1 -> g in F_{k-1,m-1} with
      ``f(n) = sqrt(n + m) g(n)``.
    * ``SHIFT_UP``: f in F_{k,m}, m >= 1 -> g in F_{k+1,m-1} with
      ``sqrt(n + 1) f(n) = g(n + 1)`` and ``g(0) = 0``.
    * ``NEGATIVE_MIRROR``: f in F_{k,m}, m < 0 -> g in F_{k,-m} with
      ``f(n) = g(n + m)`` for ``n >= -m`` and ``f(n) = 0`` below.
    """
    mode = mode if isinstance(mode, TransformMode) else TransformMode(mode)
    k, m = coeffs.k, coeffs.m
    if mode is TransformMode.FACTOR_OUT:
        if m < 1:
            raise DomainError(f"FACTOR_OUT needs m >= 1, got m={m}")
        return OffDiagonalCoeffs(k - 1, m - 1, dict(coeffs.c))
    if mode is TransformMode.SHIFT_UP:
        if m < 1:
            raise DomainError(f"SHIFT_UP needs m >= 1, got m={m}")
        return OffDiagonalCoeffs(k + 1, m - 1, {i + 1: c for i, c in coeffs.c.items()})
    if m >= 0:
        raise DomainError(f"NEGATIVE_MIRROR needs m < 0, got m={m}")
    return OffDiagonalCoeffs(k, -m, {i + m: c for i, c in coeffs.c.items()})


def structure_residual(coeffs: OffDiagonalCoeffs, mode, n_max: int = 200) -> float:
    """Max relative violation of the pointwise identity linking f and g.

    The residual at each ``n`` is scaled by ``sum_i |c_i| d d``, the magnitude
    the identity is computed from.
    """
    mode = mode if isinstance(mode, TransformMode) else TransformMode(mode)
    g = transform(coeffs, mode)
    m = coeffs.m
    n = np.arange(n_max + 1)
    f = f_values(coeffs, n)
    scale = f_values(OffDiagonalCoeffs(coeffs.k, m, {i: abs(c) for i, c in coeffs.c.items()}), n).real
    if mode is TransformMode.FACTOR_OUT:
        lhs, rhs = f, np.sqrt(n + m) * f_values(g, n)
    elif mode is TransformMode.SHIFT_UP:
        lhs, rhs = np.sqrt(n + 1) * f, f_values(g, n + 1)
        scale = np.sqrt(n + 1) * scale
        if abs(f_values(g, np.array([0]))[0]) != 0:
            return math.inf
    else:
        lhs = f
        rhs = np.where(n >= -m, f_values(g, np.maximum(n + m, 0)), 0)
    denom = np.where(scale > 0, scale, 1.0)
    return float(np.max(np.abs(lhs - rhs) / denom))


# --- weighted norms ---------------------------------------------------------


def _log_weighted_sum(values: np.ndarray, p: float, beta: float, start: int = 0) -> float:
    """``log sum_n exp(-n beta) |values[n]|^p`` computed without overflow."""
    a = np.abs(values)
    nz = a > 0
    if not np.any(nz):
        return -math.inf
    n = np.arange(start, start + len(values))[nz]
    lt = -beta * n + p * np.log(a[nz])
    top = lt.max()
    return float(top + math.log(math.fsum(np.exp(lt - top))))


def weighted_lp_function(
    fn: Callable[[np.ndarray], np.ndarray],
    p: float,
    beta: float,
    scale: float,
    degree: float,
    shift: float = 1.0,
    rel_tol: float = 1e-13,
) -> float:
    """``(sum_n exp(-n beta) |fn(n)|^p)^(1/p)`` with a certified tail.

    Requires the growth bound ``|fn(n)| <= scale * (n + shift)^degree`` for
    every ``n >= 0`` (``shift`` a nonnegative integer).
    """
    if p < 1:
        raise DomainError("p must be >= 1")
    if scale == 0:
        return 0.0
    r = p * degree
    N = max(32, math.ceil(r / beta) + 2)
    while True:
        log_head = _log_weighted_sum(fn(np.arange(N)), p, beta)
        # sum_{n>=N} w(n) (n+shift)^r = e^{shift beta} sum_{n'>=N+shift} w(n') n'^r
        log_tail = p * math.log(scale) + shift * beta + log_power_tail_bound(r, beta, N + int(shift))
        if log_head > -math.inf and log_tail <= math.log(rel_tol) + log_head:
            return math.exp(log_head / p)
        if log_head == -math.inf and N > 4 * r / beta + 64:
            return 0.0
        N = math.ceil(1.5 * N)


def weighted_lp_norm(seq: SequenceF, p: float, beta: float, rel_tol: float = 1e-13) -> float:
    """Weighted ``l_p`` norm of ``f`` against ``exp(-n beta)``.

    When the generating coefficients are attached, the sequence is extended
    internally until the tail bound ``|f(n)| <= ||c||_1 (n + k)^(k/2)`` certifies
    ``rel_tol``; otherwise the finite sequence itself is summed.
    """
    if p < 1:
        raise DomainError("p must be >= 1")
    if seq.coeffs is None:
        return math.exp(_log_weighted_sum(np.asarray(seq.values), p, beta) / p)
    c = seq.coeffs
    return weighted_lp_function(
        lambda n: f_values(c, n), p, beta, c.l1, c.k / 2, shift=max(c.k, 1), rel_tol=rel_tol
    )


def weighted_norm_grid(
    coeffs: OffDiagonalCoeffs, ps: Sequence[float], betas: Sequence[float], rel_tol: float = 1e-13
) -> np.ndarray:
    """Weighted ``l_p`` norms of one sequence for every ``(beta, p)`` pair.

    Returns an array of shape ``(len(betas), len(ps))``.  The sequence is
    evaluated once on a common grid long enough to certify every tail.
    """
    scale, degree, shift = coeffs.l1, coeffs.k / 2, max(coeffs.k, 1)
    if scale == 0:
        return np.zeros((len(betas), len(ps)))
    pv = np.asarray(ps, dtype=float)[None, :, None]
    bv = np.asarray(betas, dtype=float)[:, None, None]
    r_max = max(ps) * degree
    # past n ~ 2 r / beta the terms fall off fast enough that one pass usually certifies
    N = max(64, math.ceil((2 * r_max + 40) / min(betas)))
    while True:
        a = np.abs(f_values(coeffs, np.arange(N)))
        nz = a > 0
        n, log_a = np.nonzero(nz)[0], np.log(a[nz])
        # every summand is positive, so a plain logsumexp keeps full relative accuracy
        log_head = logsumexp(-bv * n + pv * log_a, axis=2)
        log_tail = np.array(
            [
                [p * math.log(scale) + shift * b + log_power_tail_bound(p * degree, b, N + shift) for p in ps]
                for b in betas
            ]
        )
        if np.all(log_tail <= math.log(rel_tol) + log_head):
            return np.exp(log_head / np.asarray(ps, dtype=float)[None, :])
        N = math.ceil(1.5 * N)


# --- constants --------------------------------------------------------------


@dataclass(frozen=True)
class ConstantChain:
    """Explicit constants as defined in the proofs (no tightening)."""

    beta: float
    C1: float
    C2: float
    C3: float
    C4: float
    C5: float
    C_of_beta: float
    c_tilde: float
    C_tilde: float

    def C_p(self, p: float) -> float:
        return math.sqrt(self.C_of_beta * p)

    def c_p(self, p: float) -> float:
        return math.sqrt(3.0 / -math.expm1(-self.beta)) * self.C_p(p)


def constants(beta: float) -> ConstantChain:
    if not beta > 0:
        raise DomainError("beta must be positive")
    e = math.e
    one_minus_q = -math.expm1(-beta)
    C2 = (1 / one_minus_q + e * (1 + 1 / beta)) * (e + 1 / beta)
    C1 = math.exp(beta / 2) * C2
    C4 = 2 * math.exp(2 * beta + 2) / one_minus_q + 16 * math.exp(2 * beta + 2) * (
        beta**-3 + beta**-2
    ) * max(1.0, beta**-2)
    C5 = (4 * C1) ** 2 * (C4 + 3)
    C3 = C1 * C5
    C = 4 * math.exp(1.5 * beta) * C3
    c_tilde = min(beta**-2, beta**-1) / (36 * e)
    C_tilde = 24 / one_minus_q * C
    return ConstantChain(beta, C1, C2, C3, C4, C5, C, c_tilde, C_tilde)


# --- inequality checks ------------------------------------------------------


def band_prefactor(m: int, p: float, beta: float) -> float:
    """``exp(m beta (1/(2p) - 1/4))``."""
    return math.exp(m * beta * (1 / (2 * p) - 0.25))


def main_lemma_check(coeffs: OffDiagonalCoeffs, p: float, beta: float) -> tuple[float, float, bool]:
    """lp-vs-l2 comparison of f with the constant ``(C(beta) p)^(k/2)``."""
    if p < 2:
        raise DomainError("p must be >= 2")
    seq = SequenceF(coeffs.k, coeffs.m, np.empty(0), coeffs)
    lhs = weighted_lp_norm(seq, p, beta)
    l2 = weighted_lp_norm(seq, 2, beta)
    C = constants(beta).C_of_beta
    rhs = band_prefactor(coeffs.m, p, beta) * (C * p) ** (coeffs.k / 2) * l2
    return lhs, rhs, lhs <= rhs


def induction_check(coeffs: OffDiagonalCoeffs, p: float, beta: float) -> tuple[float, float, bool]:
    """The band-wise intermediate bound ``(2 e^{beta/2})^m (C3 p)^{k/2}`` for m >= 0."""
    if coeffs.m < 0:
        raise DomainError("the intermediate bound covers m >= 0 only")
    seq = SequenceF(coeffs.k, coeffs.m, np.empty(0), coeffs)
    lhs = weighted_lp_norm(seq, p, beta)
    l2 = weighted_lp_norm(seq, 2, beta)
    C3 = constants(beta).C3
    rhs = (2 * math.exp(beta / 2)) ** coeffs.m * (C3 * p) ** (coeffs.k / 2) * l2
    return lhs, rhs, lhs <= rhs


def j1_condition(m: int, l: int, p: float, beta: float) -> tuple[float, float, bool]:
    """Unstated step of the induction: ``sqrt(m) e^{(m-1) beta (1/2-1/p)} <= (2e^{beta/2})^m (C3 p)^{l/2}``."""
    lhs = math.sqrt(m) * math.exp((m - 1) * beta * (0.5 - 1 / p))
    rhs = (2 * math.exp(beta / 2)) ** m * (constants(beta).C3 * p) ** (l / 2)
    return lhs, rhs, lhs <= rhs


class PolyMode(enum.Enum):
    PLAIN = "plain"
    SQRT_WEIGHTED = "sqrt_weighted"


def poly_lemma_check(
    poly_coeffs: Sequence[complex], p: float, beta: float, mode=PolyMode.PLAIN
) -> tuple[float, float, bool]:
    """Polynomial cases of the comparison.

    ``poly_coeffs[j]`` multiplies ``n**j``.  ``PLAIN`` compares ``p_k(n)`` with
    constant ``(C1 p)^k``; ``SQRT_WEIGHTED`` compares ``sqrt(n+1) p_k(n)`` with
    ``(C3 p)^{(2k+1)/2}``.
    """
    if p < 2:
        raise DomainError("p must be >= 2")
    mode = mode if isinstance(mode, PolyMode) else PolyMode(mode)
    coeffs = np.asarray(poly_coeffs, dtype=complex)
    k = len(coeffs) - 1
    chain = constants(beta)

    def poly(n):
        n = np.asarray(n, dtype=float)
        return np.polynomial.polynomial.polyval(n, coeffs)

    scale = float(np.abs(coeffs).sum())
    if mode is PolyMode.PLAIN:
        fn, degree, const = poly, k, (chain.C1 * p) ** k
    else:
        fn = lambda n: np.sqrt(np.asarray(n, dtype=float) + 1) * poly(n)  # noqa: E731
        degree, const = k + 0.5, (chain.C3 * p) ** ((2 * k + 1) / 2)
    lhs = weighted_lp_function(fn, p, beta, scale, degree)
    l2 = weighted_lp_function(fn, 2, beta, scale, degree)
    rhs = const * l2
    return lhs, rhs, lhs <= rhs
