"""Meixner polynomials for the geometric weight ``w(n) = exp(-n beta)``.

    L_k(n) = exp(-k beta) * sum_j (-1)^j (e^beta - 1)^j C(k, j) C(n, j)

The polynomials are evaluated from this explicit alternating sum.  In double
precision the sum cancels badly once ``k`` grows, so degrees above 12 must use
the extended (mpmath, >= 50 digit) path.

Infinite weighted sums are truncated at a point ``N`` chosen from a certified
upper bound on the tail, never from a heuristic convergence test.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import mpmath
import numpy as np
from scipy.special import gammaincc, gammaln

from .errors import DomainError, PrecisionModeError

EXTENDED_DPS = 50
DOUBLE_MAX_DEGREE = 12
EXACT_BINOM_MAX_N = 60


class PrecisionMode(enum.Enum):
    DOUBLE = "double"
    EXTENDED = "extended"


class BoundKind(enum.Enum):
    GAMMA_SANDWICH = "gamma_sandwich"
    POWER_SUM_SANDWICH = "power_sum_sandwich"
    MEIXNER_POINTWISE = "meixner_pointwise"


@dataclass
class BoundReport:
    """Outcome of checking an inequality over a parameter grid.

    Slacks are relative: log-ratios for the two-sided sandwiches and
    ``(upper - |value|) / upper`` for the pointwise bound.  Strict inequalities
    pass only with positive slack; non-strict ones also accept zero.
    """

    kind: BoundKind
    grid: list[dict]
    slacks: list[float]
    worst_slack: float
    passed: bool
    strict: bool
    worst_point: dict = field(default_factory=dict)


def _mode(mode) -> PrecisionMode:
    return mode if isinstance(mode, PrecisionMode) else PrecisionMode(str(mode).lower())


def binom(n: int, j: int) -> float:
    """``C(n, j)`` as a float: exact below n = 60, via log-Gamma above."""
    if j < 0 or j > n:
        return 0.0
    if n <= EXACT_BINOM_MAX_N:
        return float(math.comb(n, j))
    return math.exp(gammaln(n + 1) - gammaln(j + 1) - gammaln(n - j + 1))


def eval_L(k: int, n: int, beta: float, mode=PrecisionMode.DOUBLE) -> float:
    if k < 0 or n < 0:
        raise DomainError("k and n must be nonnegative")
    if beta <= 0:
        raise DomainError("beta must be positive")
    mode = _mode(mode)
    if mode is PrecisionMode.DOUBLE:
        if k > DOUBLE_MAX_DEGREE:
            raise PrecisionModeError(
                f"double precision is only admissible for k <= {DOUBLE_MAX_DEGREE}, got k={k}"
            )
        em1 = math.expm1(beta)
        total = 0.0
        for j in range(min(k, n) + 1):
            total += (-1) ** j * em1**j * math.comb(k, j) * binom(n, j)
        return math.exp(-k * beta) * total
    return float(_eval_L_mp(k, n, beta))


def _eval_L_mp(k: int, n: int, beta: float) -> mpmath.mpf:
    with mpmath.workdps(EXTENDED_DPS):
        b = mpmath.mpf(beta)
        em1 = mpmath.expm1(b)
        total = mpmath.mpf(0)
        for j in range(min(k, n) + 1):
            total += (-1) ** j * em1**j * math.comb(k, j) * math.comb(n, j)
        return mpmath.exp(-k * b) * total


_L_CACHE: dict[tuple[int, float], list] = {}


def _L_column(k: int, beta: float, N: int) -> list:
    """Extended-precision values ``L_k(0..N-1)``, memoised per ``(k, beta)``."""
    col = _L_CACHE.setdefault((k, float(beta)), [])
    for n in range(len(col), N):
        col.append(_eval_L_mp(k, n, beta))
    return col[:N]


def log_power_tail_bound(r: float, beta: float, N: int) -> float:
    """Log of an upper bound on ``sum_{n >= N} exp(-n beta) n^r``.

    Valid for ``N >= max(1, r / beta)``, where ``h(x) = exp(-beta x) x^r`` is
    decreasing, so the tail is at most ``h(N) + int_N^inf h``.
    """
    if N < max(1.0, r / beta):
        raise DomainError(f"tail bound needs N >= max(1, r/beta) = {max(1.0, r / beta)}, got {N}")
    log_peak = -beta * N + r * math.log(N)
    upper_reg = gammaincc(r + 1, beta * N)
    if upper_reg <= 0.0:
        return log_peak
    log_int = gammaln(r + 1) - (r + 1) * math.log(beta) + math.log(upper_reg)
    return float(np.logaddexp(log_peak, log_int))


def _first_tail_index(r: float, beta: float, floor: int = 1) -> int:
    return max(floor, 1, math.ceil(r / beta) + 1)


def orthogonality_sum(m: int, l: int, beta: float, rel_tol: float = 1e-12) -> float:
    """``sum_n exp(-n beta) L_m(n) L_l(n)`` with a certified tail.

    ``N`` grows until the tail majorant ``sum_{n>=N} w(n) n^{m+l} / (m! l!)``
    is below ``rel_tol`` times ``sum_{n<N} w(n) |L_m(n) L_l(n)|``.  Summation is
    carried out in extended precision since the terms cancel heavily.
    """
    if rel_tol <= 0:
        raise DomainError("rel_tol must be positive")
    if beta <= 0:
        raise DomainError("beta must be positive")
    r = m + l
    log_fact = math.lgamma(m + 1) + math.lgamma(l + 1)
    N = _first_tail_index(r, beta, floor=max(m, l) + 1)
    with mpmath.workdps(EXTENDED_DPS):
        q = mpmath.exp(-mpmath.mpf(beta))
        for _ in range(64):
            Lm, Ll = _L_column(m, beta, N), _L_column(l, beta, N)
            total = mpmath.mpf(0)
            scale = mpmath.mpf(0)
            w = mpmath.mpf(1)
            for a, b in zip(Lm, Ll):
                term = w * a * b
                total += term
                scale += abs(term)
                w *= q
            log_tail = log_power_tail_bound(r, beta, N) - log_fact
            if log_tail <= math.log(rel_tol) + float(mpmath.log(scale)):
                return float(total)
            N = math.ceil(1.5 * N)
    raise RuntimeError("orthogonality sum failed to reach the requested tail tolerance")


def orthogonality_target(m: int, l: int, beta: float) -> float:
    """Closed-form value ``delta_{ml} exp(-m beta) / (1 - exp(-beta))``."""
    return math.exp(-m * beta) / -math.expm1(-beta) if m == l else 0.0


def weighted_power_sum(s: float, beta: float, rel_tol: float = 1e-14) -> float:
    """``sum_{n >= 0} exp(-n beta) n^s`` (with ``0^0 = 1``)."""
    if s < 0:
        raise DomainError("s must be nonnegative")
    if beta <= 0 or rel_tol <= 0:
        raise DomainError("beta and rel_tol must be positive")
    N = _first_tail_index(s, beta)
    while True:
        n = np.arange(1, N, dtype=float)
        terms = np.exp(-beta * n + s * np.log(n))
        head = 1.0 if s == 0 else 0.0
        partial = math.fsum(np.sort(np.append(terms, head))[::-1])
        if log_power_tail_bound(s, beta, N) <= math.log(rel_tol) + math.log(partial):
            return partial
        N = math.ceil(1.5 * N)


# --- the three inequalities ------------------------------------------------


def _log_stirling_core(s: float) -> float:
    """``log((s/e)^s)``."""
    return s * (math.log(s) - 1.0)


def gamma_sandwich(s: float) -> tuple[float, float, float]:
    """Logs of (lower, Gamma(1+s), upper) in the two-sided Stirling bound."""
    core = _log_stirling_core(s)
    lower = 0.5 * math.log(2 * math.pi * s) + core
    upper = 1.0 + 0.5 * math.log(s) + core
    return lower, math.lgamma(1 + s), upper


def power_sum_sandwich(s: float, beta: float) -> tuple[float, float, float]:
    """Logs of (lower, sum exp(-n beta) n^s, upper)."""
    core = _log_stirling_core(s) - (s + 1) * math.log(beta)
    lower = -beta + 0.5 * math.log(math.pi * s / 2) + core
    upper = 1.0 + math.log1p(beta) + 0.5 * math.log(s) + core
    return lower, math.log(weighted_power_sum(s, beta)), upper


def meixner_pointwise(k: int, n: int, beta: float) -> tuple[float, float]:
    """(|L_k(n)|, max(n^k, k^k) / k!) for the pointwise bound."""
    mode = PrecisionMode.DOUBLE if k <= DOUBLE_MAX_DEGREE else PrecisionMode.EXTENDED
    value = abs(eval_L(k, n, beta, mode))
    bound = max(float(n) ** k, float(k) ** k) / math.factorial(k)
    return value, bound


def verify_bounds(kind, params: Mapping[str, Sequence]) -> BoundReport:
    """Evaluate one of the bounds over the Cartesian grid spanned by ``params``.

    ``GAMMA_SANDWICH`` needs axis ``s``; ``POWER_SUM_SANDWICH`` needs ``s`` and
    ``beta``; ``MEIXNER_POINTWISE`` needs ``k``, ``n`` and ``beta``.
    """
    kind = kind if isinstance(kind, BoundKind) else BoundKind(kind)
    axes = {
        BoundKind.GAMMA_SANDWICH: ("s",),
        BoundKind.POWER_SUM_SANDWICH: ("s", "beta"),
        BoundKind.MEIXNER_POINTWISE: ("k", "n", "beta"),
    }[kind]
    missing = [a for a in axes if a not in params]
    if missing:
        raise DomainError(f"{kind.value} needs grid axes {axes}, missing {missing}")
    grid = [dict(zip(axes, pt)) for pt in itertools.product(*(params[a] for a in axes))]
    if not grid:
        raise DomainError("empty grid")

    slacks = []
    for pt in grid:
        if kind is BoundKind.MEIXNER_POINTWISE:
            value, bound = meixner_pointwise(int(pt["k"]), int(pt["n"]), float(pt["beta"]))
            slacks.append((bound - value) / bound)
            continue
        if pt["s"] < 1:
            raise DomainError(f"the sandwich bounds need s >= 1, got s={pt['s']}")
        if kind is BoundKind.GAMMA_SANDWICH:
            lo, val, hi = gamma_sandwich(float(pt["s"]))
        else:
            lo, val, hi = power_sum_sandwich(float(pt["s"]), float(pt["beta"]))
        slacks.append(min(hi - val, val - lo))

    i = int(np.argmin(slacks))
    worst = float(slacks[i])
    strict = kind is BoundKind.GAMMA_SANDWICH
    passed = worst > 0 if strict else worst >= 0
    return BoundReport(kind, grid, [float(x) for x in slacks], worst, passed, strict, grid[i])
