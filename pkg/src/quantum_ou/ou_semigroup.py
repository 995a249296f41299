"""Quantum Ornstein-Uhlenbeck semigroup on truncated Hilbert-Schmidt space.

Vectors are ``D x D`` matrices with inner product ``Tr(x* y)``.  Left
multiplication by ``x`` is written ``x``; ``j(x)`` is right multiplication by
``x*``.  The generator is available in two realisations:

* ``"algebra"``: ``G(A)`` acting on operators, so ``G(I) = 0``;
* ``"l2"``: the symmetric embedding ``v -> rho^{1/4} G(rho^{-1/4} v rho^{-1/4}) rho^{1/4}``,
  whose eigenvectors are the ``xi_{m,n}``.

The ``"l2"`` form is evaluated without inverse powers of ``rho`` by
conjugating the ladder operators, which is exact even after truncation.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import (
    DimensionMismatchError,
    DomainError,
    InfeasibleParametersError,
    SpanInsufficientError,
    TruncationTooSmallError,
)
from .fock_space import GibbsSpec, as_matrix

CONSTRAINT_TOL = 1e-12
GRAM_CORRECTION_THRESHOLD = 1e-10


# --- parameters -------------------------------------------------------------


@dataclass(frozen=True)
class CanonicalCFL:
    """``alpha1 = -alpha2``, ``alpha3 = 1``."""


@dataclass(frozen=True)
class General:
    alpha2: float
    alpha3: float


Branch = Union[CanonicalCFL, General]


@dataclass(frozen=True)
class OUParams:
    alpha1: float
    alpha2: float
    alpha3: float
    beta: float

    @property
    def gamma(self) -> float:
        return 1.0 / (1.0 + self.alpha2**2)

    @property
    def tau1(self) -> float:
        return -2.0 * self.gamma * self.alpha1

    @property
    def tau2(self) -> float:
        return 2.0 * self.gamma * self.alpha2 * self.alpha3

    @property
    def tau(self) -> float:
        return min(self.tau1, self.tau2)

    def residuals(self) -> tuple[float, float]:
        b = self.beta / 2
        a1, a2, a3 = self.alpha1, self.alpha2, self.alpha3
        r1 = 0.5 * (1 + a2**2) * math.sinh(b) + a1 * math.cosh(b)
        r2 = 0.5 * (a1**2 + a3**2) * math.sinh(b) - a2 * a3 * math.cosh(b)
        return abs(r1), abs(r2)

    def eigenvalue(self, m: int, n: int) -> float:
        return m * self.tau1 + n * self.tau2


def alpha3_roots(beta: float, alpha2: float) -> tuple[float, float]:
    """Both roots of the second constraint in ``alpha3`` once ``alpha1`` is fixed.

    Raises when they are not real.
    """
    a1 = -0.5 * (1 + alpha2**2) * math.tanh(beta / 2)
    b = alpha2 / math.tanh(beta / 2)
    disc = b * b - a1 * a1
    if disc < 0:
        raise InfeasibleParametersError(f"no real alpha3 for beta={beta}, alpha2={alpha2}")
    r = math.sqrt(disc)
    # the smaller root via the product a1^2 to avoid cancellation
    big = b + math.copysign(r, b) if b != 0 else r
    small = a1 * a1 / big if big != 0 else -r
    return tuple(sorted((small, big)))


def solve_params(beta: float, branch: Branch = CanonicalCFL()) -> OUParams:
    """Parameters satisfying both constraints, with ``tau > 0`` checked."""
    if not (beta > 0 and math.isfinite(beta)):
        raise DomainError(f"beta must be positive, got {beta}")
    if isinstance(branch, CanonicalCFL):
        # root of alpha2^2 - 2 coth(beta/2) alpha2 ... in (0, 1): tanh(beta/4)
        a2 = math.tanh(beta / 4)
        params = OUParams(-a2, a2, 1.0, beta)
    elif isinstance(branch, General):
        a2, a3 = float(branch.alpha2), float(branch.alpha3)
        a1 = -0.5 * (1 + a2**2) * math.tanh(beta / 2)
        params = OUParams(a1, a2, a3, beta)
    else:
        raise DomainError(f"unknown branch {branch!r}")
    r1, r2 = params.residuals()
    if max(r1, r2) > CONSTRAINT_TOL:
        raise InfeasibleParametersError(
            f"constraints violated (residuals {r1:.3g}, {r2:.3g}); see alpha3_roots for admissible alpha3"
        )
    if not params.tau > 0:
        raise InfeasibleParametersError(f"spectral gap tau={params.tau} is not positive")
    return params


# --- Hilbert-Schmidt vectors ------------------------------------------------


@dataclass(frozen=True, eq=False)
class HSVector:
    mat: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(f"expected a square matrix, got shape {m.shape}")
        object.__setattr__(self, "mat", m)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def inner(self, other: "HSVector") -> complex:
        return complex(np.vdot(self.mat, other.mat))

    def norm(self) -> float:
        return float(np.linalg.norm(self.mat))

    def adjoint(self) -> "HSVector":
        """The modular conjugation ``J``."""
        return HSVector(self.mat.conj().T)


def _as_hs(v) -> np.ndarray:
    return v.mat if isinstance(v, HSVector) else as_matrix(v)


@functools.lru_cache(maxsize=16)
def _ladder(dim: int) -> tuple[np.ndarray, np.ndarray]:
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)
    ad = a.T.copy()
    a.setflags(write=False)
    ad.setflags(write=False)
    return a, ad


class Superop(enum.Enum):
    D1 = "D1"
    D2 = "D2"
    D1adj = "D1adj"
    D2adj = "D2adj"
    A1 = "A1"
    A2 = "A2"
    A1adj = "A1adj"
    A2adj = "A2adj"


def _apply_D(which: Superop, v: np.ndarray, beta: float) -> np.ndarray:
    a, ad = _ladder(v.shape[0])
    s = (2 * math.sinh(beta / 2)) ** -0.5
    e = math.exp(beta / 4)
    if which is Superop.D1:
        return s * (e * (a @ v) - (v @ a) / e)
    if which is Superop.D1adj:
        return s * (e * (ad @ v) - (v @ ad) / e)
    if which is Superop.D2:
        return s * ((ad @ v) / e - e * (v @ ad))
    return s * ((a @ v) / e - e * (v @ a))


_A_PARTS = {
    Superop.A1: (Superop.D1, Superop.D2, -1),
    Superop.A2: (Superop.D1, Superop.D2, +1),
    Superop.A1adj: (Superop.D1adj, Superop.D2adj, -1),
    Superop.A2adj: (Superop.D1adj, Superop.D2adj, +1),
}


def apply_superop(which, v, params: OUParams) -> HSVector:
    """Apply one of ``D1, D2, A1, A2`` or their Hilbert-Schmidt adjoints."""
    which = which if isinstance(which, Superop) else Superop(which)
    m = _as_hs(v)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {m.shape}")
    if which in _A_PARTS:
        first, second, sign = _A_PARTS[which]
        out = (_apply_D(first, m, params.beta) + sign * _apply_D(second, m, params.beta)) / math.sqrt(2)
    else:
        out = _apply_D(which, m, params.beta)
    return HSVector(out)


# --- generator --------------------------------------------------------------


def _side_operators(dim: int, beta: float, representation: str):
    """``(P_left, Q_left, P_right, Q_right)`` for the requested realisation."""
    a, ad = _ladder(dim)
    if representation == "algebra":
        aL = aR = a
        adL = adR = ad
    elif representation == "l2":
        e = math.exp(beta / 4)
        aL, adL = e * a, ad / e
        aR, adR = a / e, e * ad
    else:
        raise DomainError(f"representation must be 'l2' or 'algebra', got {representation!r}")
    r2 = math.sqrt(2)
    P = lambda x, y: (x - y) / (r2 * 1j)  # noqa: E731
    Q = lambda x, y: (x + y) / r2  # noqa: E731
    return P(aL, adL), Q(aL, adL), P(aR, adR), Q(aR, adR)


def generator_apply(v, spec: GibbsSpec, params: OUParams, representation: str = "l2") -> HSVector:
    """The four-term generator built from the truncated ``P`` and ``Q``."""
    m = _as_hs(v)
    if m.shape != (spec.dim, spec.dim):
        raise DimensionMismatchError(f"vector has shape {m.shape}, spec.dim={spec.dim}")
    PL, QL, PR, QR = _side_operators(spec.dim, spec.beta, representation)
    g = params.gamma
    a1, a2, a3 = params.alpha1, params.alpha2, params.alpha3

    cP = PL @ m - m @ PR
    cQ = QL @ m - m @ QR
    out = 0.5 * g * (1 + a2**2) * (PL @ cP - cP @ PR)
    out += 0.5 * g * (a1**2 + a3**2) * (QL @ cQ - cQ @ QR)
    out += -1j * g * a1 * (QL @ cP + cP @ QR)
    out += -1j * g * a2 * a3 * (PL @ cQ + cQ @ PR)
    return HSVector(out)


# --- eigenbasis -------------------------------------------------------------


def support_cap(dim: int) -> int:
    """Largest ``m + n`` admitted at dimension ``dim``."""
    return dim // 8


def _xi0(spec: GibbsSpec) -> np.ndarray:
    return np.diag(spec.rho_diag(0.5)).astype(complex)


def _check_support(m: int, n: int, spec: GibbsSpec):
    if m < 0 or n < 0:
        raise DomainError("m and n must be nonnegative")
    if m + n > support_cap(spec.dim):
        raise TruncationTooSmallError(
            f"m + n = {m + n} exceeds the support cap {support_cap(spec.dim)} at dim={spec.dim}"
        )


def build_xi(m: int, n: int, spec: GibbsSpec, params: OUParams) -> HSVector:
    """Normalised ``(A1*)^m (A2*)^n xi_0``; ``meta['raw_norm']`` keeps the norm before scaling."""
    _check_support(m, n, spec)
    v = _xi0(spec)
    for _ in range(n):
        v = apply_superop(Superop.A2adj, v, params).mat
    for _ in range(m):
        v = apply_superop(Superop.A1adj, v, params).mat
    raw = float(np.linalg.norm(v))
    return HSVector(v / raw, {"m": m, "n": n, "raw_norm": raw})


def eigen_residual(m: int, n: int, spec: GibbsSpec, params: OUParams) -> float:
    """``||G xi - (m tau1 + n tau2) xi|| / max(1, m tau1 + n tau2)`` for normalised ``xi_{m,n}``."""
    xi = build_xi(m, n, spec, params)
    lam = params.eigenvalue(m, n)
    res = generator_apply(xi, spec, params).mat - lam * xi.mat
    return float(np.linalg.norm(res)) / max(1.0, lam)


@dataclass
class EigenBasis:
    """Normalised ``xi_{m,n}`` for ``m + n <= degree_cap`` with Gram tracking."""

    spec: GibbsSpec
    params: OUParams
    degree_cap: int
    vectors: dict
    gram_defect: float
    raw_norms: dict
    _gram: np.ndarray = field(repr=False, default=None)
    _stack: np.ndarray = field(repr=False, default=None)

    @classmethod
    def build(cls, spec: GibbsSpec, params: OUParams, degree_cap: int) -> "EigenBasis":
        if degree_cap < 0:
            raise DomainError("degree_cap must be nonnegative")
        _check_support(degree_cap, 0, spec)
        vectors, raw = {}, {}
        v2 = _xi0(spec)
        for n in range(degree_cap + 1):
            if n:
                v2 = apply_superop(Superop.A2adj, v2, params).mat
            v = v2
            for m in range(degree_cap - n + 1):
                if m:
                    v = apply_superop(Superop.A1adj, v, params).mat
                r = float(np.linalg.norm(v))
                raw[(m, n)] = r
                vectors[(m, n)] = HSVector(v / r, {"m": m, "n": n, "raw_norm": r})
        keys = sorted(vectors, key=lambda mn: (mn[0] + mn[1], mn[0]))
        vectors = {k: vectors[k] for k in keys}
        stack = np.stack([vectors[k].mat.ravel() for k in keys], axis=1)
        gram = stack.conj().T @ stack
        defect = float(np.max(np.abs(gram - np.eye(len(keys)))))
        return cls(spec, params, degree_cap, vectors, defect, raw, gram, stack)

    @property
    def keys(self) -> list[tuple[int, int]]:
        return list(self.vectors)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([self.params.eigenvalue(m, n) for m, n in self.vectors])

    @property
    def stack(self) -> np.ndarray:
        """Basis vectors as columns of a ``D^2 x M`` array."""
        return self._stack

    def expand(self, x) -> tuple[np.ndarray, float]:
        """Coefficients of ``x`` in the basis and the norm of what is left over."""
        m = _as_hs(x)
        if m.shape != (self.spec.dim, self.spec.dim):
            raise DimensionMismatchError(f"vector has shape {m.shape}, basis dim={self.spec.dim}")
        rhs = self._stack.conj().T @ m.ravel()
        if self.gram_defect > GRAM_CORRECTION_THRESHOLD:
            coeffs = np.linalg.solve(self._gram, rhs)
        else:
            coeffs = rhs
        resid = float(np.linalg.norm(m.ravel() - self._stack @ coeffs))
        return coeffs, resid

    def assemble(self, coeffs) -> HSVector:
        return HSVector((self._stack @ np.asarray(coeffs, dtype=complex)).reshape(self.spec.dim, self.spec.dim))


def semigroup_apply(
    t: float, x, basis: EigenBasis, span_tol: float = 1e-8
) -> tuple[HSVector, float]:
    """Spectral action ``c_{m,n} -> exp(-t (m tau1 + n tau2)) c_{m,n}``.

    Returns the evolved vector and the expansion residual; raises when that
    residual exceeds ``span_tol`` relative to ``||x||``.
    """
    if t < 0:
        raise DomainError("t must be nonnegative")
    coeffs, resid = basis.expand(x)
    scale = float(np.linalg.norm(_as_hs(x)))
    if resid > span_tol * max(scale, 1e-300):
        raise SpanInsufficientError(f"expansion residual {resid:.3g} exceeds {span_tol:g} * ||x||")
    return basis.assemble(coeffs * np.exp(-t * basis.eigenvalues)), resid


# --- commutation relations --------------------------------------------------


def _probe_family(dim: int, buffer: int, seed: int = 0) -> list[np.ndarray]:
    """Unit-norm random probes supported on ``[0, dim - b)^2`` for every ``b >= buffer``.

    The family for a larger buffer is a subset of the family for a smaller one.
    """
    rng = np.random.default_rng(seed)
    base = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    probes = []
    for b in range(buffer, dim // 2):
        v = np.zeros_like(base)
        k = dim - b
        v[:k, :k] = base[:k, :k]
        probes.append(v / np.linalg.norm(v))
    return probes


def ccr_residual(spec: GibbsSpec, params: OUParams, buffer: int, system: str = "D") -> float:
    """Worst violation of ``[X_i, X_j*] = delta_ij`` and ``[X_i, X_j] = 0`` on interior probes."""
    if not 0 < buffer < spec.dim / 2:
        raise DomainError(f"buffer must lie in (0, dim/2), got {buffer}")
    if system == "D":
        ops = [(Superop.D1, Superop.D1adj), (Superop.D2, Superop.D2adj)]
    elif system == "A":
        ops = [(Superop.A1, Superop.A1adj), (Superop.A2, Superop.A2adj)]
    else:
        raise DomainError(f"system must be 'D' or 'A', got {system!r}")

    def ap(op, v):
        return apply_superop(op, v, params).mat

    worst = 0.0
    for v in _probe_family(spec.dim, buffer):
        for i, (Xi, Xi_adj) in enumerate(ops):
            for j, (Xj, Xj_adj) in enumerate(ops):
                c_adj = ap(Xi, ap(Xj_adj, v)) - ap(Xj_adj, ap(Xi, v))
                if i == j:
                    c_adj = c_adj - v
                c = ap(Xi, ap(Xj, v)) - ap(Xj, ap(Xi, v))
                worst = max(worst, float(np.linalg.norm(c_adj)), float(np.linalg.norm(c)))
    return worst
