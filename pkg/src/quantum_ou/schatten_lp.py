"""Schatten p-norms and the Kosaki L_p(rho) norms of the Gibbs state."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, DomainError
from .fock_space import GibbsSpec, as_matrix, build_ladder, expect
from .weighted_sequences import SequenceF, weighted_lp_norm


@dataclass(frozen=True)
class SingularSpectrum:
    values: np.ndarray
    source_dim: int

    @classmethod
    def of(cls, x) -> "SingularSpectrum":
        m = as_matrix(x)
        return cls(np.linalg.svd(m, compute_uv=False), m.shape[0])


def norm_from_singular_values(sv: np.ndarray, p: float) -> float:
    """``(sum s_i^p)^(1/p)``, scaled by the largest value to avoid overflow."""
    if p < 1:
        raise DomainError(f"Schatten norms need p >= 1, got {p}")
    sv = np.abs(np.asarray(sv, dtype=float))
    top = sv.max(initial=0.0)
    if top == 0.0:
        return 0.0
    if math.isinf(p):
        return float(top)
    return float(top * math.fsum((sv / top) ** p) ** (1.0 / p))


def schatten_norm(x, p: float) -> float:
    """Schatten p-norm from a full SVD; ``p = inf`` gives the operator norm."""
    if p < 1:
        raise DomainError(f"Schatten norms need p >= 1, got {p}")
    return norm_from_singular_values(SingularSpectrum.of(x).values, p)


def weighted(x, spec: GibbsSpec, s: float) -> np.ndarray:
    """``rho^s x rho^s`` with the power taken entrywise on the diagonal."""
    m = as_matrix(x)
    if m.shape != (spec.dim, spec.dim):
        raise DimensionMismatchError(f"operator has shape {m.shape}, spec.dim={spec.dim}")
    r = spec.rho_diag(s)
    return r[:, None] * m * r[None, :]


def kosaki_norm(x, p: float, spec: GibbsSpec) -> float:
    """``||rho^(1/2) x rho^(1/2)||_{L_p(rho)} = ||rho^(1/2p) x rho^(1/2p)||_p``."""
    if p < 1:
        raise DomainError(f"p must be >= 1, got {p}")
    s = 0.0 if math.isinf(p) else 1.0 / (2.0 * p)
    return schatten_norm(weighted(x, spec, s), p)


def symmetric_band(a_seq) -> np.ndarray:
    """``sum_n a_n (e_n (x) e_{n+1} + e_{n+1} (x) e_n)`` on dimension ``len + 1``."""
    a = np.asarray(a_seq, dtype=complex)
    return np.diag(a, 1) + np.diag(a, -1)


def sandwich_check(a_seq, p: float) -> tuple[float, float, float, bool]:
    """Two-sided comparison of ``||A||_p`` with ``||a||_p`` for a symmetric band."""
    a = np.asarray(a_seq, dtype=complex)
    mid = schatten_norm(symmetric_band(a), p)
    ap = norm_from_singular_values(np.abs(a), p) if a.size else 0.0
    lower = 2 ** (1 / p) / 3 * ap
    upper = 2 * ap
    tol = 1e-12 * max(upper, 1e-300)
    return lower, mid, upper, bool(lower <= mid + tol and mid <= upper + tol)


def bcl_check(y, p: float, spec: GibbsSpec, atol: float = 1e-10) -> tuple[float, float, bool]:
    """Convexity inequality ``||y||^2 <= |w(y)|^2 + (p-1) ||y - w(y)||^2`` in L_p(rho)."""
    if p < 2:
        raise DomainError("p must be >= 2")
    if not spec.renormalize:
        raise DomainError("the convexity check needs a normalised state (renormalize=True)")
    m = as_matrix(y)
    w = expect(m, spec)
    lhs = kosaki_norm(m, p, spec) ** 2
    centred = m - w * np.eye(spec.dim)
    rhs = abs(w) ** 2 + (p - 1) * kosaki_norm(centred, p, spec) ** 2
    return lhs, rhs, bool(lhs <= rhs + atol)


def band_element(coeffs, spec: GibbsSpec) -> np.ndarray:
    """``x_m = sum_i c_{i,i+m} (a*)^i a^{i+m} xi_0`` built from truncated ladder powers.

    Lowering first and raising second never reaches outside the corner, so the
    result is the exact operator restricted to ``span{e_0, ..., e_{D-1}}``.
    """
    a, ad = (as_matrix(op) for op in build_ladder(spec.dim))
    xi0 = np.diag(spec.rho_diag(0.5)).astype(complex)
    out = np.zeros((spec.dim, spec.dim), dtype=complex)
    for i, c in coeffs.c.items():
        j = i + coeffs.m
        out += c * np.linalg.matrix_power(ad, i) @ np.linalg.matrix_power(a, j) @ xi0
    return out


def band_norm_svd(coeffs, p: float, spec: GibbsSpec) -> float:
    """``||rho^{1/(2p)-1/4} x_m rho^{1/(2p)-1/4}||_p`` by dense SVD."""
    return schatten_norm(weighted(band_element(coeffs, spec), spec, 1 / (2 * p) - 0.25), p)


def band_norm_formula(coeffs, p: float, beta: float) -> float:
    """The same norm from the weighted sequence: ``(1-q)^{1/p} e^{-m beta (1/(2p)+1/4)} ||f||_{p,beta}``."""
    seq = SequenceF(coeffs.k, coeffs.m, np.empty(0), coeffs)
    pref = (-math.expm1(-beta)) ** (1 / p) * math.exp(-coeffs.m * beta * (1 / (2 * p) + 0.25))
    return pref * weighted_lp_norm(seq, p, beta)
