"""Truncated Fock-space operators and the Gibbs state.

Everything lives on the corner ``span{e_0, ..., e_{D-1}}`` of l2(N).  Ladder
operators are truncated by dropping the matrix elements that would leave the
corner, so identities such as ``[a, a*] = 1`` hold exactly away from the top
index and fail only on the last row/column.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import DimensionMismatchError, InvalidDimensionError, QOUError


class Label(enum.Enum):
    ANNIHILATION = "annihilation"
    CREATION = "creation"
    NUMBER = "number"
    POSITION = "position"
    MOMENTUM = "momentum"
    DENSITY = "density"
    WEYL = "weyl"
    GENERAL = "general"


@dataclass(frozen=True)
class GibbsSpec:
    """Inverse temperature and truncation dimension of the Gibbs state.

    With ``renormalize=False`` (the default) the truncated density keeps the
    untruncated normalisation ``1 - q`` and has trace ``1 - q**dim``.
    """

    beta: float
    dim: int
    renormalize: bool = False

    def __post_init__(self):
        if not (self.beta > 0 and math.isfinite(self.beta)):
            raise QOUError(f"beta must be positive and finite, got {self.beta}")
        if int(self.dim) != self.dim or self.dim < 2:
            raise InvalidDimensionError(f"dim must be an integer >= 2, got {self.dim}")

    @property
    def q(self) -> float:
        return math.exp(-self.beta)

    @property
    def trace_deficit(self) -> float:
        """``q**dim``, the weight of the Gibbs state lost to truncation."""
        return self.q**self.dim

    def rho_diag(self, s: float = 1.0) -> np.ndarray:
        """Diagonal of ``rho**s`` (entrywise power of the diagonal density)."""
        n = np.arange(self.dim)
        log_norm = math.log1p(-self.q)
        if self.renormalize:
            log_norm -= math.log1p(-self.trace_deficit)
        return np.exp(s * (log_norm - self.beta * n))


@dataclass(frozen=True, eq=False)
class FockOperator:
    """Dense ``dim x dim`` matrix tagged with the role it plays."""

    entries: np.ndarray
    label: Label = Label.GENERAL
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidDimensionError(f"expected a square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise QOUError("operator entries must be finite")
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    @property
    def H(self) -> "FockOperator":
        return FockOperator(self.entries.conj().T, Label.GENERAL)


def as_matrix(x) -> np.ndarray:
    return np.asarray(x.entries if isinstance(x, FockOperator) else x, dtype=complex)


def build_ladder(dim: int) -> tuple[FockOperator, FockOperator]:
    """Return the truncated annihilation and creation operators ``(a, a*)``."""
    if int(dim) != dim or dim < 2:
        raise InvalidDimensionError(f"dim must be an integer >= 2, got {dim}")
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)
    return FockOperator(a, Label.ANNIHILATION), FockOperator(a.conj().T, Label.CREATION)


def number_operator(dim: int) -> FockOperator:
    a, ad = build_ladder(dim)
    return FockOperator(ad.entries @ a.entries, Label.NUMBER)


def position_momentum(dim: int) -> tuple[FockOperator, FockOperator]:
    """``Q = (a + a*)/sqrt(2)`` and ``P = (a - a*)/(sqrt(2) i)``."""
    a, ad = build_ladder(dim)
    Q = (a.entries + ad.entries) / math.sqrt(2)
    P = (a.entries - ad.entries) / (math.sqrt(2) * 1j)
    return FockOperator(Q, Label.POSITION), FockOperator(P, Label.MOMENTUM)


def build_rho(spec: GibbsSpec) -> FockOperator:
    return FockOperator(np.diag(spec.rho_diag()).astype(complex), Label.DENSITY)


def weyl(z: complex, spec: GibbsSpec) -> tuple[FockOperator, float]:
    """Truncated Weyl operator ``exp(i (z a* + conj(z) a) / sqrt(2))``.

    Returns the matrix together with its unitarity defect ``||W*W - I||_F``,
    which grows with ``|z|`` as truncation starts to matter.
    """
    a, ad = build_ladder(spec.dim)
    gen = 1j / math.sqrt(2) * (z * ad.entries + np.conj(z) * a.entries)
    W = scipy.linalg.expm(gen)
    defect = float(np.linalg.norm(W.conj().T @ W - np.eye(spec.dim)))
    return FockOperator(W, Label.WEYL, {"z": complex(z)}), defect


def expect(x, spec: GibbsSpec) -> complex:
    """Gibbs expectation ``Tr(rho x)``."""
    m = as_matrix(x)
    if m.shape != (spec.dim, spec.dim):
        raise DimensionMismatchError(f"operator has shape {m.shape}, spec.dim={spec.dim}")
    return complex(np.dot(spec.rho_diag(), np.diag(m)))


def interior(m, buffer: int) -> np.ndarray:
    """Top-left block that excludes the last ``buffer`` indices."""
    m = as_matrix(m)
    k = m.shape[0] - buffer
    return m[:k, :k]
