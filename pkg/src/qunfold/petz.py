"""Operator monotone functions and the monotone metrics they label."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionMismatch, DomainError
from .matcore import dagger
from .states import DensityMatrix, TangentVectorS

KMB_TAYLOR_RADIUS = 1e-6


@dataclass(frozen=True)
class MonotoneF:
    """A named operator monotone function on ``(0, inf)``.

    ``eval`` accepts scalars or arrays. ``claims_normalized`` asserts
    ``f(1) = 1`` and ``f(x) = x f(1/x)``; :func:`check_f_symmetry` measures both.
    """

    name: str
    eval: Callable
    claims_normalized: bool = True

    def __call__(self, x):
        return self.eval(x)


def _sld(x):
    return (1.0 + np.asarray(x, dtype=float)) / 2.0


def _wigner_yanase(x):
    return (1.0 + np.sqrt(np.asarray(x, dtype=float))) ** 2 / 4.0


def _kubo_mori(x):
    x = np.asarray(x, dtype=float)
    y = x - 1.0
    near = np.abs(y) < KMB_TAYLOR_RADIUS
    safe = np.where(near, 2.0, x)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(near, 1.0 + y / 2.0 - y * y / 12.0, (safe - 1.0) / np.log(safe))
    return out[()] if out.ndim == 0 else out


def _rld(x):
    x = np.asarray(x, dtype=float)
    return 2.0 * x / (1.0 + x)


SLD = MonotoneF("sld", _sld)
WY = MonotoneF("wy", _wigner_yanase)
KMB = MonotoneF("kmb", _kubo_mori)
RLD = MonotoneF("rld", _rld)

_CATALOG = (SLD, WY, KMB, RLD)


def catalog_f() -> list[MonotoneF]:
    """Symmetric logarithmic derivative (Bures), Wigner-Yanase, Kubo-Mori and right logarithmic derivative."""
    return list(_CATALOG)


def get_f(name: str) -> MonotoneF:
    for f in _CATALOG:
        if f.name == name:
            return f
    raise KeyError(f"unknown monotone function {name!r}; available: {', '.join(f_names())}")


def f_names() -> list[str]:
    return [f.name for f in _CATALOG]


def metric_denominators(eigenvalues: np.ndarray, f: MonotoneF) -> np.ndarray:
    """Matrix ``lam_k * f(lam_j / lam_k)``, the eigenvalue of ``K^f`` on ``|j><k|``."""
    lam = np.asarray(eigenvalues, dtype=float)
    ratios = lam[:, None] / lam[None, :]
    with np.errstate(all="ignore"):
        d = lam[None, :] * np.asarray(f(ratios), dtype=float)
    if not np.all(np.isfinite(d)) or np.any(d <= 0):
        raise DomainError(f"{f.name} is not finite and positive on the eigenvalue ratios")
    return d


def petz_metric(rho: DensityMatrix, a: TangentVectorS, b: TangentVectorS, f: MonotoneF) -> float:
    """``Tr(A (K^f_rho)^{-1}(B))`` with ``K^f_rho = f(L_rho R_rho^{-1}) R_rho``.

    Evaluated as a spectral sum in the eigenbasis of ``rho``; the superoperator is
    never assembled.
    """
    if not (rho.n == a.n == b.n):
        raise DimensionMismatch(f"dimensions {rho.n}, {a.n}, {b.n} disagree")
    lam, v = rho.spectrum.eigenvalues, rho.spectrum.eigenvectors
    at = dagger(v) @ a.a @ v
    bt = dagger(v) @ b.a @ v
    denom = metric_denominators(lam, f)
    return float(np.sum(np.conj(at) * bt / denom).real)


@dataclass(frozen=True)
class SymmetryReport:
    name: str
    normalization_defect: float
    symmetry_defect: float

    def passes(self, tol: float) -> bool:
        return self.normalization_defect < tol and self.symmetry_defect < tol


def check_f_symmetry(f: MonotoneF, grid) -> SymmetryReport:
    """Report ``|f(1) - 1|`` and ``max |f(x) - x f(1/x)|`` over ``grid``; never raises on failure."""
    x = np.asarray(grid, dtype=float)
    norm = abs(float(f(1.0)) - 1.0)
    sym = float(np.max(np.abs(f(x) - x * f(1.0 / x)))) if x.size else 0.0
    return SymmetryReport(f.name, norm, sym)
