"""Operator convex functions, relative g-entropies and the g -> f bridge."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateDenominator, DimensionMismatch, DomainError, NotNormalized
from .channels import CPTPChannel, apply_channel_pair
from .matcore import dagger
from .petz import MonotoneF
from .states import DensityMatrix

# crossover where the linear Taylor remainder meets the eps/(x-1)^2 cancellation error (~3e-9)
BRIDGE_TAYLOR_RADIUS = 2e-4
NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True)
class ConvexG:
    """Operator convex ``g`` on ``(0, inf)`` with its value and curvature at 1."""

    name: str
    eval: Callable
    g_at_1: float
    g2_at_1: float

    def __call__(self, x):
        return self.eval(x)

    @property
    def normalized(self) -> bool:
        return abs(self.g_at_1) < NORMALIZATION_TOL and abs(self.g2_at_1 - 1.0) < NORMALIZATION_TOL


def _mlog(x):
    return -np.log(np.asarray(x, dtype=float))


def _xlogx(x):
    x = np.asarray(x, dtype=float)
    return x * np.log(x)


def _sqrt2(x):
    return 2.0 * (1.0 - np.sqrt(np.asarray(x, dtype=float))) ** 2


MLOG = ConvexG("mlog", _mlog, 0.0, 1.0)
XLOGX = ConvexG("xlogx", _xlogx, 0.0, 1.0)
SQRT2 = ConvexG("sqrt2", _sqrt2, 0.0, 1.0)

_CATALOG = (MLOG, XLOGX, SQRT2)

# catalog g -> name of the monotone f it induces
BRIDGED_F = {"mlog": "kmb", "xlogx": "kmb", "sqrt2": "wy"}


def catalog_g() -> list[ConvexG]:
    """``-ln x`` (Umegaki), ``x ln x`` and ``2 (1 - sqrt x)^2``; all with ``g(1) = 0``, ``g''(1) = 1``."""
    return list(_CATALOG)


def g_names() -> list[str]:
    return [g.name for g in _CATALOG]


def get_g(name: str) -> ConvexG:
    for g in _CATALOG:
        if g.name == name:
            return g
    raise KeyError(f"unknown convex function {name!r}; available: {', '.join(g_names())}")


def _spectral_overlaps(rho: DensityMatrix, sigma: DensityMatrix):
    if rho.n != sigma.n:
        raise DimensionMismatch(f"states of dimension {rho.n} and {sigma.n}")
    p, r = rho.spectrum.eigenvalues, rho.spectrum.eigenvectors
    q, s = sigma.spectrum.eigenvalues, sigma.spectrum.eigenvectors
    # w[j, k] = |<s_j|r_k>|^2
    w = np.abs(dagger(s) @ r) ** 2
    return p, q, w


def _g_on_ratios(g: ConvexG, q: np.ndarray, p: np.ndarray) -> np.ndarray:
    with np.errstate(all="ignore"):
        vals = np.asarray(g(q[:, None] / p[None, :]), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise DomainError(f"{g.name} is not finite on the eigenvalue ratios")
    return vals


def relative_g_entropy(rho: DensityMatrix, sigma: DensityMatrix, g: ConvexG) -> float:
    """``Tr(sqrt(rho) g(L_sigma R_rho^{-1})(sqrt(rho)))``.

    With spectra ``rho = sum p_k |r_k><r_k|`` and ``sigma = sum q_j |s_j><s_j|``
    this equals ``sum_{j,k} g(q_j / p_k) p_k |<s_j|r_k>|^2``.
    """
    p, q, w = _spectral_overlaps(rho, sigma)
    return float(np.sum(_g_on_ratios(g, q, p) * p[None, :] * w))


def unweighted_pullback_sum(rho: DensityMatrix, sigma: DensityMatrix, g: ConvexG) -> float:
    """The double sum ``sum_{j,k} g(q_j / p_k) |<s_j|r_k>|^2`` with no ``p_k`` weight.

    Kept only so the verification harness can compare it against the definition.
    """
    p, q, w = _spectral_overlaps(rho, sigma)
    return float(np.sum(_g_on_ratios(g, q, p) * w))


def f_from_g(g: ConvexG, x: float) -> float:
    """Monotone function induced by a normalized ``g``: ``(1-x)^2 / (g(x) + x g(1/x))``.

    Within ``BRIDGE_TAYLOR_RADIUS`` of 1 the first-order expansion
    ``(1 + (x-1)/2) / g''(1)`` replaces the 0/0 quotient.
    """
    x = float(x)
    if not x > 0 or not np.isfinite(x):
        raise DomainError(f"f_from_g needs x > 0, got {x!r}")
    if abs(g.g_at_1) > NORMALIZATION_TOL:
        raise NotNormalized(f"{g.name} has g(1) = {g.g_at_1!r}")
    y = x - 1.0
    if abs(y) < BRIDGE_TAYLOR_RADIUS:
        return (1.0 + y / 2.0) / g.g2_at_1
    denom = float(g(x)) + x * float(g(1.0 / x))
    if not np.isfinite(denom) or denom < 1e-300:
        raise DegenerateDenominator(f"g(x) + x g(1/x) = {denom!r} at x = {x!r}")
    return y * y / denom


def bridged_f(g: ConvexG):
    """:class:`~qunfold.petz.MonotoneF` whose evaluator is ``f_from_g(g, .)``."""
    def ev(x):
        arr = np.asarray(x, dtype=float)
        out = np.vectorize(lambda t: f_from_g(g, t), otypes=[float])(arr)
        return out[()] if out.ndim == 0 else out

    return MonotoneF(f"f[{g.name}]", ev)


def monotonicity_defect(rho: DensityMatrix, sigma: DensityMatrix, channel: CPTPChannel, g: ConvexG) -> float:
    """``H_g(rho, sigma) - H_g(channel(rho), channel(sigma))``; non-negative for CPTP maps."""
    out_rho, out_sigma = apply_channel_pair(channel, rho, sigma)
    return relative_g_entropy(rho, sigma, g) - relative_g_entropy(out_rho, out_sigma, g)
