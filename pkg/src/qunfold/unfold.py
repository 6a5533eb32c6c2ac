"""Geometry of the unfolding space ``M(H) = U(H) x interior simplex``.

Tangent vectors are left-trivialized: ``(iH, v)`` at ``(U, p)`` is the velocity of
the curve ``(U exp(t iH), p + t v)``, so the Maurer-Cartan form ``U^dagger dU``
evaluates to ``iH``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DomainError
from .gentropy import ConvexG
from .matcore import commutator, dagger
from .petz import MonotoneF, metric_denominators, petz_metric
from .states import DensityMatrix, ProbabilityVector, TangentVectorM, TangentVectorS, UnfoldedPoint


@dataclass(frozen=True)
class SplitMetricValue:
    classical: float
    quantum: float
    total: float


def _check_dims(m: UnfoldedPoint, *tangents: TangentVectorM) -> None:
    for t in tangents:
        if t.n != m.n:
            raise DimensionMismatch(f"tangent of dimension {t.n} at a point of dimension {m.n}")


def project(m: UnfoldedPoint) -> DensityMatrix:
    """``pi(U, p) = U diag(p) U^dagger``."""
    u = m.u.mat
    return DensityMatrix((u * m.p.p) @ dagger(u))


def dequantize(m: UnfoldedPoint) -> ProbabilityVector:
    """Forget the unitary factor."""
    return m.p


def tangent_project(m: UnfoldedPoint, x: TangentVectorM) -> TangentVectorS:
    """Push ``(iH, v)`` forward along ``pi``: ``U([iH, diag(p)] + diag(v)) U^dagger``."""
    _check_dims(m, x)
    u = m.u.mat
    inner = commutator(1j * x.h, np.diag(m.p.p)) + np.diag(x.v)
    a = u @ inner @ dagger(u)
    return TangentVectorS((a + dagger(a)) / 2)


def fisher_rao(p: ProbabilityVector, v, u) -> float:
    """``sum_j v_j u_j / p_j``."""
    v = np.asarray(v, dtype=float).reshape(-1)
    u = np.asarray(u, dtype=float).reshape(-1)
    if not (v.size == u.size == p.n):
        raise DimensionMismatch(f"lengths {v.size}, {u.size} against p of length {p.n}")
    return float(np.sum(v * u / p.p))


def pullback_metric(m: UnfoldedPoint, x: TangentVectorM, y: TangentVectorM, f: MonotoneF) -> float:
    """Monotone metric ``G^f`` pulled back along ``pi``."""
    _check_dims(m, x, y)
    return petz_metric(project(m), tangent_project(m, x), tangent_project(m, y), f)


def _upper_pairs(n: int):
    # index pairs (j, k) with k > j
    return np.triu_indices(n, k=1)


def split_metric(m: UnfoldedPoint, x: TangentVectorM, y: TangentVectorM, f: MonotoneF) -> SplitMetricValue:
    """Fisher-Rao part of the spectral motion plus the ``f``-dependent unitary part.

    ``quantum = 2 sum_{k>j} (p_k - p_j)^2 / (p_k f(p_j/p_k)) Re(H_X[k,j] conj(H_Y[k,j]))``,
    which is ``-2 sum Re((iH_X)_kj (iH_Y)_jk)`` times the same coefficient.
    """
    _check_dims(m, x, y)
    p = m.p.p
    classical = fisher_rao(m.p, x.v, y.v)
    j, k = _upper_pairs(m.n)
    denom = metric_denominators(p, f)[j, k]  # p_k f(p_j / p_k)
    coeff = (p[k] - p[j]) ** 2 / denom
    pairing = np.real(x.h[k, j] * np.conj(y.h[k, j]))
    quantum = float(2.0 * np.sum(coeff * pairing))
    return SplitMetricValue(classical, quantum, classical + quantum)


def g_expansion_metric(m: UnfoldedPoint, x: TangentVectorM, y: TangentVectorM, g: ConvexG) -> float:
    """Second-order expansion of the pulled-back relative ``g``-entropy, all four terms.

    The ``g(1)`` terms are kept so the formula also applies to non-normalized ``g``.
    """
    _check_dims(m, x, y)
    p = m.p.p
    n = m.n
    mx, my = 1j * x.h, 1j * y.h

    fr_term = g.g2_at_1 * fisher_rao(m.p, x.v, y.v)
    anti = np.real(np.diag(mx @ my + my @ mx))
    anti_term = g.g_at_1 * float(np.sum(p * anti))
    diag_term = -2.0 * g.g_at_1 * float(np.sum(p * np.real(np.diag(mx) * np.diag(my))))

    j, k = _upper_pairs(n)
    with np.errstate(all="ignore"):
        weights = np.asarray(g(p[j] / p[k]), dtype=float) * p[k] + np.asarray(g(p[k] / p[j]), dtype=float) * p[j]
    if not np.all(np.isfinite(weights)):
        raise DomainError(f"{g.name} is not finite on the ratios of p")
    off_term = -2.0 * float(np.sum(weights * np.real(mx[k, j] * my[j, k])))
    return fr_term + anti_term + diag_term + off_term
