"""CPTP channels in Kraus form."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadDimension, DimensionMismatch, InvalidState
from .matcore import as_matrix, dagger, eig_hermitian
from .states import DensityMatrix, haar_unitary

TP_TOL = 1e-10
FAITHFUL_FLOOR = 1e-9


@dataclass(frozen=True)
class CPTPChannel:
    """``rho -> sum_i K_i rho K_i^dagger`` with ``sum_i K_i^dagger K_i = I``."""

    kraus: tuple
    in_dim: int
    out_dim: int

    def __post_init__(self):
        ks = tuple(as_matrix(k) for k in self.kraus)
        if not ks:
            raise BadDimension("a channel needs at least one Kraus operator")
        for k in ks:
            if k.shape != (self.out_dim, self.in_dim):
                raise DimensionMismatch(f"Kraus operator of shape {k.shape}, expected {(self.out_dim, self.in_dim)}")
        err = np.max(np.abs(sum(dagger(k) @ k for k in ks) - np.eye(self.in_dim)))
        if err > TP_TOL:
            raise InvalidState(f"Kraus operators are not trace preserving (defect {err:.3e})")
        object.__setattr__(self, "kraus", ks)

    def apply_raw(self, a) -> np.ndarray:
        """Apply the linear map to any ``in_dim`` square matrix, without regularization."""
        a = np.asarray(a, dtype=np.complex128)
        if a.shape != (self.in_dim, self.in_dim):
            raise DimensionMismatch(f"channel takes {self.in_dim}x{self.in_dim}, got {a.shape}")
        return sum(k @ a @ dagger(k) for k in self.kraus)


def identity_channel(n: int) -> CPTPChannel:
    return CPTPChannel((np.eye(n),), n, n)


def unitary_channel(w) -> CPTPChannel:
    w = as_matrix(w)
    return CPTPChannel((w,), w.shape[1], w.shape[0])


def depolarizing_channel(n: int, m: int | None = None) -> CPTPChannel:
    """Complete depolarization ``rho -> Tr(rho) I/m`` from dimension ``n`` to ``m``."""
    m = n if m is None else m
    kraus = []
    for a in range(m):
        for b in range(n):
            k = np.zeros((m, n), dtype=np.complex128)
            k[a, b] = 1.0 / np.sqrt(m)
            kraus.append(k)
    return CPTPChannel(tuple(kraus), n, m)


def random_cptp(n: int, m: int, kraus_rank: int, rng: np.random.Generator) -> CPTPChannel:
    """Random channel from the first ``n`` columns of a Haar unitary on ``C^(m * kraus_rank)``."""
    if kraus_rank < 1 or n < 1 or m < 1:
        raise BadDimension("dimensions and Kraus rank must be positive")
    if m * kraus_rank < n:
        raise BadDimension(f"m * kraus_rank = {m * kraus_rank} < n = {n}; no isometry exists")
    iso = haar_unitary(m * kraus_rank, rng).mat[:, :n]
    kraus = tuple(iso[i * m:(i + 1) * m, :] for i in range(kraus_rank))
    return CPTPChannel(kraus, n, m)


def _needs_regularization(mat: np.ndarray) -> bool:
    h = (mat + dagger(mat)) / 2
    return eig_hermitian(h, tol=1e-8).eigenvalues[0] < FAITHFUL_FLOOR


def _regularize(mat: np.ndarray) -> np.ndarray:
    m = mat.shape[0]
    out = mat + FAITHFUL_FLOOR * np.eye(m) / m
    return out / np.trace(out).real


def apply_channel(channel: CPTPChannel, rho: DensityMatrix) -> DensityMatrix:
    """Image of ``rho``, mixed with ``1e-9 I/m`` and renormalized if it is not safely faithful."""
    out = channel.apply_raw(rho.mat)
    if _needs_regularization(out):
        out = _regularize(out)
    return DensityMatrix(out)


def apply_channel_pair(channel: CPTPChannel, rho: DensityMatrix, sigma: DensityMatrix):
    """Images of two states; if either needs regularization both receive it."""
    a = channel.apply_raw(rho.mat)
    b = channel.apply_raw(sigma.mat)
    if _needs_regularization(a) or _needs_regularization(b):
        a, b = _regularize(a), _regularize(b)
    return DensityMatrix(a), DensityMatrix(b)
