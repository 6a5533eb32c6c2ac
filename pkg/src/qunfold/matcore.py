"""Dense complex matrix substrate: Hermitian eigensolver, spectral calculus, JSON codec.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. The eigensolver is a
cyclic complex Jacobi iteration, adequate for the small dimensions used here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionMismatch, DomainError, NoConvergence, NotHermitian, NotSquare

MAX_SWEEPS = 100
OFF_DIAGONAL_THRESHOLD = 1e-13


def as_matrix(a) -> np.ndarray:
    """Validate ``a`` as a finite 2-d complex matrix and return it as complex128."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionMismatch(f"expected a non-empty 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DomainError("matrix has non-finite entries")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def hermiticity_defect(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - dagger(a))))


@dataclass(frozen=True)
class HermitianEig:
    """Eigenvalues in ascending order and the matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dagger(v)


def _rotation(app: float, aqq: float, apq: complex) -> np.ndarray:
    # phase-fix the pivot to a real positive number, then a real symmetric Schur rotation
    r = abs(apq)
    phase = apq / r
    tau = (aqq - app) / (2.0 * r)
    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    ph = np.conj(phase)
    return np.array([[c, s], [-s * ph, c * ph]], dtype=np.complex128)


def eig_hermitian(a, tol: float = 1e-10, max_sweeps: int = MAX_SWEEPS) -> HermitianEig:
    """Diagonalize a Hermitian matrix with cyclic Jacobi rotations.

    Parameters
    ----------
    a : array_like
        Square matrix, Hermitian up to ``tol`` in max-norm.
    tol : float
        Accepted asymmetry ``max|A - A^dagger|``.
    max_sweeps : int
        Iteration cap; exceeding it raises :class:`NoConvergence`.

    Returns
    -------
    HermitianEig
        Ascending eigenvalues; ties keep the order the rotations produced.
    """
    m = as_matrix(a)
    n, k = m.shape
    if n != k:
        raise NotSquare(f"matrix is {n}x{k}")
    defect = hermiticity_defect(m)
    if defect > tol:
        raise NotHermitian(f"asymmetry {defect:.3e} exceeds tolerance {tol:.3e}")

    A = (m + dagger(m)) / 2
    V = np.eye(n, dtype=np.complex128)
    scale = float(np.linalg.norm(A))
    threshold = OFF_DIAGONAL_THRESHOLD * max(scale, 1e-300)
    off_mask = ~np.eye(n, dtype=bool)

    converged = False
    for _ in range(max_sweeps + 1):
        off = float(np.sqrt(np.sum(np.abs(A[off_mask]) ** 2)))
        if off <= threshold:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) == 0.0:
                    continue
                J = _rotation(A[p, p].real, A[q, q].real, apq)
                idx = [p, q]
                A[:, idx] = A[:, idx] @ J
                A[idx, :] = dagger(J) @ A[idx, :]
                A[p, q] = A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                V[:, idx] = V[:, idx] @ J
    if not converged:
        raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")

    w = np.real(np.diag(A)).copy()
    order = np.argsort(w, kind="stable")
    return HermitianEig(w[order], V[:, order])


def matrix_function(a, phi: Callable[[float], float], tol: float = 1e-10) -> np.ndarray:
    """Return ``V diag(phi(lambda)) V^dagger`` for Hermitian ``a``."""
    eig = eig_hermitian(a, tol)
    with np.errstate(all="ignore"):
        vals = np.array([phi(float(x)) for x in eig.eigenvalues], dtype=float)
    if not np.all(np.isfinite(vals)):
        raise DomainError("function is not finite on the spectrum")
    v = eig.eigenvectors
    return (v * vals) @ dagger(v)


def frobenius_inner(a, b) -> complex:
    """Hilbert-Schmidt pairing ``Tr(A^dagger B)``."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def matrix_to_json(a) -> dict:
    m = as_matrix(a)
    rows, cols = m.shape
    data = [[float(z.real), float(z.imag)] for z in m.reshape(-1)]
    return {"rows": rows, "cols": cols, "data": data}


def matrix_from_json(obj: dict) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError) as exc:
        raise DimensionMismatch(f"malformed matrix object: {exc}") from None
    if len(data) != rows * cols:
        raise DimensionMismatch(f"expected {rows * cols} entries, got {len(data)}")
    flat = np.empty(rows * cols, dtype=np.complex128)
    for i, pair in enumerate(data):
        if len(pair) != 2:
            raise DimensionMismatch(f"entry {i} is not a [re, im] pair")
        flat[i] = complex(float(pair[0]), float(pair[1]))
    return as_matrix(flat.reshape(rows, cols))


def expi_hermitian(h, t: float = 1.0) -> np.ndarray:
    """Unitary ``exp(i t H)`` for Hermitian ``H``."""
    eig = eig_hermitian(h)
    v = eig.eigenvectors
    return (v * np.exp(1j * t * eig.eigenvalues)) @ dagger(v)
