"""Domain types for faithful states, unitaries, simplex points and tangent vectors.

All samplers take an explicit ``numpy.random.Generator``; nothing here touches
global random state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BadDimension, DimensionMismatch, InvalidState
from .matcore import HermitianEig, as_matrix, dagger, eig_hermitian, hermiticity_defect, matrix_from_json, matrix_to_json

SIMPLEX_FLOOR = 1e-6
SUM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-11


def make_rng(seed, *spawn_key: int) -> np.random.Generator:
    """Deterministic generator for ``seed``; extra integers derive independent streams."""
    return np.random.default_rng([int(seed), *map(int, spawn_key)])


@dataclass(frozen=True)
class ProbabilityVector:
    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float).reshape(-1)
        if p.size < 1 or not np.all(np.isfinite(p)):
            raise InvalidState("probability vector must be finite and non-empty")
        if np.any(p <= 0):
            raise InvalidState(f"entries must be strictly positive, min={p.min():.3e}")
        if abs(p.sum() - 1.0) > SUM_TOL:
            raise InvalidState(f"entries sum to {p.sum()!r}, not 1")
        object.__setattr__(self, "p", p)

    @property
    def n(self) -> int:
        return self.p.size


@dataclass(frozen=True)
class DensityMatrix:
    """Faithful state with its spectral decomposition computed once at construction."""

    mat: np.ndarray
    spectrum: HermitianEig = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        m = as_matrix(self.mat)
        if m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"density matrix must be square, got {m.shape}")
        defect = hermiticity_defect(m)
        if defect > HERMITIAN_TOL:
            raise InvalidState(f"not Hermitian (defect {defect:.3e})")
        m = (m + dagger(m)) / 2
        tr = np.trace(m).real
        if abs(tr - 1.0) > SUM_TOL:
            raise InvalidState(f"trace is {tr!r}, not 1")
        spec = eig_hermitian(m)
        if spec.eigenvalues[0] <= 0:
            raise InvalidState(f"not faithful, smallest eigenvalue {spec.eigenvalues[0]:.3e}")
        object.__setattr__(self, "mat", m)
        object.__setattr__(self, "spectrum", spec)

    @property
    def n(self) -> int:
        return self.mat.shape[0]


@dataclass(frozen=True)
class UnitaryMatrix:
    mat: np.ndarray

    def __post_init__(self):
        u = as_matrix(self.mat)
        n = u.shape[0]
        if u.shape[1] != n:
            raise DimensionMismatch(f"unitary must be square, got {u.shape}")
        err = np.max(np.abs(dagger(u) @ u - np.eye(n)))
        if err > UNITARY_TOL * n:
            raise InvalidState(f"not unitary (defect {err:.3e})")
        object.__setattr__(self, "mat", u)

    @property
    def n(self) -> int:
        return self.mat.shape[0]

    @classmethod
    def identity(cls, n: int) -> UnitaryMatrix:
        return cls(np.eye(n, dtype=np.complex128))


@dataclass(frozen=True)
class UnfoldedPoint:
    """A point ``(U, p)`` of the unfolding space ``U(H) x interior simplex``."""

    u: UnitaryMatrix
    p: ProbabilityVector

    def __post_init__(self):
        if not isinstance(self.u, UnitaryMatrix):
            object.__setattr__(self, "u", UnitaryMatrix(self.u))
        if not isinstance(self.p, ProbabilityVector):
            object.__setattr__(self, "p", ProbabilityVector(self.p))
        if self.u.n != self.p.n:
            raise DimensionMismatch(f"unitary is {self.u.n}x{self.u.n} but p has length {self.p.n}")

    @property
    def n(self) -> int:
        return self.p.n


@dataclass(frozen=True)
class TangentVectorM:
    """Tangent ``(iH, v)`` at a point of the unfolding space.

    ``h`` is the Hermitian generator. The unitary component is left-trivialized,
    i.e. the actual velocity at ``U`` is ``U @ (1j * h)``.
    """

    h: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        h = as_matrix(self.h)
        v = np.asarray(self.v, dtype=float).reshape(-1)
        if h.shape != (v.size, v.size):
            raise DimensionMismatch(f"h has shape {h.shape} but v has length {v.size}")
        if hermiticity_defect(h) > HERMITIAN_TOL:
            raise InvalidState("generator h is not Hermitian")
        if abs(v.sum()) > SUM_TOL:
            raise InvalidState(f"v sums to {v.sum()!r}, not 0")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "v", v)

    @property
    def n(self) -> int:
        return self.v.size

    @classmethod
    def zero(cls, n: int) -> TangentVectorM:
        return cls(np.zeros((n, n), dtype=np.complex128), np.zeros(n))


@dataclass(frozen=True)
class TangentVectorS:
    """Tangent vector to the state manifold: a traceless Hermitian matrix."""

    a: np.ndarray

    def __post_init__(self):
        a = as_matrix(self.a)
        if a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"tangent must be square, got {a.shape}")
        if hermiticity_defect(a) > HERMITIAN_TOL:
            raise InvalidState("tangent is not Hermitian")
        if abs(np.trace(a)) > SUM_TOL * max(1.0, float(np.abs(a).max())):
            raise InvalidState("tangent is not traceless")
        object.__setattr__(self, "a", a)

    @property
    def n(self) -> int:
        return self.a.shape[0]


def embed_diagonal(p: ProbabilityVector) -> DensityMatrix:
    """Place ``p`` on the diagonal in the standard basis."""
    return DensityMatrix(np.diag(p.p).astype(np.complex128))


def sample_simplex(n: int, rng: np.random.Generator) -> ProbabilityVector:
    """Uniform draw from the open simplex, floored at ``SIMPLEX_FLOOR`` then renormalized."""
    if n < 2:
        raise BadDimension(f"simplex dimension needs n >= 2, got {n}")
    x = rng.standard_exponential(n)
    p = x / x.sum()
    p = np.maximum(p, SIMPLEX_FLOOR)
    return ProbabilityVector(p / p.sum())


def haar_unitary(n: int, rng: np.random.Generator) -> UnitaryMatrix:
    """Haar-distributed unitary: QR of a complex Ginibre matrix with the phase fix."""
    if n < 1:
        raise BadDimension(f"n must be >= 1, got {n}")
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    q = q * (d / np.abs(d))
    return UnitaryMatrix(q)


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (x + dagger(x)) / 2


def random_tangent_m(n: int, rng: np.random.Generator) -> TangentVectorM:
    if n < 2:
        raise BadDimension(f"n must be >= 2, got {n}")
    h = random_hermitian(n, rng)
    v = rng.standard_normal(n)
    return TangentVectorM(h, v - v.mean())


def random_tangent_s(n: int, rng: np.random.Generator) -> TangentVectorS:
    a = random_hermitian(n, rng)
    return TangentVectorS(a - np.trace(a).real / n * np.eye(n))


def random_density(n: int, rng: np.random.Generator) -> DensityMatrix:
    u = haar_unitary(n, rng).mat
    p = sample_simplex(n, rng).p
    return DensityMatrix((u * p) @ dagger(u))


# JSON encodings


def probability_to_json(p: ProbabilityVector) -> list:
    return [float(x) for x in p.p]


def probability_from_json(obj) -> ProbabilityVector:
    return ProbabilityVector(np.array(obj, dtype=float))


def point_to_json(m: UnfoldedPoint) -> dict:
    return {"u": matrix_to_json(m.u.mat), "p": probability_to_json(m.p)}


def point_from_json(obj: dict) -> UnfoldedPoint:
    return UnfoldedPoint(UnitaryMatrix(matrix_from_json(obj["u"])), probability_from_json(obj["p"]))


def tangent_to_json(x: TangentVectorM) -> dict:
    return {"h": matrix_to_json(x.h), "v": [float(c) for c in x.v]}


def tangent_from_json(obj: dict) -> TangentVectorM:
    return TangentVectorM(matrix_from_json(obj["h"]), np.array(obj["v"], dtype=float))
