"""Dense symmetric eigendecomposition and the matrix functions built on it."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

SYMMETRY_TOL = 1e-12
CLUSTER_TOL = 1e-7


def as_symmetric(a, name: str = "matrix") -> np.ndarray:
    """Validate a square symmetric real matrix and return an exactly symmetric copy.

    Raises ``ValueError`` if ``max|A - A^T|`` exceeds ``1e-12`` times the
    largest entry.
    """
    A = np.array(a, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"{name} must be square, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} has non-finite entries")
    scale = max(1.0, np.abs(A).max(initial=0.0))
    asym = np.abs(A - A.T).max(initial=0.0)
    if asym > SYMMETRY_TOL * scale:
        raise ValueError(f"{name} is not symmetric (max asymmetry {asym:.3e})")
    return 0.5 * (A + A.T)


@dataclass(frozen=True)
class EigenspaceBasis:
    """Orthonormal basis (columns) of one eigenspace and its eigenvalue."""

    eigenvalue: float
    basis: np.ndarray
    indices: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues in ascending order with matching orthonormal eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def norm(self) -> float:
        return float(np.abs(self.values).max(initial=0.0))

    def clusters(self, tol: float = CLUSTER_TOL) -> list[np.ndarray]:
        """Index groups of eigenvalues closer than ``tol * ||A||`` to their neighbour."""
        return group_eigenvalues(self.values, tol * self.norm)

    def eigenspaces(self, tol: float = CLUSTER_TOL) -> list[EigenspaceBasis]:
        out = []
        for idx in self.clusters(tol):
            out.append(
                EigenspaceBasis(
                    eigenvalue=float(self.values[idx].mean()),
                    basis=self.vectors[:, idx],
                    indices=tuple(int(i) for i in idx),
                )
            )
        return out

    def eigenspace_of(self, index: int, tol: float = CLUSTER_TOL) -> EigenspaceBasis:
        """Eigenspace containing the (0-based) eigen-index ``index``."""
        for space in self.eigenspaces(tol):
            if index in space.indices:
                return space
        raise IndexError(index)

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.T


def group_eigenvalues(values: np.ndarray, abs_tol: float) -> list[np.ndarray]:
    """Split sorted ``values`` into runs whose consecutive gaps are ``<= abs_tol``."""
    values = np.asarray(values)
    if len(values) == 0:
        return []
    breaks = np.flatnonzero(np.diff(values) > abs_tol) + 1
    return np.split(np.arange(len(values)), breaks)


def eig_sym(a) -> EigenDecomposition:
    """Full eigendecomposition of a symmetric matrix, eigenvalues ascending."""
    A = as_symmetric(a)
    values, vectors = np.linalg.eigh(A)
    return EigenDecomposition(values, vectors)


def matrix_function(d: EigenDecomposition, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """``sum_i f(lambda_i) v_i v_i^T``.

    ``f`` is applied to the whole eigenvalue array at once, so it must be
    vectorised (numpy ufunc expressions are).
    """
    fvals = np.broadcast_to(np.asarray(f(d.values), dtype=float), d.values.shape)
    out = (d.vectors * fvals) @ d.vectors.T
    return 0.5 * (out + out.T)


def lambda_max(a) -> float:
    return float(np.linalg.eigvalsh(as_symmetric(a))[-1])


def lambda_min(a) -> float:
    return float(np.linalg.eigvalsh(as_symmetric(a))[0])


def operator_norm(a) -> float:
    """Spectral norm ``max |lambda_i|`` of a symmetric matrix."""
    vals = np.linalg.eigvalsh(as_symmetric(a))
    return float(np.abs(vals).max(initial=0.0))


def psd_leq(a, b, tol: float = 1e-9) -> bool:
    """Loewner order test ``a <= b``: ``lambda_min(b - a) >= -tol * scale``.

    ``scale`` is the larger operator norm of the two inputs (at least 1).
    """
    A = as_symmetric(a, "a")
    B = as_symmetric(b, "b")
    if A.shape != B.shape:
        raise ValueError(f"dimension mismatch: {A.shape} vs {B.shape}")
    scale = max(1.0, operator_norm(A), operator_norm(B))
    return lambda_min(B - A) >= -tol * scale


def is_psd(a, tol: float = 1e-8) -> bool:
    A = as_symmetric(a)
    vals = np.linalg.eigvalsh(A)
    return vals[0] >= -tol * max(1.0, np.abs(vals).max(initial=0.0))
