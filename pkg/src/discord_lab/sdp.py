"""Low-rank block-coordinate solvers for the two diagonal SDPs used here.

Both problems are posed on a PSD matrix ``S`` and share the same certificate:
any vector ``w`` is turned into a feasible dominating diagonal by shifting it
with the most negative eigenvalue of ``Diag(w) - S`` (the separating
eigenvector). The gap between that feasible value and the dual objective of
the current factor ``V`` bounds the error of both.

* :func:`solve_elliptope` maximises ``Tr(S X)`` over ``X >= 0, diag(X) = 1``
  with ``X = V V^T`` and unit rows; its dual is ``min sum(w)`` subject to
  ``Diag(w) >= S``.
* :func:`solve_squared_dominating` minimises ``sum(w**2)`` subject to
  ``Diag(w) >= S`` through its dual ``max Tr(S Z) - |diag Z|^2 / 4`` over
  ``Z = V V^T``.

Each row update is an exact maximisation, so the objective never decreases.
With ``rank > sqrt(2n)`` the factored problem has no spurious local optima
for generic ``S``.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .exceptions import NumericError


class ElliptopeSolution(NamedTuple):
    value: float
    gram_vectors: np.ndarray
    dual_weights: np.ndarray
    upper_bound: float
    gap: float
    sweeps: int


class DominatingSolution(NamedTuple):
    weights: np.ndarray
    lower_bound: float
    upper_bound: float
    gap: float
    factor: np.ndarray
    sweeps: int


def default_rank(n: int) -> int:
    return max(1, min(n, math.ceil(math.sqrt(2 * n)) + 1))


def _shift_to_boundary(w: np.ndarray, S: np.ndarray) -> np.ndarray:
    lmin = np.linalg.eigvalsh(np.diag(w) - S)[0]
    return w - lmin


def _initial_factor(n: int, rank: int, rng_seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(rng_seed))
    V = rng.standard_normal((n, rank))
    return V / np.linalg.norm(V, axis=1, keepdims=True)


def solve_elliptope(
    S: np.ndarray,
    tol: float = 1e-9,
    accept_tol: float = 1e-6,
    rank: int | None = None,
    rng_seed: int = 0,
    max_sweeps: int = 20_000,
    check_every: int = 5,
) -> ElliptopeSolution:
    """Maximise ``Tr(S X)`` over the elliptope.

    Stops when the certified gap is ``<= tol * Tr(S)``. If the sweep budget
    runs out first, the result is still returned when the gap is within
    ``accept_tol * Tr(S)``; otherwise :class:`NumericError` carries the best
    bracket found.
    """
    n = S.shape[0]
    scale = max(float(np.trace(S)), np.finfo(float).tiny)
    V = _initial_factor(n, rank or default_rank(n), rng_seed)
    G = S @ V
    diag = np.diag(S).copy()
    sweeps = 0
    while True:
        for _ in range(check_every):
            for i in range(n):
                g = G[i] - diag[i] * V[i]
                norm = math.sqrt(g @ g)
                if norm > 0.0:
                    new = g / norm
                    G += np.outer(S[:, i], new - V[i])
                    V[i] = new
            sweeps += 1
        G = S @ V  # drop accumulated rounding from rank-one updates
        y = np.einsum("ij,ij->i", G, V)
        value = float(y.sum())
        w = _shift_to_boundary(y, S)
        upper = float(w.sum())
        gap = max(upper - value, 0.0)
        if gap <= tol * scale:
            break
        if sweeps >= max_sweeps:
            if gap <= accept_tol * scale:
                break
            raise NumericError(f"elliptope SDP gap {gap:.3e} after {sweeps} sweeps", lower=value, upper=upper)
    return ElliptopeSolution(value, V, w, upper, gap, sweeps)


def _positive_cubic_root(a: float, b: float) -> float:
    """Unique nonnegative root of ``rho^3 - 2 a rho - 2 b`` for ``a, b >= 0``."""
    if a <= 0.0 and b <= 0.0:
        return 0.0
    disc = b * b - (2.0 * a / 3.0) ** 3
    if disc >= 0.0:
        r = math.sqrt(disc)
        rho = np.cbrt(b + r) + np.cbrt(b - r)
    else:
        m = math.sqrt(2.0 * a / 3.0)
        arg = min(1.0, max(-1.0, (3.0 * b / (2.0 * a)) * math.sqrt(3.0 / (2.0 * a))))
        rho = 2.0 * m * math.cos(math.acos(arg) / 3.0)
    for _ in range(2):
        d = 3.0 * rho * rho - 2.0 * a
        if d <= 0.0:
            break
        rho -= (rho**3 - 2.0 * a * rho - 2.0 * b) / d
    return float(rho)


def solve_squared_dominating(
    S: np.ndarray,
    tol: float = 1e-12,
    accept_tol: float = 1e-5,
    rank: int | None = None,
    rng_seed: int = 0,
    max_sweeps: int = 20_000,
    check_every: int = 5,
) -> DominatingSolution:
    """Minimise ``sum(w**2)`` subject to ``Diag(w) >= S``.

    The returned weights are always feasible (shifted onto the boundary of the
    feasible set). Tolerances are relative to the returned objective.
    """
    n = S.shape[0]
    diag = np.diag(S).copy()
    V = _initial_factor(n, rank or default_rank(n), rng_seed) * np.sqrt(2.0 * diag)[:, None]
    G = S @ V
    sweeps = 0
    while True:
        for _ in range(check_every):
            for i in range(n):
                g = G[i] - diag[i] * V[i]
                norm = math.sqrt(g @ g)
                rho = _positive_cubic_root(diag[i], norm)
                if norm > 0.0:
                    new = (rho / norm) * g
                else:
                    cur = math.sqrt(V[i] @ V[i])
                    new = V[i] * (rho / cur) if cur > 0 else V[i]
                G += np.outer(S[:, i], new - V[i])
                V[i] = new
            sweeps += 1
        G = S @ V
        z = np.einsum("ij,ij->i", V, V)
        lower = float(np.einsum("ij,ij->", G, V) - 0.25 * (z @ z))
        w = _shift_to_boundary(0.5 * z, S)
        upper = float(w @ w)
        gap = max(upper - lower, 0.0)
        if gap <= tol * upper:
            break
        if sweeps >= max_sweeps:
            if gap <= accept_tol * upper:
                break
            raise NumericError(f"dominating-diagonal gap {gap:.3e} after {sweeps} sweeps", lower=lower, upper=upper)
    return DominatingSolution(w, lower, upper, gap, V, sweeps)


def solve_linear_dominating(S: np.ndarray, tol: float = 1e-12, **kwargs) -> DominatingSolution:
    """Minimise ``sum(w)`` subject to ``Diag(w) >= S`` via the elliptope dual."""
    sol = solve_elliptope(S, tol=tol, **kwargs)
    return DominatingSolution(sol.dual_weights, sol.value, sol.upper_bound, sol.gap, sol.gram_vectors, sol.sweeps)
