"""Friedkin-Johnsen equilibria and the disagreement / polarization functionals."""

from __future__ import annotations

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .exceptions import ConvergenceError
from .graph import Graph, laplacian, laplacian_of


def _opinions(x, n: int | None = None, name: str = "opinions") -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"{name} must be a vector")
    if n is not None and len(x) != n:
        raise ValueError(f"{name} has length {len(x)}, expected {n}")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} has non-finite entries")
    return x


def fj_operator(L) -> np.ndarray:
    """``(I + L)^{-1}`` by Cholesky; ``I + L`` is SPD for any Laplacian."""
    L = laplacian_of(L)
    n = len(L)
    C = cho_solve(cho_factor(np.eye(n) + L), np.eye(n))
    return 0.5 * (C + C.T)


def fj_equilibrium(L, s) -> np.ndarray:
    """Equilibrium opinions ``z = (I + L)^{-1} s``.

    Parameters
    ----------
    L : Graph or ndarray
        Graph or its Laplacian.
    s : array_like
        Internal opinions.
    """
    L = laplacian_of(L)
    s = _opinions(s, len(L), "s")
    return cho_solve(cho_factor(np.eye(len(L)) + L), s)


def fj_iterate(g: Graph, s, tol: float = 1e-10, max_steps: int = 100_000) -> tuple[np.ndarray, int]:
    """Run the repeated-averaging update from ``z = s`` until it settles.

    Each step sets ``z_i <- (s_i + sum_j w_ij z_j) / (1 + d_i)``. The update is
    an l-infinity contraction with factor ``rho = d_max / (1 + d_max)``, so the
    loop stops once the step size is below ``min(tol, tol / d_max)``, which
    keeps the returned iterate within ``tol`` of the fixed point.

    Returns
    -------
    z, steps
        Final iterate and the number of updates performed.

    Raises
    ------
    ConvergenceError
        If ``max_steps`` updates do not reach the tolerance. The last iterate is
        attached to the exception.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    A = np.asarray(g.adjacency)
    s = _opinions(s, g.n, "s")
    denom = 1.0 + A.sum(axis=1)
    dmax = g.max_degree
    stop = tol if dmax == 0 else min(tol, tol / dmax)
    z = s.copy()
    for step in range(1, max_steps + 1):
        z_new = (s + A @ z) / denom
        delta = np.abs(z_new - z).max(initial=0.0)
        z = z_new
        if delta <= stop:
            return z, step
    raise ConvergenceError(f"no convergence in {max_steps} steps (last step {delta:.3e})", last=z, steps=max_steps)


def disagreement(g, x) -> float:
    """Weighted sum of squared differences across edges, ``x^T L x``."""
    L = laplacian(g) if isinstance(g, Graph) else laplacian_of(g)
    x = _opinions(x, len(L), "x")
    return float(x @ L @ x)


def demean(x) -> np.ndarray:
    x = _opinions(x)
    return x - x.mean()


def polarization(x) -> float:
    """Squared norm of the de-meaned opinions."""
    xb = demean(x)
    return float(xb @ xb)


def polarization_disagreement(g, x) -> float:
    """Sum of disagreement and polarization of ``x``."""
    return disagreement(g, x) + polarization(x)
