"""Defender's optimal node weighting against an l2-style adversary.

The defender picks positive node weights ``w`` with a fixed budget
``h(w) = h(1)``; the adversary then maximises ``s^T Sigma s`` over the
weighted ball ``sum_i w_i s_i^2 <= 1``. For fixed ``w`` the inner value is
``lambda_max(W^{-1/2} Sigma W^{-1/2})``. The outer problem reduces to finding
the cheapest diagonal that dominates ``Sigma`` and rescaling it onto the budget.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .adversary import ObjectiveSpec, sigma
from .exceptions import DegenerateInputError
from .sdp import solve_linear_dominating, solve_squared_dominating
from .spectral import as_symmetric, is_psd


class Budget(enum.Enum):
    """Budget function ``h``: ``sum(w)`` or ``sum(w**2)``. Both have ``h(1) = n``."""

    L1 = "l1"
    SQUARED_L2 = "sql2"

    def __call__(self, w) -> float:
        w = np.asarray(w, dtype=float)
        return float(w.sum() if self is Budget.L1 else w @ w)

    def rescale(self, w: np.ndarray) -> float:
        """The ``t >= 0`` with ``h(t w) = h(1)``."""
        n = len(w)
        return n / self(w) if self is Budget.L1 else math.sqrt(n / self(w))


@dataclass(frozen=True)
class DefenseResult:
    """Optimal defender weights.

    Attributes
    ----------
    weights : ndarray
        ``w* = t w'`` on the budget surface.
    defense_value : float
        ``K = 1/t``, the adversary's best value against ``w*``.
    sdp_weights : ndarray
        ``w'``, the cheapest diagonal dominating ``Sigma``.
    feasibility_slack : float
        ``lambda_min(Diag(w') - Sigma)``; zero up to rounding at the optimum.
    value_error : float
        Upper bound on ``K - K_opt`` implied by the solver's duality gap.
    undefended_value : float
        ``lambda_max(Sigma)``, the value with uniform weights.
    """

    weights: np.ndarray
    defense_value: float
    sdp_weights: np.ndarray
    feasibility_slack: float
    value_error: float
    undefended_value: float
    budget: Budget


def _check_sigma(S) -> np.ndarray:
    S = as_symmetric(S, "Sigma")
    if not is_psd(S):
        raise ValueError("Sigma must be positive semidefinite")
    diag = np.diag(S)
    floor = 1e-12 * max(float(diag.max(initial=0.0)), np.finfo(float).tiny)
    bad = np.flatnonzero(diag <= floor)
    if len(bad):
        raise DegenerateInputError(
            f"Sigma has zero diagonal at nodes {bad.tolist()}; the optimal weight there would be 0"
        )
    return S


def _solve(S: np.ndarray, h: Budget) -> tuple[np.ndarray, float, float]:
    """Return ``(w', lower, upper)`` where ``h*`` lies in ``[lower, upper] = [.., h(w')]``."""
    if np.count_nonzero(S - np.diag(np.diag(S))) == 0:
        w = np.diag(S).copy()
        return w, h(w), h(w)
    sol = solve_linear_dominating(S) if h is Budget.L1 else solve_squared_dominating(S)
    return sol.weights, sol.lower_bound, sol.upper_bound


def solve_dominating_diagonal(S, h: Budget = Budget.L1) -> np.ndarray:
    """Cheapest diagonal ``w'`` (under ``h``) with ``Diag(w') >= Sigma``.

    Raises
    ------
    DegenerateInputError
        If some ``Sigma_ii`` is zero.
    """
    S = _check_sigma(S)
    return _solve(S, Budget(h))[0]


def verify_defense(S, w) -> float:
    """Adversary's value against fixed weights: ``lambda_max(W^{-1/2} Sigma W^{-1/2})``."""
    S = as_symmetric(S, "Sigma")
    w = np.asarray(w, dtype=float)
    if w.shape != (len(S),):
        raise ValueError("need one weight per node")
    if not np.all(w > 0):
        raise ValueError("weights must be strictly positive")
    r = 1.0 / np.sqrt(w)
    return float(np.linalg.eigvalsh(S * np.outer(r, r))[-1])


def defend(L, obj: ObjectiveSpec | None = None, h: Budget = Budget.L1) -> DefenseResult:
    """Optimal defender weights for an objective on a graph.

    Parameters
    ----------
    L : Graph or ndarray
        Graph or Laplacian.
    obj : ObjectiveSpec, optional
        Adversary objective; defaults to disagreement. ``R`` scales ``K`` by ``R^2``.
    h : Budget
        Budget function.
    """
    obj = obj or ObjectiveSpec.disagreement()
    h = Budget(h)
    S = _check_sigma(sigma(L, obj))
    w_prime, lower, upper = _solve(S, h)
    t = h.rescale(w_prime)
    n = len(S)
    if h is Budget.L1:
        k_lo = lower / n
    else:
        k_lo = math.sqrt(max(lower, 0.0) / n)
    r2 = obj.R**2
    return DefenseResult(
        weights=t * w_prime,
        defense_value=r2 / t,
        sdp_weights=w_prime,
        feasibility_slack=float(np.linalg.eigvalsh(np.diag(w_prime) - S)[0]),
        value_error=r2 * max(1.0 / t - k_lo, 0.0),
        undefended_value=r2 * float(np.linalg.eigvalsh(S)[-1]),
        budget=h,
    )
