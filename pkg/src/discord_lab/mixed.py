"""Opinions that evolve on one graph while disagreement is measured on another.

``G1`` (Laplacian ``L``) drives the FJ dynamics and ``G2`` (Laplacian ``M``)
measures disagreement, so the unit-budget adversary's value is
``lambda_max((I+L)^{-1} M (I+L)^{-1})``. This module computes that value and a
family of bounds on it: eigenvalue interlacing, spectral and physical
similarity brackets, and lower bounds from test vectors and cuts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .dynamics import fj_operator
from .graph import Graph, from_laplacian, indicator, laplacian
from .spectral import CLUSTER_TOL, as_symmetric, eig_sym, is_psd

BRUTE_MAX_N = 22


@dataclass(frozen=True)
class GraphPair:
    """Opinion graph ``g1`` and measurement graph ``g2`` on the same nodes."""

    g1: Graph
    g2: Graph

    def __post_init__(self):
        if self.g1.n != self.g2.n:
            raise ValueError(f"graphs have different node counts: {self.g1.n} vs {self.g2.n}")

    @classmethod
    def from_laplacians(cls, L, M) -> GraphPair:
        return cls(from_laplacian(L), from_laplacian(M))

    @property
    def n(self) -> int:
        return self.g1.n

    @cached_property
    def L(self) -> np.ndarray:
        return laplacian(self.g1)

    @cached_property
    def M(self) -> np.ndarray:
        return laplacian(self.g2)


class SimilarityReport(NamedTuple):
    """How close ``L`` and ``M`` are, spectrally and edge by edge.

    ``epsilon_spectral`` is infinite when the kernels differ; ``diagnostic``
    then says why.
    """

    epsilon_spectral: float
    delta_operator: float
    eta: float
    gamma: float
    diagnostic: str = ""


class CutBounds(NamedTuple):
    bound_cor: float
    bound_prop: float
    bound_cor_exact: float


class CutSweepResult(NamedTuple):
    best_set: tuple[int, ...]
    bounds: CutBounds
    evaluated: int


class CounterexampleResult(NamedTuple):
    L: np.ndarray
    mixed_value: float
    single_value: float
    predicted_value: float


# ------------------------------------------------------------------- values


def mixed_matrix(L, M) -> np.ndarray:
    """``(I+L)^{-1} M (I+L)^{-1}`` for Laplacians ``L`` and ``M``."""
    C = fj_operator(L)
    out = C @ as_symmetric(M, "M") @ C
    return 0.5 * (out + out.T)


def mixed_objective(pair: GraphPair) -> float:
    """Largest eigenvalue of ``(I+L)^{-1} M (I+L)^{-1}``."""
    return float(np.linalg.eigvalsh(mixed_matrix(pair.L, pair.M))[-1])


def single_graph_value(M) -> float:
    """``max_i lam_i / (1 + lam_i)^2`` over the spectrum of ``M``."""
    lam = np.maximum(np.linalg.eigvalsh(as_symmetric(M)), 0.0)
    return float((lam / (1.0 + lam) ** 2).max())


def mixed_lower_bound(pair: GraphPair) -> float:
    """``max_k lam_k(M) / (1 + lam_k(L))^2`` with both spectra ascending."""
    lm = np.linalg.eigvalsh(pair.M)
    ll = np.linalg.eigvalsh(pair.L)
    return float((lm / (1.0 + ll) ** 2).max())


def matbound(B, C) -> tuple[float, float]:
    """Bracket ``lambda_max(C B C)`` by the spectra of PSD ``B`` and ``C``.

    ``max_k lam_{n-k+1}(C)^2 lam_k(B) <= lambda_max(CBC) <= lam_n(C)^2 lam_n(B)``.
    """
    B = as_symmetric(B, "B")
    C = as_symmetric(C, "C")
    if B.shape != C.shape:
        raise ValueError(f"dimension mismatch: {B.shape} vs {C.shape}")
    for name, X in (("B", B), ("C", C)):
        if not is_psd(X):
            raise ValueError(f"{name} is not positive semidefinite")
    lb = np.maximum(np.linalg.eigvalsh(B), 0.0)
    lc = np.maximum(np.linalg.eigvalsh(C), 0.0)
    lower = float((lc[::-1] ** 2 * lb).max())
    upper = float(lc[-1] ** 2 * lb[-1])
    return lower, upper


# --------------------------------------------------------------- similarity


def _kernel_and_range(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    vals, vecs = np.linalg.eigh(A)
    scale = max(1.0, float(np.abs(vals).max(initial=0.0)))
    null = vals <= CLUSTER_TOL * scale
    return vecs[:, null], vecs[:, ~null]


def _gen_lambda_max(A: np.ndarray, B: np.ndarray) -> float:
    """Largest ``lam`` with ``A v = lam B v`` for ``B`` positive definite."""
    vals, vecs = np.linalg.eigh(B)
    r = vecs / np.sqrt(vals)
    return float(np.linalg.eigvalsh(r.T @ A @ r)[-1])


def spectral_epsilon(L, M) -> tuple[float, str]:
    """Smallest ``eps`` with ``L/(1+eps) <= M <= (1+eps) L`` off the common kernel."""
    L = as_symmetric(L, "L")
    M = as_symmetric(M, "M")
    kl, _ = _kernel_and_range(L)
    km, _ = _kernel_and_range(M)
    if kl.shape[1] != km.shape[1]:
        return math.inf, f"kernel dimensions differ ({kl.shape[1]} vs {km.shape[1]})"
    if kl.shape[1] and np.linalg.norm(kl @ kl.T - km @ km.T, 2) > 1e-6:
        return math.inf, "kernels have equal dimension but span different subspaces"
    _, Q = _kernel_and_range(L)
    if Q.shape[1] == 0:
        return 0.0, ""
    A, B = Q.T @ M @ Q, Q.T @ L @ Q
    ratio = max(_gen_lambda_max(A, B), _gen_lambda_max(B, A))
    return max(ratio - 1.0, 0.0), ""


def spectral_similarity(pair: GraphPair) -> SimilarityReport:
    """Spectral ``eps``, ``||M - L||`` and the edge-wise distances ``eta`` and ``gamma``."""
    eps, why = spectral_epsilon(pair.L, pair.M)
    A1, A2 = pair.g1.adjacency, pair.g2.adjacency
    eta = float(np.abs(A1 - A2).sum(axis=1).max())
    gamma = float(np.abs(A1.sum(axis=1) - A2.sum(axis=1)).max())
    delta = float(np.abs(np.linalg.eigvalsh(pair.M - pair.L)).max())
    return SimilarityReport(eps, delta, eta, gamma, why)


def _gain(x):
    return x / (1.0 + x) ** 2


def similarity_bracket(pair: GraphPair, eps: float) -> tuple[float, float]:
    """Bracket the mixed objective given that ``L`` and ``M`` are ``eps``-similar.

    Each eigenvalue of ``M`` is perturbed by a factor ``c`` in
    ``[1/(1+eps), 1+eps]``. Over that interval ``c lam / (1 + c lam)^2`` is
    unimodal with its peak at ``c = 1/lam``, so the minimum sits at an
    endpoint and the maximum at an endpoint or at the peak.
    """
    if not eps >= 0:
        raise ValueError("eps must be nonnegative")
    if math.isinf(eps):
        return 0.0, math.inf
    lam = np.maximum(np.linalg.eigvalsh(pair.M), 0.0)
    lo_c, hi_c = 1.0 / (1.0 + eps), 1.0 + eps
    at_lo, at_hi = _gain(lo_c * lam), _gain(hi_c * lam)
    peak = np.zeros_like(lam)
    inside = (lo_c * lam <= 1.0) & (1.0 <= hi_c * lam)
    peak[inside] = 0.25
    lower = float(np.minimum(at_lo, at_hi).max()) / (1.0 + eps)
    upper = float(np.maximum(np.maximum(at_lo, at_hi), peak).max()) * (1.0 + eps)
    return lower, upper


def physical_similarity_bracket(pair: GraphPair) -> tuple[float, float, float]:
    """Bracket the mixed objective using ``Delta = ||M - L||``.

    ``max (lam_i(M) - 2 Delta) / (1 + lam_i(M) + Delta)^2`` below and
    ``max (lam_i(M) + 2 Delta) / (1 + max(lam_i(M) - Delta, 0))^2`` above.
    """
    delta = float(np.abs(np.linalg.eigvalsh(pair.M - pair.L)).max())
    lam = np.maximum(np.linalg.eigvalsh(pair.M), 0.0)
    lower = float(((lam - 2 * delta) / (1.0 + lam + delta) ** 2).max())
    upper = float(((lam + 2 * delta) / (1.0 + np.maximum(lam - delta, 0.0)) ** 2).max())
    return lower, upper, delta


# -------------------------------------------------------------- test vectors


def bad_approx_bound(pair: GraphPair, x) -> float:
    """``x^T M x / (n + (||L|| + 2) x^T L x)`` for a test vector with ``||x||^2 = n``."""
    x = np.asarray(x, dtype=float)
    n = pair.n
    if x.shape != (n,):
        raise ValueError(f"x must have length {n}")
    if abs(x @ x - n) > 1e-8 * n:
        raise ValueError(f"x must satisfy ||x||^2 = n = {n}, got {x @ x:.12g}")
    norm_l = float(np.abs(np.linalg.eigvalsh(pair.L)).max())
    return float(x @ pair.M @ x) / (n + (norm_l + 2.0) * float(x @ pair.L @ x))


def _cut_bounds_from_cuts(cut1, cut2, n: int, dmax: float, norm_l: float) -> CutBounds:
    cut1 = np.asarray(cut1, dtype=float)
    cut2 = np.asarray(cut2, dtype=float)
    cor = 4 * cut2 / (n + 8 * (dmax + 1) * cut1)
    prop = (4 * cut2 / n) / (1 + 2 * math.sqrt(2) * cut1 / math.sqrt(n)) ** 2
    cor_exact = 4 * cut2 / (n + 4 * (norm_l + 2) * cut1)
    return CutBounds(cor, prop, cor_exact)


def cut_bounds(pair: GraphPair, s) -> CutBounds:
    """Lower bounds on the mixed objective from the cut of node set ``s``.

    ``bound_cor`` uses the max degree of ``G1``, ``bound_cor_exact`` uses
    ``||L||`` instead, and ``bound_prop`` is the direct Rayleigh-quotient
    estimate ``(4 cut2 / n) / (1 + 2 sqrt(2) cut1 / sqrt(n))^2``.
    """
    members = sorted({int(i) for i in s})
    n = pair.n
    if not members or len(members) == n:
        raise ValueError("s must be a nonempty proper subset of the nodes")
    if members[0] < 0 or members[-1] >= n:
        raise ValueError(f"s contains nodes outside 0..{n - 1}")
    chi = indicator(n, members)
    cut1 = chi @ pair.L @ chi / 4
    cut2 = chi @ pair.M @ chi / 4
    b = _cut_bounds_from_cuts(cut1, cut2, n, float(np.diag(pair.L).max()), _norm(pair.L))
    return CutBounds(*(float(v) for v in b))


def _norm(A) -> float:
    return float(np.abs(np.linalg.eigvalsh(A)).max(initial=0.0))


def _candidate_sets_spectral(pair: GraphPair) -> np.ndarray:
    """Sign patterns suggested by the top eigenvector of the mixed matrix."""
    n = pair.n
    d = eig_sym(mixed_matrix(pair.L, pair.M))
    z = fj_operator(pair.L) @ d.vectors[:, -1]
    order = np.argsort(z, kind="stable")
    rows = [np.where(z >= 0, 1.0, -1.0)]
    for k in range(1, n):
        chi = np.ones(n)
        chi[order[:k]] = -1.0
        rows.append(chi)
    return np.array(rows)


def _evaluate(pair: GraphPair, X: np.ndarray, criterion: str):
    cut1 = np.einsum("ki,ij,kj->k", X, pair.L, X) / 4
    cut2 = np.einsum("ki,ij,kj->k", X, pair.M, X) / 4
    b = _cut_bounds_from_cuts(cut1, cut2, pair.n, float(np.diag(pair.L).max()), _norm(pair.L))
    key = {"cor": b.bound_cor, "prop": b.bound_prop, "cor_exact": b.bound_cor_exact}[criterion]
    k = int(np.argmax(key))
    return float(key[k]), X[k], CutBounds(*(float(v[k]) for v in b))


def cut_bounds_sweep(
    pair: GraphPair,
    mode: str = "exhaustive",
    samples: int = 1000,
    rng_seed: int = 0,
    criterion: str = "prop",
) -> CutSweepResult:
    """Best cut bound over node sets.

    ``mode="exhaustive"`` tries every nonempty proper subset (up to
    complement, ``n <= 22``). ``mode="random"`` tries ``samples`` uniform
    random subsets plus the threshold cuts of the mixed-objective optimizer,
    reproducibly for a given ``rng_seed``. ``criterion`` picks which bound is
    maximised: ``"prop"``, ``"cor"`` or ``"cor_exact"``.
    """
    if criterion not in ("prop", "cor", "cor_exact"):
        raise ValueError(f"unknown criterion {criterion!r}")
    n = pair.n
    if n < 2:
        return CutSweepResult((), CutBounds(0.0, 0.0, 0.0), 0)

    if mode == "exhaustive":
        if n > BRUTE_MAX_N:
            raise ValueError(f"exhaustive sweep is limited to n <= {BRUTE_MAX_N}, got {n}")
        from .adversary import iter_sign_vectors

        blocks = iter_sign_vectors(n)
    elif mode == "random":
        if samples < 0:
            raise ValueError("samples must be nonnegative")
        rng = np.random.Generator(np.random.Philox(rng_seed))
        X = np.where(rng.random((samples, n)) < 0.5, 1.0, -1.0)
        blocks = [X, _candidate_sets_spectral(pair)]
    else:
        raise ValueError(f"unknown mode {mode!r}")

    best = (-math.inf, None, None)
    evaluated = 0
    for X in blocks:
        X = X[np.abs(X.sum(axis=1)) < n]  # drop the empty and full sets
        if len(X) == 0:
            continue
        evaluated += len(X)
        cand = _evaluate(pair, X, criterion)
        if cand[0] > best[0]:
            best = cand
    if best[1] is None:
        return CutSweepResult((), CutBounds(0.0, 0.0, 0.0), evaluated)
    chi = best[1]
    side = chi > 0 if chi[0] > 0 else chi < 0
    return CutSweepResult(tuple(int(i) for i in np.flatnonzero(side)), best[2], evaluated)


# ----------------------------------------------------------- counterexample


def eigen_shift_counterexample(M, eta: float) -> CounterexampleResult:
    """Perturb ``M`` along its second and third eigenvectors.

    With ``1 < lam_2(M) < lam_3(M)``, the opinion graph
    ``L = M + eta (v2 v2^T - v3 v3^T)`` gives a mixed value of
    ``lam_2 / (1 + lam_2 + eta)^2`` for small ``eta > 0``, below the value
    obtained with ``L = M``.
    """
    M = as_symmetric(M, "M")
    if not eta > 0:
        raise ValueError("eta must be positive")
    d = eig_sym(M)
    if d.n < 3:
        raise ValueError("need at least three nodes")
    lam2, lam3 = d.values[1], d.values[2]
    gap_tol = CLUSTER_TOL * max(1.0, d.norm)
    if not (lam2 > 1.0 and lam3 - lam2 > gap_tol):
        raise ValueError(f"need 1 < lam_2 < lam_3, got lam_2={lam2:.6g}, lam_3={lam3:.6g}")
    v2, v3 = d.vectors[:, 1], d.vectors[:, 2]
    L = M + eta * (np.outer(v2, v2) - np.outer(v3, v3))
    L = 0.5 * (L + L.T)
    value = float(np.linalg.eigvalsh(mixed_matrix(L, M))[-1])
    return CounterexampleResult(L, value, single_graph_value(M), float(lam2 / (1.0 + lam2 + eta) ** 2))
