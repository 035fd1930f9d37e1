"""Adversarial choice of internal opinions under FJ dynamics.

The adversary picks ``s`` in a norm ball of radius ``R`` to maximise a quadratic
form ``s^T Sigma s`` with ``Sigma = (I+L)^{-1} f(L) (I+L)^{-1}``. Since
``Sigma`` shares eigenvectors with ``L``, the l2 problem is solved exactly by
scanning the per-eigenvalue gain ``f(lam) / (1+lam)^2``. The l-infinity problem
is relaxed to an SDP over the elliptope and rounded; the l1 problem is solved
by a single coordinate vector.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.sparse.csgraph import connected_components

from .graph import Graph, laplacian_of
from .sdp import solve_elliptope
from .spectral import CLUSTER_TOL, EigenDecomposition, as_symmetric, eig_sym, is_psd, matrix_function

# Relative tolerance under which two eigenspaces count as tied optimizers.
TIE_RTOL = 1e-10
BRUTE_MAX_N = 22


class ObjectiveKind(enum.Enum):
    DISAGREEMENT = "disagreement"
    REPEATED = "repeated"
    PD = "pd"
    DISPLACEMENT = "displacement"


@dataclass(frozen=True)
class ObjectiveSpec:
    """Which quantity the adversary maximises, and the budget radius ``R``.

    ``T`` is the horizon for :attr:`ObjectiveKind.REPEATED` (``math.inf`` for
    the infinite horizon) and is ignored otherwise.
    """

    kind: ObjectiveKind
    R: float = 1.0
    T: float = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", ObjectiveKind(self.kind))
        if not (self.R > 0 and math.isfinite(self.R)):
            raise ValueError(f"budget R must be positive and finite, got {self.R}")
        if self.kind is ObjectiveKind.REPEATED:
            if not (self.T >= 0) or (math.isfinite(self.T) and self.T != int(self.T)):
                raise ValueError(f"horizon T must be a nonnegative integer or inf, got {self.T}")

    @classmethod
    def disagreement(cls, R: float = 1.0) -> ObjectiveSpec:
        return cls(ObjectiveKind.DISAGREEMENT, R)

    @classmethod
    def repeated(cls, T: float, R: float = 1.0) -> ObjectiveSpec:
        return cls(ObjectiveKind.REPEATED, R, T)

    @classmethod
    def pd(cls, R: float = 1.0) -> ObjectiveSpec:
        return cls(ObjectiveKind.PD, R)

    @classmethod
    def displacement(cls, R: float = 1.0) -> ObjectiveSpec:
        return cls(ObjectiveKind.DISPLACEMENT, R)

    def gain(self, lam: np.ndarray) -> np.ndarray:
        """``f(lam) / (1 + lam)^2`` evaluated elementwise (``R = 1``)."""
        lam = np.maximum(np.asarray(lam, dtype=float), 0.0)
        kind = self.kind
        if kind is ObjectiveKind.DISAGREEMENT:
            return lam / (1.0 + lam) ** 2
        if kind is ObjectiveKind.DISPLACEMENT:
            return 1.0 / (1.0 + lam) ** 2
        if kind is ObjectiveKind.REPEATED:
            if math.isinf(self.T):
                return 1.0 / (2.0 + lam)
            # 1 - (1+lam)^(-2(T+1)), written to stay accurate near lam = 0
            return -np.expm1(-2.0 * (self.T + 1) * np.log1p(lam)) / (2.0 + lam)
        raise ValueError("the polarization-disagreement objective has no Sigma form; use pd_optimal")


@dataclass(frozen=True)
class AttackResult:
    """Optimal l2 attack.

    ``seed_basis`` holds one optimal seed per column, each of norm ``R``; the
    columns span the maximising eigenspace(s). ``argmax_indices`` are the
    1-based positions of those eigenvalues in ascending order.
    """

    optimal_value: float
    argmax_eigenvalue: float
    argmax_indices: tuple[int, ...]
    seed_basis: np.ndarray
    is_unique_eigenspace: bool = True
    tied_eigenvalues: tuple[float, ...] = field(default=())


class SweepRow(NamedTuple):
    t: float
    argmax_index: int
    value: float
    eigenvalue: float
    critical: bool


class LinfSDPResult(NamedTuple):
    sdp_value: float
    gram_vectors: np.ndarray
    upper_bound: float
    gap: float


class L1Result(NamedTuple):
    index: int
    value: float
    lower_bound: float
    upper_bound: float


# ------------------------------------------------------------------ helpers


def _is_connected(L: np.ndarray) -> bool:
    off = L.copy()
    np.fill_diagonal(off, 0.0)
    ncomp, _ = connected_components(off != 0, directed=False)
    return ncomp == 1


def _connected_laplacian(L) -> np.ndarray:
    if isinstance(L, Graph):
        if not L.connected:
            raise ValueError("graph is disconnected")
        return laplacian_of(L)
    L = laplacian_of(L)
    if not _is_connected(L):
        raise ValueError("graph is disconnected")
    return L


def _sign_normalize(basis: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive."""
    basis = np.array(basis, dtype=float)
    if basis.size == 0:
        return basis
    pivots = np.argmax(np.abs(basis), axis=0)
    signs = np.sign(basis[pivots, np.arange(basis.shape[1])])
    signs[signs == 0] = 1.0
    return basis * signs


def _kernel_mask(values: np.ndarray) -> np.ndarray:
    scale = max(1.0, float(np.abs(values).max(initial=0.0)))
    return values <= CLUSTER_TOL * scale


def _gains(decomp: EigenDecomposition, obj: ObjectiveSpec) -> np.ndarray:
    g = obj.gain(decomp.values)
    if obj.kind is ObjectiveKind.REPEATED:
        # the constant direction is never moved by repeated averaging
        g = np.where(_kernel_mask(decomp.values), 0.0, g)
    return g


# --------------------------------------------------------------- operations


def sigma(L, obj: ObjectiveSpec | None = None) -> np.ndarray:
    """The quadratic form ``(I+L)^{-1} f(L) (I+L)^{-1}`` of an objective.

    Parameters
    ----------
    L : Graph or ndarray
        Graph or Laplacian.
    obj : ObjectiveSpec, optional
        Defaults to plain disagreement. ``R`` is not applied here.
    """
    obj = obj or ObjectiveSpec.disagreement()
    if obj.kind is ObjectiveKind.PD:
        raise ValueError("polarization-disagreement is not a Sigma-form objective; use pd_optimal")
    d = eig_sym(laplacian_of(L))
    g = _gains(d, obj)
    return matrix_function(d, lambda _: g)


def l2_attack(L, obj: ObjectiveSpec | None = None) -> AttackResult:
    """Exact optimum of ``max s^T Sigma s`` over ``||s||_2 <= R``.

    The optimum is ``R^2`` times the largest gain over the eigenvalues of
    ``L`` (the zero eigenvalue is excluded for repeated disagreement). When
    distinct eigenvalues tie, every tying eigenspace is returned and
    ``is_unique_eigenspace`` is false. A polarization-disagreement objective
    is forwarded to :func:`pd_optimal`.

    Raises
    ------
    ValueError
        If the graph is disconnected.
    """
    obj = obj or ObjectiveSpec.disagreement()
    if obj.kind is ObjectiveKind.PD:
        return pd_optimal(L, obj.R)
    d = eig_sym(_connected_laplacian(L))
    gains = _gains(d, obj)
    clusters = d.clusters()
    cluster_gain = np.array([gains[idx].max() for idx in clusters])
    best = float(cluster_gain.max())
    tied = [c for c, gv in zip(clusters, cluster_gain) if gv >= best - TIE_RTOL * abs(best)]
    indices = np.concatenate(tied)
    basis = _sign_normalize(d.vectors[:, indices]) * obj.R
    return AttackResult(
        optimal_value=obj.R**2 * best,
        argmax_eigenvalue=float(d.values[tied[0]].mean()),
        argmax_indices=tuple(int(i) + 1 for i in indices),
        seed_basis=basis,
        is_unique_eigenspace=len(tied) == 1,
        tied_eigenvalues=tuple(float(d.values[c].mean()) for c in tied),
    )


def t_sweep(L, resolution: int = 64, R: float = 1.0) -> list[SweepRow]:
    """Disagreement optimum of ``tL`` across a log-spaced range of ``t``.

    The grid covers ``[0.1/lam_n, 10/lam_2]`` with ``resolution`` points per
    decade, and every critical point ``t = 1/lam_i`` is added. At a critical
    point the ``lam_i`` eigenspace reaches the peak gain ``R^2/4``. Indices are
    1-based and refer to the first eigenvalue of the optimal eigenspace.
    """
    if int(resolution) != resolution or resolution < 2:
        raise ValueError("resolution must be an integer >= 2")
    d = eig_sym(_connected_laplacian(L))
    n = d.n
    if n < 2:
        return []
    clusters = d.clusters()
    first_of = np.empty(n, dtype=int)
    for idx in clusters:
        first_of[idx] = idx[0]
    lam2, lamn = d.values[1], d.values[-1]
    lo, hi = math.log10(0.1 / lamn), math.log10(10.0 / lam2)
    num = max(2, math.ceil((hi - lo) * resolution) + 1)
    grid = [(float(t), False) for t in np.logspace(lo, hi, num)]
    grid += [(1.0 / float(d.values[idx].mean()), True) for idx in clusters[1:]]
    grid.sort(key=lambda row: row[0])

    rows = []
    for t, critical in grid:
        x = t * d.values
        g = x / (1.0 + x) ** 2
        g[0] = 0.0
        k = int(np.argmax(g))
        rows.append(SweepRow(t, int(first_of[k]) + 1, R**2 * float(g[k]), float(d.values[k]), critical))
    return rows


def pd_optimal(L, R: float = 1.0) -> AttackResult:
    """Maximise polarization plus disagreement at equilibrium over ``||s|| <= R``.

    The optimum is ``R^2 / (1 + lam_2)`` attained on the ``lam_2`` eigenspace.
    """
    if not (R > 0 and math.isfinite(R)):
        raise ValueError("R must be positive and finite")
    d = eig_sym(_connected_laplacian(L))
    if d.n < 2:
        raise ValueError("need at least two nodes")
    space = d.eigenspace_of(1)
    lam2 = float(d.values[1])
    return AttackResult(
        optimal_value=R**2 / (1.0 + lam2),
        argmax_eigenvalue=space.eigenvalue,
        argmax_indices=tuple(i + 1 for i in space.indices),
        seed_basis=_sign_normalize(space.basis) * R,
        is_unique_eigenspace=True,
        tied_eigenvalues=(space.eigenvalue,),
    )


def _psd_sigma(S) -> np.ndarray:
    S = as_symmetric(S, "Sigma")
    if not is_psd(S):
        raise ValueError("Sigma must be positive semidefinite")
    return S


def linf_attack_sdp(S, tol: float = 1e-9, rng_seed: int = 0) -> LinfSDPResult:
    """SDP relaxation of ``max s^T Sigma s`` over sign vectors.

    Returns the certified primal value, unit Gram vectors (rows), the dual
    upper bound and their gap. The relaxation sits between the sign optimum
    and ``pi/2`` times it.
    """
    S = _psd_sigma(S)
    sol = solve_elliptope(S, tol=tol, rng_seed=rng_seed)
    return LinfSDPResult(sol.value, sol.gram_vectors, sol.upper_bound, sol.gap)


def linf_round(S, gram_vectors, trials: int = 200, rng_seed: int = 0) -> tuple[np.ndarray, float]:
    """Best of ``trials`` random-hyperplane roundings of the Gram vectors.

    The returned sign vector has ``s[0] = +1``. Draws come from a Philox
    generator seeded with ``rng_seed``, so results are reproducible.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    S = _psd_sigma(S)
    V = np.asarray(gram_vectors, dtype=float)
    if V.ndim != 2 or V.shape[0] != S.shape[0]:
        raise ValueError("gram_vectors must have one row per node")
    rng = np.random.Generator(np.random.Philox(rng_seed))
    H = rng.standard_normal((V.shape[1], trials))
    signs = np.where(V @ H >= 0.0, 1.0, -1.0)
    values = np.einsum("it,ij,jt->t", signs, S, signs)
    best = int(np.argmax(values))
    s = signs[:, best] * signs[0, best]
    return s, float(values[best])


def _sign_block(n: int, start: int, stop: int) -> np.ndarray:
    """Sign vectors with ``s[0] = +1`` for codes ``start..stop-1``."""
    codes = np.arange(start, stop, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(n - 1, dtype=np.int64)) & 1
    out = np.ones((len(codes), n))
    out[:, 1:] = 1.0 - 2.0 * bits
    return out


def iter_sign_vectors(n: int, chunk: int = 1 << 15):
    """Yield blocks covering every sign vector in ``{+-1}^n`` with first entry +1."""
    total = 1 << (n - 1)
    for start in range(0, total, chunk):
        yield _sign_block(n, start, min(total, start + chunk))


def linf_brute(S) -> tuple[np.ndarray, float]:
    """Exact ``max s^T Sigma s`` over sign vectors by enumeration (``n <= 22``)."""
    S = as_symmetric(S, "Sigma")
    n = S.shape[0]
    if n > BRUTE_MAX_N:
        raise ValueError(f"brute force is limited to n <= {BRUTE_MAX_N}, got {n}")
    best_val, best_s = -np.inf, None
    for block in iter_sign_vectors(n):
        vals = np.einsum("ki,ij,kj->k", block, S, block)
        k = int(np.argmax(vals))
        if vals[k] > best_val:
            best_val, best_s = float(vals[k]), block[k].copy()
    return best_s, best_val


def l1_attack(S) -> L1Result:
    """Optimal l1-budget attack: all mass on the node with the largest ``Sigma_ii``.

    Also returns ``Tr(Sigma)/n`` and ``lambda_max(Sigma)``, which bracket the
    value.
    """
    S = _psd_sigma(S)
    diag = np.diag(S)
    i = int(np.argmax(diag))
    return L1Result(i, float(diag[i]), float(np.trace(S)) / len(S), float(np.linalg.eigvalsh(S)[-1]))


def sparsity_bound(L, k: int) -> float:
    """Upper bound on disagreement added by a ``k``-sparse perturbation in the unit cube.

    ``lam k + sqrt(k) * min(2 d_max sqrt(k), 2 lam sqrt(n))`` with
    ``lam = lambda_max(Sigma)`` for the disagreement objective.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return 0.0
    L = laplacian_of(L)
    n = len(L)
    vals = np.linalg.eigvalsh(L)
    lam = float(ObjectiveSpec.disagreement().gain(vals).max())
    dmax = float(np.diag(L).max())
    rk = math.sqrt(k)
    return lam * k + rk * min(2.0 * dmax * rk, 2.0 * lam * math.sqrt(n))


def clique_sparsity_example(n: int, k: int) -> float:
    """Disagreement of the first-``k`` indicator on ``K_n`` scaled to eigenvalue 1."""
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}")
    from .graph import complete_graph

    L = laplacian_of(complete_graph(n)) / n if n >= 2 else np.zeros((1, 1))
    s = np.zeros(n)
    s[:k] = 1.0
    return float(s @ sigma(L) @ s)
