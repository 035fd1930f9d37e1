"""Weighted undirected graphs, Laplacians, cuts and standard test graphs.

Graphs are small and dense by design: every downstream computation is a
dense spectral one, so the adjacency matrix is materialised once and cached.
"""

from __future__ import annotations

import io
import itertools
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

from .exceptions import GraphParseError

Edge = tuple[int, int, float]


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on nodes ``0..n-1`` with positive edge weights.

    Edges are stored canonically as ``(u, v, w)`` with ``u < v``, sorted, so two
    graphs with the same edge set compare equal regardless of input order.
    """

    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"node count must be a positive integer, got {self.n!r}")
        canon = []
        seen = set()
        for u, v, w in self.edges:
            u, v, w = int(u), int(v), float(w)
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")
            if not (w > 0 and np.isfinite(w)):
                raise ValueError(f"edge ({u}, {v}) has nonpositive or non-finite weight {w}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            canon.append((key[0], key[1], w))
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    @cached_property
    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        for u, v, w in self.edges:
            A[u, v] = A[v, u] = w
        A.flags.writeable = False
        return A

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    @property
    def max_degree(self) -> float:
        return float(self.degrees.max()) if self.edges else 0.0

    @property
    def total_weight(self) -> float:
        """Sum of edge weights (``m``)."""
        return float(sum(w for _, _, w in self.edges))

    @property
    def is_unweighted(self) -> bool:
        return all(w == 1.0 for _, _, w in self.edges)

    @cached_property
    def connected(self) -> bool:
        ncomp, _ = connected_components(self.adjacency > 0, directed=False)
        return ncomp == 1

    def __repr__(self):
        return f"Graph(n={self.n}, edges={len(self.edges)}, m={self.total_weight:g})"


def laplacian(g: Graph) -> np.ndarray:
    """Return ``L = D - A`` as a fresh dense array."""
    A = np.array(g.adjacency)
    return np.diag(A.sum(axis=1)) - A


def laplacian_of(obj) -> np.ndarray:
    """Laplacian of a :class:`Graph`, or a validated symmetric copy of a matrix."""
    if isinstance(obj, Graph):
        return laplacian(obj)
    from .spectral import as_symmetric

    return as_symmetric(obj)


# --------------------------------------------------------------------------- io


def _parse_lines(lines: Iterable[str]) -> Graph:
    n = None
    header_line = None
    raw: list[tuple[int, int, int, float]] = []
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        parts = text.split()
        if parts[0] == "n":
            if n is not None:
                raise GraphParseError("duplicate 'n' header", lineno)
            if len(parts) != 2:
                raise GraphParseError("header must be 'n <count>'", lineno)
            try:
                n = int(parts[1])
            except ValueError:
                raise GraphParseError(f"bad node count {parts[1]!r}", lineno) from None
            if n < 1:
                raise GraphParseError(f"node count must be positive, got {n}", lineno)
            header_line = lineno
            continue
        if len(parts) != 3:
            raise GraphParseError(f"expected 'u v w', got {text!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(f"node ids must be integers: {text!r}", lineno) from None
        try:
            w = float(parts[2])
        except ValueError:
            raise GraphParseError(f"weight is not a number: {parts[2]!r}", lineno) from None
        raw.append((lineno, u, v, w))

    if n is None:
        n = max((max(u, v) for _, u, v, _ in raw), default=0) + 1

    seen: dict[tuple[int, int], int] = {}
    edges = []
    for lineno, u, v, w in raw:
        if u == v:
            raise GraphParseError(f"self-loop at node {u}", lineno)
        if min(u, v) < 0 or max(u, v) >= n:
            where = f" (header on line {header_line})" if header_line else ""
            raise GraphParseError(f"node id out of range for n={n}{where}: {u} {v}", lineno)
        if not (w > 0 and np.isfinite(w)):
            raise GraphParseError(f"weight must be positive and finite, got {w}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphParseError(f"duplicate edge {key[0]}-{key[1]} (first on line {seen[key]})", lineno)
        seen[key] = lineno
        edges.append((u, v, w))
    return Graph(n, tuple(edges))


def load_graph(source) -> Graph:
    """Parse an edge list.

    ``source`` may be the text itself, an open text stream, or a path
    (``os.PathLike``). Lines are ``u v w``; an optional ``n <count>`` line fixes
    the node count (otherwise it is one more than the largest id) and lines
    starting with ``#`` are comments.

    Raises
    ------
    GraphParseError
        On self-loops, duplicate edges, nonpositive weights or ids out of
        range. The message names the offending line.
    """
    if isinstance(source, os.PathLike):
        with open(source, encoding="utf-8") as fh:
            return _parse_lines(fh)
    if isinstance(source, str):
        return _parse_lines(io.StringIO(source))
    return _parse_lines(source)


def format_graph(g: Graph) -> str:
    """Inverse of :func:`load_graph`; weights are written with full precision."""
    out = [f"n {g.n}"]
    out += [f"{u} {v} {w!r}" for u, v, w in g.edges]
    return "\n".join(out) + "\n"


# ------------------------------------------------------------------------- cuts


def _as_nodeset(g: Graph, nodes, name: str) -> frozenset[int]:
    s = frozenset(int(i) for i in nodes)
    bad = [i for i in s if not 0 <= i < g.n]
    if bad:
        raise ValueError(f"{name} contains nodes outside 0..{g.n - 1}: {sorted(bad)}")
    return s


def cut_value(g: Graph, s, t=None) -> float:
    """Total weight of edges with one end in ``s`` and the other in ``t``.

    ``t`` defaults to the complement of ``s``.
    """
    S = _as_nodeset(g, s, "s")
    T = frozenset(range(g.n)) - S if t is None else _as_nodeset(g, t, "t")
    if S & T:
        raise ValueError(f"node sets overlap on {sorted(S & T)}")
    return float(sum(w for u, v, w in g.edges if (u in S and v in T) or (v in S and u in T)))


def indicator(n: int, s) -> np.ndarray:
    """The +/-1 indicator: +1 on ``s``, -1 elsewhere."""
    chi = -np.ones(n)
    chi[list(s)] = 1.0
    return chi


# ----------------------------------------------------------------- constructors


def empty_graph(n: int) -> Graph:
    return Graph(n)


def path_graph(n: int, weight: float = 1.0) -> Graph:
    return Graph(n, tuple((i, i + 1, weight) for i in range(n - 1)))


def cycle_graph(n: int, weight: float = 1.0) -> Graph:
    if n < 3:
        raise ValueError("a simple cycle needs n >= 3")
    return Graph(n, tuple((i, (i + 1) % n, weight) for i in range(n)))


def star_graph(leaves: int, weight: float = 1.0) -> Graph:
    """Star with center 0 and ``leaves`` leaves (``S_3`` has 4 nodes)."""
    return Graph(leaves + 1, tuple((0, i, weight) for i in range(1, leaves + 1)))


def complete_graph(n: int, total_weight: float | None = None) -> Graph:
    """``K_n`` with uniform weights summing to ``total_weight``.

    The default total ``n(n-1)/2`` gives the unweighted complete graph.
    """
    if n < 2:
        raise ValueError(f"complete graph needs n >= 2, got {n}")
    pairs = n * (n - 1) // 2
    if total_weight is None:
        total_weight = float(pairs)
    if not total_weight > 0:
        raise ValueError("total_weight must be positive")
    w = total_weight / pairs
    return Graph(n, tuple((i, j, w) for i, j in itertools.combinations(range(n), 2)))


def complete_bipartite_graph(a: int, b: int, weight: float = 1.0) -> Graph:
    """Sides are ``0..a-1`` and ``a..a+b-1``."""
    return Graph(a + b, tuple((i, a + j, weight) for i in range(a) for j in range(b)))


def two_cliques_graph(k: int, crossing: int = 0, weight: float = 1.0) -> Graph:
    """Two unweighted ``k``-cliques on ``0..k-1`` and ``k..2k-1``.

    ``crossing`` edges ``(i, k+i)`` for ``i < crossing`` join the two sides.
    """
    if not 0 <= crossing <= k:
        raise ValueError("crossing must be between 0 and k")
    edges = [(i, j, weight) for i, j in itertools.combinations(range(k), 2)]
    edges += [(k + i, k + j, weight) for i, j in itertools.combinations(range(k), 2)]
    edges += [(i, k + i, weight) for i in range(crossing)]
    return Graph(2 * k, tuple(edges))


def hypercube_graph(d: int) -> Graph:
    n = 1 << d
    return Graph(n, tuple((i, i ^ (1 << b), 1.0) for i in range(n) for b in range(d) if i < i ^ (1 << b)))


def complement_graph(g: Graph) -> Graph:
    """Unweighted complement; weighted input is rejected."""
    if not g.is_unweighted:
        raise ValueError("complement is only defined here for unweighted graphs")
    present = {(u, v) for u, v, _ in g.edges}
    return Graph(g.n, tuple((i, j, 1.0) for i, j in itertools.combinations(range(g.n), 2) if (i, j) not in present))


def relabel(g: Graph, perm: Sequence[int]) -> Graph:
    """Isomorphic copy with node ``i`` renamed ``perm[i]``."""
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(g.n)):
        raise ValueError("perm must be a permutation of 0..n-1")
    return Graph(g.n, tuple((perm[u], perm[v], w) for u, v, w in g.edges))


def from_adjacency(A, tol: float = 0.0) -> Graph:
    """Graph whose weights are the entries of a symmetric nonnegative matrix above ``tol``."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("adjacency must be square")
    if not np.allclose(A, A.T, rtol=0, atol=1e-12 * max(1.0, np.abs(A).max(initial=0))):
        raise ValueError("adjacency must be symmetric")
    n = A.shape[0]
    edges = []
    for i, j in itertools.combinations(range(n), 2):
        w = 0.5 * (A[i, j] + A[j, i])
        if w < -tol:
            raise ValueError(f"negative weight {w} at ({i}, {j})")
        if w > tol:
            edges.append((i, j, w))
    return Graph(n, tuple(edges))


def from_laplacian(L, tol: float = 1e-12) -> Graph:
    """Recover the graph of a Laplacian; off-diagonals above ``-tol`` are treated as absent."""
    L = np.asarray(L, dtype=float)
    scale = max(1.0, np.abs(L).max(initial=0))
    if np.abs(L.sum(axis=1)).max(initial=0) > 1e-9 * scale:
        raise ValueError("rows of a Laplacian must sum to zero")
    A = -L.copy()
    np.fill_diagonal(A, 0.0)
    return from_adjacency(A, tol=tol * scale)


def random_connected_graph(
    n: int,
    rng: np.random.Generator,
    edge_prob: float = 0.3,
    weights: tuple[float, float] | None = (0.1, 2.0),
) -> Graph:
    """Random spanning tree plus independent extra edges.

    ``weights=None`` gives an unweighted graph; otherwise weights are uniform
    on the given interval.
    """
    if n < 1:
        raise ValueError("n must be positive")

    def draw():
        return 1.0 if weights is None else float(rng.uniform(*weights))

    order = rng.permutation(n)
    edges = {}
    for k in range(1, n):
        u, v = int(order[k]), int(order[rng.integers(k)])
        edges[(min(u, v), max(u, v))] = draw()
    for i, j in itertools.combinations(range(n), 2):
        if (i, j) not in edges and rng.random() < edge_prob:
            edges[(i, j)] = draw()
    return Graph(n, tuple((i, j, w) for (i, j), w in edges.items()))
