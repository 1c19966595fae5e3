"""Counting statistics behind the lower bound: uncovered k-sets and truncation.

For a vertex set S, a k-subset T of S is *covered* when some vertex outside S
is adjacent to all of T. ``X_S`` counts uncovered k-subsets, ``Y_S`` the
uncovered ones spanning a clique. Every outside vertex ``w`` marks only its
``x`` edges into S with the smallest S-endpoints; ``X'_S`` counts k-subsets
not covered through marked edges alone, so ``X'_S >= X_S`` always.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

import numpy as np

from ._util import ceil_tol, pow1m
from .graph_core import Graph, Seed, generate_gnp

__all__ = [
    "size_parameter_s",
    "truncation_x",
    "vertex_class_budget",
    "MarkedEdges",
    "mark_edges",
    "UncoveredStats",
    "count_stats",
    "expected_XS",
    "ConcentrationSummary",
    "concentration_experiment",
    "ClassRow",
    "class_size_experiment",
]


def size_parameter_s(n: float, p: float, k: int, C: float = math.e) -> tuple[float, int]:
    """The set-size parameter s and its integer ceiling.

    s = C * max{np, p^(-k/2) [k! k log(1/p)]^(1/(k-1))} * (1 - p^k)^(-n/(k-1))
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    if k < 2:
        raise ValueError("k must be at least 2")
    if C < math.e:
        raise ValueError("C must be at least e")
    root = math.exp((math.lgamma(k + 1) + math.log(k) + math.log(math.log(1.0 / p))) / (k - 1))
    core = max(n * p, p ** (-k / 2) * root)
    s = C * core / pow1m(p, k, n / (k - 1))
    return s, ceil_tol(s)


def truncation_x(s: float, p: float) -> int:
    """Degree truncation ceil(6 s p)."""
    return ceil_tol(6.0 * s * p)


def vertex_class_budget(i: int, s: float, x: float, n: float) -> float:
    """z_i = 12 s log2(e n / s) / ((i + 1) 2^(i+1) x)."""
    return 12.0 * s * math.log2(math.e * n / s) / ((i + 1) * 2.0 ** (i + 1) * x)


@dataclass(frozen=True)
class MarkedEdges:
    """Marked S-endpoints per outside vertex (only vertices with neighbors in S)."""

    x: int
    marked: dict[int, tuple[int, ...]]

    def total(self) -> int:
        return sum(len(v) for v in self.marked.values())


def _prepare(G: Graph, S: Iterable[int]) -> np.ndarray:
    verts = np.unique(np.fromiter((int(v) for v in S), dtype=np.int64))
    if verts.size and (verts[0] < 0 or verts[-1] >= G.n):
        raise ValueError("vertex index out of range")
    return verts


def _outside_incidences(G: Graph, verts: np.ndarray):
    """Pairs (w, j): outside vertex w adjacent to the j-th vertex of S, sorted by (w, j)."""
    in_s = np.zeros(G.n, dtype=bool)
    in_s[verts] = True
    deg = G.degrees()[verts]
    offs = np.arange(deg.sum(), dtype=np.int64) - np.repeat(np.cumsum(deg) - deg, deg)
    nbrs = G.indices[np.repeat(G.indptr[verts], deg) + offs]
    local = np.repeat(np.arange(verts.size, dtype=np.int64), deg)
    out = ~in_s[nbrs]
    w, j = nbrs[out], local[out]
    order = np.lexsort((j, w))
    return w[order], j[order]


def _marked_mask(w: np.ndarray, x: int) -> np.ndarray:
    """For (w, j) sorted by w then j: True for the first x entries of each w."""
    if w.size == 0:
        return np.zeros(0, dtype=bool)
    starts = np.r_[0, np.flatnonzero(np.diff(w)) + 1]
    group_start = np.repeat(starts, np.diff(np.r_[starts, w.size]))
    return (np.arange(w.size) - group_start) < x


def mark_edges(G: Graph, S: Iterable[int], x: int) -> MarkedEdges:
    if x < 0:
        raise ValueError("x must be non-negative")
    verts = _prepare(G, S)
    w, j = _outside_incidences(G, verts)
    keep = _marked_mask(w, x)
    marked: dict[int, list[int]] = {}
    for ww, jj in zip(w[keep].tolist(), j[keep].tolist()):
        marked.setdefault(ww, []).append(int(verts[jj]))
    return MarkedEdges(x, {k: tuple(v) for k, v in marked.items()})


@dataclass(frozen=True)
class UncoveredStats:
    X_S: int
    Xprime_S: int
    Y_S: int
    S: tuple[int, ...]
    k: int
    x: int


def count_stats(G: Graph, S: Iterable[int], k: int, x: int, method: str = "auto") -> UncoveredStats:
    """Exact X_S, X'_S and Y_S.

    ``method`` picks the counting route: ``"bits"`` scans all k-subsets of S
    against bitmask neighborhoods (tiny graphs), ``"matrix"`` counts covered
    pairs via a co-occurrence product (k = 2), ``"sets"`` collects the
    k-subsets of every outside neighborhood. All routes agree exactly.
    """
    verts = _prepare(G, S)
    s = verts.size
    if k < 2:
        raise ValueError("k must be at least 2")
    if s < k:
        raise ValueError(f"|S| = {s} is smaller than k = {k}")
    if x < 0:
        raise ValueError("x must be non-negative")
    if method == "auto":
        if G.n <= 64 and math.comb(s, k) <= 4096:
            method = "bits"
        elif k == 2:
            method = "matrix"
        else:
            method = "sets"
    counter = {"bits": _count_bits, "matrix": _count_matrix, "sets": _count_sets}[method]
    X, Xp, Y = counter(G, verts, k, x)
    return UncoveredStats(int(X), int(Xp), int(Y), tuple(verts.tolist()), k, x)


def _low_bits(mask: int, x: int) -> int:
    out = 0
    while mask and x > 0:
        low = mask & -mask
        out |= low
        mask ^= low
        x -= 1
    return out


def _count_bits(G, verts, k, x):
    rows = G.rows
    smask = 0
    for v in verts.tolist():
        smask |= 1 << v
    full = []
    marked = []
    for w in range(G.n):
        if smask >> w & 1:
            continue
        ns = rows[w] & smask
        if ns.bit_count() >= k:
            full.append(ns)
            m = _low_bits(ns, x)
            if m.bit_count() >= k:
                marked.append(m)
    closed = {v: rows[v] | (1 << v) for v in verts.tolist()}
    X = Xp = Y = 0
    for T in combinations(verts.tolist(), k):
        tm = 0
        for v in T:
            tm |= 1 << v
        if not any(ns & tm == tm for ns in marked):
            Xp += 1
            if not any(ns & tm == tm for ns in full):
                X += 1
                if all(closed[v] & tm == tm for v in T):
                    Y += 1
    return X, Xp, Y


def _count_matrix(G, verts, k, x):
    assert k == 2
    s = verts.size
    w, j = _outside_incidences(G, verts)
    total = s * (s - 1) // 2
    _, row = np.unique(w, return_inverse=True)
    nrow = int(row.max()) + 1 if row.size else 0
    keep = _marked_mask(w, x)

    def covered_matrix(mask):
        B = np.zeros((max(nrow, 1), s), dtype=np.float32)
        B[row[mask], j[mask]] = 1.0
        return (B.T @ B) > 0.5

    iu = np.triu_indices(s, 1)
    cov = covered_matrix(np.ones(w.size, dtype=bool))[iu]
    cov_marked = covered_matrix(keep)[iu]
    sub_in = np.zeros((s, s), dtype=bool)
    pos = np.full(G.n, -1, dtype=np.int64)
    pos[verts] = np.arange(s)
    for a, u in enumerate(verts.tolist()):
        nb = pos[G.neighbors(u)]
        sub_in[a, nb[nb >= 0]] = True
    clique = sub_in[iu]
    X = total - int(cov.sum())
    Xp = total - int(cov_marked.sum())
    Y = int((clique & ~cov).sum())
    return X, Xp, Y


def _count_sets(G, verts, k, x):
    s = verts.size
    w, j = _outside_incidences(G, verts)
    keep = _marked_mask(w, x)
    covered: set[tuple[int, ...]] = set()
    covered_marked: set[tuple[int, ...]] = set()
    if w.size:
        bounds = np.r_[0, np.flatnonzero(np.diff(w)) + 1, w.size]
        jl = j.tolist()
        kl = keep.tolist()
        for a, b in zip(bounds[:-1].tolist(), bounds[1:].tolist()):
            members = jl[a:b]
            if len(members) < k:
                continue
            covered.update(combinations(members, k))
            mm = [m for m, kk in zip(members, kl[a:b]) if kk]
            if len(mm) >= k:
                covered_marked.update(combinations(mm, k))
    total = math.comb(s, k)
    # k-cliques of G[S] in local labels
    pos = np.full(G.n, -1, dtype=np.int64)
    pos[verts] = np.arange(s)
    adj = []
    for u in verts.tolist():
        nb = pos[G.neighbors(u)]
        m = 0
        for t in nb[nb >= 0].tolist():
            m |= 1 << t
        adj.append(m)
    Y = 0

    def grow(clique, cand):
        nonlocal Y
        if len(clique) == k:
            if tuple(clique) not in covered:
                Y += 1
            return
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            # only larger labels keep each clique generated once
            grow(clique + [v], cand & adj[v])

    for v in range(s):
        grow([v], adj[v] & ~((1 << (v + 1)) - 1))
    return total - len(covered), total - len(covered_marked), Y


def expected_XS(n: int, s: int, p: float, k: int) -> float:
    """E X_S = C(s, k) (1 - p^k)^(n - s)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if not k <= s <= n:
        raise ValueError("need k <= s <= n")
    if p == 0.0:
        return float(math.comb(s, k))
    return math.comb(s, k) * pow1m(p, k, n - s)


@dataclass
class ConcentrationSummary:
    n: int
    p: float
    k: int
    s: int
    x: int
    trials: int
    sets_per_trial: int
    delta: float
    expected_XS: float
    X: np.ndarray = field(repr=False)
    Xprime: np.ndarray = field(repr=False)
    Y: np.ndarray = field(repr=False)

    @property
    def ratios(self) -> np.ndarray:
        return self.X / self.expected_XS

    @property
    def xprime_ratios(self) -> np.ndarray:
        mean = self.Xprime.mean()
        return self.Xprime / mean if mean > 0 else np.ones_like(self.Xprime, dtype=float)

    @property
    def fraction_below_delta(self) -> float:
        return float(np.mean(self.X < self.delta * self.expected_XS))

    @property
    def mean_X(self) -> float:
        return float(self.X.mean())

    @property
    def stderr_X(self) -> float:
        return float(self.X.std(ddof=1) / math.sqrt(self.X.size)) if self.X.size > 1 else 0.0

    def as_dict(self) -> dict:
        r = self.ratios
        return {
            "n": self.n, "p": self.p, "k": self.k, "s": self.s, "x": self.x,
            "trials": self.trials, "sets_per_trial": self.sets_per_trial,
            "expected_XS": self.expected_XS, "mean_XS": self.mean_X, "stderr_XS": self.stderr_X,
            "min_ratio": float(r.min()), "max_ratio": float(r.max()),
            "fraction_below_delta": self.fraction_below_delta, "delta": self.delta,
            "min_xprime_ratio": float(self.xprime_ratios.min()),
            "fraction_Y_zero": float(np.mean(self.Y == 0)),
        }


def concentration_experiment(n: int, p: float, k: int, s: int, trials: int, sets_per_trial: int,
                             seed, x: int | None = None, delta: float = 0.5,
                             fixed_set: bool = False) -> ConcentrationSummary:
    """Sample fresh graphs and s-subsets and record X_S, X'_S, Y_S.

    With ``fixed_set`` the set is always ``{0, ..., s-1}`` (one per trial).
    """
    seed = seed if isinstance(seed, Seed) else Seed(int(seed))
    if x is None:
        x = truncation_x(s, p) if p > 0 else 0
    Xs, Xps, Ys = [], [], []
    for t in range(trials):
        G = generate_gnp(n, p, seed.derive("graph", t))
        rng = seed.derive("sets", t).rng()
        for _ in range(1 if fixed_set else sets_per_trial):
            S = np.arange(s) if fixed_set else rng.choice(n, size=s, replace=False)
            st = count_stats(G, S, k, x)
            Xs.append(st.X_S)
            Xps.append(st.Xprime_S)
            Ys.append(st.Y_S)
    return ConcentrationSummary(
        n, p, k, s, x, trials, 1 if fixed_set else sets_per_trial, delta,
        expected_XS(n, s, p, k), np.array(Xs, dtype=np.float64),
        np.array(Xps, dtype=np.float64), np.array(Ys, dtype=np.float64),
    )


@dataclass(frozen=True)
class ClassRow:
    i: int
    low: int
    high: int
    size: int
    budget: float
    applicable: bool

    @property
    def exceeds(self) -> bool:
        return self.applicable and self.size > self.budget


def class_size_experiment(G: Graph, S: Iterable[int], x: int, p: float | None = None) -> list[ClassRow]:
    """Sizes of the classes V_i of outside vertices with 2^i x <= deg_S(w) < 2^(i+1) x.

    Each row carries the budget z_i and whether 2^i x <= 2np (the range in
    which the budget is claimed to hold).
    """
    if x < 1:
        raise ValueError("x must be at least 1")
    verts = _prepare(G, S)
    n = G.n
    if p is None:
        p = G.m / (n * (n - 1) / 2) if n > 1 else 0.0
    w, _ = _outside_incidences(G, verts)
    deg_s = np.bincount(w, minlength=n)
    deg_s = deg_s[np.bincount(verts, minlength=n) == 0]
    top = int(deg_s.max()) if deg_s.size else 0
    rows = []
    i = 0
    while True:
        low = (2 ** i) * x
        applicable = low <= 2 * n * p
        if low > top and not applicable:
            break
        size = int(np.count_nonzero((deg_s >= low) & (deg_s < 2 * low)))
        budget = vertex_class_budget(i, verts.size, x, n) if verts.size else 0.0
        rows.append(ClassRow(i, low, 2 * low, size, budget, applicable))
        i += 1
    return rows
