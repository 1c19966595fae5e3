"""Maximal cliques, triangle membership, and coverage queries."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import _kernels
from .exceptions import CapExceeded
from .graph_core import Graph

__all__ = [
    "MaximalCliqueSet",
    "maximal_cliques",
    "is_clique",
    "is_maximal_clique",
    "edge_in_triangle",
    "edge_triangle_flags",
    "non_triangle_degrees",
    "triangle_edge_fraction",
    "uncovered",
    "DEFAULT_CLIQUE_CAP",
]

DEFAULT_CLIQUE_CAP = 10**7


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << int(v)
    return m


@dataclass(frozen=True)
class MaximalCliqueSet:
    """All inclusion-maximal cliques of a graph, sorted, each as a sorted tuple.

    Isolated vertices appear as singletons; they constrain no coloring.
    """

    cliques: tuple[tuple[int, ...], ...]
    fingerprint: str

    def __len__(self):
        return len(self.cliques)

    def __iter__(self):
        return iter(self.cliques)

    @property
    def constraints(self) -> tuple[tuple[int, ...], ...]:
        """Cliques with at least two vertices."""
        return tuple(q for q in self.cliques if len(q) >= 2)

    @property
    def singletons(self) -> tuple[int, ...]:
        return tuple(q[0] for q in self.cliques if len(q) == 1)


def maximal_cliques(G: Graph, cap: int = DEFAULT_CLIQUE_CAP) -> MaximalCliqueSet:
    """Exact maximal-clique list via Bron-Kerbosch with Tomita pivoting on bit rows.

    Raises :class:`CapExceeded` once more than ``cap`` cliques are found.
    """
    rows = G.rows
    found: list[int] = []

    def expand(R: int, P: int, X: int):
        if not P:
            if not X:
                found.append(R)
                if len(found) > cap:
                    raise CapExceeded(cap)
            return
        # pivot maximizing |P ∩ N(u)| over u in P ∪ X
        best = -1
        pivot_row = 0
        for u in _bits(P | X):
            c = (P & rows[u]).bit_count()
            if c > best:
                best = c
                pivot_row = rows[u]
        for v in _bits(P & ~pivot_row):
            bit = 1 << v
            expand(R | bit, P & rows[v], X & rows[v])
            P &= ~bit
            X |= bit

    if G.n:
        expand(0, (1 << G.n) - 1, 0)
    cliques = sorted(tuple(_bits(r)) for r in found)
    return MaximalCliqueSet(tuple(cliques), G.fingerprint())


def is_clique(G: Graph, Q: Iterable[int]) -> bool:
    q = sorted(set(int(v) for v in Q))
    return all(G.has_edge(q[i], q[j]) for i in range(len(q)) for j in range(i + 1, len(q)))


def _common_neighbors(G: Graph, Q) -> np.ndarray:
    q = list(Q)
    common = G.neighbors(q[0])
    for v in q[1:]:
        common = np.intersect1d(common, G.neighbors(v), assume_unique=True)
        if common.size == 0:
            break
    return common


def is_maximal_clique(G: Graph, Q: Iterable[int]) -> bool:
    """True iff ``Q`` is a clique and no outside vertex is adjacent to all of it."""
    q = sorted(set(int(v) for v in Q))
    if not q:
        raise ValueError("Q must be nonempty")
    if not is_clique(G, q):
        return False
    return _common_neighbors(G, q).size == 0


def edge_in_triangle(G: Graph, u: int, v: int) -> bool:
    if not G.has_edge(u, v):
        raise ValueError(f"{{{u}, {v}}} is not an edge")
    if G.n <= 4096:
        return (G.row(u) & G.row(v)) != 0
    return np.intersect1d(G.neighbors(u), G.neighbors(v), assume_unique=True).size > 0


def edge_triangle_flags(G: Graph) -> np.ndarray:
    """Boolean per CSR entry (aligned with ``G.indices``): edge lies in a triangle."""
    return _kernels.edge_triangle_flags(G.indptr, G.indices)


def non_triangle_degrees(G: Graph) -> np.ndarray:
    """Per vertex: number of incident edges contained in no triangle."""
    flags = edge_triangle_flags(G)
    src = np.repeat(np.arange(G.n), G.degrees())
    return np.bincount(src[~flags], minlength=G.n)


def triangle_edge_fraction(G: Graph) -> float:
    if G.m == 0:
        raise ValueError("graph has no edges")
    return float(edge_triangle_flags(G).sum()) / (2 * G.m)


def uncovered(G: Graph, S: Iterable[int], T: Iterable[int]) -> bool:
    """True iff no vertex outside ``S`` is adjacent to every vertex of ``T``."""
    s = set(int(v) for v in S)
    t = sorted(set(int(v) for v in T))
    if not set(t) <= s:
        raise ValueError("T must be a subset of S")
    if not t:
        return len(s) == G.n
    common = _common_neighbors(G, t)
    return not any(int(w) not in s for w in common)
