"""Clique-coloring validity, exact clique chromatic number, baseline colorers."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .cliques import DEFAULT_CLIQUE_CAP, is_maximal_clique, maximal_cliques
from .exceptions import BudgetExceeded, GraphFormatError
from .graph_core import Graph

__all__ = [
    "CliqueColoring",
    "ValidityReport",
    "is_valid_clique_coloring",
    "monochromatic_maximal_cliques",
    "exact_clique_chromatic",
    "greedy_proper_coloring",
    "greedy_dominating_set",
    "dominating_set_coloring",
    "repair_with_fresh_colors",
    "serialize_coloring",
    "parse_coloring",
    "DEFAULT_NODE_BUDGET",
]

DEFAULT_NODE_BUDGET = 10**8


@dataclass(frozen=True)
class CliqueColoring:
    """Per-vertex colors ``0..palette-1`` with every color in use.

    ``repairs`` counts vertices a colorer had to recolor after its
    construction to restore validity.
    """

    colors: tuple[int, ...]
    palette: int
    repairs: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.colors:
            if min(self.colors) < 0 or max(self.colors) >= self.palette:
                raise ValueError("color outside [0, palette)")
            if len(set(self.colors)) != self.palette:
                raise ValueError("palette must equal the number of distinct colors")
        elif self.palette != 0:
            raise ValueError("empty coloring must have palette 0")

    @classmethod
    def from_colors(cls, colors: Sequence[int] | np.ndarray, repairs: int = 0) -> "CliqueColoring":
        """Compact arbitrary integer labels to ``0..k-1``, preserving their order."""
        arr = np.asarray(colors, dtype=np.int64)
        if arr.size == 0:
            return cls((), 0, repairs)
        values, inverse = np.unique(arr, return_inverse=True)
        return cls(tuple(inverse.reshape(-1).tolist()), int(values.size), repairs)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.colors, dtype=np.int64)

    def __len__(self):
        return len(self.colors)


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    witness: tuple[int, ...] | None = None

    def __bool__(self):
        return self.valid


def _color_array(G: Graph, c) -> np.ndarray:
    arr = c.as_array() if isinstance(c, CliqueColoring) else np.asarray(c, dtype=np.int64)
    if arr.shape != (G.n,):
        raise ValueError(f"coloring covers {arr.size} vertices, graph has {G.n}")
    return arr


def monochromatic_maximal_cliques(G: Graph, colors, limit: int = 2**62) -> list[tuple[int, ...]]:
    """Maximal cliques of size >= 2 that receive a single color (at most ``limit``)."""
    arr = _color_array(G, colors)
    flat, offsets, _ = _kernels.mono_maximal_cliques(G.indptr, G.indices, arr, limit)
    flat = flat.tolist()
    offsets = offsets.tolist()
    return [tuple(flat[offsets[i]:offsets[i + 1]]) for i in range(len(offsets) - 1)]


def is_valid_clique_coloring(G: Graph, c) -> ValidityReport:
    """Check that no maximal clique with two or more vertices is monochromatic."""
    arr = _color_array(G, c)
    found = monochromatic_maximal_cliques(G, arr, limit=1)
    if not found:
        return ValidityReport(True)
    witness = found[0]
    assert is_maximal_clique(G, witness) and len({int(arr[v]) for v in witness}) == 1
    return ValidityReport(False, witness)


def repair_with_fresh_colors(G: Graph, colors: np.ndarray) -> tuple[np.ndarray, int]:
    """Recolor one vertex of every monochromatic maximal clique with a new color.

    A fresh color cannot make any clique monochromatic, so a single sweep over
    the witnesses found up front removes them all.
    """
    colors = np.array(colors, dtype=np.int64)
    repairs = 0
    while True:
        witnesses = monochromatic_maximal_cliques(G, colors)
        if not witnesses:
            return colors, repairs
        nxt = int(colors.max()) + 1
        for q in witnesses:
            if len({int(colors[v]) for v in q}) == 1:
                colors[q[-1]] = nxt
                nxt += 1
                repairs += 1


def greedy_proper_coloring(G: Graph, order: Sequence[int] | None = None) -> CliqueColoring:
    """First-fit proper coloring; default order is descending degree, ties by index."""
    if order is None:
        deg = G.degrees()
        order = np.lexsort((np.arange(G.n), -deg))
    order = np.asarray(order, dtype=np.int64)
    if order.size != G.n or (G.n and not np.array_equal(np.sort(order), np.arange(G.n))):
        raise ValueError("order must be a permutation of the vertices")
    colors = _kernels.greedy_color(G.indptr, G.indices, order)
    return CliqueColoring.from_colors(colors)


def greedy_dominating_set(G: Graph) -> list[int]:
    """Classic greedy: repeatedly take the vertex dominating most new vertices.

    Ties go to the smallest index. Lazy re-evaluation keeps it near-linear.
    """
    undominated = np.ones(G.n, dtype=bool)
    remaining = G.n
    deg = G.degrees()
    heap = [(-(int(deg[v]) + 1), v) for v in range(G.n)]
    heapq.heapify(heap)
    chosen = []
    while remaining:
        neg, v = heapq.heappop(heap)
        nb = G.neighbors(v)
        gain = int(undominated[v]) + int(undominated[nb].sum())
        if gain != -neg:
            if gain > 0:
                heapq.heappush(heap, (-gain, v))
            continue
        chosen.append(v)
        remaining -= gain
        undominated[v] = False
        undominated[nb] = False
    return sorted(chosen)


def dominating_set_coloring(G: Graph) -> CliqueColoring:
    """Color 0 on the dominating set D; every other vertex takes the index
    (1..|D|) of its first adjacent dominator.

    A monochromatic clique outside D would extend by that shared dominator,
    so only cliques inside D can be monochromatic; those are repaired with
    fresh colors, counted in ``repairs``. Palette is at most 1 + |D| + repairs.
    """
    D = np.asarray(greedy_dominating_set(G), dtype=np.int64)
    index = np.zeros(G.n, dtype=np.int64)
    index[D] = np.arange(1, D.size + 1)
    colors = np.zeros(G.n, dtype=np.int64)
    for v in range(G.n):
        if index[v] == 0:
            nb = index[G.neighbors(v)]
            colors[v] = nb[nb > 0].min()
    colors, repairs = repair_with_fresh_colors(G, colors)
    return CliqueColoring.from_colors(colors, repairs=repairs)


# -- exact solver ----------------------------------------------------------------

class _HypergraphSearch:
    """Decide whether the vertices can be t-colored with no hyperedge monochromatic.

    Depth-first search with forward checking: a vertex that is the last
    uncolored member of a hyperedge whose other members share color c may not
    take c. The branching vertex is the one with fewest allowed colors, and a
    new color is only ever the next unused one.
    """

    def __init__(self, n, hyperedges, budget):
        self.n = n
        self.hyper = [tuple(e) for e in hyperedges]
        self.edges_of = [[] for _ in range(n)]
        for i, e in enumerate(self.hyper):
            for v in e:
                self.edges_of[v].append(i)
        self.active = [v for v in range(n) if self.edges_of[v]]
        self.budget = budget
        self.nodes = 0

    def _forbidden(self, v, color, unc):
        forb = set()
        for i in self.edges_of[v]:
            if unc[i] != 1:
                continue
            c0 = -1
            mono = True
            for w in self.hyper[i]:
                if w == v:
                    continue
                cw = color[w]
                if c0 < 0:
                    c0 = cw
                elif cw != c0:
                    mono = False
                    break
            if mono:
                forb.add(c0)
        return forb

    def solve(self, t):
        color = [-1] * self.n
        unc = [len(e) for e in self.hyper]
        if self._rec(t, 0, color, unc):
            return [c if c >= 0 else 0 for c in color]
        return None

    def _rec(self, t, used, color, unc):
        self.nodes += 1
        if self.nodes > self.budget:
            raise _OutOfNodes
        best_v = -1
        best_allowed = None
        best_weight = -1
        for v in self.active:
            if color[v] >= 0:
                continue
            forb = self._forbidden(v, color, unc)
            allowed = [c for c in range(min(used + 1, t)) if c not in forb]
            if not allowed:
                return False
            weight = len(self.edges_of[v])
            if (best_allowed is None or len(allowed) < len(best_allowed)
                    or (len(allowed) == len(best_allowed) and weight > best_weight)):
                best_v, best_allowed, best_weight = v, allowed, weight
        if best_v < 0:
            return True
        v = best_v
        for c in best_allowed:
            color[v] = c
            for i in self.edges_of[v]:
                unc[i] -= 1
            if self._rec(t, max(used, c + 1), color, unc):
                return True
            for i in self.edges_of[v]:
                unc[i] += 1
            color[v] = -1
        return False


class _OutOfNodes(Exception):
    pass


def exact_clique_chromatic(G: Graph, budget: int = DEFAULT_NODE_BUDGET,
                           clique_cap: int = DEFAULT_CLIQUE_CAP) -> tuple[int, CliqueColoring]:
    """Minimum number of colors of a valid clique coloring, with a certificate.

    Tries palettes 2, 3, ... below the best heuristic coloring. Edgeless graphs
    (no constraints at all) get value 1. ``budget`` caps search nodes across
    all palette sizes; on exhaustion :class:`BudgetExceeded` carries the best
    coloring known.
    """
    if G.m == 0:
        return 1, CliqueColoring.from_colors(np.zeros(G.n, dtype=np.int64))
    hyper = maximal_cliques(G, cap=clique_cap).constraints
    best = greedy_proper_coloring(G)
    dom = dominating_set_coloring(G)
    if dom.palette < best.palette:
        best = dom
    search = _HypergraphSearch(G.n, hyper, budget)
    for t in range(2, best.palette):
        try:
            sol = search.solve(t)
        except _OutOfNodes:
            raise BudgetExceeded(best.palette, best, lower_bound=t) from None
        if sol is not None:
            cert = CliqueColoring.from_colors(sol)
            assert cert.palette == t
            return t, cert
    return best.palette, CliqueColoring(best.colors, best.palette)


# -- serialization -------------------------------------------------------------

def serialize_coloring(c: CliqueColoring) -> str:
    lines = [f"palette {c.palette}"]
    lines.extend(f"{v} {col}" for v, col in enumerate(c.colors))
    return "\n".join(lines) + "\n"


def parse_coloring(text: str) -> CliqueColoring:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise GraphFormatError("missing header", 1)
    head = lines[0].split()
    if len(head) != 2 or head[0] != "palette" or not head[1].isdigit():
        raise GraphFormatError(f"malformed header {lines[0]!r}", 1)
    colors = []
    for i, ln in enumerate(lines[1:], start=2):
        tok = ln.split()
        if len(tok) != 2 or not tok[0].isdigit() or not tok[1].isdigit():
            raise GraphFormatError(f"malformed line {ln!r}", i)
        if int(tok[0]) != len(colors):
            raise GraphFormatError(f"expected vertex {len(colors)}, got {tok[0]}", i)
        colors.append(int(tok[1]))
    c = CliqueColoring.from_colors(colors)
    if c.palette != int(head[1]) or tuple(colors) != c.colors:
        raise GraphFormatError("colors must be exactly 0..palette-1, all used", 1)
    return c
