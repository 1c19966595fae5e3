"""Constructive upper-bound colorers built on vertex partitions.

Both pipelines split the vertices into parts, replace each induced part by a
sparser graph G_i whose maximal cliques include every maximal clique of G
lying inside the part, color each G_i with its own palette, and concatenate.
Cliques meeting two parts are bichromatic for free because palettes are
disjoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._util import ceil_tol
from .cliques import edge_triangle_flags
from .coloring import (
    CliqueColoring,
    greedy_proper_coloring,
    monochromatic_maximal_cliques,
    repair_with_fresh_colors,
)
from .exceptions import InapplicableRegime
from .graph_core import Graph, Seed, _as_seed

__all__ = [
    "DegreeThresholds",
    "compute_thresholds",
    "PartitionPlan",
    "partition_vertices",
    "build_Gi",
    "build_all_Gi",
    "color_low_p",
    "color_mid_p",
    "triangle_free_partition",
    "GiDegreeReport",
    "gi_max_degree_report",
    "lambda_excess",
    "DEFAULT_TF_STRATEGY",
]

DEFAULT_TF_STRATEGY = "first_fit"


@dataclass(frozen=True)
class DegreeThresholds:
    """Scales for given (n, p). ``xi``/``lam`` are None outside the mid-range window.

    ``Gamma`` uses the part count r; ``Gamma_alt`` is the r-free form
    max{e^(-np^2) p^(-1/2) sqrt(log n), log n}, reported for comparison.
    """

    n: int
    p: float
    r: int
    Gamma: float
    Gamma_alt: float
    xi: float | None
    lam: int | None

    def as_dict(self) -> dict:
        return {"n": self.n, "p": self.p, "r": self.r, "Gamma": self.Gamma,
                "Gamma_alt": self.Gamma_alt, "xi": self.xi, "lambda": self.lam}


def compute_thresholds(n: int, p: float) -> DegreeThresholds:
    if n < 2:
        raise ValueError("need n >= 2")
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    L = math.log(n)
    r = min(n, max(1, ceil_tol(p ** 1.5 * n / math.sqrt(L))))
    damp = math.exp(-n * p * p)
    gamma = max(damp * n * p / r, L)
    gamma_alt = max(damp * math.sqrt(L / p), L)
    xi = 2.0 * n * p * p - (L + math.log(L))
    if xi > 0:
        return DegreeThresholds(n, p, r, gamma, gamma_alt, xi, max(1, ceil_tol(9.0 * L / xi)))
    return DegreeThresholds(n, p, r, gamma, gamma_alt, None, None)


@dataclass(frozen=True, eq=False)
class PartitionPlan:
    """Disjoint sorted vertex arrays covering ``0..n-1``.

    ``balanced`` plans (from :func:`partition_vertices`) additionally have part
    sizes differing by at most one; class partitions need not.
    """

    n: int
    parts: tuple[np.ndarray, ...]
    balanced: bool = True

    def __post_init__(self):
        parts = tuple(np.sort(np.asarray(q, dtype=np.int64)) for q in self.parts)
        for q in parts:
            q.setflags(write=False)
        object.__setattr__(self, "parts", parts)
        seen = np.zeros(self.n, dtype=np.int64)
        for q in parts:
            if q.size and (q[0] < 0 or q[-1] >= self.n):
                raise ValueError("part vertex out of range")
            np.add.at(seen, q, 1)
        if not np.all(seen == 1):
            raise ValueError("parts must be disjoint and cover every vertex")
        if self.balanced and parts:
            sizes = [q.size for q in parts]
            if max(sizes) - min(sizes) > 1:
                raise ValueError("balanced plan has part sizes differing by more than one")

    @property
    def r(self) -> int:
        return len(self.parts)

    def sizes(self) -> list[int]:
        return [int(q.size) for q in self.parts]

    def labels(self) -> np.ndarray:
        lab = np.empty(self.n, dtype=np.int64)
        for i, q in enumerate(self.parts):
            lab[q] = i
        return lab

    @classmethod
    def from_labels(cls, labels, balanced: bool = False) -> "PartitionPlan":
        labels = np.asarray(labels, dtype=np.int64)
        _, compact = np.unique(labels, return_inverse=True)
        order = np.argsort(compact, kind="stable")
        cuts = np.cumsum(np.bincount(compact))[:-1]
        return cls(labels.size, tuple(np.split(order, cuts)), balanced)


def partition_vertices(n: int, r: int, seed) -> PartitionPlan:
    """Shuffle uniformly, then cut into r contiguous near-equal slices."""
    if not 1 <= r <= max(n, 1):
        raise ValueError(f"need 1 <= r <= n, got r={r}, n={n}")
    perm = _as_seed(seed).rng().permutation(n)
    return PartitionPlan(n, tuple(np.array_split(perm, r)))


def _kept_entries(G: Graph, labels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """CSR entries (u, v), u < v, same part, that survive into G_i.

    An in-part edge is dropped exactly when it lies in some triangle of G but
    in none inside its part: no in-part common neighbor, some outside one.
    """
    cn_in, cn_out = _kernels.part_edge_stats(G.indptr, G.indices, labels)
    src = np.repeat(np.arange(G.n, dtype=np.int64), G.degrees())
    dst = G.indices
    keep = (cn_in >= 0) & (src < dst) & ~((cn_in == 0) & cn_out)
    return src[keep], dst[keep]


def build_all_Gi(G: Graph, plan: PartitionPlan) -> list[tuple[Graph, np.ndarray]]:
    """``(G_i, vertices of S_i)`` per part; G_i is labeled by position in S_i."""
    labels = plan.labels()
    us, vs = _kept_entries(G, labels)
    local = np.empty(G.n, dtype=np.int64)
    for q in plan.parts:
        local[q] = np.arange(q.size)
    part_of = labels[us]
    order = np.argsort(part_of, kind="stable")
    cuts = np.searchsorted(part_of[order], np.arange(1, plan.r))
    out = []
    for i, idx in enumerate(np.split(order, cuts)):
        out.append((Graph._from_pairs(plan.parts[i].size, local[us[idx]], local[vs[idx]]),
                    plan.parts[i]))
    return out


def build_Gi(G: Graph, S_i) -> tuple[Graph, np.ndarray]:
    """G_i for a single part; returns ``(G_i, mapping)`` like ``induced_subgraph``."""
    verts = np.unique(np.asarray(list(S_i) if not isinstance(S_i, np.ndarray) else S_i,
                                 dtype=np.int64))
    if verts.size and (verts[0] < 0 or verts[-1] >= G.n):
        raise ValueError("vertex index out of range")
    labels = np.zeros(G.n, dtype=np.int64)
    labels[verts] = 1
    us, vs = _kept_entries(G, labels)
    inside = labels[us] == 1
    local = np.full(G.n, -1, dtype=np.int64)
    local[verts] = np.arange(verts.size)
    return Graph._from_pairs(verts.size, local[us[inside]], local[vs[inside]]), verts


# -- per-part colorer ----------------------------------------------------------

def _target_palette(delta: int) -> int:
    return max(2, ceil_tol(2.0 * delta / max(1.0, math.log(delta)))) if delta > 0 else 1


def _randomized_part_coloring(H: Graph, seed: Seed) -> tuple[np.ndarray, bool]:
    """Random t-coloring with witness recoloring; greedy proper coloring as fallback.

    Returns ``(colors, fell_back)``.
    """
    if H.m == 0:
        return np.zeros(H.n, dtype=np.int64), False
    t = _target_palette(H.max_degree)
    rng = seed.rng()
    colors = rng.integers(0, t, size=H.n, dtype=np.int64)
    attempts = 0
    limit = 100 * H.n
    while True:
        witnesses = monochromatic_maximal_cliques(H, colors)
        if not witnesses:
            return colors, False
        for q in witnesses:
            if len({int(colors[v]) for v in q}) != 1:
                continue
            if attempts >= limit:
                return greedy_proper_coloring(H).as_array(), True
            v = q[int(rng.integers(len(q)))]
            colors[v] = int(rng.integers(t))
            attempts += 1


def _assemble(G: Graph, pieces: list[tuple[np.ndarray, np.ndarray]]) -> tuple[np.ndarray, list[int]]:
    """Offset each part's colors past the previous parts' palettes."""
    colors = np.zeros(G.n, dtype=np.int64)
    offset = 0
    palettes = []
    for verts, c in pieces:
        k = int(c.max()) + 1 if c.size else 0
        colors[verts] = c + offset
        offset += k
        palettes.append(k)
    return colors, palettes


def color_low_p(G: Graph, p: float, seed) -> tuple[CliqueColoring, dict]:
    """Random balanced partition into r parts, each G_i colored with about Δ/log Δ colors."""
    seed = _as_seed(seed)
    n = max(G.n, 2)
    th = compute_thresholds(n, p)
    r = min(th.r, max(G.n, 1))
    plan = partition_vertices(G.n, r, seed.derive("partition")) if G.n else PartitionPlan(0, ())
    pieces = []
    max_degrees = []
    fallbacks = []
    for i, (H, verts) in enumerate(build_all_Gi(G, plan)):
        c, fell_back = _randomized_part_coloring(H, seed.derive("part", i))
        pieces.append((verts, c))
        max_degrees.append(H.max_degree if H.n else 0)
        if fell_back:
            fallbacks.append(i)
    colors, palettes = _assemble(G, pieces)
    colors, repairs = repair_with_fresh_colors(G, colors)
    result = CliqueColoring.from_colors(colors, repairs=repairs)
    diag = {
        "algorithm": "low_p",
        **th.as_dict(),
        "r_used": plan.r,
        "part_sizes": plan.sizes(),
        "part_max_degrees": max_degrees,
        "bound_42Gamma": 42.0 * th.Gamma,
        "parts_over_bound": sum(d > 42.0 * th.Gamma for d in max_degrees),
        "part_palettes": palettes,
        "fallback_parts": fallbacks,
        "repairs": repairs,
        "palette": result.palette,
    }
    return result, diag


def lambda_excess(G: Graph, lam: int) -> int:
    """Number of vertices incident to more than ``lam`` edges outside triangles."""
    flags = edge_triangle_flags(G)
    src = np.repeat(np.arange(G.n), G.degrees())
    per_vertex = np.bincount(src[~flags], minlength=G.n)
    return int((per_vertex > lam).sum())


def color_mid_p(G_low: Graph, G_high: Graph, p: float, seed,
                strategy: str = DEFAULT_TF_STRATEGY) -> tuple[CliqueColoring, dict]:
    """Triangle-free classes of the denser graph, each G_i properly colored greedily."""
    if G_low.n != G_high.n:
        raise ValueError("coupled graphs must share the vertex set")
    seed = _as_seed(seed)
    th = compute_thresholds(max(G_low.n, 2), p)
    if th.xi is None:
        raise InapplicableRegime(
            f"2np^2 - (log n + log log n) = {2 * G_low.n * p * p - math.log(G_low.n) - math.log(math.log(G_low.n)):.4g} <= 0")
    plan = triangle_free_partition(G_high, seed.derive("classes"), strategy=strategy)
    labels = plan.labels()
    tf_ok = _kernels.mono_triangles(G_high.indptr, G_high.indices, labels, 1).shape[0] == 0
    assert tf_ok, "class partition left a triangle"
    pieces = []
    max_degrees = []
    for H, verts in build_all_Gi(G_low, plan):
        pieces.append((verts, greedy_proper_coloring(H).as_array()))
        max_degrees.append(H.max_degree if H.n else 0)
    colors, palettes = _assemble(G_low, pieces)
    colors, repairs = repair_with_fresh_colors(G_low, colors)
    result = CliqueColoring.from_colors(colors, repairs=repairs)
    n = G_low.n
    diag = {
        "algorithm": "mid_p",
        **th.as_dict(),
        "strategy": strategy,
        "r_hat": plan.r,
        "r_hat_scale": p ** 1.5 * n / math.sqrt(math.log(n)),
        "classes_triangle_free": tf_ok,
        "class_max_degrees": max_degrees,
        "classes_over_lambda": sum(d > th.lam for d in max_degrees),
        "vertices_over_lambda": lambda_excess(G_low, th.lam),
        "part_palettes": palettes,
        "repairs": repairs,
        "palette": result.palette,
    }
    return result, diag


# -- triangle-free classes -------------------------------------------------------

def triangle_free_partition(G: Graph, seed, strategy: str = DEFAULT_TF_STRATEGY) -> PartitionPlan:
    """Partition the vertices into classes that each induce a triangle-free graph.

    ``first_fit`` places vertices in random order into the lowest class where
    they close no triangle. ``seeded`` starts from ceil(n / ceil(1/density))
    random balanced classes and moves one vertex of each remaining triangle to
    the smallest class where it closes none (a new class if there is none).
    """
    seed = _as_seed(seed)
    n = G.n
    if n == 0:
        return PartitionPlan(0, (), balanced=False)
    zeros = np.zeros(n, dtype=np.int64)
    if _kernels.mono_triangles(G.indptr, G.indices, zeros, 1).shape[0] == 0:
        return PartitionPlan(n, (np.arange(n),), balanced=False)
    rng = seed.rng()
    if strategy == "first_fit":
        labels = _kernels.first_fit_triangle_free(G.indptr, G.indices, rng.permutation(n))
    elif strategy == "seeded":
        labels = _seeded_classes(G, rng)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return PartitionPlan.from_labels(labels)


def _seeded_classes(G: Graph, rng: np.random.Generator) -> np.ndarray:
    n = G.n
    density = 2.0 * G.m / (n * (n - 1))
    size = max(1, math.ceil(1.0 / density))
    q = math.ceil(n / size)
    labels = np.empty(n, dtype=np.int64)
    for i, part in enumerate(np.array_split(rng.permutation(n), q)):
        labels[part] = i
    counts = np.bincount(labels, minlength=q).astype(np.int64)
    while True:
        tris = _kernels.mono_triangles(G.indptr, G.indices, labels, 1 << 62)
        if tris.shape[0] == 0:
            return labels
        for a, b, c in tris.tolist():
            if not labels[a] == labels[b] == labels[c]:
                continue
            v = (a, b, c)[int(rng.integers(3))]
            created = _kernels.triangles_created(G.indptr, G.indices, labels, v, counts.size)
            created[labels[v]] = 1  # staying put is not a move
            free = np.flatnonzero(created == 0)
            counts[labels[v]] -= 1
            if free.size:
                target = int(free[np.argmin(counts[free])])
            else:
                target = counts.size
                counts = np.append(counts, 0)
            labels[v] = target
            counts[target] += 1


# -- degree diagnostics ----------------------------------------------------------

@dataclass(frozen=True)
class GiDegreeReport:
    """Per part: max degree in G_i, max of 2X_v + Y_v, and vertices above ``limit``.

    ``bound_violations`` counts vertices whose G_i degree exceeds 2X_v + Y_v,
    which can never happen.
    """

    limit: float
    max_degrees: tuple[int, ...]
    max_decomposition: tuple[int, ...]
    over_limit: tuple[int, ...]
    bound_violations: int

    @property
    def parts_over_limit(self) -> int:
        return sum(1 for c in self.over_limit if c)

    def as_dict(self) -> dict:
        return {"limit": self.limit, "max_degrees": list(self.max_degrees),
                "max_decomposition": list(self.max_decomposition),
                "over_limit": list(self.over_limit),
                "parts_over_limit": self.parts_over_limit,
                "bound_violations": self.bound_violations}


def gi_max_degree_report(G: Graph, plan: PartitionPlan, thresholds: DegreeThresholds) -> GiDegreeReport:
    """X_v counts triangles of G[S_i] at v, Y_v in-part neighbors with no outside common neighbor."""
    if plan.n != G.n:
        raise ValueError("plan does not cover the graph's vertices")
    labels = plan.labels()
    cn_in, cn_out = _kernels.part_edge_stats(G.indptr, G.indices, labels)
    src = np.repeat(np.arange(G.n, dtype=np.int64), G.degrees())
    inside = cn_in >= 0
    twice_x = np.bincount(src[inside], weights=cn_in[inside], minlength=G.n)  # = 2 X_v
    y = np.bincount(src[inside & ~cn_out], minlength=G.n)
    kept = inside & ~((cn_in == 0) & cn_out)
    deg_gi = np.bincount(src[kept], minlength=G.n)
    decomposition = (twice_x + y).astype(np.int64)
    limit = 42.0 * thresholds.Gamma
    max_deg, max_dec, over = [], [], []
    for q in plan.parts:
        max_deg.append(int(deg_gi[q].max()) if q.size else 0)
        max_dec.append(int(decomposition[q].max()) if q.size else 0)
        over.append(int((deg_gi[q] > limit).sum()))
    return GiDegreeReport(limit, tuple(max_deg), tuple(max_dec), tuple(over),
                          int((deg_gi > decomposition).sum()))
