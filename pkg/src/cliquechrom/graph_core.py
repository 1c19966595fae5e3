"""Immutable simple graphs, seeded G(n, p) sampling, and edge-list I/O.

Vertices are the integers ``0..n-1``. A :class:`Graph` keeps a sorted CSR
adjacency (used by the compiled kernels) and builds bit-packed rows on demand
(Python ints, bit ``u`` of ``row(v)`` set iff ``uv`` is an edge) for the
exact small-graph algorithms.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .exceptions import GraphFormatError

__all__ = [
    "Seed",
    "Graph",
    "generate_gnp",
    "generate_coupled",
    "induced_subgraph",
    "parse_edge_list",
    "serialize_edge_list",
    "complete_graph",
    "cycle_graph",
    "path_graph",
    "star_graph",
    "empty_graph",
    "add_universal_vertex",
]

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class Seed:
    """A 64-bit master seed plus a 64-bit stream index.

    ``rng()`` feeds ``(master, stream)`` to numpy's ``SeedSequence`` (as
    entropy and spawn key) and drives a PCG64 generator, so every stream is
    reproducible and independent of scheduling. ``derive`` maps arbitrary
    labels to a child stream with an 8-byte BLAKE2b digest.
    """

    master: int
    stream: int = 0

    def __post_init__(self):
        if not (0 <= self.master <= _MASK64 and 0 <= self.stream <= _MASK64):
            raise ValueError("seed components must be unsigned 64-bit integers")

    def derive(self, *labels) -> "Seed":
        h = hashlib.blake2b(digest_size=8)
        h.update(struct.pack("<QQ", self.master, self.stream))
        for label in labels:
            h.update(b"\x1f")
            h.update(_label_bytes(label))
        return Seed(self.master, int.from_bytes(h.digest(), "little"))

    def rng(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.master, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))


def _label_bytes(label) -> bytes:
    if isinstance(label, bool):
        return b"b" + bytes([label])
    if isinstance(label, int):
        return b"i" + str(label).encode()
    if isinstance(label, float):
        return b"f" + struct.pack("<d", label)
    if isinstance(label, str):
        return b"s" + label.encode()
    raise TypeError(f"unsupported seed label {label!r}")


def _as_seed(seed) -> Seed:
    if isinstance(seed, Seed):
        return seed
    return Seed(int(seed))


class Graph:
    """Immutable simple undirected graph.

    Build with :meth:`from_edges` (validating) or one of the generators.
    """

    __slots__ = ("n", "indptr", "indices", "_rows", "_fp")

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray):
        indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        indices = np.ascontiguousarray(indices, dtype=np.int64)
        indptr.flags.writeable = False
        indices.flags.writeable = False
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "indptr", indptr)
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "_rows", None)
        object.__setattr__(self, "_fp", None)

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    def __reduce__(self):
        return (Graph, (self.n, np.array(self.indptr), np.array(self.indices)))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]] | np.ndarray) -> "Graph":
        """Build from an iterable of vertex pairs; rejects loops, duplicates, bad ids."""
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                         dtype=np.int64).reshape(-1, 2)
        if n < 0:
            raise ValueError("n must be non-negative")
        if arr.size:
            if arr.min() < 0 or arr.max() >= n:
                raise ValueError("vertex index out of range")
            if np.any(arr[:, 0] == arr[:, 1]):
                raise ValueError("self-loop")
        lo = np.minimum(arr[:, 0], arr[:, 1])
        hi = np.maximum(arr[:, 0], arr[:, 1])
        key = lo * max(n, 1) + hi
        if np.unique(key).size != key.size:
            raise ValueError("duplicate edge")
        return cls._from_pairs(n, lo, hi)

    @classmethod
    def _from_pairs(cls, n, us, vs) -> "Graph":
        indptr, indices = _kernels.csr_from_pairs(
            int(n), np.ascontiguousarray(us, dtype=np.int64), np.ascontiguousarray(vs, dtype=np.int64)
        )
        return cls(n, indptr, indices)

    @property
    def m(self) -> int:
        return int(self.indices.size // 2)

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def max_degree(self) -> int:
        return int(self.degrees().max()) if self.n else 0

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < nb.size and nb[i] == v)

    def edges(self) -> np.ndarray:
        """(m, 2) array of edges ``u < v`` in lexicographic order."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees())
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep]])

    @property
    def rows(self) -> tuple[int, ...]:
        if self._rows is None:
            rows = []
            for v in range(self.n):
                r = 0
                for u in self.neighbors(v).tolist():
                    r |= 1 << u
                rows.append(r)
            object.__setattr__(self, "_rows", tuple(rows))
        return self._rows

    def row(self, v: int) -> int:
        return self.rows[v]

    def fingerprint(self) -> str:
        if self._fp is None:
            h = hashlib.blake2b(digest_size=16)
            h.update(struct.pack("<Q", self.n))
            h.update(self.indptr.tobytes())
            h.update(self.indices.tobytes())
            object.__setattr__(self, "_fp", h.hexdigest())
        return self._fp

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    def __hash__(self):
        return hash(self.fingerprint())

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def _pair_from_index(k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # colex pair order: index k <-> (u, v), u < v, k = v(v-1)/2 + u
    v = np.floor((1.0 + np.sqrt(1.0 + 8.0 * k.astype(np.float64))) / 2.0).astype(np.int64)
    v -= (v * (v - 1) // 2 > k)
    v += ((v + 1) * v // 2 <= k)
    u = k - v * (v - 1) // 2
    return u, v


def _sample_pairs(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Indices of selected pairs, each kept independently with probability p.

    Geometric skipping: the gaps between successive selected pair indices are
    i.i.d. Geometric(p), so the cost is O(number of edges).
    """
    total = n * (n - 1) // 2
    if p <= 0.0 or total == 0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(total, dtype=np.int64)
    chunks = []
    pos = -1
    expect = total * p
    block = int(expect + 6.0 * np.sqrt(expect + 1.0)) + 64
    while True:
        # tiny p saturates the draws at INT64_MAX; clip so the cumsum cannot overflow
        gaps = np.minimum(rng.geometric(p, size=block), total + 1)
        idx = pos + np.cumsum(gaps)
        if idx[-1] >= total:
            chunks.append(idx[idx < total])
            break
        chunks.append(idx)
        pos = int(idx[-1])
        block = max(64, block // 4)
    return np.concatenate(chunks)


def _check_p(p: float, upper: float = 1.0):
    if not (0.0 <= p <= upper) or p != p:
        raise ValueError(f"edge probability must lie in [0, {upper}], got {p}")


def generate_gnp(n: int, p: float, seed) -> Graph:
    """Sample G(n, p) deterministically from ``seed``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    _check_p(p)
    rng = _as_seed(seed).rng()
    u, v = _pair_from_index(_sample_pairs(n, p, rng))
    return Graph._from_pairs(n, u, v)


def generate_coupled(n: int, p: float, seed) -> tuple[Graph, Graph]:
    """Coupled pair ``(G_low, G_high)`` with ``G_low`` a subgraph of ``G_high``.

    ``G_high`` is G(n, 2p); each of its edges survives into ``G_low``
    independently with probability 1/2, so ``G_low`` is marginally G(n, p).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    _check_p(p, 0.5)
    rng = _as_seed(seed).rng()
    k = _sample_pairs(n, min(1.0, 2.0 * p), rng)
    u, v = _pair_from_index(k)
    keep = rng.random(k.size) < 0.5
    high = Graph._from_pairs(n, u, v)
    low = Graph._from_pairs(n, u[keep], v[keep])
    return low, high


def induced_subgraph(G: Graph, S: Iterable[int]) -> tuple[Graph, np.ndarray]:
    """Subgraph induced on ``S``, relabeled ``0..|S|-1`` in ascending order of ``S``.

    Returns ``(H, mapping)`` with ``mapping[i]`` the original label of new vertex ``i``.
    """
    verts = np.unique(np.fromiter(S, dtype=np.int64) if not isinstance(S, np.ndarray)
                      else np.asarray(S, dtype=np.int64))
    if verts.size and (verts[0] < 0 or verts[-1] >= G.n):
        raise ValueError("vertex index out of range")
    new_id = np.full(G.n, -1, dtype=np.int64)
    new_id[verts] = np.arange(verts.size, dtype=np.int64)
    deg = G.degrees()[verts]
    starts = G.indptr[verts]
    offs = np.arange(deg.sum(), dtype=np.int64) - np.repeat(np.cumsum(deg) - deg, deg)
    nbrs = G.indices[np.repeat(starts, deg) + offs]
    src = np.repeat(np.arange(verts.size, dtype=np.int64), deg)
    dst = new_id[nbrs]
    keep = (dst >= 0) & (src < dst)
    return Graph._from_pairs(verts.size, src[keep], dst[keep]), verts


def serialize_edge_list(G: Graph) -> str:
    lines = [f"{G.n} {G.m}"]
    lines.extend(f"{u} {v}" for u, v in G.edges().tolist())
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    """Parse the ``"n m"`` header followed by ``m`` lines ``"u v"``."""
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise GraphFormatError("missing header", 1)
    head = lines[0].split()
    if len(head) != 2 or not all(t.isdigit() for t in head):
        raise GraphFormatError(f"malformed header {lines[0]!r}", 1)
    n, m = int(head[0]), int(head[1])
    body = [(i + 2, ln) for i, ln in enumerate(lines[1:]) if ln.strip()]
    if len(body) != m:
        raise GraphFormatError(f"header declares {m} edges, found {len(body)}", 1)
    seen = set()
    us, vs = [], []
    for lineno, ln in body:
        tok = ln.split()
        if len(tok) != 2 or not all(t.lstrip("-").isdigit() for t in tok):
            raise GraphFormatError(f"malformed edge {ln!r}", lineno)
        u, v = int(tok[0]), int(tok[1])
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", lineno)
        if min(u, v) < 0 or max(u, v) >= n:
            raise GraphFormatError(f"vertex index out of range in {ln!r} (n={n})", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {key}", lineno)
        seen.add(key)
        us.append(key[0])
        vs.append(key[1])
    return Graph._from_pairs(n, np.array(us, dtype=np.int64), np.array(vs, dtype=np.int64))


# -- small named graphs ------------------------------------------------------

def empty_graph(n: int) -> Graph:
    return Graph.from_edges(n, [])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for v in range(n) for u in range(v)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    """Center 0 joined to leaves ``1..leaves``."""
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def add_universal_vertex(G: Graph) -> Graph:
    """Append vertex ``n`` adjacent to every existing vertex."""
    e = [tuple(x) for x in G.edges().tolist()] + [(v, G.n) for v in range(G.n)]
    return Graph.from_edges(G.n + 1, e)
