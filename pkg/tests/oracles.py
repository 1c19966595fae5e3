"""Slow, obviously-correct reference implementations used only by the tests."""

from itertools import combinations, product

import numpy as np


def adjacency_sets(G):
    return [set(G.neighbors(v).tolist()) for v in range(G.n)]


def is_clique_ref(adj, Q):
    return all(b in adj[a] for a, b in combinations(Q, 2))


def maximal_cliques_ref(G):
    """Every vertex subset, kept if it is a clique no outside vertex extends."""
    adj = adjacency_sets(G)
    out = []
    for mask in range(1, 1 << G.n):
        Q = [v for v in range(G.n) if mask >> v & 1]
        if not is_clique_ref(adj, Q):
            continue
        if any(all(w in adj[q] for q in Q) for w in range(G.n) if not mask >> w & 1):
            continue
        out.append(tuple(Q))
    return sorted(out)


def clique_coloring_valid_ref(G, colors):
    cl = [q for q in maximal_cliques_ref(G) if len(q) >= 2]
    return all(len({colors[v] for v in q}) >= 2 for q in cl)


def clique_chromatic_ref(G):
    """Smallest t admitting a valid clique coloring, by trying all t-colorings."""
    if G.m == 0:
        return 1
    cl = [q for q in maximal_cliques_ref(G) if len(q) >= 2]
    for t in range(2, G.n + 1):
        for colors in product(range(t), repeat=G.n):
            if all(len({colors[v] for v in q}) >= 2 for q in cl):
                return t
    raise AssertionError("unreachable")


def chromatic_number_ref(G):
    """Chromatic number by inclusion-exclusion over independent-set counts.

    The number of ways to cover V by t independent sets (ordered, possibly
    empty) is sum_S (-1)^(n-|S|) i(S)^t, with i(S) the number of independent
    subsets of S; it is positive iff G is t-colorable.
    """
    n = G.n
    if n == 0:
        return 0
    nbr = [0] * n
    for u, v in G.edges().tolist():
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u
    full = 1 << n
    indep = [0] * full
    indep[0] = 1
    for mask in range(1, full):
        v = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << v)
        indep[mask] = indep[rest] + indep[rest & ~nbr[v]]
    sign = [(-1) ** (n - bin(m).count("1")) for m in range(full)]
    for t in range(1, n + 1):
        if sum(s * i ** t for s, i in zip(sign, indep)) > 0:
            return t
    return n


def has_triangle_ref(G):
    adj = adjacency_sets(G)
    return any(w in adj[u] for u, v in G.edges().tolist() for w in adj[v] if w != u)


def count_stats_ref(G, S, k, x):
    """Direct double loop over k-subsets and outside vertices."""
    S = sorted(set(S))
    adj = adjacency_sets(G)
    in_s = set(S)
    marked = {}
    for w in range(G.n):
        if w in in_s:
            continue
        marked[w] = set(sorted(u for u in S if u in adj[w])[:x])
    X = Xp = Y = 0
    for T in combinations(S, k):
        covered = any(all(t in adj[w] for t in T) for w in marked)
        safe = any(all(t in marked[w] for t in T) for w in marked)
        if not covered:
            X += 1
            if is_clique_ref(adj, T):
                Y += 1
        if not safe:
            Xp += 1
    return X, Xp, Y


def random_graph(rng, n, p):
    from cliquechrom.graph_core import Graph

    pairs = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p]
    return Graph.from_edges(n, pairs)


def proper(G, colors):
    c = np.asarray(colors)
    e = G.edges()
    return bool(np.all(c[e[:, 0]] != c[e[:, 1]])) if e.size else True
