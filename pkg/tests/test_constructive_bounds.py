import itertools
import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cliquechrom.coloring import is_valid_clique_coloring
from cliquechrom.constructive_bounds import (
    PartitionPlan,
    build_all_Gi,
    build_Gi,
    color_low_p,
    color_mid_p,
    compute_thresholds,
    gi_max_degree_report,
    lambda_excess,
    partition_vertices,
    triangle_free_partition,
)
from cliquechrom.exceptions import InapplicableRegime
from cliquechrom.graph_core import (
    Graph,
    Seed,
    complete_graph,
    cycle_graph,
    empty_graph,
    generate_coupled,
    generate_gnp,
    induced_subgraph,
    path_graph,
)

from oracles import adjacency_sets, has_triangle_ref, proper


def nx_graph(G):
    H = nx.Graph()
    H.add_nodes_from(range(G.n))
    H.add_edges_from(G.edges().tolist())
    return H


def edge_set(G):
    return {tuple(e) for e in G.edges().tolist()}


def test_threshold_examples():
    th = compute_thresholds(10**4, 0.01)
    assert th.r == 4
    assert th.Gamma == pytest.approx(math.log(1e4))
    assert th.xi is None and th.lam is None
    th = compute_thresholds(10**6, 0.004)
    assert th.xi == pytest.approx(15.5587, rel=1e-4) and th.lam == 8
    assert compute_thresholds(100, 1e-9).r == 1
    assert compute_thresholds(10**4, 0.01).as_dict()["lambda"] is None


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 10**7), st.floats(1e-9, 0.999))
def test_threshold_invariants(n, p):
    th = compute_thresholds(n, p)
    assert 1 <= th.r <= n
    assert th.Gamma >= math.log(n) and th.Gamma_alt >= math.log(n)
    if th.xi is not None:
        assert th.xi > 0 and th.lam >= 1


def test_partition_examples():
    assert partition_vertices(6, 3, 0).sizes() == [2, 2, 2]
    assert sorted(partition_vertices(7, 3, 0).sizes()) == [2, 2, 3]
    plan = partition_vertices(10, 1, 5)
    assert plan.r == 1 and plan.parts[0].tolist() == list(range(10))
    with pytest.raises(ValueError):
        partition_vertices(5, 6, 0)
    with pytest.raises(ValueError):
        PartitionPlan(4, (np.array([0, 1]), np.array([1, 2, 3])))
    with pytest.raises(ValueError):
        PartitionPlan(5, (np.array([0]), np.array([1, 2, 3, 4])))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 500), st.data(), st.integers(0, 2**31))
def test_partition_invariants(n, data, s):
    r = data.draw(st.integers(1, n))
    plan = partition_vertices(n, r, Seed(s))
    allv = np.concatenate(plan.parts)
    assert sorted(allv.tolist()) == list(range(n))
    assert max(plan.sizes()) - min(plan.sizes()) <= 1
    assert plan.r == r
    assert partition_vertices(n, r, Seed(s)).labels().tolist() == plan.labels().tolist()


def test_build_gi_examples():
    K3 = complete_graph(3)
    H, verts = build_Gi(K3, [0, 1])
    assert H.m == 0 and verts.tolist() == [0, 1]
    H, _ = build_Gi(K3, [0, 1, 2])
    assert edge_set(H) == {(0, 1), (0, 2), (1, 2)}
    H, _ = build_Gi(path_graph(3), [0, 1])
    assert edge_set(H) == {(0, 1)}


def _crux_check(G, plan):
    adj = adjacency_sets(G)
    labels = plan.labels()
    parts = build_all_Gi(G, plan)
    local = []
    for H, verts in parts:
        index = {int(v): i for i, v in enumerate(verts.tolist())}
        local.append((H, index))
        sub = {(int(verts[a]), int(verts[b])) for a, b in H.edges().tolist()}
        for a, b in sub:
            assert b in adj[a] and labels[a] == labels[b]
    for Q in nx.find_cliques(nx_graph(G)):
        part = {labels[v] for v in Q}
        if len(part) != 1:
            continue
        H, index = local[part.pop()]
        q = [index[v] for v in Q]
        hadj = adjacency_sets(H)
        for a, b in itertools.combinations(q, 2):
            assert b in hadj[a], "maximal clique of G lost an edge in G_i"
        common = set(range(H.n)).difference(q)
        for v in q:
            common &= hadj[v]
        assert not common, "maximal clique of G not maximal in G_i"


def test_crux_maximality_transfer():
    rng = np.random.default_rng(0)
    for t in range(150):
        n = int(rng.integers(3, 41))
        p = float(rng.uniform(0.05, 0.8))
        G = generate_gnp(n, p, Seed(17, t))
        r = int(rng.integers(1, min(n, 6) + 1))
        _crux_check(G, partition_vertices(n, r, Seed(18, t)))


def test_crux_on_unbalanced_plans():
    rng = np.random.default_rng(1)
    for t in range(60):
        n = int(rng.integers(3, 30))
        G = generate_gnp(n, float(rng.uniform(0.1, 0.7)), Seed(19, t))
        labels = rng.integers(0, 3, n)
        _crux_check(G, PartitionPlan.from_labels(labels))


def test_degree_decomposition_bound():
    for t in range(30):
        G = generate_gnp(400, 0.05, Seed(20, t))
        th = compute_thresholds(400, 0.05)
        rep = gi_max_degree_report(G, partition_vertices(400, 3, Seed(21, t)), th)
        assert rep.bound_violations == 0
        assert all(d <= dec for d, dec in zip(rep.max_degrees, rep.max_decomposition))


def test_degree_report_examples():
    th = compute_thresholds(10, 0.1)
    rep = gi_max_degree_report(empty_graph(10), partition_vertices(10, 2, 0), th)
    assert rep.max_degrees == (0, 0) and rep.parts_over_limit == 0
    K3 = complete_graph(3)
    rep = gi_max_degree_report(K3, PartitionPlan(3, (np.arange(3),)), compute_thresholds(3, 0.5))
    # no outside vertices, so both neighbors count toward Y_v: 2*1 + 2
    assert rep.max_degrees == (2,) and rep.max_decomposition == (4,)


def test_low_p_examples():
    K20 = complete_graph(20)
    c, diag = color_low_p(K20, 0.5, Seed(1))
    assert is_valid_clique_coloring(K20, c).valid and c.palette >= 2
    c, diag = color_low_p(empty_graph(30), 0.01, Seed(1))
    assert c.palette == 1
    G = generate_gnp(2000, 0.02, Seed(2))
    c, diag = color_low_p(G, 0.02, Seed(3))
    assert is_valid_clique_coloring(G, c).valid
    assert diag["palette"] == c.palette and diag["r_used"] == compute_thresholds(2000, 0.02).r
    assert sum(diag["part_sizes"]) == 2000


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 120), st.floats(0.001, 0.9), st.integers(0, 2**31))
def test_low_p_always_valid(n, p, s):
    G = generate_gnp(n, p, Seed(s))
    c, diag = color_low_p(G, p, Seed(s, 1))
    assert is_valid_clique_coloring(G, c).valid
    assert len(set(c.colors)) == c.palette


def test_low_p_deterministic():
    G = generate_gnp(500, 0.03, Seed(4))
    a = color_low_p(G, 0.03, Seed(5))[0]
    b = color_low_p(G, 0.03, Seed(5))[0]
    assert a == b


def test_mid_p_inapplicable():
    G = generate_gnp(100, 0.01, Seed(1))
    with pytest.raises(InapplicableRegime):
        color_mid_p(G, G, 0.01, Seed(1))


def test_mid_p_triangle_free_high_graph():
    C8 = cycle_graph(8)
    c, diag = color_mid_p(C8, C8, 0.9, Seed(1))
    assert diag["r_hat"] == 1 and diag["classes_triangle_free"]
    assert c.palette == 2 and proper(C8, c.colors)
    assert is_valid_clique_coloring(C8, c).valid


@pytest.mark.parametrize("strategy", ["first_fit", "seeded"])
def test_mid_p_valid_random(strategy):
    n = 3000
    p = 1.1 * math.sqrt((math.log(n) + math.log(math.log(n))) / (2 * n))
    for t in range(3):
        lo, hi = generate_coupled(n, p, Seed(30, t))
        c, diag = color_mid_p(lo, hi, p, Seed(31, t), strategy=strategy)
        assert is_valid_clique_coloring(lo, c).valid
        assert diag["classes_triangle_free"]
        assert diag["repairs"] == c.repairs


@pytest.mark.parametrize("strategy", ["first_fit", "seeded"])
def test_triangle_free_partition(strategy):
    assert triangle_free_partition(cycle_graph(7), 0, strategy).r == 1
    plan = triangle_free_partition(complete_graph(3), 0, strategy)
    assert plan.r >= 2
    plan = triangle_free_partition(complete_graph(6), 0, strategy)
    assert plan.r >= 3 and max(plan.sizes()) <= 2
    for t in range(10):
        G = generate_gnp(60, 0.3, Seed(40, t))
        plan = triangle_free_partition(G, Seed(41, t), strategy)
        for q in plan.parts:
            H, _ = induced_subgraph(G, q)
            assert not has_triangle_ref(H)
    with pytest.raises(ValueError):
        triangle_free_partition(complete_graph(3), 0, "nope")


def test_lambda_excess():
    assert lambda_excess(complete_graph(5), 0) == 0
    assert lambda_excess(path_graph(3), 1) == 1
    assert lambda_excess(path_graph(3), 2) == 0
