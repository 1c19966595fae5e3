import math
import random
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cliquechrom.graph_core import Graph, Seed, complete_graph, empty_graph, generate_gnp
from cliquechrom.lowerbound_stats import (
    class_size_experiment,
    concentration_experiment,
    count_stats,
    expected_XS,
    mark_edges,
    size_parameter_s,
    truncation_x,
    vertex_class_budget,
)

from oracles import count_stats_ref, random_graph

HAND = Graph.from_edges(4, [(3, 0), (3, 1)])


def test_size_parameter_examples():
    s, s_int = size_parameter_s(100, 0.1, 2)
    assert s == pytest.approx(683.9915, rel=1e-6) and s_int == 684
    assert size_parameter_s(1e6, 1e-3, 2)[0] == pytest.approx(2.0417e5, rel=1e-4)
    for bad in (0.0, 1.0, -0.2):
        with pytest.raises(ValueError):
            size_parameter_s(100, bad, 2)


def test_size_parameter_small_p_limit():
    n, p = 1e6, 1e-9
    s, _ = size_parameter_s(n, p, 2)
    # second term p^-1 * 4 log(1/p) dominates np here; check the identity directly
    assert s == pytest.approx(math.e * max(n * p, 4 * math.log(1 / p) / p) / (1 - p * p) ** (n), rel=1e-9)


def test_truncation_examples():
    assert truncation_x(100, 0.1) == 60
    assert truncation_x(1, 0.01) == 1
    assert truncation_x(684, 0.1) == 411


def test_vertex_class_budget_examples():
    n = 100 * math.e
    assert vertex_class_budget(0, 100, 60, n) == pytest.approx(28.854, rel=1e-4)
    z0 = vertex_class_budget(0, 100, 60, n)
    assert vertex_class_budget(1, 100, 60, n) / z0 == pytest.approx(0.25)
    s = n / math.e
    assert vertex_class_budget(0, s, 7, n) == pytest.approx(12 * s * 2 / math.log(2) / 14)


def test_mark_edges_examples():
    G = Graph.from_edges(9, [(8, 2), (8, 5), (8, 7), (6, 1)])
    S = [1, 2, 3, 5, 7]
    assert mark_edges(G, S, 2).marked[8] == (2, 5)
    assert mark_edges(G, S, 5).marked[6] == (1,)
    assert mark_edges(G, S, 0).total() == 0


def test_count_stats_hand_examples():
    st2 = count_stats(HAND, [0, 1, 2], 2, 2)
    assert (st2.X_S, st2.Xprime_S, st2.Y_S) == (2, 2, 0)
    st1 = count_stats(HAND, [0, 1, 2], 2, 1)
    assert (st1.X_S, st1.Xprime_S) == (2, 3)
    e = count_stats(empty_graph(7), range(5), 2, 3)
    assert (e.X_S, e.Xprime_S, e.Y_S) == (10, 10, 0)
    with pytest.raises(ValueError):
        count_stats(HAND, [0], 2, 1)


@pytest.mark.parametrize("method", ["bits", "matrix", "sets"])
def test_count_stats_matches_reference(method):
    rng = random.Random({"bits": 1, "matrix": 2, "sets": 3}[method])
    for _ in range(300):
        n = rng.randint(3, 10)
        G = random_graph(rng, n, rng.random())
        S = rng.sample(range(n), rng.randint(2, n))
        k = 2 if method == "matrix" else rng.randint(2, min(4, len(S)))
        x = rng.randint(0, 5)
        got = count_stats(G, S, k, x, method=method)
        assert (got.X_S, got.Xprime_S, got.Y_S) == count_stats_ref(G, S, k, x)


def test_count_stats_routes_agree_medium():
    G = generate_gnp(300, 0.05, Seed(3))
    S = np.arange(0, 300, 7)
    for k in (2, 3):
        a = count_stats(G, S, k, 4, method="sets")
        b = count_stats(G, S, k, 4, method="auto")
        assert a == b
    assert count_stats(G, S, 2, 4, method="matrix") == count_stats(G, S, 2, 4, method="sets")


@settings(max_examples=80, deadline=None)
@given(st.integers(4, 14), st.floats(0, 1), st.integers(0, 2**31), st.integers(2, 4), st.data())
def test_count_stats_invariants(n, p, s, k, data):
    G = generate_gnp(n, p, Seed(s))
    size = data.draw(st.integers(k, n))
    S = data.draw(st.permutations(range(n)))[:size]
    prev = None
    for x in range(0, size + 2):
        st_ = count_stats(G, S, k, x)
        assert st_.Xprime_S >= st_.X_S >= st_.Y_S >= 0
        assert st_.Xprime_S <= math.comb(size, k)
        if prev is not None:
            assert st_.Xprime_S <= prev
        prev = st_.Xprime_S
    assert count_stats(G, S, k, size).Xprime_S == count_stats(G, S, k, size).X_S


def test_y_equals_x_on_complete_part():
    G = complete_graph(6)
    st_ = count_stats(G, range(6), 3, 2)
    assert st_.X_S == st_.Y_S == math.comb(6, 3)


def test_expected_xs():
    assert expected_XS(60, 12, 0.15, 2) == pytest.approx(66 * 0.9775 ** 48, rel=1e-12)
    assert expected_XS(60, 12, 0.0, 2) == 66
    assert expected_XS(60, 12, 1.0, 2) == 0


def test_concentration_p_zero():
    summ = concentration_experiment(40, 0.0, 2, 10, 3, 4, Seed(1))
    assert np.all(summ.ratios == 1.0)
    assert summ.fraction_below_delta == 0.0


def test_concentration_mean_matches_expectation():
    summ = concentration_experiment(60, 0.15, 2, 12, 400, 1, Seed(9), fixed_set=True)
    assert abs(summ.mean_X - summ.expected_XS) <= 4 * summ.stderr_X


def test_class_size_edgeless_and_boundary():
    rows = class_size_experiment(empty_graph(10), range(5), 2, p=0.1)
    assert all(r.size == 0 for r in rows)
    x = 3
    S = list(range(1, 11))
    G = Graph.from_edges(11, [(0, v) for v in S[: 2 * x]])
    rows = class_size_experiment(G, S, x, p=0.5)
    assert rows[1].size == 1 and rows[0].size == 0
    assert rows[1].low == 2 * x and rows[1].high == 4 * x


def test_class_size_budget_monte_carlo():
    exceed = 0
    for t in range(20):
        G = generate_gnp(2000, 0.05, Seed(12, t))
        S = np.random.default_rng(t).choice(2000, 200, replace=False)
        exceed += sum(r.exceeds for r in class_size_experiment(G, S, 60, p=0.05))
    assert exceed == 0
