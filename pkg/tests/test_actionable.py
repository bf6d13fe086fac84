import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from attitude_ic.actionable import (
    RRGraphSample, count_for_set, delta_bound, estimate_actionable, expected_samples,
    generate_rr_graph, maximize_actionable,
)
from attitude_ic.errors import ValidationError
from attitude_ic.graph import Graph
from attitude_ic.oracle import exact_best_seed, exact_enumerate
from attitude_ic.rng import RandomStream

from helpers import ids, nonsub, random_enumerable, small_graphs, star, triangle


def test_rr_graph_of_source_node(backend):
    g = star()
    d = g.index_of("d")
    s = generate_rr_graph(g, d, RandomStream(0))
    assert s.nodes == (d,) and s.fan_edges == ()


def test_rr_graph_two_in_edges(backend):
    g = nonsub()
    c = g.index_of("c")
    s = generate_rr_graph(g, c, RandomStream(0))
    assert len(s.fan_edges) == 2
    assert set(s.nodes) == set(ids(g, "c", "t", "v"))


def test_rr_graph_zero_probabilities(backend):
    g = triangle(0.0)
    s = generate_rr_graph(g, 1, RandomStream(0))
    assert s.nodes == (1,) and s.edges == ()


def test_rr_graph_bad_node():
    with pytest.raises(ValidationError):
        generate_rr_graph(triangle(), 5, RandomStream(0))


@given(small_graphs(min_m=1), st.integers(0, 2**32))
@settings(max_examples=80, deadline=None)
def test_rr_graph_invariants(g, seed):
    rng = RandomStream(seed)
    indeg = g.indegree()
    for v in range(g.n):
        s = generate_rr_graph(g, v, rng)
        assert s.root == v and s.nodes[0] == v
        nodes = set(s.nodes)
        assert all(a in nodes and b in nodes for a, b in s.edges)
        assert len(s.fan_edges) <= indeg[v]
        assert all(a == v for a, _ in s.fan_edges)


def test_count_for_set_examples():
    g = nonsub()
    c, t, v = ids(g, "c", "t", "v")
    sample = RRGraphSample(c, (c, t, v), ((c, t), (c, v)), ((c, t), (c, v)))
    assert count_for_set(sample, {t}) == 0
    assert count_for_set(sample, {t, v}) == 1
    lone = RRGraphSample(c, (c,), (), ())
    assert count_for_set(lone, {c}) == 0


def test_count_for_set_seed_correction():
    sample = RRGraphSample(0, (0, 1, 2), ((0, 1), (0, 2)), ((0, 1), (0, 2)))
    assert count_for_set(sample, {0, 1}) == 1
    assert count_for_set(sample, {0, 1}, paper_formula=True) == 0
    assert count_for_set(sample, {1, 2}) == 1


def test_estimate_nonsub_values(backend):
    g = nonsub()
    vals = [estimate_actionable(g, ids(g, *s), 1, RandomStream(0))
            for s in (["s"], ["s", "t"], ["s", "v"], ["s", "t", "v"])]
    assert vals == [1.0, 1.0, 1.0, 2.0]


def test_estimate_empty_set():
    assert estimate_actionable(triangle(0.5), [], 10, RandomStream(0)) == 0.0


def test_estimate_forest_is_zero():
    g = Graph.from_edges([(0, 1, 0.7), (0, 2, 0.4), (1, 3, 0.9), (4, 5, 0.5)])
    assert estimate_actionable(g, [0, 4], 50, RandomStream(0)) == 0.0


def test_seed_correction_matches_definition():
    g = triangle()
    a = ids(g, "a")
    assert exact_enumerate(g, a).sigma_act == 4.0
    assert estimate_actionable(g, a, 1, RandomStream(0)) == 4.0
    assert estimate_actionable(g, a, 1, RandomStream(0), paper_formula=True) == 3.0


def test_estimate_rejects_small_a():
    with pytest.raises(ValidationError):
        estimate_actionable(triangle(), [0], 0.5, RandomStream(0))


@pytest.mark.parametrize("seed", range(4))
def test_estimate_close_to_exact(seed):
    g = random_enumerable(seed + 300)
    s = [0, 1]
    exact = exact_enumerate(g, s).sigma_act
    est = estimate_actionable(g, s, 2000, RandomStream(seed))
    assert est == pytest.approx(exact, abs=0.05 + 0.05 * exact)


def test_nonsubmodular_marginals():
    g = nonsub()
    s, t, v = ids(g, "s", "t", "v")
    act = lambda *x: exact_enumerate(g, list(x)).sigma_act
    assert act(s, v) - act(s) == 0.0
    assert act(s, t, v) - act(s, t) == 1.0


def test_delta_bound_examples():
    assert delta_bound(triangle()) == 2.0
    assert delta_bound(triangle(0.0)) == 0.0
    assert delta_bound(nonsub()) == 2.0
    assert delta_bound(Graph(0, [], [], [])) == 0.0


def test_maximize_nonsub_k1(backend):
    g = nonsub()
    r = maximize_actionable(g, 1, 1, RandomStream(0))
    assert r.seeds == tuple(ids(g, "s")) and r.est_objective == 1.0


def test_maximize_nonsub_k3(backend):
    g = nonsub()
    r = maximize_actionable(g, 3, 1, RandomStream(0))
    exact = exact_enumerate(g, r.seeds).sigma_act
    best, best_val = exact_best_seed(g, 3, "actionable")
    assert exact >= 2.0
    assert exact == best_val


def test_maximize_forest_value_zero():
    g = Graph.from_edges([(0, 1, 0.5), (1, 2, 0.5)])
    r = maximize_actionable(g, 1, 10, RandomStream(0))
    assert len(r.seeds) == 1 and r.est_objective == 0.0


def test_maximize_reports_delta_bound():
    r = maximize_actionable(triangle(0.5), 1, 4, RandomStream(0))
    assert r.diagnostics["delta_bound"] == 1.0
    assert r.beta_used == expected_samples(triangle(0.5), 4)


@pytest.mark.parametrize("k", [0, 4])
def test_maximize_rejects_bad_k(k):
    with pytest.raises(ValidationError):
        maximize_actionable(triangle(), k, 1, RandomStream(0))


@given(small_graphs(max_n=6, max_m=10, min_m=1), st.integers(0, 1000))
@settings(max_examples=60, deadline=None)
def test_greedy_counts_after_removal(g, seed):
    # coverage counts never grow after a removal; gain counts never go negative
    k = min(3, g.n)
    r = maximize_actionable(g, k, 3, RandomStream(seed), trace=True)
    c1, c2 = r.diagnostics["trace_gain"], r.diagnostics["trace_coverage"]
    order = r.diagnostics["pick_order"]
    assert np.all(c1 >= -1e-9)
    for it in range(1, k):
        alive = [u for u in range(g.n) if u not in order[:it]]
        assert np.all(c2[it, alive] <= c2[it - 1, alive] + 1e-9)


def test_threads_do_not_change_results():
    g = random_enumerable(55, n_max=8, m_max=14)
    a = maximize_actionable(g, 2, 50, RandomStream(1), threads=1)
    b = maximize_actionable(g, 2, 50, RandomStream(1), threads=3)
    assert (a.seeds, a.est_objective) == (b.seeds, b.est_objective)
