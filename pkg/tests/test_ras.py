import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from attitude_ic.errors import ValidationError
from attitude_ic.graph import Graph
from attitude_ic.oracle import exact_enumerate
from attitude_ic.ras import (
    EstimatorParams, RRCollection, count_hits, estimate_attitude, estimate_influence,
    estimate_node_attitude, generate_rr_sample, required_samples,
)
from attitude_ic.rng import RandomStream

from helpers import ids, random_enumerable, small_graphs, star, triangle


def reach_probability(g, s):
    """P[node reachable from s] by plain enumeration of live-edge subgraphs."""
    out = np.zeros(g.n)
    edges = list(g.edges())
    for mask in itertools.product([0, 1], repeat=g.m):
        w = math.prod(e.prob if b else 1 - e.prob for e, b in zip(edges, mask))
        if w == 0:
            continue
        adj = {}
        for e, b in zip(edges, mask):
            if b:
                adj.setdefault(e.src, []).append(e.dst)
        seen, stack = set(s), list(s)
        while stack:
            u = stack.pop()
            for v in adj.get(u, ()):
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        for v in seen:
            out[v] += w
    return out


def test_required_samples_closed_form():
    assert required_samples(EstimatorParams(0.5, 0.01), 10, 5) == 106


def test_required_samples_scales_with_eps():
    p1 = required_samples(EstimatorParams(0.2, 0.01), 1000, 5)
    p2 = required_samples(EstimatorParams(0.1, 0.01), 1000, 5)
    assert 3.5 < p2 / p1 < 4.2


def test_required_samples_rejects_bad_bound():
    with pytest.raises(ValidationError):
        required_samples(EstimatorParams(), 10, 0)


@pytest.mark.parametrize("eps,delta", [(0, 0.1), (1, 0.1), (0.1, 0), (0.1, 1.5)])
def test_params_validation(eps, delta):
    with pytest.raises(ValidationError):
        EstimatorParams(eps, delta)


def test_sample_on_triangle_covers_everything(backend):
    g = triangle()
    rng = RandomStream(3)
    for _ in range(10):
        s = generate_rr_sample(g, rng)
        assert s.kept and s.members == (0, 1, 2)


def test_zero_probability_sample_is_empty(backend):
    s = generate_rr_sample(Graph.from_edges([(0, 1, 0.0)]), RandomStream(1))
    assert s.origin_edge == (0, 1, 0.0) and not s.kept and s.members == ()


def test_two_node_sample_members(backend):
    s = generate_rr_sample(Graph.from_edges([(0, 1, 1.0)]), RandomStream(1))
    assert s.kept and s.members == (0,)


def test_empty_graph_sample_errors():
    with pytest.raises(ValidationError):
        generate_rr_sample(Graph(2, [], [], []), RandomStream(0))


@given(small_graphs(min_m=1), st.integers(0, 2**32))
@settings(max_examples=60, deadline=None)
def test_sample_invariants(g, seed):
    coll = RRCollection(g, seed)
    coll.extend_to(30)
    for i in range(len(coll)):
        s = coll.sample(i)
        if not s.kept:
            assert s.members == ()
        else:
            assert s.origin_edge.src in s.members
        assert list(s.members) == sorted(set(s.members))


def test_estimate_empty_set_is_zero():
    assert estimate_attitude(triangle(0.5), [], 100, RandomStream(0)) == 0.0


def test_estimate_triangle_is_exact(backend):
    g = triangle()
    for beta in (1, 7, 100):
        assert estimate_attitude(g, ids(g, "a"), beta, RandomStream(beta)) == 7.0


def test_estimate_rejects_zero_beta():
    with pytest.raises(ValidationError):
        estimate_attitude(triangle(), [0], 0, RandomStream(0))


def test_failed_coins_count_in_denominator():
    # dividing only by kept samples would give 2.0 here
    g = Graph.from_edges([(0, 1, 0.5)])
    est = estimate_attitude(g, [0], 200_000, RandomStream(2))
    assert est == pytest.approx(1.5, abs=0.01)


def test_node_attitude_examples(backend):
    g = triangle()
    assert estimate_node_attitude(g, ids(g, "a"), g.index_of("a"), 50, RandomStream(0)) == 3.0
    h = star()
    assert estimate_node_attitude(h, ids(h, "d"), h.index_of("e"), 50, RandomStream(0)) == 1.0
    iso = Graph.from_edges([(0, 1, 0.5)], n=3)
    assert estimate_node_attitude(iso, [], 2, 50, RandomStream(0)) == 0.0


@pytest.mark.parametrize("seed", range(5))
def test_node_attitude_matches_exact(seed):
    g = random_enumerable(seed + 40)
    s = [0]
    exact = exact_enumerate(g, s).per_node_att
    for v in range(g.n):
        est = estimate_node_attitude(g, s, v, 40_000, RandomStream(seed * 100 + v))
        indeg = g.indegree()[v]
        assert abs(est - exact[v]) <= 0.05 * max(indeg, 1)


def test_influence_estimate_star(backend):
    g = star()
    assert estimate_influence(g, ids(g, "d"), 100, RandomStream(0)) == 5.0


@pytest.mark.parametrize("seed", range(6))
def test_hit_probability_identity(seed):
    # |S| + m * mean_e p(e) * P[S reaches src(e)] equals the exact total attitude
    g = random_enumerable(seed, n_max=6, m_max=9)
    s = [0] if seed % 2 else [0, 1]
    reach = reach_probability(g, s)
    p_hit = float(np.mean([e.prob * reach[e.src] for e in g.edges()]))
    assert len(s) + g.m * p_hit == pytest.approx(exact_enumerate(g, s).sigma_att, abs=1e-9)

    # empirical hit rate over 50 independent runs agrees within 4 combined stderr
    beta = 2000
    rates = [count_hits(g, s, beta, RandomStream(seed).spawn(r).fork()) / beta for r in range(50)]
    se = math.sqrt(max(p_hit * (1 - p_hit), 1e-12) / (beta * 50))
    assert abs(np.mean(rates) - p_hit) <= 4 * se


def test_collection_grows_deterministically():
    g = random_enumerable(5)
    a = RRCollection(g, 77)
    a.extend_to(100)
    a.extend_to(250)
    b = RRCollection(g, 77)
    b.extend_to(100)
    b.extend_to(250)
    assert np.array_equal(a.members, b.members) and np.array_equal(a.indptr, b.indptr)
    assert len(a) == 250
