"""Small named graphs and random enumerable instances shared by the tests."""

import numpy as np
from hypothesis import strategies as st

from attitude_ic.graph import Graph

TRIANGLE = [("a", "b"), ("b", "a"), ("b", "c"), ("c", "b"), ("a", "c"), ("c", "a")]
STAR = [("d", "e"), ("d", "f"), ("d", "g"), ("d", "h")]
NONSUB = [("s", "a"), ("s", "b"), ("b", "a"), ("t", "c"), ("v", "c"), ("c", "d")]
CHAIN = [("a", "b"), ("b", "c")]


def labeled(pairs, p=1.0):
    return Graph.from_labeled_edges([(a, b, p) for a, b in pairs])


def triangle(p=1.0):
    return labeled(TRIANGLE, p)


def star(p=1.0):
    return labeled(STAR, p)


def combined(p=1.0):
    return labeled(TRIANGLE + STAR, p)


def nonsub():
    return labeled(NONSUB)


def ids(g, *labels):
    return [g.index_of(x) for x in labels]


def random_enumerable(seed, n_max=8, m_max=14, n_min=2):
    """Random simple digraph with uniform probabilities in [0, 1]."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_min, n_max + 1))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    m = int(rng.integers(1, min(m_max, len(pairs)) + 1))
    pick = rng.choice(len(pairs), size=m, replace=False)
    prob = rng.uniform(0.0, 1.0, size=m)
    return Graph.from_edges([(*pairs[i], p) for i, p in zip(pick, prob)], n=n)


@st.composite
def small_graphs(draw, max_n=6, max_m=9, min_m=0):
    n = draw(st.integers(2, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    chosen = draw(st.lists(st.sampled_from(pairs), min_size=min_m, max_size=min(max_m, len(pairs)),
                           unique=True))
    probs = draw(st.lists(st.sampled_from([0.0, 0.1, 0.25, 0.5, 0.75, 1.0]),
                          min_size=len(chosen), max_size=len(chosen)))
    return Graph.from_edges([(u, v, p) for (u, v), p in zip(chosen, probs)], n=n)


@st.composite
def graph_and_nested_sets(draw, max_n=6, max_m=9):
    """A graph, S ⊆ T and a node x outside T."""
    g = draw(small_graphs(max_n, max_m))
    nodes = list(range(g.n))
    t = draw(st.lists(st.sampled_from(nodes), unique=True, max_size=g.n - 1))
    s = draw(st.lists(st.sampled_from(t), unique=True)) if t else []
    x = draw(st.sampled_from([v for v in nodes if v not in t]))
    return g, sorted(s), sorted(t), x


def chain_graph(p=0.5):
    return labeled(CHAIN, p)
