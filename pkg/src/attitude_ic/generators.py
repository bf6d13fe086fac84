"""Seeded synthetic graphs: directed power-law (Chung-Lu) and small random ones."""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .graph import Constant, Graph, InDegree, LoadOptions, WeightScheme, build_graph


def power_law_edges(n: int, m: int, seed: int, exponent: float = 2.1) -> tuple[np.ndarray, np.ndarray]:
    """``m`` distinct non-loop edges with heavy-tailed in- and out-degrees.

    Endpoints are drawn independently with weight ``(i + 1) ** (-1 / (exponent - 1))``
    over independent random node orders, so hubs on the two sides differ.
    """
    if n < 2 or m < 0 or m > n * (n - 1):
        raise ValidationError(f"cannot place m={m} edges on n={n} nodes")
    rng = np.random.default_rng(seed)
    w = (np.arange(n) + 1.0) ** (-1.0 / (exponent - 1.0))
    p_out = w[np.argsort(rng.permutation(n))] / w.sum()
    p_in = w[np.argsort(rng.permutation(n))] / w.sum()
    keys = np.zeros(0, dtype=np.int64)
    while len(keys) < m:
        draw = int((m - len(keys)) * 1.3) + 16
        s = rng.choice(n, size=draw, p=p_out)
        d = rng.choice(n, size=draw, p=p_in)
        ok = s != d
        new = s[ok].astype(np.int64) * n + d[ok]
        _, first = np.unique(np.concatenate([keys, new]), return_index=True)
        merged = np.concatenate([keys, new])
        keys = merged[np.sort(first)]
    keys = keys[:m]
    return (keys // n).astype(np.int64), (keys % n).astype(np.int64)


def power_law_graph(n: int, m: int, seed: int, scheme: WeightScheme = Constant(0.1),
                    exponent: float = 2.1) -> Graph:
    src, dst = power_law_edges(n, m, seed, exponent)
    return build_graph(n, src, dst, np.zeros(0), None, scheme, LoadOptions())


def random_graph(n: int, m: int, seed: int, p_low: float = 0.0, p_high: float = 1.0) -> Graph:
    """Uniform random simple digraph with ``m`` edges and uniform probabilities."""
    if m > n * (n - 1):
        raise ValidationError(f"cannot place m={m} edges on n={n} nodes")
    rng = np.random.default_rng(seed)
    pairs = np.array([(u, v) for u in range(n) for v in range(n) if u != v], dtype=np.int64)
    pick = rng.choice(len(pairs), size=m, replace=False) if m else np.zeros(0, np.int64)
    prob = rng.uniform(p_low, p_high, size=m)
    e = pairs[pick].reshape(-1, 2)
    return Graph(n, e[:, 0], e[:, 1], prob)


__all__ = ["power_law_edges", "power_law_graph", "random_graph", "InDegree", "Constant"]
