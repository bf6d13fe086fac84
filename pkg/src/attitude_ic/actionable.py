"""Actionable attitude: expected attitude beyond first exposure.

``sigma_act(S) = sigma_att(S) - sigma_inf(S)``.  A non-seed node with ``F``
activated in-edges contributes ``F - 1`` (when ``F >= 1``); a seed contributes
``F``.  Both are estimated per root from sampled transpose neighbourhoods
(RR graphs): ``F`` is the number of the root's kept in-edges whose far end
reaches the seed set inside the sample.

``paper_formula=True`` applies ``max(F - 1, 0)`` to seeds too, which
undercounts seeds with activated in-edges.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import _backend
from ._parallel import ROOT_CHUNK, run_chunks
from .attitude_max import SelectionResult
from .errors import ValidationError
from .graph import Graph
from .rng import RandomStream, derive_seed
from .seeds import seed_set

DEFAULT_A = 64 / 0.1**2
GREEDY_TOL = 1e-9


@dataclass(frozen=True)
class RRGraphSample:
    root: int
    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    fan_edges: tuple[tuple[int, int], ...]


def default_a(epsilon: float) -> float:
    return 64.0 / (epsilon * epsilon)


def delta_bound(g: Graph) -> float:
    """Largest expected out-degree, ``max_v sum_w p(v, w)``."""
    if g.n == 0:
        return 0.0
    return float(g.expected_outdegree().max())


def _reps(g: Graph, a: float, roots: np.ndarray) -> np.ndarray:
    indeg = g.indegree()[roots]
    return np.maximum(1, np.ceil(a * indeg - 1e-9)).astype(np.int64)


def _check_a(a):
    if not a >= 1:
        raise ValidationError(f"a={a} must be >= 1")


def generate_rr_graph(g: Graph, v: int, rng: RandomStream) -> RRGraphSample:
    """One sampled transpose neighbourhood of ``v``.

    Edges are transpose edges ``(a, b)``, i.e. original edges ``b -> a``.
    """
    if not 0 <= v < g.n:
        raise ValidationError(f"node {v} outside [0, {g.n})")
    k = _backend.kernels()
    _, nptr, nodes, eptr, ea, eb = k.act_generate(
        g.in_indptr, g.in_src, g.in_prob, np.array([v], np.int32),
        np.ones(1, np.int64), np.array([rng.fork()], np.uint64),
    )
    nodes = nodes.tolist()
    edges = tuple((nodes[a], nodes[b]) for a, b in zip(ea.tolist(), eb.tolist()))
    fan = tuple(e for e, a in zip(edges, ea.tolist()) if a == 0)
    return RRGraphSample(v, tuple(nodes), edges, fan)


def count_for_set(sample: RRGraphSample, s, paper_formula: bool = False) -> int:
    """Contribution of ``sample.root`` under seed set ``s`` in this sample."""
    s = set(s)
    radj: dict[int, list[int]] = {}
    for a, b in sample.edges:
        radj.setdefault(b, []).append(a)
    hit = {u for u in sample.nodes if u in s}
    stack = list(hit)
    while stack:
        b = stack.pop()
        for a in radj.get(b, ()):
            if a not in hit:
                hit.add(a)
                stack.append(a)
    f = sum(1 for _, u in sample.fan_edges if u in hit)
    if sample.root in s and not paper_formula:
        return f
    return max(f - 1, 0)


def _root_batches(g: Graph, a: float, base: int):
    roots = np.flatnonzero(g.indegree() > 0).astype(np.int32)
    reps = _reps(g, a, roots)
    seeds = np.array([derive_seed(base, int(v)) for v in roots.tolist()], dtype=np.uint64)
    return [
        (roots[i:i + ROOT_CHUNK], reps[i:i + ROOT_CHUNK], seeds[i:i + ROOT_CHUNK])
        for i in range(0, len(roots), ROOT_CHUNK)
    ]


def estimate_actionable(g: Graph, s, a: float, rng: RandomStream, paper_formula=False,
                        threads=1) -> float:
    """Sum over roots of the average contribution over ``max(1, a*indeg)`` RR graphs."""
    _check_a(a)
    s = seed_set(s, g.n)
    base = rng.fork()
    if not s:
        return 0.0
    mask = np.zeros(g.n, dtype=np.uint8)
    mask[list(s)] = 1
    k = _backend.kernels()

    def job(roots, reps, seeds):
        return k.act_estimate(g.in_indptr, g.in_src, g.in_prob, roots, reps, seeds, mask,
                              bool(paper_formula))

    parts = run_chunks(job, _root_batches(g, a, base), threads)
    return float(sum(float(p.sum()) for p in parts))


def maximize_actionable(g: Graph, k: int, a: float, rng: RandomStream, paper_formula=False,
                        threads=1, trace=False) -> SelectionResult:
    """Greedy seed set for actionable attitude over stored RR graphs.

    Each step picks the node with the largest sample marginal gain, breaking
    ties by the number of newly covered fan edges and then by smallest id.
    The chosen node then covers every fan edge that reaches it and is removed
    from all samples.  The reported value is a fresh :func:`estimate_actionable`.
    """
    _check_a(a)
    if not 1 <= k <= g.n:
        raise ValidationError(f"k={k} outside [1, {g.n}]")
    t0 = time.perf_counter()
    build_seed, eval_seed = rng.fork(), rng.fork()
    kern = _backend.kernels()

    def job(roots, reps, seeds):
        return kern.act_generate(g.in_indptr, g.in_src, g.in_prob, roots, reps, seeds)

    parts = run_chunks(job, _root_batches(g, a, build_seed), threads)
    sroot, nptr, nodes, eptr, ea, eb = _concat(parts)
    reps = _reps(g, a, sroot) if len(sroot) else np.zeros(0, np.int64)
    weights = 1.0 / reps.astype(np.float64)
    seeds, g1, g2, tr1, tr2 = kern.act_greedy(
        g.n, sroot, nptr, nodes, eptr, ea, eb, weights, k, bool(paper_formula), GREEDY_TOL,
        bool(trace),
    )
    n_samples = len(sroot)
    sample_bytes = sum(x.nbytes for x in (sroot, nptr, nodes, eptr, ea, eb))
    del sroot, nptr, nodes, eptr, ea, eb
    seeds_t = tuple(int(v) for v in seeds)
    est = estimate_actionable(g, seeds_t, a, RandomStream(eval_seed), paper_formula, threads)
    diag = {
        "objective": "actionable",
        "pick_order": list(seeds_t),
        "marginal_gains": [float(x) for x in g1],
        "coverage_gains": [float(x) for x in g2],
        "selection_estimate": float(np.sum(g1)),
        "delta_bound": delta_bound(g),
        "a": float(a),
        "paper_formula": bool(paper_formula),
        "sample_bytes": int(sample_bytes),
    }
    if trace:
        diag["trace_gain"] = tr1
        diag["trace_coverage"] = tr2
    return SelectionResult(tuple(sorted(seeds_t)), est, n_samples, k,
                           time.perf_counter() - t0, None, diag)


def _concat(parts):
    if not parts:
        z32, z64 = np.zeros(0, np.int32), np.zeros(1, np.int64)
        return z32, z64, z32, z64.copy(), z32, z32
    nshift = eshift = 0
    nptrs, eptrs = [np.zeros(1, np.int64)], [np.zeros(1, np.int64)]
    for p in parts:
        nptrs.append(p[1][1:] + nshift)
        eptrs.append(p[3][1:] + eshift)
        nshift += int(p[1][-1])
        eshift += int(p[3][-1])
    return (
        np.concatenate([p[0] for p in parts]),
        np.concatenate(nptrs),
        np.concatenate([p[2] for p in parts]),
        np.concatenate(eptrs),
        np.concatenate([p[4] for p in parts]),
        np.concatenate([p[5] for p in parts]),
    )


def expected_samples(g: Graph, a: float) -> int:
    """Number of RR graphs :func:`maximize_actionable` would store."""
    roots = np.flatnonzero(g.indegree() > 0)
    return int(_reps(g, a, roots).sum()) if len(roots) else 0


__all__ = [
    "RRGraphSample", "DEFAULT_A", "default_a", "delta_bound", "generate_rr_graph",
    "count_for_set", "estimate_actionable", "maximize_actionable", "expected_samples",
]
