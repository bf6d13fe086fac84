"""Time each hot kernel on the compiled and pure-Python backends.

    python benchmarks/bench_backends.py [--nodes 2000] [--edges 8000] [--repeat 3]

Both backends get identical inputs and seeds; outputs are checked for
equality before timings are reported.
"""

import argparse
import time

import numpy as np

from attitude_ic import _backend, _pykernels
from attitude_ic.actionable import _concat, _reps
from attitude_ic.generators import power_law_graph
from attitude_ic.graph import Constant
from attitude_ic.rng import derive_seed


def cases(g, seeds_mask, seeds_arr, args):
    ptr, mem, _, _ = _pykernels.rr_edge_sets(g.in_indptr, g.in_src, g.in_prob, 0, g.m,
                                             args.rr, 1)
    roots = np.flatnonzero(g.indegree() > 0).astype(np.int32)[: args.roots]
    reps = _reps(g, args.a, roots)
    rseeds = np.array([derive_seed(3, int(v)) for v in roots], dtype=np.uint64)
    gen = _pykernels.act_generate(g.in_indptr, g.in_src, g.in_prob, roots, reps, rseeds)
    sroot, nptr, nodes, eptr, ea, eb = _concat([gen])
    w = 1.0 / _reps(g, args.a, sroot).astype(np.float64)
    return {
        "simulate": lambda k: k.simulate(g.out_indptr, g.out_dst, g.out_prob, seeds_arr,
                                         args.trials, 7, 0, False),
        "rr_edge_sets": lambda k: k.rr_edge_sets(g.in_indptr, g.in_src, g.in_prob, 0, g.m,
                                                 args.rr, 7),
        "rr_edge_hits": lambda k: k.rr_edge_hits(g.in_indptr, g.in_src, g.in_prob, 0, g.m,
                                                 args.rr, 7, seeds_mask),
        "rr_node_sets": lambda k: k.rr_node_sets(g.in_indptr, g.in_src, g.in_prob, g.n,
                                                 args.rr, 7),
        "greedy_cover": lambda k: k.greedy_cover(ptr, mem, g.n, args.k),
        "act_estimate": lambda k: k.act_estimate(g.in_indptr, g.in_src, g.in_prob, roots, reps,
                                                 rseeds, seeds_mask, False),
        "act_generate": lambda k: k.act_generate(g.in_indptr, g.in_src, g.in_prob, roots, reps,
                                                 rseeds),
        "act_greedy": lambda k: k.act_greedy(g.n, sroot, nptr, nodes, eptr, ea, eb, w, args.k,
                                             False, 1e-9, False),
    }


def best_time(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=2000)
    ap.add_argument("--edges", type=int, default=8000)
    ap.add_argument("--p", type=float, default=0.1)
    ap.add_argument("--trials", type=int, default=10000)
    ap.add_argument("--rr", type=int, default=100000)
    ap.add_argument("--roots", type=int, default=300)
    ap.add_argument("--a", type=float, default=5)
    ap.add_argument("--k", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if "cython" not in _backend.available():
        raise SystemExit("compiled kernels not built; run: python setup.py build_ext --inplace")
    ck = _backend._BACKENDS["cython"]
    g = power_law_graph(args.nodes, args.edges, 1, Constant(args.p))
    seeds_arr = np.arange(10, dtype=np.int32)
    mask = np.zeros(g.n, dtype=np.uint8)
    mask[seeds_arr] = 1

    print(f"graph n={g.n} m={g.m} p={args.p}")
    print(f"{'kernel':<14} {'cython s':>10} {'python s':>10} {'speedup':>9}  equal")
    for name, fn in cases(g, mask, seeds_arr, args).items():
        tc, oc = best_time(lambda: fn(ck), args.repeat)
        tp, op = best_time(lambda: fn(_pykernels), 1)
        print(f"{name:<14} {tc:>10.4f} {tp:>10.4f} {tp / max(tc, 1e-9):>8.1f}x  {same(oc, op)}")


if __name__ == "__main__":
    main()
