"""Ground truth for the Attitude-IC process.

Forward Monte-Carlo simulation, exact expectations by enumerating every
live-edge realization of small graphs, and exhaustive seed search.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _backend
from ._parallel import TRIAL_CHUNK, chunk_plan, run_chunks
from .errors import SizeGuardError, ValidationError
from .graph import Graph
from .rng import RandomStream
from .seeds import seed_set

OBJECTIVES = ("attitude", "influence", "actionable")


@dataclass
class DiffusionOutcome:
    attitude: np.ndarray
    influenced: np.ndarray
    activated_edges: int

    @property
    def total_attitude(self) -> int:
        return int(self.attitude.sum())

    @property
    def n_influenced(self) -> int:
        return int(self.influenced.sum())


@dataclass
class MCEstimate:
    trials: int
    mean_att: float
    mean_inf: float
    mean_act: float
    mean_ratio: float
    stderr_att: float
    stderr_inf: float
    stderr_act: float
    stderr_ratio: float


@dataclass
class ExactResult:
    sigma_att: float
    sigma_inf: float
    sigma_act: float
    per_node_att: np.ndarray


def simulate_aic(g: Graph, s: Iterable[int], rng: RandomStream) -> DiffusionOutcome:
    """Run one Attitude-IC cascade from seed set ``s``.

    Seeds start at attitude 1.  In each round every node influenced in the
    previous round flips one coin per out-edge; a success adds 1 to the
    target's attitude and influences it if it was not already.  Nodes never
    send twice, so every edge is tried at most once.
    """
    seeds = np.asarray(seed_set(s, g.n), dtype=np.int32)
    k = _backend.kernels()
    tot, inf, act, _, last = k.simulate(
        g.out_indptr, g.out_dst, g.out_prob, seeds, 1, rng.fork(), 0, True
    )
    out = DiffusionOutcome(last, last > 0, int(act[0]))
    assert out.total_attitude == len(seeds) + out.activated_edges
    return out


def simulate_trials(g, seeds, trials, rng, threads=1, hist_len=0):
    """Per-trial totals (attitude, influenced, activated edges) plus an
    optional histogram of node counts by attitude value."""
    seeds = np.asarray(seed_set(seeds, g.n), dtype=np.int32)
    k = _backend.kernels()
    plan = chunk_plan(trials, TRIAL_CHUNK, rng.fork())

    def job(count, seed):
        return k.simulate(g.out_indptr, g.out_dst, g.out_prob, seeds, count, seed, hist_len, False)

    parts = run_chunks(job, plan, threads)
    tot = np.concatenate([p[0] for p in parts]) if parts else np.zeros(0, np.int64)
    inf = np.concatenate([p[1] for p in parts]) if parts else np.zeros(0, np.int64)
    act = np.concatenate([p[2] for p in parts]) if parts else np.zeros(0, np.int64)
    hist = np.zeros(max(hist_len, 0), dtype=np.int64)
    for p in parts:
        hist += p[3]
    # realization identity: total attitude = |S| + activated edges
    if not np.array_equal(tot, len(seeds) + act):
        raise AssertionError("total attitude != |S| + activated edges")
    return tot, inf, act, hist


def _mean_se(x):
    x = np.asarray(x, dtype=np.float64)
    mean = float(x.mean())
    if len(x) < 2:
        return mean, math.nan
    return mean, float(x.std(ddof=1) / math.sqrt(len(x)))


def mc_estimate(g: Graph, s, trials: int, rng: RandomStream, threads=1) -> MCEstimate:
    """Monte-Carlo means of total attitude, influence, their difference and
    the per-trial ratio attitude/influenced (0 when nothing is influenced).

    Standard errors are NaN when ``trials == 1``.
    """
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    tot, inf, act, _ = simulate_trials(g, s, trials, rng, threads)
    diff = tot - inf
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(inf > 0, tot / np.maximum(inf, 1), 0.0)
    ma, sa = _mean_se(tot)
    mi, si = _mean_se(inf)
    md, sd = _mean_se(diff)
    mr, sr = _mean_se(ratio)
    return MCEstimate(trials, ma, mi, md, mr, sa, si, sd, sr)


# --- exact enumeration ------------------------------------------------------

_POP = np.uint64(1)


class LiveEdgeEnumerator:
    """Exact expectations over all ``2**m`` live-edge realizations.

    Realizations are processed in blocks; for each block the transitive
    closure of every active node is computed once as 64-bit reach masks and
    then reused for every seed set passed to :meth:`evaluate`.
    """

    def __init__(self, g: Graph, max_edges: int = 20, block_bits: int = 14):
        if g.m > max_edges:
            raise SizeGuardError(f"exact enumeration needs m <= {max_edges}, graph has m={g.m}")
        self.g = g
        active = np.unique(np.concatenate([g.src, g.dst])) if g.m else np.zeros(0, np.int64)
        if len(active) > 64:
            raise SizeGuardError("more than 64 nodes touch an edge")
        self.local = {int(v): i for i, v in enumerate(active)}
        self.na = len(active)
        self.src_l = np.array([self.local[int(v)] for v in g.src], dtype=np.uint64)
        self.dst_l = np.array([self.local[int(v)] for v in g.dst], dtype=np.int64)
        self.block_bits = min(block_bits, g.m)

    def _blocks(self):
        g = self.g
        m = g.m
        bb = self.block_bits
        size = 1 << bb
        low = np.arange(size, dtype=np.int64)
        p = g.prob
        for hi in range(1 << (m - bb)):
            codes = (hi << bb) | low
            kept = ((codes[:, None] >> np.arange(m)) & 1).astype(bool)
            w = np.where(kept, p, 1.0 - p).prod(axis=1)
            yield kept, w, self._closure(kept)

    def _closure(self, kept):
        G = kept.shape[0]
        na = self.na
        reach = np.zeros((G, na), dtype=np.uint64)
        for i in range(na):
            reach[:, i] = _POP << np.uint64(i)
        for e in range(self.g.m):
            s = int(self.src_l[e])
            reach[:, s] |= kept[:, e].astype(np.uint64) << np.uint64(self.dst_l[e])
        # path doubling until the masks stop growing
        while True:
            new = reach.copy()
            for j in range(na):
                has = ((reach >> np.uint64(j)) & _POP).astype(bool)
                new |= np.where(has, reach[:, j : j + 1], np.uint64(0))
            if np.array_equal(new, reach):
                return reach
            reach = new

    def evaluate(self, seed_sets: Sequence[Sequence[int]]) -> list[ExactResult]:
        g = self.g
        sets = [seed_set(s, g.n) for s in seed_sets]
        inf = np.zeros(len(sets))
        edge_p = np.zeros((len(sets), g.m))
        parts = []
        for s in sets:
            act_l = [self.local[v] for v in s if v in self.local]
            parts.append((act_l, len(s) - len(act_l)))
        for kept, w, reach in self._blocks():
            for idx, (act_l, _) in enumerate(parts):
                if not act_l:
                    continue
                rs = np.bitwise_or.reduce(reach[:, act_l], axis=1)
                inf[idx] += float(w @ np.bitwise_count(rs))
                on = ((rs[:, None] >> self.src_l) & _POP).astype(bool) & kept
                edge_p[idx] += w @ on
        out = []
        for idx, s in enumerate(sets):
            inf_total = inf[idx] + parts[idx][1]
            per_node = np.bincount(g.dst, weights=edge_p[idx], minlength=g.n).astype(np.float64)
            per_node[list(s)] += 1.0
            sig_att = len(s) + float(edge_p[idx].sum())
            out.append(ExactResult(sig_att, float(inf_total), float(sig_att - inf_total), per_node))
        return out


def exact_enumerate(g: Graph, s, max_edges: int = 20) -> ExactResult:
    """Exact sigma_att, sigma_inf, sigma_act and per-node expected attitude."""
    return LiveEdgeEnumerator(g, max_edges).evaluate([s])[0]


def objective_value(res: ExactResult, objective: str) -> float:
    if objective == "attitude":
        return res.sigma_att
    if objective == "influence":
        return res.sigma_inf
    if objective == "actionable":
        return res.sigma_act
    raise ValidationError(f"unknown objective {objective!r}")


def exact_best_seed(g: Graph, k: int, objective: str = "attitude", max_edges: int = 20,
                    max_nodes: int = 15) -> tuple[tuple[int, ...], float]:
    """Exhaustive maximizer over all seed sets of size at most ``k``.

    Ties go to the lexicographically smallest sorted seed tuple.
    """
    if objective not in OBJECTIVES:
        raise ValidationError(f"unknown objective {objective!r}")
    if g.n > max_nodes:
        raise SizeGuardError(f"exhaustive search needs n <= {max_nodes}, graph has n={g.n}")
    if not 0 <= k <= g.n:
        raise ValidationError(f"k={k} outside [0, {g.n}]")
    cands = [c for r in range(k + 1) for c in itertools.combinations(range(g.n), r)]
    results = LiveEdgeEnumerator(g, max_edges).evaluate(cands)
    best, best_val = (), -math.inf
    for c, res in zip(cands, results):
        val = objective_value(res, objective)
        tol = 1e-9 * max(1.0, abs(best_val)) if best_val > -math.inf else 0.0
        if val > best_val + tol or (abs(val - best_val) <= tol and c < best):
            best, best_val = c, val
    return best, float(best_val)
