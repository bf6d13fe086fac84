"""Reverse attitude sampling (RAS).

An RR sample draws an edge ``(x, y)`` uniformly, keeps it with probability
``p(x, y)`` and, if kept, collects every node that reaches ``x`` in one
sampled realization of the transpose.  For any seed set ``S``::

    sigma_att(S) = |S| + m * P[S hits the sample]

so the fraction of samples hit by ``S`` gives an unbiased estimate.
Vertex-rooted samples (classic RIS) are provided for plain influence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from ._parallel import RR_CHUNK, chunk_plan, run_chunks
from .errors import ValidationError
from .graph import Edge, Graph
from .rng import RandomStream
from .seeds import seed_set


@dataclass(frozen=True)
class EstimatorParams:
    epsilon: float = 0.1
    delta: float = 0.01

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValidationError(f"epsilon={self.epsilon} must lie in (0, 1)")
        if not 0.0 < self.delta < 1.0:
            raise ValidationError(f"delta={self.delta} must lie in (0, 1)")


@dataclass(frozen=True)
class RRSample:
    origin_edge: Edge
    kept: bool
    members: tuple[int, ...]


def required_samples(params: EstimatorParams, m: int, sigma_lb: float) -> int:
    """Samples for a relative error ``epsilon`` with probability ``1 - delta``.

    ``ceil((2 + eps) * m / (eps**2 * sigma_lb) * ln(2 / delta))``
    """
    if sigma_lb <= 0:
        raise ValidationError("sigma_lb must be positive")
    eps = params.epsilon
    return max(1, math.ceil((2.0 + eps) * m / (eps * eps * sigma_lb) * math.log(2.0 / params.delta)))


class RRCollection:
    """Growable batch of RR sets stored as CSR (``indptr``, ``members``).

    Chunk ``i`` of the batch is always generated from ``derive_seed(base, i)``,
    so growing a batch in steps gives the same samples as growing it at once
    only when the steps are chunk aligned; either way the result is a pure
    function of (base seed, requested sizes).
    """

    def __init__(self, g: Graph, base_seed: int, rooted: str = "edge", threads=1):
        if rooted not in ("edge", "node"):
            raise ValidationError(f"rooted must be 'edge' or 'node', not {rooted!r}")
        self.g = g
        self.base = base_seed
        self.rooted = rooted
        self.threads = threads
        self.indptr = np.zeros(1, dtype=np.int64)
        self.members = np.zeros(0, dtype=np.int32)
        self.origin = np.zeros(0, dtype=np.int64)
        self.kept = np.zeros(0, dtype=np.uint8)
        self._next_chunk = 0

    def __len__(self):
        return len(self.indptr) - 1

    def extend_to(self, count: int) -> None:
        need = count - len(self)
        if need <= 0:
            return
        g = self.g
        k = _backend.kernels()
        plan = chunk_plan(need, RR_CHUNK, self.base, offset=self._next_chunk)
        self._next_chunk += len(plan)
        if self.rooted == "edge":
            def job(c, seed):
                return k.rr_edge_sets(g.in_indptr, g.in_src, g.in_prob, 0, g.m, c, seed)
        else:
            def job(c, seed):
                return k.rr_node_sets(g.in_indptr, g.in_src, g.in_prob, g.n, c, seed)
        parts = run_chunks(job, plan, self.threads)
        ptrs = [self.indptr]
        shift = self.indptr[-1]
        for p in parts:
            ptrs.append(p[0][1:] + shift)
            shift += p[0][-1]
        self.indptr = np.concatenate(ptrs)
        self.members = np.concatenate([self.members] + [p[1] for p in parts])
        self.origin = np.concatenate([self.origin] + [p[2] for p in parts])
        self.kept = np.concatenate([self.kept] + [p[3] for p in parts])

    def sample(self, i: int) -> RRSample:
        g = self.g
        mem = tuple(sorted(self.members[self.indptr[i]:self.indptr[i + 1]].tolist()))
        if self.rooted == "edge":
            edge = g.edge(int(g.in_eid[self.origin[i]]))
        else:
            edge = Edge(int(self.origin[i]), int(self.origin[i]), 1.0)
        return RRSample(edge, bool(self.kept[i]), mem)

    def coverage(self, s) -> int:
        """Number of stored samples hit by ``s``."""
        mask = np.zeros(self.g.n, dtype=bool)
        mask[list(s)] = True
        hit = mask[self.members]
        owner = np.repeat(np.arange(len(self)), np.diff(self.indptr))
        return int(np.unique(owner[hit]).size)

    @property
    def nbytes(self):
        return self.indptr.nbytes + self.members.nbytes + self.origin.nbytes + self.kept.nbytes


def generate_rr_sample(g: Graph, rng: RandomStream) -> RRSample:
    if g.m == 0:
        raise ValidationError("cannot sample from a graph with no edges")
    coll = RRCollection(g, rng.fork())
    coll.extend_to(1)
    return coll.sample(0)


def count_hits(g: Graph, s, beta: int, base_seed: int, rooted="edge", lo=0, hi=None,
               threads=1) -> int:
    """Number of ``beta`` fresh samples hit by ``s`` (nothing is stored)."""
    mask = np.zeros(g.n, dtype=np.uint8)
    mask[list(s)] = 1
    k = _backend.kernels()
    hi = g.m if hi is None else hi
    plan = chunk_plan(beta, RR_CHUNK, base_seed)
    if rooted == "edge":
        def job(c, seed):
            return k.rr_edge_hits(g.in_indptr, g.in_src, g.in_prob, lo, hi, c, seed, mask)
    else:
        def job(c, seed):
            return k.rr_node_hits(g.in_indptr, g.in_src, g.in_prob, g.n, c, seed, mask)
    return int(sum(run_chunks(job, plan, threads)))


def estimate_attitude(g: Graph, s, beta: int, rng: RandomStream, threads=1) -> float:
    """``|S| + m * X / beta`` with ``X`` the number of samples hit by ``S``.

    Samples whose origin coin fails still count in ``beta``.
    """
    if beta < 1:
        raise ValidationError("beta must be >= 1")
    s = seed_set(s, g.n)
    base = rng.fork()
    if not s or g.m == 0:
        return float(len(s))
    x = count_hits(g, s, beta, base, threads=threads)
    return len(s) + g.m * x / beta


def estimate_influence(g: Graph, s, beta: int, rng: RandomStream, threads=1) -> float:
    """Classic vertex-rooted estimate ``n * X / beta`` of the IC influence."""
    if beta < 1:
        raise ValidationError("beta must be >= 1")
    s = seed_set(s, g.n)
    base = rng.fork()
    if not s:
        return 0.0
    x = count_hits(g, s, beta, base, rooted="node", threads=threads)
    return g.n * x / beta


def estimate_node_attitude(g: Graph, s, v: int, beta: int, rng: RandomStream) -> float:
    """Expected attitude of ``v``: ``[v in S] + indeg(v) * X / beta`` with the
    origin edge drawn only among the in-edges of ``v``."""
    if beta < 1:
        raise ValidationError("beta must be >= 1")
    s = seed_set(s, g.n)
    base = rng.fork()
    own = 1.0 if v in s else 0.0
    lo, hi = int(g.in_indptr[v]), int(g.in_indptr[v + 1])
    if hi == lo or not s:
        return own
    x = count_hits(g, s, beta, base, lo=lo, hi=hi)
    return own + (hi - lo) * x / beta


def default_sigma_lb(s) -> float:
    return float(max(len(s), 1))
