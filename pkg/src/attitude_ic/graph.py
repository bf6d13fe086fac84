"""Immutable weighted digraphs with forward and transpose CSR adjacency."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .errors import GraphFormatError, ValidationError
from .rng import RandomStream


class Edge(NamedTuple):
    src: int
    dst: int
    prob: float


@dataclass(frozen=True)
class Constant:
    """Every edge gets probability ``p``."""

    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValidationError(f"constant probability {self.p} outside [0, 1]")

    def __str__(self):
        return f"const:{self.p:g}"


@dataclass(frozen=True)
class InDegree:
    """``p(u, v) = 1 / indegree(v)``, the weighted-cascade setting."""

    def __str__(self):
        return "indeg"


@dataclass(frozen=True)
class FromFile:
    """Probabilities come from the third column of the edge list."""

    def __str__(self):
        return "file"


WeightScheme = Constant | InDegree | FromFile


def parse_scheme(text: str) -> WeightScheme:
    """Parse ``const:<p>``, a bare float, ``indeg`` or ``file``."""
    t = text.strip().lower()
    if t in ("indeg", "indegree", "1/indegree", "wc"):
        return InDegree()
    if t in ("file", "fromfile"):
        return FromFile()
    if t.startswith("const:"):
        t = t[len("const:"):]
    try:
        return Constant(float(t))
    except ValueError:
        raise ValidationError(f"unknown weight scheme {text!r}") from None


@dataclass(frozen=True)
class LoadOptions:
    keep_multi: bool = False
    keep_self_loops: bool = False
    symmetrize: bool = False


def _frozen(a, dtype):
    a = np.ascontiguousarray(a, dtype=dtype)
    a.setflags(write=False)
    return a


def _csr(n, key, other, prob):
    order = np.argsort(key, kind="stable")
    counts = np.bincount(key, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return (
        _frozen(indptr, np.int64),
        _frozen(other[order], np.int32),
        _frozen(prob[order], np.float64),
        _frozen(order, np.int64),
    )


class Graph:
    """Directed graph on dense ids ``0..n-1`` with per-edge probabilities.

    Edges keep the order they were given in (the canonical edge order).
    ``out_*`` arrays are the forward CSR, ``in_*`` arrays the transpose CSR;
    ``*_eid`` map CSR positions back to canonical edge indices.  Positions
    ``0..m-1`` of the transpose CSR double as the flat edge index used for
    uniform edge draws.
    """

    def __init__(self, n, src, dst, prob, labels=None):
        n = int(n)
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        prob = np.asarray(prob, dtype=np.float64)
        if not (src.shape == dst.shape == prob.shape) or src.ndim != 1:
            raise ValidationError("src, dst and prob must be 1-d arrays of equal length")
        if len(src) and (src.min() < 0 or dst.min() < 0 or max(src.max(), dst.max()) >= n):
            raise ValidationError("edge endpoint outside [0, n)")
        if len(prob) and not np.all((prob >= 0.0) & (prob <= 1.0)):
            bad = int(np.flatnonzero(~((prob >= 0.0) & (prob <= 1.0)))[0])
            raise ValidationError(f"edge {bad} has probability {prob[bad]} outside [0, 1]")
        self.n = n
        self.m = len(src)
        self.src = _frozen(src, np.int32)
        self.dst = _frozen(dst, np.int32)
        self.prob = _frozen(prob, np.float64)
        self.out_indptr, self.out_dst, self.out_prob, self.out_eid = _csr(n, src, dst, prob)
        self.in_indptr, self.in_src, self.in_prob, self.in_eid = _csr(n, dst, src, prob)
        if labels is None:
            labels = [str(i) for i in range(n)]
        if len(labels) != n:
            raise ValidationError("labels must have one entry per node")
        self.labels = tuple(str(x) for x in labels)
        self._index = None

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    @classmethod
    def from_edges(cls, edges: Sequence[tuple], n=None, labels=None) -> "Graph":
        """Build from ``(src, dst, prob)`` triples on integer ids."""
        arr = np.asarray(list(edges), dtype=np.float64).reshape(-1, 3)
        src = arr[:, 0].astype(np.int64)
        dst = arr[:, 1].astype(np.int64)
        if n is None:
            n = int(max(src.max(initial=-1), dst.max(initial=-1)) + 1)
        return cls(n, src, dst, arr[:, 2], labels)

    @classmethod
    def from_labeled_edges(cls, edges: Sequence[tuple]) -> "Graph":
        """Build from ``(src_label, dst_label, prob)``; ids follow first appearance."""
        index = {}
        src, dst, prob = [], [], []
        for a, b, p in edges:
            src.append(index.setdefault(str(a), len(index)))
            dst.append(index.setdefault(str(b), len(index)))
            prob.append(p)
        return cls(len(index), src, dst, prob, list(index))

    # adjacency ------------------------------------------------------------

    def out_adj(self, v: int) -> list[tuple[int, float]]:
        lo, hi = self.out_indptr[v], self.out_indptr[v + 1]
        return list(zip(self.out_dst[lo:hi].tolist(), self.out_prob[lo:hi].tolist()))

    def in_adj(self, v: int) -> list[tuple[int, float]]:
        lo, hi = self.in_indptr[v], self.in_indptr[v + 1]
        return list(zip(self.in_src[lo:hi].tolist(), self.in_prob[lo:hi].tolist()))

    def edges(self) -> Iterator[Edge]:
        for s, d, p in zip(self.src.tolist(), self.dst.tolist(), self.prob.tolist()):
            yield Edge(s, d, p)

    def edge(self, eid: int) -> Edge:
        return Edge(int(self.src[eid]), int(self.dst[eid]), float(self.prob[eid]))

    def indegree(self) -> np.ndarray:
        return np.diff(self.in_indptr)

    def outdegree(self) -> np.ndarray:
        return np.diff(self.out_indptr)

    def expected_outdegree(self) -> np.ndarray:
        return np.bincount(self.src, weights=self.prob, minlength=self.n)

    def transpose(self) -> "Graph":
        return Graph(self.n, self.dst, self.src, self.prob, self.labels)

    # labels ---------------------------------------------------------------

    def index_of(self, label) -> int:
        if self._index is None:
            self._index = {lab: i for i, lab in enumerate(self.labels)}
        try:
            return self._index[str(label)]
        except KeyError:
            raise ValidationError(f"unknown node label {label!r}") from None

    def label_of(self, v: int) -> str:
        return self.labels[v]


def transpose_view(g: Graph) -> Graph:
    """The transpose: every edge ``(u, v, p)`` of ``g`` appears as ``(v, u, p)``."""
    return g.transpose()


def uniform_random_edge(g: Graph, rng: RandomStream) -> Edge:
    if g.m == 0:
        raise ValidationError("cannot draw an edge from a graph with no edges")
    return g.edge(rng.bounded(g.m))


def _parse_lines(lines, scheme, path=None):
    need_prob = isinstance(scheme, FromFile)
    index = {}
    src, dst, prob = [], [], []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 2 or len(parts) > 3:
            raise GraphFormatError(f"expected 'src dst [prob]', got {line!r}", lineno, path)
        if need_prob:
            if len(parts) < 3:
                raise GraphFormatError("missing probability column", lineno, path)
            try:
                p = float(parts[2])
            except ValueError:
                raise GraphFormatError(f"bad probability {parts[2]!r}", lineno, path) from None
            if not 0.0 <= p <= 1.0:
                raise ValidationError(
                    f"{path + ':' if path else ''}{lineno}: probability {p} outside [0, 1]"
                )
            prob.append(p)
        src.append(index.setdefault(parts[0], len(index)))
        dst.append(index.setdefault(parts[1], len(index)))
    labels = list(index)
    return len(labels), np.asarray(src, np.int64), np.asarray(dst, np.int64), prob, labels


def build_graph(n, src, dst, file_prob, labels, scheme, options=LoadOptions()):
    """Apply symmetrize / self-loop / dedup options and the weight scheme."""
    file_prob = np.asarray(file_prob, dtype=np.float64)
    if options.symmetrize:
        src, dst = np.concatenate([src, dst]), np.concatenate([dst, src])
        if len(file_prob):
            file_prob = np.concatenate([file_prob, file_prob])
    keep = np.ones(len(src), dtype=bool)
    if not options.keep_self_loops:
        keep &= src != dst
    if not options.keep_multi and len(src):
        _, first = np.unique(src * max(n, 1) + dst, return_index=True)
        mask = np.zeros(len(src), dtype=bool)
        mask[first] = True
        keep &= mask
    src, dst = src[keep], dst[keep]
    if isinstance(scheme, FromFile):
        prob = file_prob[keep]
    elif isinstance(scheme, InDegree):
        indeg = np.bincount(dst, minlength=n)
        prob = 1.0 / indeg[dst] if len(dst) else np.zeros(0)
    else:
        prob = np.full(len(src), scheme.p)
    return Graph(n, src, dst, prob, labels)


def load_edge_list(path, scheme: WeightScheme = Constant(0.1), options: LoadOptions = LoadOptions()) -> Graph:
    """Read a whitespace-separated ``src dst [prob]`` edge list.

    Labels are arbitrary tokens, remapped to dense ids in order of first
    appearance.  ``#`` lines are comments.
    """
    path = os.fspath(path)
    with open(path) as fh:
        n, src, dst, prob, labels = _parse_lines(fh, scheme, path)
    return build_graph(n, src, dst, prob, labels, scheme, options)


def parse_edge_list(text: str, scheme: WeightScheme = Constant(0.1), options: LoadOptions = LoadOptions()) -> Graph:
    n, src, dst, prob, labels = _parse_lines(text.splitlines(), scheme)
    return build_graph(n, src, dst, prob, labels, scheme, options)


def write_idmap(g: Graph, path) -> None:
    with open(path, "w") as fh:
        for i, lab in enumerate(g.labels):
            fh.write(f"{lab}\t{i}\n")


def read_idmap(path) -> dict[str, int]:
    out = {}
    with open(path) as fh:
        for line in fh:
            if line.strip():
                lab, idx = line.rstrip("\n").split("\t")
                out[lab] = int(idx)
    return out


def write_edge_list(g: Graph, path, with_prob=True) -> None:
    with open(path, "w") as fh:
        for s, d, p in g.edges():
            a, b = g.labels[s], g.labels[d]
            fh.write(f"{a} {b} {p!r}\n" if with_prob else f"{a} {b}\n")
