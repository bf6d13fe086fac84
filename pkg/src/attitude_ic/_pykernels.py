"""Pure-Python kernels (fallback backend).

Same signatures, same RNG consumption order and same outputs as the
compiled ``_ckernels`` module.  Slow; used when the extension is not
built or when ``ATTITUDE_IC_BACKEND=python`` is set.
"""

import numpy as np

from .rng import GOLDEN, INV53, MASK64, MIX1, MIX2

NAME = "python"


class _Stream:
    __slots__ = ("state",)

    def __init__(self, seed):
        self.state = int(seed) & MASK64

    def u64(self):
        self.state = s = (self.state + GOLDEN) & MASK64
        s = ((s ^ (s >> 30)) * MIX1) & MASK64
        s = ((s ^ (s >> 27)) * MIX2) & MASK64
        return s ^ (s >> 31)

    def random(self):
        return (self.u64() >> 11) * INV53

    def bounded(self, m):
        thresh = (1 << 64) % m
        while True:
            x = self.u64()
            if x >= thresh:
                return x % m


def _hist_index(a, hist_len):
    return a if a < hist_len else hist_len - 1


def simulate(out_indptr, out_dst, out_prob, seeds, trials, seed, hist_len, keep_last):
    n = len(out_indptr) - 1
    rs = _Stream(seed)
    rand = rs.random
    indptr = out_indptr.tolist()
    dst = out_dst.tolist()
    prob = out_prob.tolist()
    seed_list = [int(s) for s in seeds]
    att = [0] * n
    tot = np.zeros(trials, dtype=np.int64)
    inf = np.zeros(trials, dtype=np.int64)
    act = np.zeros(trials, dtype=np.int64)
    hist = np.zeros(max(hist_len, 0), dtype=np.int64)
    last = np.zeros(n if keep_last else 0, dtype=np.int64)
    for t in range(trials):
        touched = list(seed_list)
        for s in seed_list:
            att[s] = 1
        frontier = seed_list
        edges = 0
        while frontier:
            nxt = []
            for u in frontier:
                for e in range(indptr[u], indptr[u + 1]):
                    if rand() < prob[e]:
                        v = dst[e]
                        if att[v] == 0:
                            nxt.append(v)
                            touched.append(v)
                        att[v] += 1
                        edges += 1
            frontier = nxt
        tot[t] = len(seed_list) + edges
        inf[t] = len(touched)
        act[t] = edges
        if hist_len > 0:
            for v in touched:
                hist[_hist_index(att[v], hist_len)] += 1
        if keep_last and t == trials - 1:
            for v in touched:
                last[v] = att[v]
        for v in touched:
            att[v] = 0
    return tot, inf, act, hist, last


def _reverse_bfs(start, indptr, src, prob, rand, visited, out, seed_mask):
    """BFS over in-edges from ``start``; returns True on first seed hit when
    ``seed_mask`` is given (early exit), else fills ``out``."""
    visited[start] = 1
    out.append(start)
    if seed_mask is not None and seed_mask[start]:
        return True
    head = 0
    while head < len(out):
        w = out[head]
        head += 1
        for e in range(indptr[w], indptr[w + 1]):
            u = src[e]
            if visited[u]:
                continue
            if rand() < prob[e]:
                visited[u] = 1
                out.append(u)
                if seed_mask is not None and seed_mask[u]:
                    return True
    return False


def _rr(in_indptr, in_src, in_prob, lo, hi, n_nodes, count, seed, seed_mask, edge_rooted):
    rs = _Stream(seed)
    rand = rs.random
    indptr = in_indptr.tolist()
    src = in_src.tolist()
    prob = in_prob.tolist()
    mask = None if seed_mask is None else seed_mask.tolist()
    visited = [0] * (len(indptr) - 1)
    offsets = [0]
    members = []
    origin = []
    kept = []
    hits = 0
    for _ in range(count):
        out = []
        if edge_rooted:
            pos = lo + rs.bounded(hi - lo)
            origin.append(pos)
            ok = rand() < prob[pos]
            kept.append(1 if ok else 0)
            if ok:
                if _reverse_bfs(src[pos], indptr, src, prob, rand, visited, out, mask):
                    hits += 1
        else:
            root = rs.bounded(n_nodes)
            origin.append(root)
            kept.append(1)
            if _reverse_bfs(root, indptr, src, prob, rand, visited, out, mask):
                hits += 1
        for w in out:
            visited[w] = 0
        if mask is None:
            members.extend(out)
            offsets.append(len(members))
    if mask is not None:
        return hits
    return (
        np.asarray(offsets, dtype=np.int64),
        np.asarray(members, dtype=np.int32),
        np.asarray(origin, dtype=np.int64),
        np.asarray(kept, dtype=np.uint8),
    )


def rr_edge_sets(in_indptr, in_src, in_prob, lo, hi, count, seed):
    return _rr(in_indptr, in_src, in_prob, lo, hi, 0, count, seed, None, True)


def rr_edge_hits(in_indptr, in_src, in_prob, lo, hi, count, seed, seed_mask):
    return _rr(in_indptr, in_src, in_prob, lo, hi, 0, count, seed, seed_mask, True)


def rr_node_sets(in_indptr, in_src, in_prob, n, count, seed):
    return _rr(in_indptr, in_src, in_prob, 0, 0, n, count, seed, None, False)


def rr_node_hits(in_indptr, in_src, in_prob, n, count, seed, seed_mask):
    return _rr(in_indptr, in_src, in_prob, 0, 0, n, count, seed, seed_mask, False)


def greedy_cover(indptr, members, n, k):
    offsets = indptr.tolist()
    mem = members.tolist()
    n_sets = len(offsets) - 1
    deg = [0] * n
    for w in mem:
        deg[w] += 1
    inv = [[] for _ in range(n)]
    for j in range(n_sets):
        for i in range(offsets[j], offsets[j + 1]):
            inv[mem[i]].append(j)
    covered = [0] * n_sets
    chosen = [0] * n
    seeds = np.zeros(k, dtype=np.int64)
    gains = np.zeros(k, dtype=np.int64)
    for it in range(k):
        best, best_deg = -1, -1
        for v in range(n):
            if not chosen[v] and deg[v] > best_deg:
                best, best_deg = v, deg[v]
        chosen[best] = 1
        seeds[it] = best
        gains[it] = best_deg
        for j in inv[best]:
            if covered[j]:
                continue
            covered[j] = 1
            for i in range(offsets[j], offsets[j + 1]):
                deg[mem[i]] -= 1
    return seeds, gains


def _rr_graph(root, indptr, src, prob, rand, local):
    """One sampled transpose neighbourhood of ``root``.

    Every in-edge of every reached node gets exactly one coin.  Returns the
    reached nodes (root first, BFS order) and kept edges as local index
    pairs ``(a, b)`` meaning transpose edge a -> b, grouped by ``a``.
    """
    nodes = [root]
    local[root] = 0
    ea, eb = [], []
    head = 0
    while head < len(nodes):
        w = nodes[head]
        for e in range(indptr[w], indptr[w + 1]):
            if rand() < prob[e]:
                u = src[e]
                lu = local[u]
                if lu < 0:
                    lu = len(nodes)
                    local[u] = lu
                    nodes.append(u)
                ea.append(head)
                eb.append(lu)
        head += 1
    for w in nodes:
        local[w] = -1
    return nodes, ea, eb


def _fan_reaching(nodes, ea, eb, is_seed):
    """Number of kept fan edges of the root whose far end reaches a seed."""
    k = len(nodes)
    radj = [[] for _ in range(k)]
    for a, b in zip(ea, eb):
        radj[b].append(a)
    z = [0] * k
    stack = [i for i in range(k) if is_seed[nodes[i]]]
    for i in stack:
        z[i] = 1
    while stack:
        b = stack.pop()
        for a in radj[b]:
            if not z[a]:
                z[a] = 1
                stack.append(a)
    f = 0
    for a, b in zip(ea, eb):
        if a != 0:
            break
        if z[b]:
            f += 1
    return f


def act_estimate(in_indptr, in_src, in_prob, roots, reps, root_seeds, seed_mask, paper_formula):
    indptr = in_indptr.tolist()
    src = in_src.tolist()
    prob = in_prob.tolist()
    mask = seed_mask.tolist()
    local = [-1] * (len(indptr) - 1)
    out = np.zeros(len(roots), dtype=np.float64)
    for i in range(len(roots)):
        v = int(roots[i])
        r = int(reps[i])
        rs = _Stream(int(root_seeds[i]))
        rand = rs.random
        root_seed = bool(mask[v])
        total = 0
        for _ in range(r):
            nodes, ea, eb = _rr_graph(v, indptr, src, prob, rand, local)
            f = _fan_reaching(nodes, ea, eb, mask)
            if root_seed and not paper_formula:
                total += f
            else:
                total += f - 1 if f > 1 else 0
        out[i] = total / r
    return out


def act_generate(in_indptr, in_src, in_prob, roots, reps, root_seeds):
    indptr = in_indptr.tolist()
    src = in_src.tolist()
    prob = in_prob.tolist()
    local = [-1] * (len(indptr) - 1)
    sample_root = []
    node_ptr, edge_ptr = [0], [0]
    all_nodes, all_a, all_b = [], [], []
    for i in range(len(roots)):
        v = int(roots[i])
        rs = _Stream(int(root_seeds[i]))
        rand = rs.random
        for _ in range(int(reps[i])):
            nodes, ea, eb = _rr_graph(v, indptr, src, prob, rand, local)
            sample_root.append(v)
            all_nodes.extend(nodes)
            all_a.extend(ea)
            all_b.extend(eb)
            node_ptr.append(len(all_nodes))
            edge_ptr.append(len(all_a))
    return (
        np.asarray(sample_root, dtype=np.int32),
        np.asarray(node_ptr, dtype=np.int64),
        np.asarray(all_nodes, dtype=np.int32),
        np.asarray(edge_ptr, dtype=np.int64),
        np.asarray(all_a, dtype=np.int32),
        np.asarray(all_b, dtype=np.int32),
    )


def _h(is_seed, f, paper_formula):
    if is_seed and not paper_formula:
        return f
    return f - 1 if f > 1 else 0


class _ActSample:
    """Mutable greedy state of one stored RR graph."""

    __slots__ = ("nodes", "fwd", "fan", "covered")

    def __init__(self, nodes, ea, eb):
        self.nodes = nodes
        self.fwd = [[] for _ in nodes]
        for a, b in zip(ea, eb):
            self.fwd[a].append(b)
        self.fan = self.fwd[0]
        self.covered = [False] * len(self.fan)

    def reach(self, start, chosen):
        seen = {start}
        stack = [start]
        while stack:
            a = stack.pop()
            for b in self.fwd[a]:
                if b not in seen and not chosen[self.nodes[b]]:
                    seen.add(b)
                    stack.append(b)
        return seen

    def contributions(self, chosen, paper_formula):
        """Yield (global node, actionable gain, coverage gain)."""
        nodes = self.nodes
        newcov = [0] * len(nodes)
        fcov = 0
        for idx, u in enumerate(self.fan):
            if self.covered[idx]:
                fcov += 1
                continue
            if chosen[nodes[u]]:
                continue
            for w in self.reach(u, chosen):
                newcov[w] += 1
        root_seed = bool(chosen[nodes[0]])
        base = _h(root_seed, fcov, paper_formula)
        for w, g in enumerate(nodes):
            if chosen[g]:
                continue
            gain = _h(root_seed or w == 0, fcov + newcov[w], paper_formula) - base
            yield g, gain, newcov[w]

    def absorb(self, pick_local, chosen):
        for idx, u in enumerate(self.fan):
            if not self.covered[idx] and pick_local in self.reach(u, chosen):
                self.covered[idx] = True


def act_greedy(n, sample_root, node_ptr, nodes, edge_ptr, edge_a, edge_b,
               weights, k, paper_formula, tol, trace):
    nptr = node_ptr.tolist()
    eptr = edge_ptr.tolist()
    nodes_l = nodes.tolist()
    ea_l = edge_a.tolist()
    eb_l = edge_b.tolist()
    w_l = weights.tolist()
    n_samples = len(nptr) - 1
    samples = []
    inv = [[] for _ in range(n)]
    for j in range(n_samples):
        sn = nodes_l[nptr[j]:nptr[j + 1]]
        samples.append(_ActSample(sn, ea_l[eptr[j]:eptr[j + 1]], eb_l[eptr[j]:eptr[j + 1]]))
        for g in sn:
            inv[g].append(j)
    chosen = [0] * n
    c1 = [0.0] * n
    c2 = [0.0] * n

    def apply(j, sign):
        wt = w_l[j] * sign
        for g, g1, g2 in samples[j].contributions(chosen, paper_formula):
            c1[g] += wt * g1
            c2[g] += wt * g2

    for j in range(n_samples):
        apply(j, 1.0)
    seeds = np.zeros(k, dtype=np.int64)
    gain1 = np.zeros(k, dtype=np.float64)
    gain2 = np.zeros(k, dtype=np.float64)
    tr1 = np.zeros((k if trace else 0, n), dtype=np.float64)
    tr2 = np.zeros((k if trace else 0, n), dtype=np.float64)
    for it in range(k):
        if trace:
            tr1[it] = c1
            tr2[it] = c2
        best = -1
        b1 = b2 = 0.0
        for u in range(n):
            if chosen[u]:
                continue
            if best < 0 or c1[u] > b1 + tol or (c1[u] >= b1 - tol and c2[u] > b2 + tol):
                best, b1, b2 = u, c1[u], c2[u]
        seeds[it] = best
        gain1[it] = b1
        gain2[it] = b2
        affected = inv[best]
        for j in affected:
            apply(j, -1.0)
        for j in affected:
            samples[j].absorb(samples[j].nodes.index(best), chosen)
        chosen[best] = 1
        for j in affected:
            apply(j, 1.0)
    return seeds, gain1, gain2, tr1, tr2
