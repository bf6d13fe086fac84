# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
# distutils: language = c++
"""Compiled kernels.  Mirrors ``_pykernels`` exactly, including RNG order."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t, int32_t, uint8_t
from libcpp.vector cimport vector

cnp.import_array()

NAME = "cython"

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef uint64_t MIX1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t MIX2 = 0x94D049BB133111EBULL
cdef double INV53 = 1.0 / 9007199254740992.0


cdef inline uint64_t _u64(uint64_t* state) noexcept nogil:
    state[0] += GOLDEN
    cdef uint64_t z = state[0]
    z = (z ^ (z >> 30)) * MIX1
    z = (z ^ (z >> 27)) * MIX2
    return z ^ (z >> 31)


cdef inline double _rand(uint64_t* state) noexcept nogil:
    return <double>(_u64(state) >> 11) * INV53


cdef inline uint64_t _bounded(uint64_t* state, uint64_t m) noexcept nogil:
    cdef uint64_t thresh = (<uint64_t>0 - m) % m
    cdef uint64_t x
    while True:
        x = _u64(state)
        if x >= thresh:
            return x % m


def simulate(const int64_t[::1] out_indptr, const int32_t[::1] out_dst,
             const double[::1] out_prob, const int32_t[::1] seeds,
             int64_t trials, uint64_t seed, int64_t hist_len, bint keep_last):
    cdef Py_ssize_t n = out_indptr.shape[0] - 1
    cdef Py_ssize_t ns = seeds.shape[0]
    tot_a = np.zeros(trials, dtype=np.int64)
    inf_a = np.zeros(trials, dtype=np.int64)
    act_a = np.zeros(trials, dtype=np.int64)
    hist_a = np.zeros(max(hist_len, 0), dtype=np.int64)
    last_a = np.zeros(n if keep_last else 0, dtype=np.int64)
    cdef int64_t[::1] tot = tot_a
    cdef int64_t[::1] inf = inf_a
    cdef int64_t[::1] act = act_a
    cdef int64_t[::1] hist = hist_a
    cdef int64_t[::1] last = last_a
    cdef vector[int64_t] att
    cdef vector[int32_t] touched, frontier, nxt
    cdef uint64_t state = seed
    cdef int64_t t, e, edges, a
    cdef Py_ssize_t i
    cdef int32_t u, v
    with nogil:
        att.resize(n, 0)
        for t in range(trials):
            touched.clear()
            frontier.clear()
            for i in range(ns):
                att[seeds[i]] = 1
                touched.push_back(seeds[i])
                frontier.push_back(seeds[i])
            edges = 0
            while frontier.size() > 0:
                nxt.clear()
                for i in range(<Py_ssize_t>frontier.size()):
                    u = frontier[i]
                    for e in range(out_indptr[u], out_indptr[u + 1]):
                        if _rand(&state) < out_prob[e]:
                            v = out_dst[e]
                            if att[v] == 0:
                                nxt.push_back(v)
                                touched.push_back(v)
                            att[v] += 1
                            edges += 1
                frontier.swap(nxt)
            tot[t] = ns + edges
            inf[t] = touched.size()
            act[t] = edges
            if hist_len > 0:
                for i in range(<Py_ssize_t>touched.size()):
                    a = att[touched[i]]
                    if a >= hist_len:
                        a = hist_len - 1
                    hist[a] += 1
            if keep_last and t == trials - 1:
                for i in range(<Py_ssize_t>touched.size()):
                    last[touched[i]] = att[touched[i]]
            for i in range(<Py_ssize_t>touched.size()):
                att[touched[i]] = 0
    return tot_a, inf_a, act_a, hist_a, last_a


cdef bint _reverse_bfs(int32_t start, const int64_t[::1] indptr, const int32_t[::1] src,
                       const double[::1] prob, uint64_t* state, vector[uint8_t]& visited,
                       vector[int32_t]& out, const uint8_t* seed_mask) noexcept nogil:
    cdef size_t head = 0
    cdef int64_t e
    cdef int32_t w, u
    visited[start] = 1
    out.push_back(start)
    if seed_mask != NULL and seed_mask[start]:
        return True
    while head < out.size():
        w = out[head]
        head += 1
        for e in range(indptr[w], indptr[w + 1]):
            u = src[e]
            if visited[u]:
                continue
            if _rand(state) < prob[e]:
                visited[u] = 1
                out.push_back(u)
                if seed_mask != NULL and seed_mask[u]:
                    return True
    return False


cdef object _rr(const int64_t[::1] in_indptr, const int32_t[::1] in_src,
                const double[::1] in_prob, int64_t lo, int64_t hi, int64_t n_nodes,
                int64_t count, uint64_t seed, const uint8_t* seed_mask, bint edge_rooted):
    cdef Py_ssize_t n = in_indptr.shape[0] - 1
    cdef uint64_t state = seed
    cdef vector[uint8_t] visited
    cdef vector[int32_t] out
    cdef vector[int64_t] offsets
    cdef vector[int32_t] members
    cdef vector[int64_t] origin
    cdef vector[uint8_t] kept
    cdef int64_t hits = 0, c, pos
    cdef int32_t root
    cdef bint ok
    cdef size_t i
    with nogil:
        visited.resize(n, 0)
        offsets.push_back(0)
        if seed_mask == NULL:
            origin.reserve(count)
            kept.reserve(count)
            offsets.reserve(count + 1)
        for c in range(count):
            out.clear()
            if edge_rooted:
                pos = lo + <int64_t>_bounded(&state, <uint64_t>(hi - lo))
                ok = _rand(&state) < in_prob[pos]
                if seed_mask == NULL:
                    origin.push_back(pos)
                    kept.push_back(ok)
                if ok:
                    if _reverse_bfs(in_src[pos], in_indptr, in_src, in_prob, &state,
                                    visited, out, seed_mask):
                        hits += 1
            else:
                root = <int32_t>_bounded(&state, <uint64_t>n_nodes)
                if seed_mask == NULL:
                    origin.push_back(root)
                    kept.push_back(1)
                if _reverse_bfs(root, in_indptr, in_src, in_prob, &state,
                                visited, out, seed_mask):
                    hits += 1
            for i in range(out.size()):
                visited[out[i]] = 0
            if seed_mask == NULL:
                members.insert(members.end(), out.begin(), out.end())
                offsets.push_back(members.size())
    if seed_mask != NULL:
        return hits
    return (_to_i64(offsets), _to_i32(members), _to_i64(origin), _to_u8(kept))


cdef object _to_i64(vector[int64_t]& v):
    a = np.empty(v.size(), dtype=np.int64)
    cdef int64_t[::1] view = a
    cdef size_t i
    for i in range(v.size()):
        view[i] = v[i]
    return a


cdef object _to_i32(vector[int32_t]& v):
    a = np.empty(v.size(), dtype=np.int32)
    cdef int32_t[::1] view = a
    cdef size_t i
    for i in range(v.size()):
        view[i] = v[i]
    return a


cdef object _to_u8(vector[uint8_t]& v):
    a = np.empty(v.size(), dtype=np.uint8)
    cdef uint8_t[::1] view = a
    cdef size_t i
    for i in range(v.size()):
        view[i] = v[i]
    return a


def rr_edge_sets(in_indptr, in_src, in_prob, int64_t lo, int64_t hi, int64_t count, uint64_t seed):
    return _rr(in_indptr, in_src, in_prob, lo, hi, 0, count, seed, NULL, True)


def rr_edge_hits(in_indptr, in_src, in_prob, int64_t lo, int64_t hi, int64_t count,
                 uint64_t seed, const uint8_t[::1] seed_mask):
    return _rr(in_indptr, in_src, in_prob, lo, hi, 0, count, seed, &seed_mask[0], True)


def rr_node_sets(in_indptr, in_src, in_prob, int64_t n, int64_t count, uint64_t seed):
    return _rr(in_indptr, in_src, in_prob, 0, 0, n, count, seed, NULL, False)


def rr_node_hits(in_indptr, in_src, in_prob, int64_t n, int64_t count, uint64_t seed,
                 const uint8_t[::1] seed_mask):
    return _rr(in_indptr, in_src, in_prob, 0, 0, n, count, seed, &seed_mask[0], False)


def greedy_cover(const int64_t[::1] indptr, const int32_t[::1] members, int64_t n, int64_t k):
    cdef Py_ssize_t n_sets = indptr.shape[0] - 1
    cdef Py_ssize_t total = members.shape[0]
    seeds_a = np.zeros(k, dtype=np.int64)
    gains_a = np.zeros(k, dtype=np.int64)
    cdef int64_t[::1] seeds = seeds_a
    cdef int64_t[::1] gains = gains_a
    cdef vector[int64_t] deg, inv_ptr, fill
    cdef vector[int64_t] inv
    cdef vector[uint8_t] covered, chosen
    cdef Py_ssize_t i, j
    cdef int64_t it, v, best, best_deg, p
    with nogil:
        deg.resize(n, 0)
        for i in range(total):
            deg[members[i]] += 1
        inv_ptr.resize(n + 1, 0)
        for v in range(n):
            inv_ptr[v + 1] = inv_ptr[v] + deg[v]
        fill.assign(inv_ptr.begin(), inv_ptr.end() - 1)
        inv.resize(total)
        for j in range(n_sets):
            for i in range(indptr[j], indptr[j + 1]):
                v = members[i]
                inv[fill[v]] = j
                fill[v] += 1
        covered.resize(n_sets, 0)
        chosen.resize(n, 0)
        for it in range(k):
            best = -1
            best_deg = -1
            for v in range(n):
                if not chosen[v] and deg[v] > best_deg:
                    best = v
                    best_deg = deg[v]
            chosen[best] = 1
            seeds[it] = best
            gains[it] = best_deg
            for p in range(inv_ptr[best], inv_ptr[best + 1]):
                j = inv[p]
                if covered[j]:
                    continue
                covered[j] = 1
                for i in range(indptr[j], indptr[j + 1]):
                    deg[members[i]] -= 1
    return seeds_a, gains_a


cdef void _rr_graph(int32_t root, const int64_t[::1] indptr, const int32_t[::1] src,
                    const double[::1] prob, uint64_t* state, vector[int32_t]& local,
                    vector[int32_t]& nodes, vector[int32_t]& ea,
                    vector[int32_t]& eb) noexcept nogil:
    cdef size_t head = 0
    cdef int64_t e
    cdef int32_t w, u, lu
    nodes.clear()
    ea.clear()
    eb.clear()
    nodes.push_back(root)
    local[root] = 0
    while head < nodes.size():
        w = nodes[head]
        for e in range(indptr[w], indptr[w + 1]):
            if _rand(state) < prob[e]:
                u = src[e]
                lu = local[u]
                if lu < 0:
                    lu = <int32_t>nodes.size()
                    local[u] = lu
                    nodes.push_back(u)
                ea.push_back(<int32_t>head)
                eb.push_back(lu)
        head += 1
    for head in range(nodes.size()):
        local[nodes[head]] = -1


cdef int64_t _fan_reaching(vector[int32_t]& nodes, vector[int32_t]& ea, vector[int32_t]& eb,
                           const uint8_t[::1] is_seed, vector[int32_t]& rptr,
                           vector[int32_t]& radj, vector[uint8_t]& z,
                           vector[int32_t]& stack) noexcept nogil:
    cdef size_t k = nodes.size(), m = ea.size(), i
    cdef int32_t a, b, p
    cdef int64_t f = 0
    rptr.assign(k + 1, 0)
    for i in range(m):
        rptr[eb[i] + 1] += 1
    for i in range(k):
        rptr[i + 1] += rptr[i]
    radj.resize(m)
    stack.assign(rptr.begin(), rptr.end() - 1)
    for i in range(m):
        radj[stack[eb[i]]] = ea[i]
        stack[eb[i]] += 1
    z.assign(k, 0)
    stack.clear()
    for i in range(k):
        if is_seed[nodes[i]]:
            z[i] = 1
            stack.push_back(<int32_t>i)
    while stack.size() > 0:
        b = stack.back()
        stack.pop_back()
        for p in range(rptr[b], rptr[b + 1]):
            a = radj[p]
            if not z[a]:
                z[a] = 1
                stack.push_back(a)
    for i in range(m):
        if ea[i] != 0:
            break
        if z[eb[i]]:
            f += 1
    return f


def act_estimate(const int64_t[::1] in_indptr, const int32_t[::1] in_src,
                 const double[::1] in_prob, const int32_t[::1] roots,
                 const int64_t[::1] reps, const uint64_t[::1] root_seeds,
                 const uint8_t[::1] seed_mask, bint paper_formula):
    cdef Py_ssize_t n = in_indptr.shape[0] - 1
    cdef Py_ssize_t nr = roots.shape[0]
    out_a = np.zeros(nr, dtype=np.float64)
    cdef double[::1] out = out_a
    cdef vector[int32_t] local, nodes, ea, eb, rptr, radj, stack
    cdef vector[uint8_t] z
    cdef Py_ssize_t i
    cdef int64_t r, total, f
    cdef uint64_t state
    cdef int32_t v
    cdef bint root_seed
    with nogil:
        local.resize(n, -1)
        for i in range(nr):
            v = roots[i]
            state = root_seeds[i]
            root_seed = seed_mask[v] != 0
            total = 0
            for r in range(reps[i]):
                _rr_graph(v, in_indptr, in_src, in_prob, &state, local, nodes, ea, eb)
                f = _fan_reaching(nodes, ea, eb, seed_mask, rptr, radj, z, stack)
                if root_seed and not paper_formula:
                    total += f
                elif f > 1:
                    total += f - 1
            out[i] = <double>total / <double>reps[i]
    return out_a


def act_generate(const int64_t[::1] in_indptr, const int32_t[::1] in_src,
                 const double[::1] in_prob, const int32_t[::1] roots,
                 const int64_t[::1] reps, const uint64_t[::1] root_seeds):
    cdef Py_ssize_t n = in_indptr.shape[0] - 1
    cdef Py_ssize_t nr = roots.shape[0]
    cdef vector[int32_t] local, nodes, ea, eb
    cdef vector[int32_t] s_root, all_nodes, all_a, all_b
    cdef vector[int64_t] node_ptr, edge_ptr
    cdef Py_ssize_t i
    cdef int64_t r
    cdef uint64_t state
    with nogil:
        local.resize(n, -1)
        node_ptr.push_back(0)
        edge_ptr.push_back(0)
        for i in range(nr):
            state = root_seeds[i]
            for r in range(reps[i]):
                _rr_graph(roots[i], in_indptr, in_src, in_prob, &state, local, nodes, ea, eb)
                s_root.push_back(roots[i])
                all_nodes.insert(all_nodes.end(), nodes.begin(), nodes.end())
                all_a.insert(all_a.end(), ea.begin(), ea.end())
                all_b.insert(all_b.end(), eb.begin(), eb.end())
                node_ptr.push_back(all_nodes.size())
                edge_ptr.push_back(all_a.size())
    return (_to_i32(s_root), _to_i64(node_ptr), _to_i32(all_nodes),
            _to_i64(edge_ptr), _to_i32(all_a), _to_i32(all_b))


# --- actionable greedy -------------------------------------------------------

cdef struct GreedyCtx:
    const int64_t* nptr         # sample -> offset into nodes
    const int64_t* fptr         # sample -> offset into fwd (k + 1 slots per sample)
    const int32_t* nodes
    const int64_t* eptr
    const int32_t* eb
    const int64_t* fwd          # local forward CSR, offsets relative to eptr[j]
    const double* weights
    uint8_t* chosen
    uint8_t* covered            # per edge; only fan edges are used
    double* c1
    double* c2
    bint paper


cdef inline int64_t _h(bint is_seed, int64_t f, bint paper) noexcept nogil:
    if is_seed and not paper:
        return f
    return f - 1 if f > 1 else 0


cdef void _reach(GreedyCtx* g, int64_t j, int32_t start, vector[uint8_t]& seen,
                 vector[int32_t]& stack, vector[int32_t]& reached) noexcept nogil:
    cdef int64_t nbase = g.nptr[j], fbase = g.fptr[j], ebase = g.eptr[j], p
    cdef int32_t a, b
    reached.clear()
    stack.clear()
    seen[start] = 1
    stack.push_back(start)
    reached.push_back(start)
    while stack.size() > 0:
        a = stack.back()
        stack.pop_back()
        for p in range(g.fwd[fbase + a], g.fwd[fbase + a + 1]):
            b = g.eb[ebase + p]
            if not seen[b] and not g.chosen[g.nodes[nbase + b]]:
                seen[b] = 1
                stack.push_back(b)
                reached.push_back(b)
    for p in range(<int64_t>reached.size()):
        seen[reached[p]] = 0


cdef void _apply(GreedyCtx* g, int64_t j, double sign, vector[int64_t]& newcov,
                 vector[uint8_t]& seen, vector[int32_t]& stack,
                 vector[int32_t]& reached) noexcept nogil:
    cdef int64_t nbase = g.nptr[j], ebase = g.eptr[j], fbase = g.fptr[j]
    cdef int64_t k = g.nptr[j + 1] - nbase
    cdef int64_t nfan = g.fwd[fbase + 1] - g.fwd[fbase]
    cdef int64_t idx, fcov = 0, base, gain, w, q
    cdef int32_t u, gid
    cdef bint root_seed
    cdef double wt = g.weights[j] * sign
    newcov.assign(k, 0)
    if <int64_t>seen.size() < k:
        seen.resize(k, 0)
    for idx in range(nfan):
        if g.covered[ebase + idx]:
            fcov += 1
            continue
        u = g.eb[ebase + idx]
        if g.chosen[g.nodes[nbase + u]]:
            continue
        _reach(g, j, u, seen, stack, reached)
        for q in range(<int64_t>reached.size()):
            newcov[reached[q]] += 1
    root_seed = g.chosen[g.nodes[nbase]] != 0
    base = _h(root_seed, fcov, g.paper)
    for w in range(k):
        gid = g.nodes[nbase + w]
        if g.chosen[gid]:
            continue
        gain = _h(root_seed or w == 0, fcov + newcov[w], g.paper) - base
        g.c1[gid] += wt * <double>gain
        g.c2[gid] += wt * <double>newcov[w]


cdef void _absorb(GreedyCtx* g, int64_t j, int32_t pick_local, vector[uint8_t]& seen,
                  vector[int32_t]& stack, vector[int32_t]& reached) noexcept nogil:
    cdef int64_t nbase = g.nptr[j], ebase = g.eptr[j], fbase = g.fptr[j]
    cdef int64_t k = g.nptr[j + 1] - nbase
    cdef int64_t nfan = g.fwd[fbase + 1] - g.fwd[fbase]
    cdef int64_t idx, q
    if <int64_t>seen.size() < k:
        seen.resize(k, 0)
    for idx in range(nfan):
        if g.covered[ebase + idx]:
            continue
        _reach(g, j, g.eb[ebase + idx], seen, stack, reached)
        for q in range(<int64_t>reached.size()):
            if reached[q] == pick_local:
                g.covered[ebase + idx] = 1
                break


def act_greedy(int64_t n, const int32_t[::1] sample_root, const int64_t[::1] node_ptr,
               const int32_t[::1] nodes, const int64_t[::1] edge_ptr,
               const int32_t[::1] edge_a, const int32_t[::1] edge_b,
               const double[::1] weights, int64_t k, bint paper_formula, double tol,
               bint trace):
    cdef Py_ssize_t n_samples = node_ptr.shape[0] - 1
    cdef Py_ssize_t total_nodes = nodes.shape[0]
    cdef Py_ssize_t total_edges = edge_a.shape[0]
    seeds_a = np.zeros(k, dtype=np.int64)
    g1_a = np.zeros(k, dtype=np.float64)
    g2_a = np.zeros(k, dtype=np.float64)
    tr1_a = np.zeros((k if trace else 0, n), dtype=np.float64)
    tr2_a = np.zeros((k if trace else 0, n), dtype=np.float64)
    cdef int64_t[::1] seeds = seeds_a
    cdef double[::1] gain1 = g1_a
    cdef double[::1] gain2 = g2_a
    cdef double[:, ::1] tr1 = tr1_a
    cdef double[:, ::1] tr2 = tr2_a
    cdef vector[int64_t] fptr, fwd
    cdef vector[uint8_t] chosen, covered, seen
    cdef vector[double] c1, c2
    cdef vector[int64_t] inv_ptr, fill, inv, newcov
    cdef vector[int32_t] stack, reached
    cdef vector[int32_t] eb_pad
    cdef vector[double] w_pad
    cdef GreedyCtx ctx
    cdef Py_ssize_t j, i
    cdef int64_t nbase, ebase, kk, p, ne, it, u, best, pick_local
    cdef double b1, b2
    with nogil:
        # edges of a sample are grouped by their tail `a` (BFS pop order)
        fptr.resize(n_samples + 1, 0)
        fwd.resize(total_nodes + n_samples, 0)
        for j in range(n_samples):
            fptr[j + 1] = node_ptr[j + 1] + j + 1
            ebase = edge_ptr[j]
            ne = edge_ptr[j + 1] - ebase
            kk = node_ptr[j + 1] - node_ptr[j]
            p = 0
            for i in range(kk + 1):
                while p < ne and edge_a[ebase + p] < i:
                    p += 1
                fwd[fptr[j] + i] = p
        eb_pad.resize(total_edges + 1, 0)
        for i in range(total_edges):
            eb_pad[i] = edge_b[i]
        w_pad.resize(n_samples + 1, 0.0)
        for j in range(n_samples):
            w_pad[j] = weights[j]
        chosen.assign(n, 0)
        covered.assign(total_edges + 1, 0)
        c1.assign(n, 0.0)
        c2.assign(n, 0.0)
        ctx.nptr = &node_ptr[0]
        ctx.fptr = fptr.data()
        ctx.nodes = &nodes[0] if total_nodes > 0 else NULL
        ctx.eptr = &edge_ptr[0]
        ctx.eb = eb_pad.data()
        ctx.fwd = fwd.data()
        ctx.weights = w_pad.data()
        ctx.chosen = chosen.data()
        ctx.covered = covered.data()
        ctx.c1 = c1.data()
        ctx.c2 = c2.data()
        ctx.paper = paper_formula
        inv_ptr.assign(n + 1, 0)
        for i in range(total_nodes):
            inv_ptr[nodes[i] + 1] += 1
        for u in range(n):
            inv_ptr[u + 1] += inv_ptr[u]
        fill.assign(inv_ptr.begin(), inv_ptr.end() - 1)
        inv.resize(total_nodes)
        for j in range(n_samples):
            for i in range(node_ptr[j], node_ptr[j + 1]):
                inv[fill[nodes[i]]] = j
                fill[nodes[i]] += 1
        for j in range(n_samples):
            _apply(&ctx, j, 1.0, newcov, seen, stack, reached)
        for it in range(k):
            if trace:
                for u in range(n):
                    tr1[it, u] = c1[u]
                    tr2[it, u] = c2[u]
            best = -1
            b1 = 0.0
            b2 = 0.0
            for u in range(n):
                if chosen[u]:
                    continue
                if best < 0 or c1[u] > b1 + tol or (c1[u] >= b1 - tol and c2[u] > b2 + tol):
                    best = u
                    b1 = c1[u]
                    b2 = c2[u]
            seeds[it] = best
            gain1[it] = b1
            gain2[it] = b2
            for p in range(inv_ptr[best], inv_ptr[best + 1]):
                _apply(&ctx, inv[p], -1.0, newcov, seen, stack, reached)
            for p in range(inv_ptr[best], inv_ptr[best + 1]):
                j = inv[p]
                nbase = node_ptr[j]
                pick_local = -1
                for i in range(node_ptr[j + 1] - nbase):
                    if nodes[nbase + i] == best:
                        pick_local = i
                        break
                _absorb(&ctx, j, <int32_t>pick_local, seen, stack, reached)
            chosen[best] = 1
            for p in range(inv_ptr[best], inv_ptr[best + 1]):
                _apply(&ctx, inv[p], 1.0, newcov, seen, stack, reached)
    return seeds_a, g1_a, g2_a, tr1_a, tr2_a
