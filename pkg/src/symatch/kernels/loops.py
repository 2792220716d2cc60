"""Loop kernels compiled with numba.

Every function here is plain python over numpy arrays, so ``fn.py_func`` is a
working (slow) fallback when numba is disabled.
"""
import numpy as np

from .._jit import njit
from .blossom import blossom_pairs

INF = 1.0e300
UNREACHABLE = 1.0e9


# ---------------------------------------------------------------- GF(2)


@njit
def rref_packed(mw, tw, ncols):
    """In-place RREF on bit-packed rows ``mw``; row ops are mirrored on ``tw``.

    Pivot rule: first column with a nonzero entry at or below the current
    row, first such row top-down. Returns the pivot columns.
    """
    m = mw.shape[0]
    nw = mw.shape[1]
    tnw = tw.shape[1]
    pivots = np.empty(min(m, ncols), np.int64)
    r = 0
    for c in range(ncols):
        if r == m:
            break
        w = c >> 6
        bit = np.uint64(1) << np.uint64(c & 63)
        p = -1
        for i in range(r, m):
            if mw[i, w] & bit:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for k in range(nw):
                tmp = mw[p, k]
                mw[p, k] = mw[r, k]
                mw[r, k] = tmp
            for k in range(tnw):
                tmp = tw[p, k]
                tw[p, k] = tw[r, k]
                tw[r, k] = tmp
        for i in range(m):
            if i != r and (mw[i, w] & bit):
                # the pivot row is zero left of word w
                for k in range(w, nw):
                    mw[i, k] ^= mw[r, k]
                for k in range(tnw):
                    tw[i, k] ^= tw[r, k]
        pivots[r] = c
        r += 1
    return pivots[:r]


# ---------------------------------------------------------------- BP


@njit
def bp_minsum(chk_ptr, chk_q, var_ptr, var_edge, syndrome, llr0, max_iter, scaling):
    """Flooding min-sum. ``scaling <= 0`` selects the dynamic factor 1 - 2^-t.

    Returns (posterior LLR, hard decision, converged, iterations).
    """
    m = chk_ptr.shape[0] - 1
    n = var_ptr.shape[0] - 1
    ne = chk_q.shape[0]
    q2c = np.empty(ne)
    c2q = np.zeros(ne)
    post = llr0.copy()
    hard = np.zeros(n, np.uint8)
    for q in range(n):
        hard[q] = 1 if llr0[q] <= 0.0 else 0
    ok = True
    for c in range(m):
        par = 0
        for e in range(chk_ptr[c], chk_ptr[c + 1]):
            par ^= hard[chk_q[e]]
        if par != syndrome[c]:
            ok = False
            break
    if ok:
        return post, hard, True, 0
    for e in range(ne):
        q2c[e] = llr0[chk_q[e]]
    for it in range(1, max_iter + 1):
        alpha = scaling if scaling > 0.0 else 1.0 - 2.0 ** (-it)
        for c in range(m):
            min1 = INF
            min2 = INF
            arg = -1
            sgn = 1.0 if syndrome[c] == 0 else -1.0
            for e in range(chk_ptr[c], chk_ptr[c + 1]):
                v = q2c[e]
                if v < 0.0:
                    sgn = -sgn
                    v = -v
                if v < min1:
                    min2 = min1
                    min1 = v
                    arg = e
                elif v < min2:
                    min2 = v
            for e in range(chk_ptr[c], chk_ptr[c + 1]):
                mag = min2 if e == arg else min1
                s = sgn
                if q2c[e] < 0.0:
                    s = -s
                c2q[e] = s * alpha * mag
        for q in range(n):
            acc = llr0[q]
            for t in range(var_ptr[q], var_ptr[q + 1]):
                acc += c2q[var_edge[t]]
            post[q] = acc
            hard[q] = 1 if acc <= 0.0 else 0
        ok = True
        for c in range(m):
            par = 0
            for e in range(chk_ptr[c], chk_ptr[c + 1]):
                par ^= hard[chk_q[e]]
            if par != syndrome[c]:
                ok = False
                break
        if ok:
            return post, hard, True, it
        for e in range(ne):
            q2c[e] = post[chk_q[e]] - c2q[e]
    return post, hard, False, max_iter


# ---------------------------------------------------------------- matching


@njit
def match_pairs(dist):
    """Exact minimum-weight perfect matching on a small complete graph.

    Dynamic programming over subsets: the lowest unmatched vertex is paired
    with each candidate in ascending order and only strictly cheaper
    completions replace the incumbent, which yields the lexicographically
    smallest optimal pairing. Returns (partner, cost).
    """
    n = dist.shape[0]
    partner = np.full(n, -1, np.int64)
    if n == 0:
        return partner, 0.0
    full = (1 << n) - 1
    f = np.full(1 << n, INF)
    choice = np.full(1 << n, -1, np.int64)
    f[full] = 0.0
    for mask in range(full - 1, -1, -1):
        # popcount parity; odd masks are unreachable
        x = mask
        pc = 0
        while x:
            x &= x - 1
            pc += 1
        if pc & 1:
            continue
        i = 0
        while (mask >> i) & 1:
            i += 1
        best = INF
        bj = -1
        for j in range(i + 1, n):
            if (mask >> j) & 1:
                continue
            c = f[mask | (1 << i) | (1 << j)] + dist[i, j]
            if best >= INF:
                better = c < best
            else:
                better = c < best - 1e-12 * (1.0 + abs(best))
            if better:
                best = c
                bj = j
        f[mask] = best
        choice[mask] = bj
    mask = 0
    while mask != full:
        i = 0
        while (mask >> i) & 1:
            i += 1
        j = choice[mask]
        partner[i] = j
        partner[j] = i
        mask |= (1 << i) | (1 << j)
    return partner, f[0]


@njit
def pair_any(dist, dp_max):
    """Subset DP up to ``dp_max`` defects, blossom above."""
    if dist.shape[0] <= dp_max:
        return match_pairs(dist)
    return blossom_pairs(dist)


@njit
def bfs_all_pairs(adj_ptr, adj_nbr, adj_q, pmask):
    """Unit-weight shortest paths from every vertex.

    Returns dist, pred vertex, pred qubit and the parity of each tree path
    with ``pmask``. Unreachable pairs have dist -1.
    """
    nv = adj_ptr.shape[0] - 1
    dist = np.full((nv, nv), -1, np.int32)
    pv = np.full((nv, nv), -1, np.int32)
    pq = np.full((nv, nv), -1, np.int32)
    par = np.zeros((nv, nv), np.uint8)
    queue = np.empty(nv, np.int64)
    for r in range(nv):
        dist[r, r] = 0
        head = 0
        tail = 1
        queue[0] = r
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[r, u]
            for t in range(adj_ptr[u], adj_ptr[u + 1]):
                v = adj_nbr[t]
                if dist[r, v] < 0:
                    q = adj_q[t]
                    dist[r, v] = du + 1
                    pv[r, v] = u
                    pq[r, v] = q
                    par[r, v] = par[r, u] ^ pmask[q]
                    queue[tail] = v
                    tail += 1
    return dist, pv, pq, par


@njit
def dijkstra(adj_ptr, adj_nbr, adj_q, qcost, src):
    """Single-source shortest paths with per-qubit edge costs.

    Ties are settled by strict improvement only, in heap order (cost, vertex).
    """
    return dijkstra_to(adj_ptr, adj_nbr, adj_q, qcost, src, np.zeros(0, np.uint8), -1)


@njit
def dijkstra_to(adj_ptr, adj_nbr, adj_q, qcost, src, target, ntarget):
    """Dijkstra that stops once ``ntarget`` vertices flagged in ``target`` are
    settled (``ntarget < 0`` runs to completion)."""
    nv = adj_ptr.shape[0] - 1
    dist = np.full(nv, INF)
    pv = np.full(nv, -1, np.int32)
    pq = np.full(nv, -1, np.int32)
    done = np.zeros(nv, np.uint8)
    cap = adj_nbr.shape[0] + nv + 1
    hk = np.empty(cap)
    hv = np.empty(cap, np.int64)
    size = 0
    dist[src] = 0.0
    hk[0] = 0.0
    hv[0] = src
    size = 1
    while size > 0:
        k = hk[0]
        u = hv[0]
        size -= 1
        if size > 0:
            # sift down the last element from the root
            lk = hk[size]
            lv = hv[size]
            i = 0
            while True:
                c = 2 * i + 1
                if c >= size:
                    break
                if c + 1 < size and (hk[c + 1] < hk[c] or (hk[c + 1] == hk[c] and hv[c + 1] < hv[c])):
                    c += 1
                if hk[c] < lk or (hk[c] == lk and hv[c] < lv):
                    hk[i] = hk[c]
                    hv[i] = hv[c]
                    i = c
                else:
                    break
            hk[i] = lk
            hv[i] = lv
        if done[u]:
            continue
        done[u] = 1
        if ntarget >= 0 and target[u]:
            ntarget -= 1
            if ntarget == 0:
                break
        for t in range(adj_ptr[u], adj_ptr[u + 1]):
            v = adj_nbr[t]
            if done[v]:
                continue
            nd = k + qcost[adj_q[t]]
            if nd < dist[v]:
                dist[v] = nd
                pv[v] = u
                pq[v] = adj_q[t]
                i = size
                size += 1
                while i > 0:
                    p = (i - 1) >> 1
                    if nd < hk[p] or (nd == hk[p] and v < hv[p]):
                        hk[i] = hk[p]
                        hv[i] = hv[p]
                        i = p
                    else:
                        break
                hk[i] = nd
                hv[i] = v
    return dist, pv, pq


# ---------------------------------------------------------------- bundles
#
# A bundle packs every symmetry graph of one decoding direction into flat
# arrays: vertex sites (vptr/vsite), adjacency with graph-local neighbours
# (aptr indexed by global vertex id), per-graph all-pairs tables at offsets
# mptr (row-major V_g x V_g) and a logical mask row per graph.


@njit
def bundle_uniform_bits(synd, vptr, vsite, mptr, dist, par, dp_max):
    """Commutator bits for every graph under unit weights.

    ``synd`` is (shots, sites). Returns bits (shots, G).
    """
    shots = synd.shape[0]
    g_count = vptr.shape[0] - 1
    bits = np.zeros((shots, g_count), np.uint8)
    defects = np.empty(vsite.shape[0], np.int64)
    for s in range(shots):
        for g in range(g_count):
            v0 = vptr[g]
            nv = vptr[g + 1] - v0
            nd = 0
            for u in range(nv):
                if synd[s, vsite[v0 + u]]:
                    defects[nd] = u
                    nd += 1
            if nd == 0:
                continue
            base = mptr[g]
            if nd == 2:
                bits[s, g] = par[base + defects[0] * nv + defects[1]]
                continue
            sub = np.empty((nd, nd))
            for a in range(nd):
                for b in range(nd):
                    sub[a, b] = dist[base + defects[a] * nv + defects[b]]
            partner, _ = pair_any(sub, dp_max)
            bit = 0
            for a in range(nd):
                b = partner[a]
                if a < b:
                    bit ^= par[base + defects[a] * nv + defects[b]]
            bits[s, g] = bit
    return bits


@njit
def bundle_uniform_qubits(synd, vptr, vsite, mptr, dist, pv, pq, nq, dp_max):
    """Qubit sets (GF(2) sums of matched paths) of every graph for one shot.

    Returns (G, nq) uint8.
    """
    g_count = vptr.shape[0] - 1
    out = np.zeros((g_count, nq), np.uint8)
    defects = np.empty(vsite.shape[0], np.int64)
    for g in range(g_count):
        v0 = vptr[g]
        nv = vptr[g + 1] - v0
        nd = 0
        for u in range(nv):
            if synd[vsite[v0 + u]]:
                defects[nd] = u
                nd += 1
        if nd == 0:
            continue
        base = mptr[g]
        sub = np.empty((nd, nd))
        for a in range(nd):
            for b in range(nd):
                sub[a, b] = dist[base + defects[a] * nv + defects[b]]
        partner, _ = pair_any(sub, dp_max)
        for a in range(nd):
            b = partner[a]
            if a < b:
                r = defects[a]
                v = defects[b]
                while v != r:
                    out[g, pq[base + r * nv + v]] ^= 1
                    v = pv[base + r * nv + v]
    return out


@njit
def bundle_weighted(synd, vptr, vsite, aptr, anbr, aq, pmask, qcost, want_sets, dp_max):
    """Commutator bits for every graph under per-qubit costs, for one shot.

    ``qcost`` is (1, nq) for costs shared by all graphs or (G, nq) for one
    row per graph. Shortest paths come from Dijkstra rooted at each defect.
    Returns bits (G,) and qubit sets (G, nq) if requested.
    """
    g_count = vptr.shape[0] - 1
    nq = pmask.shape[1]
    bits = np.zeros(g_count, np.uint8)
    sets = np.zeros((g_count if want_sets else 0, nq), np.uint8)
    defects = np.empty(vsite.shape[0], np.int64)
    for g in range(g_count):
        v0 = vptr[g]
        nv = vptr[g + 1] - v0
        nd = 0
        for u in range(nv):
            if synd[vsite[v0 + u]]:
                defects[nd] = u
                nd += 1
        if nd == 0:
            continue
        lptr = aptr[v0:v0 + nv + 1] - aptr[v0]
        lnbr = anbr[aptr[v0]:aptr[v0 + nv]]
        lq = aq[aptr[v0]:aptr[v0 + nv]]
        sub = np.empty((nd, nd))
        pvs = np.empty((nd, nv), np.int32)
        pqs = np.empty((nd, nv), np.int32)
        target = np.zeros(nv, np.uint8)
        for a in range(nd):
            target[defects[a]] = 1
        for a in range(nd):
            # only partners of higher index are needed from this root
            target[defects[a]] = 0
            if a == nd - 1:
                sub[a, a] = 0.0
                break
            d, pv, pq = dijkstra_to(lptr, lnbr, lq, qcost[g if qcost.shape[0] > 1 else 0],
                                    defects[a], target, nd - 1 - a)
            pvs[a] = pv
            pqs[a] = pq
            for b in range(a + 1, nd):
                sub[a, b] = min(d[defects[b]], UNREACHABLE)
            sub[a, a] = 0.0
        for a in range(nd):
            for b in range(a):
                sub[a, b] = sub[b, a]
        partner, _ = pair_any(sub, dp_max)
        bit = 0
        for a in range(nd):
            b = partner[a]
            if a < b:
                r = defects[a]
                v = defects[b]
                while v != r:
                    q = pqs[a, v]
                    bit ^= pmask[g, q]
                    if want_sets:
                        sets[g, q] ^= 1
                    v = pvs[a, v]
        bits[g] = bit
    return bits, sets


# ---------------------------------------------------------------- distance


@njit
def min_logical_weight(hx_ptr, hx_q, q_ptr, q_chk, roots, excluded, xlog, cap):
    """Minimum weight of a vector in ker(H_X) that anticommutes with some row
    of ``xlog``, searched up to ``cap``.

    Depth-first: start from ``roots[i]`` with ``excluded[i]`` banned, then
    branch on the lowest-index odd X-check over its unused qubits. Siblings
    already explored are banned in later branches, so subtrees are disjoint.
    Returns the weight or -1 if none is found within the cap.
    """
    n = q_ptr.shape[0] - 1
    m = hx_ptr.shape[0] - 1
    maxcol = 1
    for q in range(n):
        if q_ptr[q + 1] - q_ptr[q] > maxcol:
            maxcol = q_ptr[q + 1] - q_ptr[q]
    best = cap + 1
    for ri in range(roots.shape[0]):
        banned = np.zeros(n, np.int64)
        for q in range(n):
            banned[q] = excluded[ri, q]
        x = np.zeros(n, np.uint8)
        synd = np.zeros(m, np.uint8)
        chosen = np.full(cap + 1, -1, np.int64)
        node_c = np.full(cap + 1, -1, np.int64)
        node_t = np.zeros(cap + 1, np.int64)
        bstack = np.empty(n * (cap + 1), np.int64)
        bptr = np.zeros(cap + 2, np.int64)
        nunsat = 0
        root = roots[ri]
        x[root] = 1
        for t in range(q_ptr[root], q_ptr[root + 1]):
            synd[q_chk[t]] ^= 1
            nunsat += 1 if synd[q_chk[t]] else -1
        weight = 1
        depth = 0
        fresh = True
        while True:
            if fresh:
                fresh = False
                node_c[depth] = -1
                bptr[depth + 1] = bptr[depth]
                if nunsat == 0:
                    for r in range(xlog.shape[0]):
                        p = 0
                        for q in range(n):
                            if x[q]:
                                p ^= xlog[r, q]
                        if p:
                            if weight < best:
                                best = weight
                            break
                elif weight + (nunsat + maxcol - 1) // maxcol < best and weight < cap:
                    c0 = 0
                    while synd[c0] == 0:
                        c0 += 1
                    node_c[depth] = c0
                    node_t[depth] = hx_ptr[c0]
            c0 = node_c[depth]
            nxt = -1
            if c0 >= 0:
                if chosen[depth] >= 0:
                    # returning from a child: ban it for the remaining siblings
                    q = chosen[depth]
                    banned[q] += 1
                    bstack[bptr[depth + 1]] = q
                    bptr[depth + 1] += 1
                    chosen[depth] = -1
                t = node_t[depth]
                while t < hx_ptr[c0 + 1]:
                    q = hx_q[t]
                    t += 1
                    if x[q] == 0 and banned[q] == 0:
                        nxt = q
                        break
                node_t[depth] = t
                if weight + (nunsat + maxcol - 1) // maxcol >= best:
                    nxt = -1
            if nxt >= 0:
                chosen[depth] = nxt
                x[nxt] = 1
                weight += 1
                for tt in range(q_ptr[nxt], q_ptr[nxt + 1]):
                    c = q_chk[tt]
                    synd[c] ^= 1
                    nunsat += 1 if synd[c] else -1
                depth += 1
                chosen[depth] = -1
                fresh = True
                continue
            # node exhausted: release sibling bans, undo the edge into it
            for t in range(bptr[depth], bptr[depth + 1]):
                banned[bstack[t]] -= 1
            chosen[depth] = -1
            if depth == 0:
                break
            depth -= 1
            q = chosen[depth]
            x[q] = 0
            weight -= 1
            for tt in range(q_ptr[q], q_ptr[q + 1]):
                c = q_chk[tt]
                synd[c] ^= 1
                nunsat += 1 if synd[c] else -1
    return best if best <= cap else -1
