"""Maximum-weight matching by Edmonds' blossom algorithm, O(n^3).

Array-based port of the classic primal-dual formulation (the one networkx
also follows), restricted to maximum-cardinality matching with integer
weights. Recursive helpers of the usual presentation are rewritten with
explicit stacks so the module compiles under numba; blossom child lists
live in padded 2-D arrays with a length per row (-1 marks "no list").

Vertices are 0..n-1, blossoms n..2n-1. Endpoint p of edge k is 2k + 0/1,
``endpoint[p]`` its vertex and ``p ^ 1`` the other end.
"""
import numpy as np

from .._jit import njit

DIST_SCALE = 1048576.0  # non-integer costs are rounded to multiples of 2^-20


@njit
def _slack(k, ei, ej, wt, dualvar):
    return dualvar[ei[k]] + dualvar[ej[k]] - 2 * wt[k]


@njit
def _leaves(b, n, bchilds, bnchild, out):
    """Vertices inside blossom b, depth first in child order; returns the count."""
    if b < n:
        out[0] = b
        return 1
    stack = np.empty(2 * n, np.int64)
    stack[0] = b
    sp = 1
    cnt = 0
    while sp:
        sp -= 1
        t = stack[sp]
        if t < n:
            out[cnt] = t
            cnt += 1
        else:
            for i in range(bnchild[t] - 1, -1, -1):
                stack[sp] = bchilds[t, i]
                sp += 1
    return cnt


@njit
def _assign_label(w, t, p, n, endpoint, mate, label, labelend, inblossom, bbase, bestedge,
                  bchilds, bnchild, queue, qlen):
    leaf = np.empty(n, np.int64)
    while True:
        b = inblossom[w]
        label[w] = t
        label[b] = t
        labelend[w] = p
        labelend[b] = p
        bestedge[w] = -1
        bestedge[b] = -1
        if t == 1:
            cnt = _leaves(b, n, bchilds, bnchild, leaf)
            for i in range(cnt):
                queue[qlen[0]] = leaf[i]
                qlen[0] += 1
            return
        # b became T: its mate becomes S
        base = bbase[b]
        p = mate[base] ^ 1
        w = endpoint[mate[base]]
        t = 1


@njit
def _scan_blossom(v, w, endpoint, label, labelend, inblossom, bbase, path):
    """Trace back from v and w; return the base of a new blossom or -1 for an augmenting path."""
    np_ = 0
    base = -1
    while v != -1 or w != -1:
        b = inblossom[v]
        if label[b] & 4:
            base = bbase[b]
            break
        path[np_] = b
        np_ += 1
        label[b] = 5
        if labelend[b] == -1:
            v = -1
        else:
            v = endpoint[labelend[b]]
            b = inblossom[v]
            v = endpoint[labelend[b]]
        if w != -1:
            v, w = w, v
    for i in range(np_):
        label[path[i]] = 1
    return base


@njit
def _add_blossom(base, k, n, ei, ej, wt, endpoint, nb_ptr, nb_end, label, labelend, inblossom,
                 bparent, bchilds, bnchild, bendps, bbase, bestedge, bbest, bnbest, unused,
                 nunused, dualvar, queue, qlen):
    v = ei[k]
    w = ej[k]
    bb = inblossom[base]
    bv = inblossom[v]
    bw = inblossom[w]
    nunused[0] -= 1
    b = unused[nunused[0]]
    bbase[b] = base
    bparent[b] = -1
    bparent[bb] = b
    # path from v back to the base, stored reversed
    tmp_c = np.empty(n + 1, np.int64)
    tmp_e = np.empty(n + 1, np.int64)
    m = 0
    while bv != bb:
        bparent[bv] = b
        tmp_c[m] = bv
        tmp_e[m] = labelend[bv]
        m += 1
        v = endpoint[labelend[bv]]
        bv = inblossom[v]
    c = 0
    bchilds[b, c] = bb
    c += 1
    for i in range(m - 1, -1, -1):
        bchilds[b, c] = tmp_c[i]
        bendps[b, c - 1] = tmp_e[i]
        c += 1
    bendps[b, c - 1] = 2 * k
    while bw != bb:
        bparent[bw] = b
        bchilds[b, c] = bw
        bendps[b, c] = labelend[bw] ^ 1
        c += 1
        w = endpoint[labelend[bw]]
        bw = inblossom[w]
    bnchild[b] = c
    label[b] = 1
    labelend[b] = labelend[bb]
    dualvar[b] = 0
    leaf = np.empty(n, np.int64)
    cnt = _leaves(b, n, bchilds, bnchild, leaf)
    for i in range(cnt):
        x = leaf[i]
        if label[inblossom[x]] == 2:
            # former T-vertices become S and must be scanned
            queue[qlen[0]] = x
            qlen[0] += 1
        inblossom[x] = b
    # least-slack edges from the new blossom to each neighbouring S-blossom
    bestedgeto = np.full(2 * n, -1, np.int64)
    for ci in range(c):
        bv = bchilds[b, ci]
        if bnbest[bv] == -1:
            cnt = _leaves(bv, n, bchilds, bnchild, leaf)
            for li in range(cnt):
                x = leaf[li]
                for e in range(nb_ptr[x], nb_ptr[x + 1]):
                    kk = nb_end[e] // 2
                    i = ei[kk]
                    j = ej[kk]
                    if inblossom[j] == b:
                        i, j = j, i
                    bj = inblossom[j]
                    if bj != b and label[bj] == 1 and (
                            bestedgeto[bj] == -1
                            or _slack(kk, ei, ej, wt, dualvar) < _slack(bestedgeto[bj], ei, ej, wt, dualvar)):
                        bestedgeto[bj] = kk
        else:
            for e in range(bnbest[bv]):
                kk = bbest[bv, e]
                i = ei[kk]
                j = ej[kk]
                if inblossom[j] == b:
                    i, j = j, i
                bj = inblossom[j]
                if bj != b and label[bj] == 1 and (
                        bestedgeto[bj] == -1
                        or _slack(kk, ei, ej, wt, dualvar) < _slack(bestedgeto[bj], ei, ej, wt, dualvar)):
                    bestedgeto[bj] = kk
        bnbest[bv] = -1
        bestedge[bv] = -1
    m = 0
    for x in range(2 * n):
        if bestedgeto[x] != -1:
            bbest[b, m] = bestedgeto[x]
            m += 1
    bnbest[b] = m
    bestedge[b] = -1
    for e in range(m):
        kk = bbest[b, e]
        if bestedge[b] == -1 or _slack(kk, ei, ej, wt, dualvar) < _slack(bestedge[b], ei, ej, wt, dualvar):
            bestedge[b] = kk


@njit
def _wrap(j, length):
    return j + length if j < 0 else j


@njit
def _expand_blossom(b0, endstage, n, endpoint, mate, label, labelend, inblossom, bparent,
                    bchilds, bnchild, bendps, bbase, bestedge, bnbest, unused, nunused,
                    dualvar, allowedge, queue, qlen):
    leaf = np.empty(n, np.int64)
    stack = np.empty(2 * n, np.int64)
    stack[0] = b0
    sp = 1
    while sp:
        sp -= 1
        b = stack[sp]
        L = bnchild[b]
        for ci in range(L):
            s = bchilds[b, ci]
            bparent[s] = -1
            if s < n:
                inblossom[s] = s
            elif endstage and dualvar[s] == 0:
                stack[sp] = s
                sp += 1
            else:
                cnt = _leaves(s, n, bchilds, bnchild, leaf)
                for i in range(cnt):
                    inblossom[leaf[i]] = s
        if (not endstage) and label[b] == 2:
            # relabel the sub-blossoms on the even path through the former T-blossom
            entrychild = inblossom[endpoint[labelend[b] ^ 1]]
            j = 0
            while bchilds[b, j] != entrychild:
                j += 1
            if j & 1:
                j -= L
                jstep = 1
                endptrick = 0
            else:
                jstep = -1
                endptrick = 1
            p = labelend[b]
            while j != 0:
                label[endpoint[p ^ 1]] = 0
                q = bendps[b, _wrap(j - endptrick, L)]
                label[endpoint[q ^ endptrick ^ 1]] = 0
                _assign_label(endpoint[p ^ 1], 2, p, n, endpoint, mate, label, labelend,
                              inblossom, bbase, bestedge, bchilds, bnchild, queue, qlen)
                allowedge[q // 2] = True
                j += jstep
                p = bendps[b, _wrap(j - endptrick, L)] ^ endptrick
                allowedge[p // 2] = True
                j += jstep
            bv = bchilds[b, _wrap(j, L)]
            label[endpoint[p ^ 1]] = 2
            label[bv] = 2
            labelend[endpoint[p ^ 1]] = p
            labelend[bv] = p
            bestedge[bv] = -1
            j += jstep
            while bchilds[b, _wrap(j, L)] != entrychild:
                bv = bchilds[b, _wrap(j, L)]
                if label[bv] == 1:
                    j += jstep
                    continue
                cnt = _leaves(bv, n, bchilds, bnchild, leaf)
                found = -1
                for i in range(cnt):
                    if label[leaf[i]] != 0:
                        found = leaf[i]
                        break
                if found != -1:
                    label[found] = 0
                    label[endpoint[mate[bbase[bv]]]] = 0
                    _assign_label(found, 2, labelend[found], n, endpoint, mate, label, labelend,
                                  inblossom, bbase, bestedge, bchilds, bnchild, queue, qlen)
                j += jstep
        label[b] = -1
        labelend[b] = -1
        bnchild[b] = -1
        bbase[b] = -1
        bnbest[b] = -1
        bestedge[b] = -1
        unused[nunused[0]] = b
        nunused[0] += 1


@njit
def _augment_blossom(b0, v0, n, endpoint, mate, bparent, bchilds, bnchild, bendps, bbase):
    """Swap matched and unmatched edges inside b0 so that v0 becomes its base."""
    sb = np.empty(2 * n, np.int64)
    sv = np.empty(2 * n, np.int64)
    sb[0] = b0
    sv[0] = v0
    sp = 1
    rot = np.empty(n + 1, np.int64)
    while sp:
        sp -= 1
        b = sb[sp]
        v = sv[sp]
        t = v
        while bparent[t] != b:
            t = bparent[t]
        if t >= n:
            sb[sp] = t
            sv[sp] = v
            sp += 1
        L = bnchild[b]
        i = 0
        while bchilds[b, i] != t:
            i += 1
        j = i
        if i & 1:
            j -= L
            jstep = 1
            endptrick = 0
        else:
            jstep = -1
            endptrick = 1
        while j != 0:
            j += jstep
            t = bchilds[b, _wrap(j, L)]
            p = bendps[b, _wrap(j - endptrick, L)] ^ endptrick
            if t >= n:
                sb[sp] = t
                sv[sp] = endpoint[p]
                sp += 1
            j += jstep
            t = bchilds[b, _wrap(j, L)]
            if t >= n:
                sb[sp] = t
                sv[sp] = endpoint[p ^ 1]
                sp += 1
            mate[endpoint[p]] = p ^ 1
            mate[endpoint[p ^ 1]] = p
        for a in range(L):
            rot[a] = bchilds[b, (a + i) % L]
        for a in range(L):
            bchilds[b, a] = rot[a]
        for a in range(L):
            rot[a] = bendps[b, (a + i) % L]
        for a in range(L):
            bendps[b, a] = rot[a]
        bbase[b] = v


@njit
def max_weight_matching(n, ei, ej, wt):
    """Maximum-cardinality matching of maximum total weight.

    ``wt`` must be int64. Returns mate (vertex or -1 per vertex).
    """
    nedge = ei.shape[0]
    mate = np.full(n, -1, np.int64)
    if n == 0 or nedge == 0:
        return mate
    endpoint = np.empty(2 * nedge, np.int64)
    deg = np.zeros(n + 1, np.int64)
    for k in range(nedge):
        endpoint[2 * k] = ei[k]
        endpoint[2 * k + 1] = ej[k]
        deg[ei[k] + 1] += 1
        deg[ej[k] + 1] += 1
    nb_ptr = np.cumsum(deg)
    fill = nb_ptr[:-1].copy()
    nb_end = np.empty(2 * nedge, np.int64)
    for k in range(nedge):
        nb_end[fill[ei[k]]] = 2 * k + 1
        fill[ei[k]] += 1
        nb_end[fill[ej[k]]] = 2 * k
        fill[ej[k]] += 1
    maxweight = 0
    for k in range(nedge):
        if wt[k] > maxweight:
            maxweight = wt[k]

    label = np.zeros(2 * n, np.int64)
    labelend = np.full(2 * n, -1, np.int64)
    inblossom = np.arange(n)
    bparent = np.full(2 * n, -1, np.int64)
    bchilds = np.full((2 * n, n + 1), -1, np.int64)
    bnchild = np.full(2 * n, -1, np.int64)
    bendps = np.full((2 * n, n + 1), -1, np.int64)
    bbase = np.full(2 * n, -1, np.int64)
    bbase[:n] = np.arange(n)
    bestedge = np.full(2 * n, -1, np.int64)
    bbest = np.full((2 * n, 2 * n), -1, np.int64)
    bnbest = np.full(2 * n, -1, np.int64)
    unused = np.empty(n, np.int64)
    for i in range(n):
        unused[i] = n + i
    nunused = np.array([n], np.int64)
    dualvar = np.zeros(2 * n, np.int64)
    dualvar[:n] = maxweight
    allowedge = np.zeros(nedge, np.bool_)
    queue = np.empty(2 * n, np.int64)
    qlen = np.zeros(1, np.int64)
    path = np.empty(2 * n, np.int64)

    for _stage in range(n):
        label[:] = 0
        bestedge[:] = -1
        for b in range(n, 2 * n):
            bnbest[b] = -1
        allowedge[:] = False
        qlen[0] = 0
        for v in range(n):
            if mate[v] == -1 and label[inblossom[v]] == 0:
                _assign_label(v, 1, -1, n, endpoint, mate, label, labelend, inblossom, bbase,
                              bestedge, bchilds, bnchild, queue, qlen)
        augmented = False
        while True:
            while qlen[0] > 0 and not augmented:
                qlen[0] -= 1
                v = queue[qlen[0]]
                for e in range(nb_ptr[v], nb_ptr[v + 1]):
                    p = nb_end[e]
                    k = p // 2
                    w = endpoint[p]
                    if inblossom[v] == inblossom[w]:
                        continue
                    kslack = 0
                    if not allowedge[k]:
                        kslack = _slack(k, ei, ej, wt, dualvar)
                        if kslack <= 0:
                            allowedge[k] = True
                    if allowedge[k]:
                        if label[inblossom[w]] == 0:
                            _assign_label(w, 2, p ^ 1, n, endpoint, mate, label, labelend,
                                          inblossom, bbase, bestedge, bchilds, bnchild, queue, qlen)
                        elif label[inblossom[w]] == 1:
                            base = _scan_blossom(v, w, endpoint, label, labelend, inblossom,
                                                 bbase, path)
                            if base >= 0:
                                _add_blossom(base, k, n, ei, ej, wt, endpoint, nb_ptr, nb_end,
                                             label, labelend, inblossom, bparent, bchilds,
                                             bnchild, bendps, bbase, bestedge, bbest, bnbest,
                                             unused, nunused, dualvar, queue, qlen)
                            else:
                                _augment_matching(k, n, ei, ej, endpoint, mate, label,
                                                  labelend, inblossom, bparent, bchilds,
                                                  bnchild, bendps, bbase)
                                augmented = True
                                break
                        elif label[w] == 0:
                            label[w] = 2
                            labelend[w] = p ^ 1
                    elif label[inblossom[w]] == 1:
                        b = inblossom[v]
                        if bestedge[b] == -1 or kslack < _slack(bestedge[b], ei, ej, wt, dualvar):
                            bestedge[b] = k
                    elif label[w] == 0:
                        if bestedge[w] == -1 or kslack < _slack(bestedge[w], ei, ej, wt, dualvar):
                            bestedge[w] = k
            if augmented:
                break
            # dual update; maximum cardinality means no type-1 delta while edges remain
            deltatype = -1
            delta = 0
            deltaedge = -1
            deltablossom = -1
            for v in range(n):
                if label[inblossom[v]] == 0 and bestedge[v] != -1:
                    d = _slack(bestedge[v], ei, ej, wt, dualvar)
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 2
                        deltaedge = bestedge[v]
            for b in range(2 * n):
                if bparent[b] == -1 and label[b] == 1 and bestedge[b] != -1:
                    d = _slack(bestedge[b], ei, ej, wt, dualvar) // 2
                    if deltatype == -1 or d < delta:
                        delta = d
                        deltatype = 3
                        deltaedge = bestedge[b]
            for b in range(n, 2 * n):
                if (bbase[b] >= 0 and bparent[b] == -1 and label[b] == 2
                        and (deltatype == -1 or dualvar[b] < delta)):
                    delta = dualvar[b]
                    deltatype = 4
                    deltablossom = b
            if deltatype == -1:
                deltatype = 1
                delta = dualvar[0]
                for v in range(1, n):
                    if dualvar[v] < delta:
                        delta = dualvar[v]
                if delta < 0:
                    delta = 0
            for v in range(n):
                lb = label[inblossom[v]]
                if lb == 1:
                    dualvar[v] -= delta
                elif lb == 2:
                    dualvar[v] += delta
            for b in range(n, 2 * n):
                if bbase[b] >= 0 and bparent[b] == -1:
                    if label[b] == 1:
                        dualvar[b] += delta
                    elif label[b] == 2:
                        dualvar[b] -= delta
            if deltatype == 1:
                break
            elif deltatype == 2:
                allowedge[deltaedge] = True
                i = ei[deltaedge]
                j = ej[deltaedge]
                if label[inblossom[i]] == 0:
                    i, j = j, i
                queue[qlen[0]] = i
                qlen[0] += 1
            elif deltatype == 3:
                allowedge[deltaedge] = True
                queue[qlen[0]] = ei[deltaedge]
                qlen[0] += 1
            else:
                _expand_blossom(deltablossom, False, n, endpoint, mate, label, labelend,
                                inblossom, bparent, bchilds, bnchild, bendps, bbase, bestedge,
                                bnbest, unused, nunused, dualvar, allowedge, queue, qlen)
        if not augmented:
            break
        for b in range(n, 2 * n):
            if bparent[b] == -1 and bbase[b] >= 0 and label[b] == 1 and dualvar[b] == 0:
                _expand_blossom(b, True, n, endpoint, mate, label, labelend, inblossom,
                                bparent, bchilds, bnchild, bendps, bbase, bestedge, bnbest,
                                unused, nunused, dualvar, allowedge, queue, qlen)
    for v in range(n):
        if mate[v] >= 0:
            mate[v] = endpoint[mate[v]]
    return mate


@njit
def _augment_matching(k, n, ei, ej, endpoint, mate, label, labelend, inblossom, bparent,
                      bchilds, bnchild, bendps, bbase):
    for side in range(2):
        if side == 0:
            s = ei[k]
            p = 2 * k + 1
        else:
            s = ej[k]
            p = 2 * k
        while True:
            bs = inblossom[s]
            if bs >= n:
                _augment_blossom(bs, s, n, endpoint, mate, bparent, bchilds, bnchild, bendps, bbase)
            mate[s] = p
            if labelend[bs] == -1:
                break
            t = endpoint[labelend[bs]]
            bt = inblossom[t]
            s = endpoint[labelend[bt]]
            j = endpoint[labelend[bt] ^ 1]
            if bt >= n:
                _augment_blossom(bt, j, n, endpoint, mate, bparent, bchilds, bnchild, bendps, bbase)
            mate[j] = labelend[bt]
            p = labelend[bt] ^ 1


@njit
def blossom_pairs(dist):
    """Minimum-cost perfect matching of a complete graph with an even vertex count.

    Costs are turned into integer weights ``cmax - c`` (exact for integer
    costs, else rounded to multiples of 2^-20). Returns (partner, cost).
    """
    n = dist.shape[0]
    integral = True
    for i in range(n):
        for j in range(i + 1, n):
            if dist[i, j] != np.floor(dist[i, j]):
                integral = False
    scale = 1.0 if integral else DIST_SCALE
    nedge = n * (n - 1) // 2
    ei = np.empty(nedge, np.int64)
    ej = np.empty(nedge, np.int64)
    c = np.empty(nedge, np.int64)
    k = 0
    cmax = 0
    for i in range(n):
        for j in range(i + 1, n):
            ei[k] = i
            ej[k] = j
            c[k] = np.int64(np.round(dist[i, j] * scale))
            if c[k] > cmax:
                cmax = c[k]
            k += 1
    wt = (cmax + 1) - c
    partner = max_weight_matching(n, ei, ej, wt)
    cost = 0.0
    for i in range(n):
        if i < partner[i]:
            cost += dist[i, partner[i]]
    return partner, cost
