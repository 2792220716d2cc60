"""Pure numpy implementations of the kernels that vectorize naturally."""
import numpy as np


def rref_packed(mw, tw, ncols):
    m = mw.shape[0]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        w = c >> 6
        bit = np.uint64(1) << np.uint64(c & 63)
        hits = np.flatnonzero(mw[r:, w] & bit)
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            mw[[r, p]] = mw[[p, r]]
            tw[[r, p]] = tw[[p, r]]
        rows = np.flatnonzero(mw[:, w] & bit)
        rows = rows[rows != r]
        if rows.size:
            mw[rows, w:] ^= mw[r, w:]
            tw[rows] ^= tw[r]
        pivots.append(c)
        r += 1
    return np.asarray(pivots, dtype=np.int64)


def bp_minsum(chk_ptr, chk_q, var_ptr, var_edge, syndrome, llr0, max_iter, scaling):
    m = chk_ptr.shape[0] - 1
    n = var_ptr.shape[0] - 1
    deg = np.diff(chk_ptr)
    edge_chk = np.repeat(np.arange(m), deg)
    starts = chk_ptr[:-1]
    nonempty = deg > 0
    syn = syndrome.astype(np.int64)

    def satisfied(hard):
        par = np.zeros(m, np.int64)
        np.add.at(par, edge_chk, hard[chk_q])
        return np.array_equal(par & 1, syn)

    hard = (llr0 <= 0).astype(np.uint8)
    if satisfied(hard):
        return llr0.copy(), hard, True, 0
    q2c = llr0[chk_q].astype(float)
    post = llr0.copy()
    for it in range(1, max_iter + 1):
        alpha = scaling if scaling > 0 else 1.0 - 2.0 ** (-it)
        mag = np.abs(q2c)
        neg = q2c < 0
        sign_chk = (np.add.reduceat(neg.astype(np.int64), starts[nonempty]) + syn[nonempty]) & 1
        sgn = np.zeros(m, np.int64)
        sgn[nonempty] = sign_chk
        # first minimum and its position per check, then the second minimum
        order = np.lexsort((mag, edge_chk))
        first = order[chk_ptr[:-1][nonempty]]
        min1 = np.full(m, np.inf)
        min1[nonempty] = mag[first]
        masked = mag.copy()
        masked[first] = np.inf
        min2 = np.full(m, np.inf)
        min2[nonempty] = np.minimum.reduceat(masked, starts[nonempty])
        is_first = np.zeros(chk_q.shape[0], bool)
        is_first[first] = True
        out_mag = np.where(is_first, min2[edge_chk], min1[edge_chk])
        out_sign = 1 - 2 * ((sgn[edge_chk] + neg) & 1)
        c2q = out_sign * alpha * out_mag
        post = llr0 + np.bincount(chk_q, weights=c2q, minlength=n)
        hard = (post <= 0).astype(np.uint8)
        if satisfied(hard):
            return post, hard, True, it
        q2c = post[chk_q] - c2q
    return post, hard, False, max_iter
