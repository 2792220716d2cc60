"""Independent reference implementations used as test oracles.

Everything here is deliberately plain Python over small inputs and shares
no code with the package.
"""
from functools import lru_cache
from itertools import product

import numpy as np


def dense_rank(M):
    """Row reduction on a list of Python ints (one bitmask per row)."""
    M = np.asarray(M, np.uint8)
    rows = [int("".join(map(str, r[::-1])), 2) if r.size else 0 for r in M]
    rank = 0
    for bit in range(M.shape[1]):
        mask = 1 << bit
        pivot = next((i for i in range(rank, len(rows)) if rows[i] & mask), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i] & mask:
                rows[i] ^= rows[rank]
        rank += 1
    return rank


def enumerate_kernel(M):
    """All v with M·v = 0, by enumeration. Only for very few columns."""
    M = np.asarray(M, np.uint8)
    out = []
    for bits in product((0, 1), repeat=M.shape[1]):
        v = np.array(bits, np.uint8)
        if not ((M.astype(int) @ v) % 2).any():
            out.append(v)
    return out


def min_pairing_cost(dist):
    """Minimum total weight over all perfect pairings, by exhaustive recursion."""
    n = len(dist)

    @lru_cache(maxsize=None)
    def best(remaining):
        if not remaining:
            return 0.0
        a = remaining[0]
        rest = remaining[1:]
        return min(dist[a][b] + best(rest[:i] + rest[i + 1:]) for i, b in enumerate(rest))

    return best(tuple(range(n)))


def all_pairings(items):
    if not items:
        yield []
        return
    a, rest = items[0], items[1:]
    for i, b in enumerate(rest):
        for tail in all_pairings(rest[:i] + rest[i + 1:]):
            yield [(a, b)] + tail


def simplex_codewords(K):
    """Codeword of generator bits g is b[v] = <v, g> over nonzero v."""
    words = {}
    for g in range(1 << K):
        words[g] = np.array([bin(v & g).count("1") % 2 for v in range(1, 1 << K)], np.uint8)
    return words


def nearest_generator(word, K):
    cw = simplex_codewords(K)
    g = min(cw, key=lambda g: (int((cw[g] ^ word).sum()), [(g >> j) & 1 for j in range(K)]))
    return np.array([(g >> j) & 1 for j in range(K)], np.uint8)


def symmetry_graph_nx(graph):
    """networkx MultiGraph of a SymmetryGraph (vertices are check sites)."""
    import networkx as nx

    G = nx.MultiGraph()
    G.add_nodes_from(int(s) for s in graph.sites)
    for u, v, q, w in graph.edges():
        G.add_edge(int(graph.sites[u]), int(graph.sites[v]), qubit=q, weight=w)
    return G


def shortest_lengths(G, sources):
    import networkx as nx

    return {s: nx.single_source_dijkstra_path_length(G, s, weight="weight") for s in sources}


def minsum_dense(H, s, llr0, max_iter, scaling):
    """Flooding min-sum with explicit per-edge dictionaries."""
    H = np.asarray(H, np.uint8)
    m, n = H.shape
    checks = [list(np.flatnonzero(H[i])) for i in range(m)]
    hard = (np.asarray(llr0) <= 0).astype(np.uint8)
    if np.array_equal((H.astype(int) @ hard) % 2, s):
        return np.array(llr0, float), hard, True, 0
    q2c = {(i, q): float(llr0[q]) for i in range(m) for q in checks[i]}
    post = np.array(llr0, float)
    for it in range(1, max_iter + 1):
        alpha = scaling if scaling > 0 else 1.0 - 2.0 ** (-it)
        c2q = {}
        for i in range(m):
            for q in checks[i]:
                others = [q2c[(i, r)] for r in checks[i] if r != q]
                if not others:
                    c2q[(i, q)] = 0.0
                    continue
                sign = (-1) ** (int(s[i]) + sum(v < 0 for v in others))
                c2q[(i, q)] = sign * alpha * min(abs(v) for v in others)
        post = np.array(llr0, float)
        for (i, q), v in c2q.items():
            post[q] += v
        hard = (post <= 0).astype(np.uint8)
        if np.array_equal((H.astype(int) @ hard) % 2, s):
            return post, hard, True, it
        q2c = {(i, q): post[q] - c2q[(i, q)] for (i, q) in q2c}
    return post, hard, False, max_iter
