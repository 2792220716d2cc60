"""Symmetry graphs and exact minimum-weight perfect matching on them."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from . import kernels
from .code import BBCode
from .symmetry import Symmetry

DP_MAX = 10  # subset DP up to here (faster below ~10 defects), blossom above
UNREACHABLE = 1.0e9
W_MIN = 1e-3
W_MAX = 20.0


class OddParity(ValueError):
    """A single qubit flip violates an odd number of the symmetry's checks."""


class OddDefectCount(ValueError):
    pass


class DisconnectedDefect(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SymmetryGraph:
    code: BBCode
    sites: np.ndarray  # vertex -> check site, ascending
    edge_u: np.ndarray
    edge_v: np.ndarray
    edge_q: np.ndarray
    qcost: np.ndarray  # per-qubit cost; an edge's weight is its qubit's cost
    hyperedge_groups: dict
    adj_ptr: np.ndarray = field(repr=False)
    adj_nbr: np.ndarray = field(repr=False)
    adj_q: np.ndarray = field(repr=False)
    cache: dict = field(default_factory=dict, repr=False)

    @property
    def num_vertices(self) -> int:
        return int(self.sites.size)

    @property
    def weights(self) -> np.ndarray:
        return self.qcost[self.edge_q]

    def vertex_of(self, site) -> int:
        i = int(np.searchsorted(self.sites, site))
        if i >= self.sites.size or self.sites[i] != site:
            raise KeyError(f"site {site} is not a vertex of this graph")
        return i

    def edges(self):
        return list(zip(self.edge_u.tolist(), self.edge_v.tolist(), self.edge_q.tolist(),
                        self.weights.tolist()))

    def is_uniform(self) -> bool:
        return bool(self.qcost.size == 0 or np.all(self.qcost == 1.0))


def build_symmetry_graph(code: BBCode, sym, weights=None) -> SymmetryGraph:
    """One edge per qubit violating two of Σ's checks; a complete graph on the
    violated checks when it violates four or more.
    """
    sites_vec = np.asarray(sym.sites if isinstance(sym, Symmetry) else sym, np.uint8)
    sites = np.flatnonzero(sites_vec).astype(np.int64)
    viol = code.hz_dense[sites]  # (V, n)
    counts = viol.sum(axis=0)
    if (counts % 2).any():
        q = int(np.flatnonzero(counts % 2)[0])
        raise OddParity(f"qubit {q} violates {int(counts[q])} checks; not a symmetry")
    eu, ev, eq = [], [], []
    groups = {}
    for q in np.flatnonzero(counts):
        vs = np.flatnonzero(viol[:, q])
        if vs.size > 2:
            groups[int(q)] = tuple(int(v) for v in vs)
        for a, b in combinations(vs.tolist(), 2):
            eu.append(a)
            ev.append(b)
            eq.append(int(q))
    eu = np.array(eu, np.int64)
    ev = np.array(ev, np.int64)
    eq = np.array(eq, np.int64)
    qcost = np.ones(code.n) if weights is None else _check_costs(weights, code.n)
    ptr, nbr, aq = _adjacency(sites.size, eu, ev, eq)
    return SymmetryGraph(code, sites, eu, ev, eq, qcost, groups, ptr, nbr, aq)


def _check_costs(weights, n):
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (n,):
        raise ValueError(f"expected {n} qubit costs, got shape {w.shape}")
    if not np.isfinite(w).all() or (w < 0).any():
        raise ValueError("qubit costs must be finite and nonnegative")
    return w


def _adjacency(nv, eu, ev, eq):
    """CSR adjacency with each list sorted by (qubit, neighbour)."""
    src = np.concatenate([eu, ev])
    dst = np.concatenate([ev, eu])
    qq = np.concatenate([eq, eq])
    order = np.lexsort((dst, qq, src))
    src, dst, qq = src[order], dst[order], qq[order]
    ptr = np.zeros(nv + 1, np.int64)
    np.cumsum(np.bincount(src, minlength=nv), out=ptr[1:])
    return ptr, dst.astype(np.int64), qq.astype(np.int64)


def reweight(graph: SymmetryGraph, qubit_costs) -> SymmetryGraph:
    """Same structure, edge weights taken from ``qubit_costs``."""
    w = _check_costs(qubit_costs, graph.code.n)
    return SymmetryGraph(graph.code, graph.sites, graph.edge_u, graph.edge_v, graph.edge_q, w,
                         graph.hyperedge_groups, graph.adj_ptr, graph.adj_nbr, graph.adj_q)


@dataclass(frozen=True)
class MatchResult:
    pairs: list  # (site, site) with the lower vertex first
    paths: list  # qubits along each pair's path
    total_weight: float
    qubit_set: np.ndarray  # GF(2) sum of path qubits


def pair_defects(dist) -> tuple[np.ndarray, float]:
    """Exact minimum-weight perfect matching on a complete graph."""
    dist = np.minimum(np.asarray(dist, dtype=np.float64), UNREACHABLE)
    n = dist.shape[0]
    if n % 2:
        raise OddDefectCount(f"{n} defects cannot be perfectly matched")
    partner, cost = kernels.pair_any(np.ascontiguousarray(dist), DP_MAX)
    return np.asarray(partner), float(cost)


def _shortest_paths(graph: SymmetryGraph, sources):
    if graph.is_uniform():
        # the same breadth-first trees the batch kernels use
        d, pv, pq, _ = _bfs_tables(graph)
        dist = [np.where(d[s] < 0, np.inf, d[s]).astype(np.float64) for s in sources]
        return dist, [(pv[s], pq[s]) for s in sources]
    dist, preds = [], []
    for s in sources:
        d, pv, pq = kernels.dijkstra(graph.adj_ptr, graph.adj_nbr, graph.adj_q, graph.qcost, int(s))
        dist.append(np.asarray(d))
        preds.append((np.asarray(pv), np.asarray(pq)))
    return dist, preds


def _bfs_tables(graph: SymmetryGraph):
    cached = graph.cache.get("bfs")
    if cached is None:
        zero = np.zeros(graph.code.n, np.uint8)
        cached = tuple(np.asarray(a) for a in
                       kernels.bfs_all_pairs(graph.adj_ptr, graph.adj_nbr, graph.adj_q, zero))
        graph.cache["bfs"] = cached
    return cached


def match(graph: SymmetryGraph, defects: Sequence[int]) -> MatchResult:
    """Match defect sites pairwise along shortest paths of minimum total weight."""
    verts = sorted(graph.vertex_of(s) for s in defects)
    if len(set(verts)) != len(verts):
        raise ValueError("defect list contains duplicates")
    n = len(verts)
    if n % 2:
        raise OddDefectCount(f"{n} defects on a symmetry graph")
    qubits = np.zeros(graph.code.n, np.uint8)
    if n == 0:
        return MatchResult([], [], 0.0, qubits)
    dist, preds = _shortest_paths(graph, verts)
    sub = np.array([[dist[a][verts[b]] for b in range(n)] for a in range(n)])
    lower = np.tril_indices(n, -1)
    sub[lower] = sub.T[lower]
    sub = np.where(sub >= UNREACHABLE, UNREACHABLE, sub)
    partner, cost = pair_defects(sub)
    if cost >= UNREACHABLE:
        raise DisconnectedDefect("some defect has no partner reachable in its component")
    pairs, paths = [], []
    for a in range(n):
        b = int(partner[a])
        if a < b:
            pv, pq = preds[a]
            walk = []
            v = verts[b]
            while v != verts[a]:
                walk.append(int(pq[v]))
                v = int(pv[v])
            walk.reverse()
            for q in walk:
                qubits[q] ^= 1
            pairs.append((int(graph.sites[verts[a]]), int(graph.sites[verts[b]])))
            paths.append(walk)
    return MatchResult(pairs, paths, float(cost), qubits)


def commutator_bit(match_result: MatchResult, logical) -> int:
    """Parity of the matched qubit set's overlap with the logical's support."""
    return int(np.dot(match_result.qubit_set.astype(np.int64), np.asarray(logical, np.int64)) & 1)


def defects_on(graph: SymmetryGraph, syndrome) -> np.ndarray:
    return graph.sites[np.asarray(syndrome, np.uint8)[graph.sites] == 1]


# ---------------------------------------------------------------- bundles


@dataclass(frozen=True, eq=False)
class GraphBundle:
    """All graphs of one direction flattened for the batch kernels."""

    graphs: tuple
    logicals: np.ndarray  # (G, n_work)
    vptr: np.ndarray
    vsite: np.ndarray
    aptr: np.ndarray
    anbr: np.ndarray
    aq: np.ndarray
    mptr: np.ndarray
    dist: np.ndarray
    par: np.ndarray
    pv: np.ndarray
    pq: np.ndarray

    @property
    def size(self) -> int:
        return len(self.graphs)

    def uniform_bits(self, synd_work) -> np.ndarray:
        """(shots, G) commutator bits at unit weights."""
        synd_work = np.ascontiguousarray(np.atleast_2d(synd_work), dtype=np.uint8)
        return np.asarray(kernels.bundle_uniform_bits(synd_work, self.vptr, self.vsite, self.mptr,
                                                      self.dist, self.par, DP_MAX))

    def uniform_qubit_sets(self, synd_work) -> np.ndarray:
        """(G, n_work) matched qubit sets at unit weights, one shot."""
        synd_work = np.ascontiguousarray(synd_work, dtype=np.uint8)
        return np.asarray(kernels.bundle_uniform_qubits(synd_work, self.vptr, self.vsite, self.mptr,
                                                        self.dist, self.pv, self.pq,
                                                        self.logicals.shape[1], DP_MAX))

    def weighted(self, synd_work, qcost, want_sets=False):
        """Bits (and qubit sets) with per-qubit costs, one shot.

        ``qcost`` is (n_work,) shared by all graphs or (G, n_work) per graph.
        """
        synd_work = np.ascontiguousarray(synd_work, dtype=np.uint8)
        qcost = np.ascontiguousarray(np.atleast_2d(qcost), dtype=np.float64)
        bits, sets = kernels.bundle_weighted(synd_work, self.vptr, self.vsite, self.aptr,
                                             self.anbr, self.aq, self.logicals, qcost,
                                             bool(want_sets), DP_MAX)
        return np.asarray(bits), (np.asarray(sets) if want_sets else None)


def build_bundle(graphs: Sequence[SymmetryGraph], logicals) -> GraphBundle:
    logicals = np.ascontiguousarray(logicals, dtype=np.uint8)
    vptr = np.zeros(len(graphs) + 1, np.int64)
    vptr[1:] = np.cumsum([g.num_vertices for g in graphs])
    vsite = np.concatenate([g.sites for g in graphs]).astype(np.int64)
    aptr_parts, anbr, aq = [np.zeros(1, np.int64)], [], []
    offset = 0
    mptr = np.zeros(len(graphs) + 1, np.int64)
    dist, par, pv, pq = [], [], [], []
    for i, g in enumerate(graphs):
        aptr_parts.append(g.adj_ptr[1:] + offset)
        offset += g.adj_nbr.size
        anbr.append(g.adj_nbr)
        aq.append(g.adj_q)
        d, pvi, pqi, pari = kernels.bfs_all_pairs(g.adj_ptr, g.adj_nbr, g.adj_q, logicals[i])
        d = np.asarray(d).astype(np.float64)
        d[d < 0] = UNREACHABLE
        dist.append(d.ravel())
        par.append(np.asarray(pari).ravel())
        pv.append(np.asarray(pvi).ravel())
        pq.append(np.asarray(pqi).ravel())
        mptr[i + 1] = mptr[i] + d.size
    cat = lambda xs, dt: np.ascontiguousarray(np.concatenate(xs) if xs else np.zeros(0, dt), dtype=dt)  # noqa: E731
    return GraphBundle(tuple(graphs), logicals, vptr, vsite,
                       cat(aptr_parts, np.int64), cat(anbr, np.int64), cat(aq, np.int64),
                       mptr, cat(dist, np.float64), cat(par, np.uint8),
                       cat(pv, np.int32), cat(pq, np.int32))
