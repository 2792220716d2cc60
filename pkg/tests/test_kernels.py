"""Compiled kernels agree with their numpy/python fallbacks."""
import numpy as np
import pytest

from symatch import gf2, kernels
from symatch.bp import tanner
from symatch.code import syndrome
from symatch.decoders import get_context
from symatch.kernels import backend_table

FAST = backend_table(True)
SLOW = backend_table(False)


def both(name, *args):
    copy = lambda: [a.copy() if isinstance(a, np.ndarray) else a for a in args]  # noqa: E731
    return FAST[name](*copy()), SLOW[name](*copy())


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.allclose(np.asarray(a, float), np.asarray(b, float), atol=1e-9)


def test_backend_table_names():
    assert set(FAST) == set(SLOW)
    assert kernels.BACKEND in ("numba", "numpy")


def test_rref_backends(rng):
    dense = rng.integers(0, 2, (40, 150), dtype=np.uint8)
    mw = gf2._pack(dense)
    tw = gf2._pack(np.eye(40, dtype=np.uint8))
    mw1, tw1 = mw.copy(), tw.copy()
    mw2, tw2 = mw.copy(), tw.copy()
    p1 = FAST["rref_packed"](mw1, tw1, 150)
    p2 = SLOW["rref_packed"](mw2, tw2, 150)
    assert np.array_equal(p1, p2)
    assert np.array_equal(mw1, mw2) and np.array_equal(tw1, tw2)


def test_bp_backends(gross, rng):
    g = tanner(gross.hz)
    llr0 = np.full(gross.n, np.log(144 / 3 - 1))
    for scaling in (0.0, 0.625):
        e = (rng.random(gross.n) < 0.05).astype(np.uint8)
        s = syndrome(gross, e)
        a, b = both("bp_minsum", g.chk_ptr, g.chk_q, g.var_ptr, g.var_edge, s, llr0, 50, scaling)
        assert same(a, b)


@pytest.mark.parametrize("name,n", [("match_pairs", 8), ("blossom_pairs", 14), ("pair_any", 12)])
def test_pairing_backends(name, n, rng):
    d = rng.random((n, n))
    d = d + d.T
    args = (d,) if name != "pair_any" else (d, 10)
    a, b = both(name, *args)
    assert same(a, b)


def test_graph_kernels(gross, rng):
    bundle = get_context(gross).graphs["vertical"].full
    g = bundle.graphs[3]
    a, b = both("bfs_all_pairs", g.adj_ptr, g.adj_nbr, g.adj_q, bundle.logicals[3])
    assert same(a, b)
    cost = rng.random(gross.n) + 0.1
    a, b = both("dijkstra", g.adj_ptr, g.adj_nbr, g.adj_q, cost, 2)
    assert same(a, b)


def test_bundle_kernels(gross, rng):
    ctx = get_context(gross)
    bundle = ctx.graphs["vertical"].full
    E = (rng.random((4, gross.n)) < 0.04).astype(np.uint8)
    S = np.ascontiguousarray(ctx.directions["vertical"].duplicate_syndrome(syndrome(gross, E)))
    a, b = both("bundle_uniform_bits", S, bundle.vptr, bundle.vsite, bundle.mptr, bundle.dist,
                bundle.par, 10)
    assert same(a, b)
    a, b = both("bundle_uniform_qubits", S[0], bundle.vptr, bundle.vsite, bundle.mptr, bundle.dist,
                bundle.pv, bundle.pq, bundle.logicals.shape[1], 10)
    assert same(a, b)
    cost = (rng.random((1, bundle.logicals.shape[1])) + 0.1)
    a, b = both("bundle_weighted", S[1], bundle.vptr, bundle.vsite, bundle.aptr, bundle.anbr,
                bundle.aq, bundle.logicals, cost, True, 10)
    assert same(a, b)


def test_min_logical_weight_backends(toric4):
    from symatch.code import _csr

    hx = np.ascontiguousarray(toric4.hx_dense)
    hx_ptr, hx_q = _csr(hx)
    q_ptr, q_chk = _csr(np.ascontiguousarray(hx.T))
    roots = np.array([0, 16], np.int64)
    excluded = np.zeros((2, 32), np.uint8)
    excluded[1, :16] = 1
    xlog = np.ascontiguousarray(toric4.x_logicals)
    a, b = both("min_logical_weight", hx_ptr, hx_q, q_ptr, q_chk, roots, excluded, xlog, 4)
    assert a == b == 4


def test_disabled_numba_gives_same_sweep():
    import json
    import os
    import subprocess
    import sys

    cmd = [sys.executable, "-m", "symatch.cli", "sweep", "--code", "TC4",
           "--decoder", "symatch,bp-simplex-symatch", "--p", "0.08", "--shots", "48", "--seed", "2"]
    out = {}
    for flag in ("0", "1"):
        env = dict(os.environ, SYMATCH_DISABLE_NUMBA=flag)
        res = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
        doc = json.loads(res.stdout)
        out[flag] = [(r["decoder"], r["failures"]) for r in doc["records"]]
    assert out["0"] == out["1"]
