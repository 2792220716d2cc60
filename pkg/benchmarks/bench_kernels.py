"""Time each hot kernel under numba and under the numpy/python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both backends run in this process (``backend_table``), their outputs are
compared, and a table of best-of-N wall times is printed. The python
fallback of the loop kernels is slow by design; inputs are sized so the
whole run takes well under a minute.
"""
import argparse
import time

import numpy as np

from symatch import gf2
from symatch.bp import tanner
from symatch.decoders import get_context
from symatch.kernels import backend_table
from symatch.registry import get_code


def _best(fn, args, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        fresh = [a.copy() if isinstance(a, np.ndarray) else a for a in args]
        t0 = time.perf_counter()
        out = fn(*fresh)
        best = min(best, time.perf_counter() - t0)
    return best, out


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    a = np.asarray(a)
    b = np.asarray(b)
    if a.dtype.kind == "f":
        return np.allclose(a, b, rtol=1e-9, atol=1e-9)
    return np.array_equal(a, b)


def cases(rng):
    code = get_code("gross")
    hz = gf2.as_matrix(code.hz_dense)
    tw = gf2._pack(np.eye(hz.rows, dtype=np.uint8))
    yield "rref_packed", (np.array(hz.words), tw, hz.cols)

    g = tanner(code.hz)
    e = (rng.random(code.n) < 0.04).astype(np.uint8)
    s = gf2.matmul_mod2(code.hz_dense, e)
    llr0 = np.full(code.n, np.log((1 - 3 / 144) / (3 / 144)))
    yield "bp_minsum", (g.chk_ptr, g.chk_q, g.var_ptr, g.var_edge, s, llr0, 100, 0.0)

    d = rng.integers(1, 12, (10, 10)).astype(np.float64)
    d = d + d.T
    yield "match_pairs", (d,)
    d = rng.random((40, 40))
    yield "blossom_pairs", (d + d.T,)

    bundle = get_context(code).graphs["vertical"].full
    graph = bundle.graphs[0]
    yield "bfs_all_pairs", (graph.adj_ptr, graph.adj_nbr, graph.adj_q, bundle.logicals[0])
    yield "dijkstra", (graph.adj_ptr, graph.adj_nbr, graph.adj_q, rng.random(code.n) + 0.1, 0)

    E = (rng.random((8, code.n)) < 0.03).astype(np.uint8)
    S = np.ascontiguousarray(gf2.matmul_mod2(E, code.hz_dense.T))
    yield "bundle_uniform_bits", (S, bundle.vptr, bundle.vsite, bundle.mptr, bundle.dist,
                                  bundle.par, 10)
    yield "bundle_weighted", (S[0], bundle.vptr, bundle.vsite, bundle.aptr, bundle.anbr,
                              bundle.aq, bundle.logicals, (rng.random((1, code.n)) + 0.1), False, 10)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    fast = backend_table(True)
    slow = backend_table(False)
    print(f"{'kernel':<22} {'numba [ms]':>12} {'fallback [ms]':>14} {'speedup':>9}  same")
    for name, inputs in cases(np.random.default_rng(2024)):
        fast[name](*[a.copy() if isinstance(a, np.ndarray) else a for a in inputs])  # compile
        t_fast, out_fast = _best(fast[name], inputs, args.repeat)
        t_slow, out_slow = _best(slow[name], inputs, 1)
        print(f"{name:<22} {t_fast * 1e3:>12.3f} {t_slow * 1e3:>14.3f} {t_slow / t_fast:>8.1f}x  "
              f"{_same(out_fast, out_slow)}")


if __name__ == "__main__":
    main()
