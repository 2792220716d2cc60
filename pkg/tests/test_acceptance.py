"""Acceptance criteria, one test each.

Every test records a one-line PASS/FAIL verdict (printed in the terminal
summary) before asserting, so a failing criterion still reports what was
measured. Criteria 5 and 9 take tens of minutes on one core and carry the
``slow`` marker; deselect them with ``-m "not slow"``.
"""
import json
import math
from itertools import combinations

import networkx as nx
import numpy as np
import pytest

from conftest import CRITERIA
from oracles import min_pairing_cost, shortest_lengths, symmetry_graph_nx
from symatch.bench import (ExhaustSpec, SweepSpec, make_document, records_from_csv, run_exhaustive,
                           run_sweep, to_csv, to_json)
from symatch.code import brute_force_distance, build_code, syndrome
from symatch.decoders import Decoder
from symatch.lattice import LatticePoly
from symatch.matching import build_symmetry_graph, match, reweight
from symatch.registry import ENTRIES, get_code
from symatch.simplex import codewords, simplex_outer_decode_batch
from symatch.symmetry import (discover_symmetries_gauss, even_parity_ok, is_subsymmetry, is_symmetry,
                              symmetry_count)
from symatch.topology import anyon_analysis


def verdict(num, ok, detail):
    line = f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    CRITERIA[num] = line
    print(line)
    assert ok, line


def entry_code(e):
    return get_code(e.name if e.family_size is None else f"{e.name}{e.family_size}")


def errors_of_weight(n, w):
    idx = np.array(list(combinations(range(n), w)), np.int64).reshape(-1, w)
    E = np.zeros((idx.shape[0], n), np.uint8)
    E[np.arange(idx.shape[0])[:, None], idx] = 1
    return E


def test_criterion_01_registry():
    bad = []
    for e in ENTRIES:
        code = entry_code(e)
        if (code.n, code.k) != (e.n, e.k):
            bad.append(f"{e.name}: built [[{code.n},{code.k}]] vs listed [[{e.n},{e.k}]]")
    dists = {}
    for name, d in (("TC4", 4), ("D36", 4), ("LC162", 6), ("GT98", 12)):
        got = brute_force_distance(get_code(name), 12)
        dists[name] = got
        if got != d:
            bad.append(f"{name}: d={got} vs {d}")
    verdict(1, not bad, "; ".join(bad) or f"n, k of all ten codes; distances {dists}")


def test_criterion_02_gross_symmetries(gross):
    s = gross.shape
    count = len(discover_symmetries_gauss(gross))
    lead = LatticePoly.parse("x + y^2 + x^2*y", s)
    sr = LatticePoly.parse("1 + x^6", s) * LatticePoly.parse("1 + y^2", s) * gross.B
    sl = LatticePoly.parse("1 + x^6", s) * LatticePoly.parse("1 + x^2", s) * gross.A
    # the symmetry as a sum of translated right subsymmetries
    sigma = lead * sr
    checks = {
        "count=6": count == 6 == symmetry_count(gross),
        "|Σ|=36": len(sigma) == 36,
        "σΣ=0": is_symmetry(gross, sigma.to_site_vector()),
        "Σ^R": is_subsymmetry(gross, "R", sr.to_site_vector()),
        "Σ^L": is_subsymmetry(gross, "L", sl.to_site_vector()),
    }
    literal = lead * LatticePoly.parse("1 + x^6", s) * LatticePoly.parse("1 + y^2", s) * gross.A
    detail = ", ".join(f"{k}:{v}" for k, v in checks.items())
    detail += f" (printed A-form: {len(literal)} terms, symmetry={is_symmetry(gross, literal.to_site_vector())})"
    verdict(2, all(checks.values()), detail)


def test_criterion_03_parity():
    bad = [e.name for e in ENTRIES if not even_parity_ok(entry_code(e), discover_symmetries_gauss(entry_code(e)))]
    verdict(3, not bad, f"odd parity on {bad}" if bad else "all ten codes, every qubit, every generator")


def test_criterion_04_distance_preservation():
    results = {}
    for name in ("TC4", "TC6", "D36", "LC162"):
        code = get_code(name)
        dec = Decoder(code, "symatch")
        fails = 0
        for w in range(1, math.ceil(code.d / 2)):
            E = errors_of_weight(code.n, w)
            fails += int(dec.decode_batch(syndrome(code, E), E).failed.sum())
        results[name] = fails
    verdict(4, not any(results.values()), f"failures below d/2: {results}")


@pytest.mark.slow
def test_criterion_05_bp_rows():
    variants = ("bp-symatch", "bp-simplex-symatch", "bp-lr-symatch", "bp-lr-simplex-symatch")
    found = {}
    for w in (2, 3):
        for r in run_exhaustive(ExhaustSpec("gross", variants, w)):
            found[(r.decoder, w)] = (r.failures_vertical, r.failures_horizontal)
    ok = all(v == (0, 0) for v in found.values())
    verdict(5, ok, "; ".join(f"{d} w{w}: {v}" for (d, w), v in found.items()))


def test_criterion_06_tie_break_rows():
    recs = {r.decoder: r for r in run_exhaustive(ExhaustSpec("gross", "symatch,simplex-symatch", 2))}
    within = lambda got, ref: ref / 2 <= got <= ref * 2  # noqa: E731
    sym, sim = recs["symatch"], recs["simplex-symatch"]
    ok = (within(sym.failures_vertical, 81) and within(sym.failures_horizontal, 296)
          and within(sim.failures_vertical, 10) and sim.failures_horizontal <= 2)
    verdict(6, ok, f"symatch ({sym.failures_vertical}, {sym.failures_horizontal}) vs (81, 296); "
                   f"simplex-symatch ({sim.failures_vertical}, {sim.failures_horizontal}) vs (10, 0)")


def test_criterion_07_simplex():
    rng = np.random.default_rng(2024)
    bad = {}
    for K in (3, 4, 5, 6):
        n = 2 ** K - 1
        t = (2 ** (K - 1) - 1) // 2
        cw = codewords(K)
        gens = np.array([[(g >> j) & 1 for j in range(K)] for g in range(1 << K)], np.uint8)
        if K <= 4:
            words, truth = [], []
            for g in range(1 << K):
                for w in range(t + 1):
                    for flips in combinations(range(n), w):
                        x = cw[g].copy()
                        x[list(flips)] ^= 1
                        words.append(x)
                        truth.append(gens[g])
            words, truth = np.array(words), np.array(truth)
        else:
            g = rng.integers(0, 1 << K, 100_000)
            words = cw[g].copy()
            truth = gens[g]
            for i in range(words.shape[0]):
                w = rng.integers(0, t + 1)
                words[i, rng.choice(n, w, replace=False)] ^= 1
        wrong = int((simplex_outer_decode_batch(words) != truth).any(axis=1).sum())
        bad[K] = (wrong, words.shape[0])
    verdict(7, all(w == 0 for w, _ in bad.values()),
            "wrong/decoded per K: " + ", ".join(f"K={K}: {w}/{n}" for K, (w, n) in bad.items()))


def test_criterion_08_matching_optimality():
    rng = np.random.default_rng(8)
    mismatches, total = 0, 0
    for e in ENTRIES:
        code = entry_code(e)
        graphs = [build_symmetry_graph(code, s) for s in discover_symmetries_gauss(code)]
        for trial in range(1000):
            g = graphs[trial % len(graphs)]
            if trial % 2:
                g = reweight(g, rng.integers(1, 10, code.n).astype(float))
            G = symmetry_graph_nx(g)
            comp = max(nx.connected_components(G), key=len)
            size = int(rng.choice(np.arange(0, min(12, len(comp)) + 1, 2)))
            defects = sorted(rng.choice(sorted(comp), size, replace=False).tolist())
            lengths = shortest_lengths(G, defects)
            best = min_pairing_cost([[lengths[a][b] for b in defects] for a in defects])
            mismatches += match(g, defects).total_weight != best
            total += 1
    verdict(8, mismatches == 0, f"{mismatches} of {total} defect sets differ from the brute-force pairing")


@pytest.mark.slow
def test_criterion_09_decoder_ordering():
    spec = SweepSpec("gross", "symatch,simplex-symatch,bp-symatch,bp-simplex-symatch,correlated-symatch",
                     (0.04,), 100_000, seed=7)
    pts = {p.decoder: p for p in run_sweep(spec)}

    def beyond(lo, hi):
        a, b = pts[lo], pts[hi]
        return b.LER - a.LER > 2 * math.hypot(a.stderr, b.stderr)

    pairs = [("bp-simplex-symatch", "bp-symatch"), ("bp-symatch", "symatch"),
             ("correlated-symatch", "simplex-symatch")]
    ok = all(beyond(lo, hi) for lo, hi in pairs)
    detail = "; ".join(f"{d}={p.LER:.5f}±{p.stderr:.5f}" for d, p in pts.items())
    detail += " | " + ", ".join(f"{lo}<{hi}:{beyond(lo, hi)}" for lo, hi in pairs)
    verdict(9, ok, detail)


def test_criterion_10_topology():
    tc = anyon_analysis(get_code("TC4"))
    gross = anyon_analysis(get_code("gross"))
    two = anyon_analysis(build_code("1 + x^2", "1 + y", (8, 8, 0)))
    checks = {
        "toric K=1 Rx=Ry=1": (tc.K, tc.Rx, tc.Ry) == (1, 1, 1),
        "gross K=6": gross.K == 6,
        "two-copy K=2": two.K == 2,
    }
    detail = ", ".join(f"{k}:{v}" for k, v in checks.items())
    detail += f" (gross computed K={gross.K}, Rx={gross.Rx}, Ry={gross.Ry})"
    verdict(10, all(checks.values()), detail)


def test_criterion_11_infrastructure(gross, monkeypatch):
    checks = {}
    dec = Decoder(gross, "symatch")
    E = (np.random.default_rng(11).random((64, 144)) < 0.05).astype(np.uint8)
    S = syndrome(gross, E)
    out = dec.decode_batch(S, E)
    checks["H_Z·C=s"] = np.array_equal(syndrome(gross, out.corrections), S)
    # the guard fires when the assembled correction is wrong
    monkeypatch.setattr(dec.ctx, "assemble", lambda s, v, h: np.zeros((len(s), 144), np.uint8))
    try:
        dec.decode_batch(S, E)
        checks["guard"] = False
    except AssertionError:
        checks["guard"] = True
    monkeypatch.undo()
    spec = SweepSpec("gross", "symatch,bp-simplex-symatch", (0.02, 0.05), 520, seed=3)
    runs = [[vars(p) for p in run_sweep(spec, workers=w)] for w in (1, 4, 16)]
    checks["workers 1/4/16"] = runs[0] == runs[1] == runs[2]
    doc = make_document(spec, run_sweep(spec), build="acceptance")
    rows = records_from_csv(to_csv(doc))
    checks["json↔csv"] = all(row[c] == rec[c] for row, rec in zip(rows, doc["records"])
                             for c in ("p", "LER", "stderr", "shots", "failures"))
    checks["json re-emit"] = to_json(json.loads(to_json(doc))) == to_json(doc)
    verdict(11, all(checks.values()), ", ".join(f"{k}:{v}" for k, v in checks.items()))
