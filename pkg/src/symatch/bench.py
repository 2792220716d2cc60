"""Monte Carlo sweeps, exhaustive enumeration and result files.

Randomness is counter based: shot ``i`` of a sweep draws from
``Philox(key=(seed, i))``, so results do not depend on how shots are
split across workers. The same uniforms are thresholded at every p, which
makes the error sets nested in p.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
import os
import subprocess
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import gf2
from .code import BBCode, syndrome
from .decoders import VARIANTS, Decoder, PipelineConfig, _Memo, get_context
from .registry import get_code

DEFAULT_BUDGET = 20_000_000
CHUNK = 256
FAILURE_MODES = ("any-logical", "per-logical")
CSV_COLUMNS = ("code", "decoder", "p", "LER", "stderr", "shots", "failures")


class BudgetExceeded(RuntimeError):
    """Exhaustive enumeration would exceed the pattern budget."""


class ConfigError(ValueError):
    pass


def shot_rng(seed: int, shot: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=np.array([seed, shot], np.uint64)))


def sample_error(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """iid bit flips with probability p."""
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return (rng.random(n) < p).astype(np.uint8)


def worker_count(requested: Optional[int] = None) -> int:
    cap = os.environ.get("SYMATCH_THREADS")
    n = requested if requested is not None else (os.cpu_count() or 1)
    if cap:
        n = min(n, int(cap))
    return max(1, n)


def _parse_decoders(decoders) -> tuple:
    if isinstance(decoders, str):
        decoders = [d.strip() for d in decoders.split(",") if d.strip()]
    out = tuple(decoders)
    for d in out:
        if d not in VARIANTS:
            raise ConfigError(f"unknown decoder {d!r}; choose from {', '.join(VARIANTS)}")
    if not out:
        raise ConfigError("no decoder given")
    return out


def _resolve_code(code) -> BBCode:
    if isinstance(code, BBCode):
        return code
    try:
        return get_code(code)
    except KeyError as exc:
        raise ConfigError(str(exc)) from None


def _run_chunks(tasks, fn, workers):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


def _tally(code, decoders, errors, memo=None):
    """Per decoder: (any, vertical, horizontal, flipped logicals) failure counts."""
    memo = memo or _Memo()
    synd = syndrome(code, errors)
    out = {}
    for dec in decoders:
        res = dec.decode_batch(synd, errors, memo)
        flips = gf2.matmul_mod2(errors ^ res.corrections, dec.ctx.logicals.T)
        out[dec.cfg.variant] = np.array([res.failed.sum(), res.failed_vertical.sum(),
                                         res.failed_horizontal.sum(), flips.sum()], np.int64)
    return out


# ---------------------------------------------------------------- sweeps


@dataclass(frozen=True)
class SweepSpec:
    code: str
    decoders: tuple
    rates: tuple
    shots: int
    seed: int = 0
    mode: str = "any-logical"
    config: dict = field(default_factory=dict)  # extra PipelineConfig fields, BP keys allowed

    def __post_init__(self):
        object.__setattr__(self, "decoders", _parse_decoders(self.decoders))
        object.__setattr__(self, "rates", tuple(float(p) for p in self.rates))
        if self.shots < 1:
            raise ConfigError("shots must be at least 1")
        if not self.rates:
            raise ConfigError("no error rates given")
        for p in self.rates:
            if not 0 <= p < 0.5:
                raise ConfigError(f"error rate {p} outside [0, 0.5)")
        if self.mode not in FAILURE_MODES:
            raise ConfigError(f"mode must be one of {FAILURE_MODES}")
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")


def pipeline_configs(decoders, config: dict | None = None) -> list[PipelineConfig]:
    from .bp import BPConfig

    config = dict(config or {})
    bp_keys = {"bp-method", "max-iters", "ms-scaling-factor", "prior", "bp_method", "max_iters",
               "ms_scaling_factor"}
    bp_cfg = {k: v for k, v in config.items() if k in bp_keys}
    rest = {k.replace("-", "_"): v for k, v in config.items() if k not in bp_keys}
    out = []
    for d in decoders:
        try:
            cfg = PipelineConfig(variant=d, **rest)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None
        if cfg.needs_bp and bp_cfg:
            cfg = PipelineConfig(variant=d, bp=BPConfig.from_mapping(bp_cfg), **rest)
        out.append(cfg)
    # over-matching variants first: generator-only variants then reuse their words
    return sorted(out, key=lambda c: (not c.uses_simplex, c.variant))


@dataclass
class SweepPoint:
    decoder: str
    p: float
    shots: int
    failures: int  # counted per SweepSpec.mode
    LER: float
    stderr: float
    failures_any: int
    failures_vertical: int
    failures_horizontal: int
    logical_flips: int


def _ler(failures: int, trials: int):
    ler = failures / trials
    return ler, math.sqrt(ler * (1 - ler) / trials)


def run_sweep(spec: SweepSpec, workers: Optional[int] = None) -> list[SweepPoint]:
    """LER per (decoder, p). Shots are processed in fixed chunks of shot indices."""
    code = _resolve_code(spec.code)
    decoders = [Decoder(code, c) for c in pipeline_configs(spec.decoders, spec.config)]
    ctx = get_context(code)
    for g in ctx.graphs.values():  # build shared read-only state before threading
        g.full, g.generators
    workers = worker_count(workers)
    chunks = [(a, min(a + CHUNK, spec.shots)) for a in range(0, spec.shots, CHUNK)]

    def run(chunk):
        a, b = chunk
        u = np.stack([shot_rng(spec.seed, i).random(code.n) for i in range(a, b)])
        return [_tally(code, decoders, (u < p).astype(np.uint8)) for p in spec.rates]

    parts = _run_chunks(chunks, run, workers)
    points = []
    for d in decoders:
        name = d.cfg.variant
        for ip, p in enumerate(spec.rates):
            tot = sum(part[ip][name] for part in parts)
            fa, fv, fh, flips = (int(x) for x in tot)
            if spec.mode == "any-logical":
                fails, trials = fa, spec.shots
            else:
                fails, trials = flips, spec.shots * 2 * ctx.K
            ler, se = _ler(fails, trials)
            points.append(SweepPoint(name, p, spec.shots, fails, ler, se, fa, fv, fh, flips))
    order = {v: i for i, v in enumerate(spec.decoders)}
    points.sort(key=lambda pt: (order[pt.decoder], spec.rates.index(pt.p)))
    return points


# ---------------------------------------------------------------- exhaustive


@dataclass(frozen=True)
class ExhaustSpec:
    code: str
    decoders: tuple
    weight: int
    direction: str = "both"
    budget: int = DEFAULT_BUDGET
    extended: bool = False
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "decoders", _parse_decoders(self.decoders))
        if self.weight < 0:
            raise ConfigError("weight must be nonnegative")
        if self.direction not in ("vertical", "horizontal", "both"):
            raise ConfigError("direction must be vertical, horizontal or both")


@dataclass
class ExhaustRecord:
    code: str
    decoder: str
    weight: int
    patterns: int
    failures_vertical: Optional[int]
    failures_horizontal: Optional[int]
    failures_any: int
    fraction_vertical: Optional[float]
    fraction_horizontal: Optional[float]
    fraction_any: float


def _patterns(n, w, start, stop):
    return itertools.islice(itertools.combinations(range(n), w), start, stop)


def run_exhaustive(spec: ExhaustSpec, workers: Optional[int] = None,
                   chunk: int = 4096) -> list[ExhaustRecord]:
    """Decode every weight-w error in lexicographic order and tally failures."""
    code = _resolve_code(spec.code)
    total = math.comb(code.n, spec.weight)
    if total > spec.budget and not spec.extended:
        raise BudgetExceeded(f"C({code.n},{spec.weight}) = {total} patterns exceeds the budget "
                             f"{spec.budget}; pass --extended to run anyway")
    decoders = [Decoder(code, c) for c in pipeline_configs(spec.decoders, spec.config)]
    ctx = get_context(code)
    for g in ctx.graphs.values():
        g.full, g.generators
    workers = worker_count(workers)
    chunks = [(a, min(a + chunk, total)) for a in range(0, total, chunk)]

    def run(bounds):
        a, b = bounds
        E = np.zeros((b - a, code.n), np.uint8)
        if spec.weight:
            idx = np.array(list(_patterns(code.n, spec.weight, a, b)), np.int64)
            E[np.arange(b - a)[:, None], idx] = 1
        return b - a, _tally(code, decoders, E)

    parts = _run_chunks(chunks, run, workers)
    processed = sum(n for n, _ in parts)
    if processed != total:
        raise AssertionError(f"enumerated {processed} patterns, expected {total}")
    out = []
    for name in spec.decoders:
        fa, fv, fh, _ = (int(x) for x in sum((t[name] for _, t in parts), np.zeros(4, np.int64)))
        keep_v = spec.direction in ("vertical", "both")
        keep_h = spec.direction in ("horizontal", "both")
        frac = (lambda x: x / total) if total else (lambda x: 0.0)
        out.append(ExhaustRecord(code.name, name, spec.weight, total,
                                 fv if keep_v else None, fh if keep_h else None, fa,
                                 frac(fv) if keep_v else None, frac(fh) if keep_h else None,
                                 frac(fa)))
    return out


# ---------------------------------------------------------------- output


def git_describe() -> str:
    here = Path(__file__).resolve().parent
    try:
        res = subprocess.run(["git", "describe", "--always", "--dirty"], cwd=here,
                             capture_output=True, text=True, timeout=10)
    except (OSError, subprocess.SubprocessError):
        return "unknown"
    return res.stdout.strip() or "unknown"


def _spec_dict(spec) -> dict:
    d = asdict(spec)
    d["kind"] = "sweep" if isinstance(spec, SweepSpec) else "exhaustive"
    for k, v in d.items():
        if isinstance(v, tuple):
            d[k] = list(v)
    return d


def make_document(spec, records, build: Optional[str] = None) -> dict:
    from . import __version__

    return {
        "spec": None if spec is None else _spec_dict(spec),
        "provenance": {"package": "symatch", "version": __version__,
                       "build": build if build is not None else git_describe()},
        "records": [asdict(r) if not isinstance(r, dict) else dict(r) for r in records],
    }


def to_json(doc: dict) -> str:
    # floats go through repr, which round-trips exactly
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def to_csv(doc: dict) -> str:
    """Plot-ready rows; sweep records only carry the CSV_COLUMNS."""
    buf = io.StringIO()
    records = doc.get("records", [])
    code = (doc.get("spec") or {}).get("code", "")
    is_exhaust = bool(records) and "weight" in records[0]
    cols = list(ExhaustRecord.__dataclass_fields__) if is_exhaust else list(CSV_COLUMNS)
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in records:
        row = dict(r)
        row.setdefault("code", code)
        w.writerow({c: ("" if row.get(c) is None else _fmt(row.get(c))) for c in cols})
    return buf.getvalue()


def _fmt(v):
    return repr(v) if isinstance(v, float) else v


def _parse_cell(v: str):
    if v == "":
        return None
    for cast in (int, float):
        try:
            return cast(v)
        except ValueError:
            pass
    return v


def records_from_csv(text: str) -> list[dict]:
    return [{k: _parse_cell(v) for k, v in row.items()} for row in csv.DictReader(io.StringIO(text))]


def emit_results(doc: dict, path, fmt: Optional[str] = None) -> Path:
    """Write ``doc`` as JSON or CSV; the format defaults to the file suffix."""
    path = Path(path)
    fmt = fmt or ("csv" if path.suffix.lower() == ".csv" else "json")
    if fmt not in ("json", "csv"):
        raise ConfigError(f"unknown output format {fmt!r}")
    path.write_text(to_json(doc) if fmt == "json" else to_csv(doc))
    return path


def load_results(path) -> dict:
    return json.loads(Path(path).read_text())
