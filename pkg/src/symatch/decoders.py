"""Decoder pipelines built on symmetry matching.

Every pipeline estimates, per direction, the commutator bits of the error
with K cylinder logicals, then assembles a correction with exactly those
commutators. Variants differ in how the bits are obtained:

- ``symatch``: one matching per generating symmetry, unit weights.
- ``simplex-symatch``: matchings on all 2^K - 1 combinations, then the
  simplex outer decoder.
- ``lr-*``: first try a BP decode restricted to L or R qubits when the
  syndrome respects all subsymmetries of that side.
- ``bp-*``: edge weights from BP posteriors on the full check matrix.
- ``correlated-symatch``: two rounds; qubits chosen by other symmetries'
  round-one matchings get cheaper in round two.
"""
from __future__ import annotations

import weakref
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import gf2
from .bp import BPConfig, BPResult, classical_side_decode, posterior_costs, side_matrix, tanner
from .code import BBCode, initial_correction, syndrome
from .cylinder import DIRECTIONS, DirectionContext, direction_context
from .matching import GraphBundle, build_bundle, build_symmetry_graph
from .simplex import SimplexWord, simplex_outer_decode, simplex_outer_decode_batch
from .symmetry import MAX_SIMPLEX_K, combine, discover_subsymmetries

BASE_VARIANTS = ("symatch", "simplex-symatch", "lr-symatch", "lr-simplex-symatch")
VARIANTS = BASE_VARIANTS + tuple("bp-" + v for v in BASE_VARIANTS) + ("correlated-symatch",)


@dataclass(frozen=True)
class PipelineConfig:
    variant: str = "symatch"
    bp: Optional[BPConfig] = None
    epsilon: float = 0.5
    w_min: float = 1e-3
    w_max: float = 20.0
    bp_shortcut: bool = False

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown decoder {self.variant!r}; choose from {', '.join(VARIANTS)}")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if not 0 < self.w_min <= self.w_max:
            raise ValueError("need 0 < w_min <= w_max")
        if self.needs_bp and self.bp is None:
            object.__setattr__(self, "bp", BPConfig())

    @property
    def uses_bp_weights(self) -> bool:
        return self.variant.startswith("bp-")

    @property
    def uses_lr(self) -> bool:
        return "lr-" in self.variant

    @property
    def needs_bp(self) -> bool:
        return self.uses_bp_weights or self.uses_lr

    @property
    def uses_simplex(self) -> bool:
        return "simplex" in self.variant or self.variant == "correlated-symatch"

    @property
    def correlated(self) -> bool:
        return self.variant == "correlated-symatch"


@dataclass(frozen=True)
class DecodeOutcome:
    bits: dict  # direction -> decoded commutator bits with that direction's logicals
    correction: np.ndarray
    path: str  # "matching", "lr-L", "lr-R" or "bp"
    flags: Optional[dict] = None  # direction -> per-logical failure flags
    failed_vertical: Optional[bool] = None
    failed_horizontal: Optional[bool] = None
    failed: Optional[bool] = None


@dataclass(frozen=True)
class BatchOutcome:
    bits: dict  # direction -> (shots, K)
    corrections: np.ndarray
    paths: np.ndarray
    failed_vertical: Optional[np.ndarray] = None
    failed_horizontal: Optional[np.ndarray] = None
    failed: Optional[np.ndarray] = None

    def outcome(self, i: int) -> DecodeOutcome:
        fl = None
        if self.failed is not None:
            fl = {"vertical": bool(self.failed_vertical[i]), "horizontal": bool(self.failed_horizontal[i])}
        return DecodeOutcome({d: b[i] for d, b in self.bits.items()}, self.corrections[i],
                             str(self.paths[i]), None,
                             None if fl is None else fl["vertical"],
                             None if fl is None else fl["horizontal"],
                             None if self.failed is None else bool(self.failed[i]))


class DirectionGraphs:
    """Symmetry graphs of one direction, for all 2^K - 1 combinations."""

    def __init__(self, ctx: DirectionContext):
        self.ctx = ctx
        K = ctx.K
        if K > MAX_SIMPLEX_K:
            raise ValueError(f"over-matching is capped at K = {MAX_SIMPLEX_K}")
        self.K = K
        self.generator_index = np.array([(1 << j) - 1 for j in range(K)], np.int64)

    def selector_logical(self, v: int) -> np.ndarray:
        out = np.zeros(self.ctx.work.n, np.uint8)
        for j in range(self.K):
            if (v >> j) & 1:
                out ^= self.ctx.logicals_work[j]
        return out

    @cached_property
    def graphs(self):
        out = []
        for v in range(1, 1 << self.K):
            sym = combine(self.ctx.generators, [(v >> j) & 1 for j in range(self.K)])
            out.append(build_symmetry_graph(self.ctx.work, sym))
        return tuple(out)

    @cached_property
    def full(self) -> GraphBundle:
        logicals = np.array([self.selector_logical(v) for v in range(1, 1 << self.K)], np.uint8)
        return build_bundle(self.graphs, logicals)

    @cached_property
    def generators(self) -> GraphBundle:
        graphs = [build_symmetry_graph(self.ctx.work, g) for g in self.ctx.generators]
        return build_bundle(graphs, self.ctx.logicals_work)


class DecoderContext:
    """Everything a code needs for decoding, computed once and then read-only."""

    def __init__(self, code: BBCode):
        self.code = code
        self.directions = {d: direction_context(code, d) for d in DIRECTIONS}
        self.graphs = {d: DirectionGraphs(c) for d, c in self.directions.items()}
        self.K = self.directions["vertical"].K
        v = self.directions["vertical"].logicals_base
        h = self.directions["horizontal"].logicals_base
        self.logicals = np.vstack([v, h])  # (2K, n): vertical then horizontal
        gram_t = gf2.matmul_mod2(code.x_logicals, self.logicals.T)
        # dual[i] has zero syndrome and anticommutes only with logicals[i]
        self.dual = gf2.matmul_mod2(gf2.inverse(gram_t).to_dense(), code.x_logicals)
        for arr in (self.logicals, self.dual):
            arr.setflags(write=False)

    @cached_property
    def subsymmetries(self) -> dict:
        return {side: np.array([s.sites for s in discover_subsymmetries(self.code, side)], np.uint8)
                .reshape(-1, self.code.sites) for side in ("L", "R")}

    def assemble(self, synd, bits_v, bits_h) -> np.ndarray:
        """Corrections with H_Z·C = s and commutators (bits_v, bits_h) with the logicals."""
        c0 = initial_correction(self.code, synd)
        target = np.concatenate([bits_v, bits_h], axis=-1).astype(np.uint8)
        delta = target ^ gf2.matmul_mod2(c0, self.logicals.T)
        return c0 ^ gf2.matmul_mod2(delta, self.dual)

    def working_costs(self, direction: str, base_costs) -> np.ndarray:
        return np.asarray(base_costs, np.float64)[..., self.directions[direction].fold_map]


_CONTEXTS: "weakref.WeakKeyDictionary[BBCode, DecoderContext]" = weakref.WeakKeyDictionary()


def get_context(code: BBCode) -> DecoderContext:
    ctx = _CONTEXTS.get(code)
    if ctx is None:
        ctx = _CONTEXTS[code] = DecoderContext(code)
    return ctx


class _Memo:
    """Per-batch cache so several variants can share BP runs and matchings."""

    def __init__(self):
        self.store = {}

    def get(self, key, fn):
        if key not in self.store:
            self.store[key] = fn()
        return self.store[key]


class Decoder:
    """A decoder variant bound to one code."""

    def __init__(self, code: BBCode, cfg: PipelineConfig | str = PipelineConfig()):
        if isinstance(cfg, str):
            cfg = PipelineConfig(variant=cfg)
        if cfg.bp is not None and cfg.bp.prior is None:
            cfg = replace(cfg, bp=replace(cfg.bp, prior=cfg.bp.prior_for(code.n)))
        self.code = code
        self.cfg = cfg
        self.ctx = get_context(code)

    # ------------------------------------------------------------ stages

    def _bp(self, synd, memo) -> list:
        key = ("bp", self.cfg.bp)
        graph = tanner(self.code.hz)
        return memo.get(key, lambda: [graph.run(s, self.cfg.bp) for s in synd])

    def _lr(self, synd, memo):
        """(corrections, paths) for shots accepted by the side decoders, else None."""
        key = ("lr", self.cfg.bp)

        def run():
            subs = self.ctx.subsymmetries
            par = {side: gf2.matmul_mod2(synd, subs[side].T).any(axis=1) if subs[side].size
                   else np.zeros(len(synd), bool) for side in ("L", "R")}
            out = []
            for i, s in enumerate(synd):
                found = None
                for side in ("L", "R"):
                    if par[side][i]:
                        continue
                    corr = classical_side_decode(self.code, side, s, self.cfg.bp)
                    if corr is not None:
                        found = (corr, f"lr-{side}")
                        break
                out.append(found)
            return out

        return memo.get(key, run)

    def _uniform_word(self, direction, synd_work, memo, full: bool):
        if full:
            return memo.get(("uniform-full", direction),
                            lambda: self.ctx.graphs[direction].full.uniform_bits(synd_work))
        if ("uniform-full", direction) in memo.store:
            word = memo.store[("uniform-full", direction)]
            return word[:, self.ctx.graphs[direction].generator_index]
        return memo.get(("uniform-gen", direction),
                        lambda: self.ctx.graphs[direction].generators.uniform_bits(synd_work))

    def _bp_word(self, direction, synd_work, memo, full: bool):
        bundle = self.ctx.graphs[direction].full if full else self.ctx.graphs[direction].generators
        key = ("bp-full" if full else "bp-gen", direction, self.cfg.bp, self.cfg.w_min, self.cfg.w_max)
        full_key = ("bp-full",) + key[1:]
        if not full and full_key in memo.store:
            return memo.store[full_key][:, self.ctx.graphs[direction].generator_index]

        def run():
            results = self._bp(memo.store["__synd__"], memo)
            rows = []
            for s_w, res in zip(synd_work, results):
                costs = posterior_costs(res, self.cfg.w_min, self.cfg.w_max)
                bits, _ = bundle.weighted(s_w, self.ctx.working_costs(direction, costs))
                rows.append(bits)
            return np.array(rows, np.uint8).reshape(len(synd_work), bundle.size)

        return memo.get(key, run)

    def _correlated_word(self, direction, synd_work, memo):
        key = ("correlated", direction, self.cfg.epsilon, self.cfg.w_min)

        def run():
            bundle = self.ctx.graphs[direction].full
            rows = []
            for s_w in synd_work:
                costs = self.correlated_costs(direction, s_w)
                bits, _ = bundle.weighted(s_w, costs)
                rows.append(bits)
            return np.array(rows, np.uint8).reshape(len(synd_work), bundle.size)

        return memo.get(key, run)

    def correlated_costs(self, direction, synd_work) -> np.ndarray:
        """(G, n_work) round-two costs: 1 - ε per other graph whose round-one
        matching used the qubit, clamped at w_min."""
        bundle = self.ctx.graphs[direction].full
        sets = bundle.uniform_qubit_sets(synd_work).astype(np.int64)
        others = sets.sum(axis=0)[None, :] - sets
        return np.maximum(1.0 - self.cfg.epsilon * others, self.cfg.w_min)

    def direction_bits(self, direction, synd, memo=None) -> np.ndarray:
        """Decoded generator bits (shots, K) for one direction."""
        memo = memo or _Memo()
        memo.store["__synd__"] = synd
        synd_work = self.ctx.directions[direction].duplicate_syndrome(synd)
        cfg = self.cfg
        if cfg.correlated:
            word = self._correlated_word(direction, synd_work, memo)
        elif cfg.uses_bp_weights:
            word = self._bp_word(direction, synd_work, memo, cfg.uses_simplex)
        else:
            word = self._uniform_word(direction, synd_work, memo, cfg.uses_simplex)
        if cfg.uses_simplex:
            return simplex_outer_decode_batch(word)
        return word

    def words(self, direction, synd, memo=None) -> np.ndarray:
        """Raw over-matched words (shots, 2^K - 1) under this variant's weights."""
        memo = memo or _Memo()
        memo.store["__synd__"] = synd
        synd_work = self.ctx.directions[direction].duplicate_syndrome(synd)
        if self.cfg.correlated:
            return self._correlated_word(direction, synd_work, memo)
        if self.cfg.uses_bp_weights:
            return self._bp_word(direction, synd_work, memo, True)
        return self._uniform_word(direction, synd_work, memo, True)

    # ------------------------------------------------------------ decoding

    def decode_batch(self, synd, errors=None, memo=None) -> BatchOutcome:
        synd = np.ascontiguousarray(np.atleast_2d(synd), dtype=np.uint8)
        memo = memo or _Memo()
        memo.store["__synd__"] = synd
        shots = synd.shape[0]
        bits = {d: self.direction_bits(d, synd, memo) for d in DIRECTIONS}
        corr = self.ctx.assemble(synd, bits["vertical"], bits["horizontal"])
        paths = np.full(shots, "matching", dtype=object)
        if self.cfg.uses_lr:
            for i, found in enumerate(self._lr(synd, memo)):
                if found is not None:
                    corr[i], paths[i] = found
        if self.cfg.bp_shortcut and self.cfg.uses_bp_weights:
            for i, res in enumerate(self._bp(synd, memo)):
                if res.converged and paths[i] == "matching":
                    corr[i], paths[i] = res.hard_decision, "bp"
        if not np.array_equal(syndrome(self.code, corr), synd):
            raise AssertionError("assembled correction does not reproduce the syndrome")
        # bits actually realized by the correction (differs from the matched bits on LR/BP paths)
        realized = gf2.matmul_mod2(corr, self.ctx.logicals.T)
        K = self.ctx.K
        bits = {"vertical": realized[:, :K], "horizontal": realized[:, K:]}
        if errors is None:
            return BatchOutcome(bits, corr, paths)
        errors = np.atleast_2d(np.asarray(errors, np.uint8))
        residual = errors ^ corr
        flags = gf2.matmul_mod2(residual, self.ctx.logicals.T)
        fv = flags[:, :K].any(axis=1)
        fh = flags[:, K:].any(axis=1)
        fa = gf2.matmul_mod2(residual, self.code.z_logicals.T).any(axis=1)
        return BatchOutcome(bits, corr, paths, fv, fh, fa)

    def decode(self, s, error=None) -> DecodeOutcome:
        out = self.decode_batch(np.asarray(s)[None, :], None if error is None else np.asarray(error)[None, :])
        res = out.outcome(0)
        if error is None:
            return res
        residual = np.asarray(error, np.uint8) ^ res.correction
        flags = gf2.matmul_mod2(self.ctx.logicals, residual)
        K = self.ctx.K
        return replace(res, flags={"vertical": flags[:K], "horizontal": flags[K:]})


def decode_many(code: BBCode, synd, cfgs: Sequence[PipelineConfig], errors=None) -> dict:
    """Run several variants on the same batch, sharing BP runs and matchings."""
    memo = _Memo()
    return {cfg.variant: Decoder(code, cfg).decode_batch(synd, errors, memo) for cfg in cfgs}


# ---------------------------------------------------------------- functional API


def _cfg(cfg, variant):
    if cfg is None:
        return PipelineConfig(variant=variant)
    return replace(cfg, variant=variant) if cfg.variant != variant else cfg


def decode(code: BBCode, s, cfg: PipelineConfig = PipelineConfig(), error=None) -> DecodeOutcome:
    return Decoder(code, cfg).decode(s, error)


def symatch_decode(code: BBCode, s, cfg: Optional[PipelineConfig] = None, error=None) -> DecodeOutcome:
    return Decoder(code, _cfg(cfg, "symatch")).decode(s, error)


def correlated_symatch(code: BBCode, s, cfg: Optional[PipelineConfig] = None, error=None) -> DecodeOutcome:
    return Decoder(code, _cfg(cfg, "correlated-symatch")).decode(s, error)


def simplex_encode_and_match(code: BBCode, s, cfg: Optional[PipelineConfig] = None) -> dict:
    """Per direction, the over-matched word b[v] for all nonzero selectors v."""
    cfg = cfg or PipelineConfig(variant="simplex-symatch")
    dec = Decoder(code, cfg)
    s = np.asarray(s, np.uint8)[None, :]
    return {d: SimplexWord(dec.ctx.K, dec.words(d, s)[0].astype(np.uint8)) for d in DIRECTIONS}


def lr_preprocess(code: BBCode, s, cfg: Optional[PipelineConfig] = None):
    """Side-only correction when the syndrome respects one side's subsymmetries
    and BP there succeeds; None means fall through to matching."""
    dec = Decoder(code, _cfg(cfg, "lr-symatch"))
    found = dec._lr(np.asarray(s, np.uint8)[None, :], _Memo())[0]
    return None if found is None else found[0]


__all__ = [
    "VARIANTS", "PipelineConfig", "DecodeOutcome", "BatchOutcome", "Decoder", "DecoderContext",
    "get_context", "decode", "decode_many", "symatch_decode", "correlated_symatch",
    "simplex_encode_and_match", "simplex_outer_decode", "lr_preprocess", "side_matrix",
    "BPResult",
]
