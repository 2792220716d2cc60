"""Min-sum belief propagation on Tanner graphs."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .code import BBCode
from .gf2 import BinaryMatrix, matmul_mod2

POSTERIOR_FLOOR = 1e-12


@dataclass(frozen=True)
class BPConfig:
    method: str = "minsum"
    max_iters: int = 1000
    ms_scaling_factor: float = 0.0  # 0 selects the dynamic factor 1 - 2^-t
    prior: Optional[float] = None  # None means 3/n

    def __post_init__(self):
        if self.method not in ("minsum", "min-sum", "min_sum"):
            raise ValueError(f"only min-sum BP is supported, got {self.method!r}")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.prior is not None and not 0 < self.prior < 1:
            raise ValueError(f"prior must lie in (0, 1), got {self.prior}")
        if self.ms_scaling_factor < 0:
            raise ValueError("ms_scaling_factor must be nonnegative")

    def prior_for(self, n: int) -> float:
        return 3.0 / n if self.prior is None else self.prior

    @classmethod
    def from_mapping(cls, cfg: dict) -> "BPConfig":
        """Accepts keys ``bp-method``, ``max-iters``, ``ms-scaling-factor``, ``prior``."""
        key = lambda k: k.replace("-", "_")  # noqa: E731
        raw = {key(k): v for k, v in cfg.items()}
        kw = {}
        if "bp_method" in raw or "method" in raw:
            kw["method"] = raw.get("bp_method", raw.get("method"))
        if "max_iters" in raw:
            kw["max_iters"] = int(raw["max_iters"])
        if "ms_scaling_factor" in raw:
            kw["ms_scaling_factor"] = float(raw["ms_scaling_factor"])
        if raw.get("prior") is not None:
            p = raw["prior"]
            if isinstance(p, str) and "/" in p:
                num, den = p.split("/")
                p = float(num) / float(den)
            kw["prior"] = float(p)
        return cls(**kw)


@dataclass(frozen=True)
class BPResult:
    converged: bool
    iterations: int
    llr: np.ndarray
    hard_decision: np.ndarray

    @property
    def posteriors(self) -> np.ndarray:
        """Probability that each bit is flipped."""
        with np.errstate(over="ignore"):
            return 1.0 / (1.0 + np.exp(self.llr))


@dataclass(frozen=True, eq=False)
class TannerGraph:
    """CSR views of a parity-check matrix for the BP kernels."""

    rows: int
    cols: int
    dense: np.ndarray = field(repr=False)
    chk_ptr: np.ndarray = field(repr=False)
    chk_q: np.ndarray = field(repr=False)
    var_ptr: np.ndarray = field(repr=False)
    var_edge: np.ndarray = field(repr=False)

    @classmethod
    def from_matrix(cls, H) -> "TannerGraph":
        dense = H.to_dense() if isinstance(H, BinaryMatrix) else np.asarray(H, np.uint8)
        r, c = np.nonzero(dense)
        chk_ptr = np.zeros(dense.shape[0] + 1, np.int64)
        np.cumsum(np.bincount(r, minlength=dense.shape[0]), out=chk_ptr[1:])
        chk_q = c.astype(np.int64)
        order = np.argsort(chk_q, kind="stable")
        var_ptr = np.zeros(dense.shape[1] + 1, np.int64)
        np.cumsum(np.bincount(chk_q, minlength=dense.shape[1]), out=var_ptr[1:])
        return cls(dense.shape[0], dense.shape[1], dense, chk_ptr, chk_q, var_ptr,
                   order.astype(np.int64))

    def run(self, s, cfg: BPConfig) -> BPResult:
        s = np.ascontiguousarray(s, dtype=np.uint8)
        if s.shape != (self.rows,):
            raise ValueError(f"syndrome has shape {s.shape}, expected ({self.rows},)")
        p = cfg.prior_for(self.cols)
        llr0 = np.full(self.cols, np.log((1 - p) / p))
        post, hard, conv, its = kernels.bp_minsum(self.chk_ptr, self.chk_q, self.var_ptr,
                                                  self.var_edge, s, llr0, int(cfg.max_iters),
                                                  float(cfg.ms_scaling_factor))
        hard = np.asarray(hard, np.uint8)
        if conv and not np.array_equal(matmul_mod2(self.dense, hard), s):
            raise AssertionError("BP reported convergence with a wrong syndrome")
        return BPResult(bool(conv), int(its), np.asarray(post), hard)


_TANNER_CACHE: dict = {}


def tanner(H) -> TannerGraph:
    M = H if isinstance(H, BinaryMatrix) else BinaryMatrix.from_dense(np.asarray(H, np.uint8))
    key = hash(M)
    graph = _TANNER_CACHE.get(key)
    if graph is None:
        graph = _TANNER_CACHE[key] = TannerGraph.from_matrix(M)
    return graph


def bp_decode(H, s, cfg: BPConfig = BPConfig()) -> BPResult:
    return tanner(H).run(s, cfg)


def posterior_costs(result: BPResult, w_min: float = 1e-3, w_max: float = 20.0) -> np.ndarray:
    """Per-qubit matching weights ln((1-p)/p), clamped to [w_min, w_max]."""
    p = np.clip(result.posteriors, POSTERIOR_FLOOR, 1 - POSTERIOR_FLOOR)
    return np.clip(np.log((1 - p) / p), w_min, w_max)


def side_matrix(code: BBCode, side: str) -> np.ndarray:
    side = side.upper()
    if side == "L":
        return code.a_mat
    if side == "R":
        return code.b_mat
    raise ValueError(f"side must be 'L' or 'R', got {side!r}")


def classical_side_decode(code: BBCode, side: str, s, cfg: BPConfig = BPConfig(),
                          d: Optional[int] = None) -> Optional[np.ndarray]:
    """BP on H = [A|0] (side L) or [0|B] (side R).

    Returns the full-length correction when BP converges to weight < d/2,
    otherwise None (reject, fall back to matching).
    """
    d = code.d if d is None else d
    if d is None:
        raise ValueError("side decoding needs the code distance")
    graph = tanner(side_matrix(code, side))
    res = graph.run(s, cfg)
    if not res.converged or 2 * int(res.hard_decision.sum()) >= d:
        return None
    out = np.zeros(code.n, np.uint8)
    off = 0 if side.upper() == "L" else code.sites
    out[off:off + code.sites] = res.hard_decision
    return out
