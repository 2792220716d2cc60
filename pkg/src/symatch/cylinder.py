"""Logical operators from symmetries by cutting the torus into a cylinder.

For a symmetry Σ and a band U of the torus, the product P of the checks in
Σ ∩ U is supported only near the two edges of the band. The part near the
edge at coordinate 0 is a Z-logical L̄ whose commutation with an error is
read off a matching on Σ.

Vertical direction: the band is cut along lines of constant
``u = (j*N - alpha*k) mod MN`` (constant x on untwisted tori), so L̄ wraps in
y. Horizontal direction: the band is cut at constant ``k``, so L̄ wraps in x.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2
from .code import BBCode
from .lattice import TorusShape
from .symmetry import Symmetry, discover_symmetries_gauss

DIRECTIONS = ("vertical", "horizontal")

ZONE_INTERIOR = -1
ZONE_ORIGIN = 0
ZONE_CUT = 1
ZONE_AMBIGUOUS = 2


class SplitFailure(ValueError):
    """P does not separate into two logicals at this size."""


class RecursionLimit(RuntimeError):
    """Doubling did not yield enough independent logicals."""


def _check_direction(direction):
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction!r}")


def axis_geometry(shape: TorusShape, direction: str):
    """(coordinate of each site, period, default cut, displacement function)."""
    _check_direction(direction)
    j, k = shape.coords(np.arange(shape.sites))
    if direction == "vertical":
        per = shape.sites
        coord = (j * shape.N - shape.alpha * k) % per
        disp = lambda dj, dk: dj * shape.N - shape.alpha * dk  # noqa: E731
    else:
        per = shape.N
        coord = k.copy()
        disp = lambda dj, dk: dk  # noqa: E731
    return coord, per, per // 2, disp


def stabilizer_extent(code: BBCode, direction: str) -> float:
    """Spread r of the check support along the cut axis, in lattice units."""
    shape = code.shape
    _, _, _, disp = axis_geometry(shape, direction)
    scale = shape.N if direction == "vertical" else 1
    d = [disp(dj, dk) / scale for dj, dk in code.a_terms + code.b_terms]
    return max(d) - min(d)


def qubit_zones(code: BBCode, direction: str, cut: int | None = None) -> np.ndarray:
    """Classify qubits by which band edges their checks straddle.

    A qubit straddles an edge at coordinate b when its checks have
    coordinates on both sides of b. Qubits touching only the edge at 0 are
    ZONE_ORIGIN, only the cut edge ZONE_CUT, both ZONE_AMBIGUOUS, neither
    ZONE_INTERIOR.
    """
    coord, per, default_cut, disp = axis_geometry(code.shape, direction)
    cut = default_cut if cut is None else cut
    zones = np.full(code.n, ZONE_INTERIOR, np.int8)
    mn = code.sites
    for block, terms in ((0, code.a_terms), (1, code.b_terms)):
        # a qubit at u is touched by checks at u - disp(term)
        offs = np.array([-disp(dj, dk) for dj, dk in terms])
        lo = coord + offs.min()
        hi = coord + offs.max()
        t_lo = np.floor_divide(lo, per) - 1
        t_hi = np.floor_divide(hi, per) + 1
        origin = np.zeros(mn, bool)
        edge = np.zeros(mn, bool)
        for t in range(int(t_lo.min()), int(t_hi.max()) + 1):
            b0 = t * per
            origin |= (lo < b0) & (b0 <= hi)
            b1 = t * per + cut
            edge |= (lo < b1) & (b1 <= hi)
        z = np.full(mn, ZONE_INTERIOR, np.int8)
        z[origin & ~edge] = ZONE_ORIGIN
        z[edge & ~origin] = ZONE_CUT
        z[origin & edge] = ZONE_AMBIGUOUS
        zones[block * mn:(block + 1) * mn] = z
    return zones


def band(code: BBCode, direction: str, cut: int | None = None) -> np.ndarray:
    coord, _, default_cut, _ = axis_geometry(code.shape, direction)
    cut = default_cut if cut is None else cut
    return (coord < cut).astype(np.uint8)


@dataclass(frozen=True, eq=False)
class CylinderResult:
    direction: str
    cut: int
    logical: np.ndarray  # P1, near the band edge at coordinate 0
    partner: np.ndarray  # P2, near the cut
    product: np.ndarray  # P = P1 + P2
    trivial: bool  # P1 lies in the row space of H_Z
    used_doubling: bool = False
    doubling_factor: int = 1


def cylinder_trick(code: BBCode, sym, direction: str, cut: int | None = None) -> CylinderResult:
    """Split the band product of ``sym`` into its two edge logicals on ``code``."""
    sites = np.asarray(sym.sites if isinstance(sym, Symmetry) else sym, np.uint8)
    if not sites.any():
        raise ValueError("empty symmetry has no cylinder logical")
    if gf2.matmul_mod2(sites, code.hz_dense).any():
        raise ValueError("site set is not a symmetry")
    _, _, default_cut, _ = axis_geometry(code.shape, direction)
    cut = default_cut if cut is None else cut
    zones = qubit_zones(code, direction, cut)
    P = gf2.matmul_mod2(sites & band(code, direction, cut), code.hz_dense)
    bad = P.astype(bool) & ((zones == ZONE_AMBIGUOUS) | (zones == ZONE_INTERIOR))
    if bad.any():
        raise SplitFailure(f"{int(bad.sum())} qubits of P cannot be assigned to one edge")
    P1 = (P & (zones == ZONE_ORIGIN)).astype(np.uint8)
    P2 = (P & (zones == ZONE_CUT)).astype(np.uint8)
    if gf2.matmul_mod2(code.hx_dense, P1).any():
        raise SplitFailure("edge operator does not commute with the X-checks")
    trivial = gf2.in_rowspace(code.hz_dense, P1)
    for arr in (P1, P2, P):
        arr.setflags(write=False)
    return CylinderResult(direction, cut, P1, P2, P, trivial)


# ---------------------------------------------------------------- doubling


def doubled_shape(shape: TorusShape, direction: str) -> TorusShape:
    """Double the axis that the cut crosses.

    Vertical cuts cross x: (2M, N, α). Horizontal cuts cross y: the torus
    (M, 2N, 2α mod M) is the one that covers (M, N, α), since
    x^(2α) y^(2N) = (x^α y^N)^2 = 1.
    """
    _check_direction(direction)
    if direction == "vertical":
        return TorusShape(2 * shape.M, shape.N, shape.alpha)
    return TorusShape(shape.M, 2 * shape.N, (2 * shape.alpha) % shape.M)


def site_fold_map(base: TorusShape, work: TorusShape) -> np.ndarray:
    """Working site index -> base site index (q_base = Σ q_{j,k} x^j y^k)."""
    j, k = work.coords(np.arange(work.sites))
    bj, bk = base.canonicalize_array(j, k)
    return (bk * base.M + bj).astype(np.int64)


def qubit_fold_map(base: TorusShape, work: TorusShape) -> np.ndarray:
    s = site_fold_map(base, work)
    return np.concatenate([s, s + base.sites])


def fold(vec, fold_map, n_base) -> np.ndarray:
    out = np.zeros(n_base, np.uint8)
    np.bitwise_xor.at(out, fold_map, np.asarray(vec, np.uint8))
    return out


@dataclass(frozen=True, eq=False)
class DoubledContext:
    code: BBCode
    fold_map: np.ndarray  # working qubit -> base qubit
    site_map: np.ndarray  # working site -> base site

    def duplicate_syndrome(self, s) -> np.ndarray:
        return np.asarray(s, np.uint8)[..., self.site_map]

    def fold(self, vec) -> np.ndarray:
        n_base = int(self.fold_map.max()) + 1 if self.fold_map.size else 0
        return fold(vec, self.fold_map, n_base)


def doubled_decode_context(code: BBCode, direction: str, base: BBCode | None = None) -> DoubledContext:
    """Double ``code`` across ``direction``; maps fold back to ``base`` (default ``code``)."""
    base = code if base is None else base
    shape = doubled_shape(code.shape, direction)
    work = code.relift(shape, name=f"{code.name or 'code'}x2{direction[0]}")
    return DoubledContext(work, qubit_fold_map(base.shape, shape), site_fold_map(base.shape, shape))


@dataclass(frozen=True, eq=False)
class DirectionContext:
    direction: str
    base: BBCode
    work: BBCode
    doublings: int
    fold_map: np.ndarray
    site_map: np.ndarray
    generators: tuple  # working-code symmetries, one per logical
    logicals_work: np.ndarray  # (K, n_work) P1 of each generator
    logicals_base: np.ndarray  # (K, n_base) folded P1
    cut: int

    @property
    def K(self) -> int:
        return len(self.generators)

    def duplicate_syndrome(self, s) -> np.ndarray:
        return np.asarray(s, np.uint8)[..., self.site_map]


def _select(base, work, fold_map, direction, K):
    """Greedy choice of working symmetries whose folded logicals are independent."""
    gens, p_work, p_base = [], [], []
    basis = base.hz_dense
    current = base.rank_hz
    for sym in discover_symmetries_gauss(work):
        try:
            res = cylinder_trick(work, sym, direction)
        except SplitFailure:
            continue
        folded = fold(res.logical, fold_map, base.n)
        if gf2.matmul_mod2(base.hx_dense, folded).any():
            continue
        cand = np.vstack([basis, folded[None, :]])
        r = gf2.rank(cand)
        if r == current:
            continue
        basis, current = cand, r
        gens.append(sym)
        p_work.append(res.logical)
        p_base.append(folded)
        if len(gens) == K:
            break
    return gens, p_work, p_base


def direction_context(base: BBCode, direction: str, max_doublings: int = 3) -> DirectionContext:
    """Working code, generating symmetries and logicals for one direction.

    The cut axis is doubled while half its length is within the stabilizer
    spread, and further while fewer than K independent logicals result.
    """
    _check_direction(direction)
    K = base.k // 2
    shape = base.shape
    doublings = 0
    axis_len = lambda s: s.M if direction == "vertical" else s.N  # noqa: E731
    extent = stabilizer_extent(base, direction)
    while axis_len(shape) / 2 <= extent and doublings < max_doublings:
        shape = doubled_shape(shape, direction)
        doublings += 1
    while True:
        if doublings == 0:
            work = base
        else:
            work = base.relift(shape, name=f"{base.name or 'code'}x{2 ** doublings}{direction[0]}")
        fmap = qubit_fold_map(base.shape, shape)
        gens, p_work, p_base = _select(base, work, fmap, direction, K)
        if len(gens) == K:
            break
        if doublings >= max_doublings:
            raise RecursionLimit(
                f"{direction}: only {len(gens)} of {K} logicals after {doublings} doublings")
        shape = doubled_shape(shape, direction)
        doublings += 1
    lw = np.array(p_work, np.uint8).reshape(K, work.n)
    lb = np.array(p_base, np.uint8).reshape(K, base.n)
    lw.setflags(write=False)
    lb.setflags(write=False)
    _, _, cut, _ = axis_geometry(shape, direction)
    return DirectionContext(direction, base, work, doublings, fmap,
                            site_fold_map(base.shape, shape), tuple(gens), lw, lb, cut)


def logical_pairs(code: BBCode, contexts=None):
    """K (horizontal, vertical) pairs of base-code Z-logicals.

    The 2K operators are checked to be independent and to span the same
    space as the linear-algebra Z-logicals modulo stabilizers.
    """
    if contexts is None:
        contexts = {d: direction_context(code, d) for d in DIRECTIONS}
    v = contexts["vertical"].logicals_base
    h = contexts["horizontal"].logicals_base
    stacked = np.vstack([v, h])
    r0 = code.rank_hz
    if gf2.rank(np.vstack([code.hz_dense, stacked])) != r0 + code.k:
        raise SplitFailure("cylinder logicals do not span all logical classes")
    if gf2.rank(np.vstack([code.hz_dense, code.z_logicals, stacked])) != r0 + code.k:
        raise SplitFailure("cylinder logicals leave the Z-logical span")
    return [(h[i], v[i]) for i in range(v.shape[0])]
