"""Anyon content of a bivariate bicycle code from string segments on ribbons.

Strings are computed on a finite patch of the infinite plane, using only
the polynomial terms of the code, so the result does not depend on the
torus the code was built on. A patch that the ribbons never wrap around
behaves like a torus four times the ribbon size in each direction.

Horizontal segments are X-type and must commute with the Z-checks of the
horizontal ribbon; vertical segments are Z-type and commute with the
X-checks of the vertical ribbon. The X-sector follows from A <-> B duality.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .code import BBCode
from .lattice import TorusShape

ORDER_CAP = 1 << 12
MAX_TORUS_SITES = 6000


class RegionTooSmall(ValueError):
    """Ribbon too small to give a stable set of string segments."""


class OrderSearchExceeded(RuntimeError):
    """The translation action has order above the search cap."""


class TorusTooLarge(ValueError):
    """The unfrustrated torus is too big for dense symmetry counting."""


def _terms(code_or_terms):
    if isinstance(code_or_terms, BBCode):
        return tuple(code_or_terms.a_terms), tuple(code_or_terms.b_terms)
    a, b = code_or_terms
    return tuple(map(tuple, a)), tuple(map(tuple, b))


def stabilizer_diameter(a_terms, b_terms) -> int:
    t = np.array(list(a_terms) + list(b_terms))
    return int(max(np.ptp(t[:, 0]), np.ptp(t[:, 1])))


@dataclass(frozen=True)
class Frame:
    """Rectangular patch of the plane; qubit index = side*W*H + (y-y0)*W + (x-x0)."""

    x0: int
    y0: int
    W: int
    H: int

    @property
    def n(self) -> int:
        return 2 * self.W * self.H

    def index(self, side, x, y):
        return side * self.W * self.H + (y - self.y0) * self.W + (x - self.x0)

    def contains(self, x, y):
        return (x >= self.x0) & (x < self.x0 + self.W) & (y >= self.y0) & (y < self.y0 + self.H)

    def shift(self, vecs, dx: int, dy: int) -> np.ndarray:
        """Translate qubit vectors by x^dx y^dy; support must stay in the frame."""
        vecs = np.atleast_2d(np.asarray(vecs, np.uint8))
        grid = vecs.reshape(vecs.shape[0], 2, self.H, self.W)
        out = np.zeros_like(grid)
        ys = slice(max(dy, 0), self.H + min(dy, 0))
        xs = slice(max(dx, 0), self.W + min(dx, 0))
        ys_src = slice(max(-dy, 0), self.H + min(-dy, 0))
        xs_src = slice(max(-dx, 0), self.W + min(-dx, 0))
        out[:, :, ys, xs] = grid[:, :, ys_src, xs_src]
        if out.sum() != grid.sum():
            raise RegionTooSmall("shifted segment leaves the frame")
        return out.reshape(vecs.shape)


@dataclass(frozen=True)
class RibbonRegion:
    orientation: str  # "horizontal" or "vertical"
    length: int
    width: int
    end_strip: int
    origin: tuple = (0, 0)

    def __post_init__(self):
        if self.orientation not in ("horizontal", "vertical"):
            raise ValueError(f"orientation must be horizontal or vertical, got {self.orientation!r}")
        if min(self.length, self.width, self.end_strip) < 0:
            raise ValueError("ribbon sizes must be nonnegative")

    @property
    def empty(self) -> bool:
        return self.length == 0 or self.width == 0

    def sites(self):
        """(x, y, along) coordinates of every site, ``along`` measured along the ribbon."""
        a, w = np.meshgrid(np.arange(self.length), np.arange(self.width), indexing="ij")
        a, w = a.ravel(), w.ravel()
        x0, y0 = self.origin
        if self.orientation == "horizontal":
            return x0 + a, y0 + w, a
        return x0 + w, y0 + a, a

    def in_end_strip(self, along):
        return (along < self.end_strip) | (along >= self.length - self.end_strip)

    def enforced_checks(self, check_terms, frame: Frame):
        """Checks touching the ribbon outside its end strips.

        ``check_terms`` lists (side, dx, dy): the check at c acts on qubit
        ``side`` at c + (dx, dy). Returns, per enforced check, the frame
        indices of its qubits inside the ribbon.
        """
        x, y, along = self.sites()
        inside = np.zeros(frame.n, bool)
        inner = np.zeros(frame.n, bool)
        for side in (0, 1):
            q = frame.index(side, x, y)
            inside[q] = True
            inner[q[~self.in_end_strip(along)]] = True
        cands = set()
        for side, dx, dy in check_terms:
            cands.update(zip((x - dx).tolist(), (y - dy).tolist()))
        rows = []
        for cx, cy in sorted(cands):
            support = []
            for side, dx, dy in check_terms:
                qx, qy = cx + dx, cy + dy
                if frame.contains(qx, qy):
                    qi = frame.index(side, qx, qy)
                    if inside[qi]:
                        support.append(qi)
            if support and inner[support].any():
                rows.append(support)
        return rows


def _z_check_terms(a_terms, b_terms):
    return [(0, dx, dy) for dx, dy in a_terms] + [(1, dx, dy) for dx, dy in b_terms]


def _x_check_terms(a_terms, b_terms):
    return [(0, -dx, -dy) for dx, dy in b_terms] + [(1, -dx, -dy) for dx, dy in a_terms]


def string_segments(code, region: RibbonRegion, frame: Frame | None = None) -> np.ndarray:
    """Kernel of the restricted check matrix of ``region``, as rows over ``frame`` qubits.

    Horizontal ribbons give X-type segments (commuting with Z-checks),
    vertical ribbons Z-type segments (commuting with X-checks).
    """
    a_terms, b_terms = _terms(code)
    if region.empty:
        n = 0 if frame is None else frame.n
        return np.zeros((0, n), np.uint8)
    r = stabilizer_diameter(a_terms, b_terms)
    if region.width <= r or region.end_strip < r or region.length < 2 * region.width:
        raise RegionTooSmall(
            f"need width > {r}, end strips >= {r} and length >= 2*width, got {region}")
    if frame is None:
        x, y, _ = region.sites()
        frame = Frame(int(x.min()), int(y.min()), int(np.ptp(x)) + 1, int(np.ptp(y)) + 1)
    terms = (_z_check_terms if region.orientation == "horizontal" else _x_check_terms)(a_terms, b_terms)
    x, y, _ = region.sites()
    cols = np.concatenate([frame.index(0, x, y), frame.index(1, x, y)])
    local = {int(q): i for i, q in enumerate(cols)}
    rows = region.enforced_checks(terms, frame)
    H = np.zeros((len(rows), cols.size), np.uint8)
    for i, support in enumerate(rows):
        for q in support:
            H[i, local[q]] ^= 1
    ker = gf2.kernel(H)
    out = np.zeros((ker.shape[0], frame.n), np.uint8)
    out[:, cols] = ker
    return out


def crossing_ribbons(length: int, width: int, end_strip: int):
    """A horizontal and a vertical ribbon crossing at their centres, plus a frame with margin."""
    off = (length - width) // 2
    h = RibbonRegion("horizontal", length, width, end_strip, (0, 0))
    v = RibbonRegion("vertical", length, width, end_strip, (off, -off))
    frame = Frame(-1, -off - 1, length + 2, length + 2)
    return h, v, frame


def _order(P: np.ndarray, cap: int) -> int:
    eye = np.eye(P.shape[0], dtype=np.uint8)
    cur = P.copy()
    for r in range(1, cap + 1):
        if np.array_equal(cur, eye):
            return r
        cur = gf2.matmul_mod2(cur, P)
    raise OrderSearchExceeded(f"translation order exceeds {cap}")


@dataclass(frozen=True, eq=False)
class AnyonBasis:
    K: int
    s_h: np.ndarray = field(repr=False)  # (K, frame.n) X-type basis segments
    s_v: np.ndarray = field(repr=False)  # (K, frame.n) Z-type basis segments
    Px: np.ndarray = field(repr=False)
    Py: np.ndarray = field(repr=False)
    Rx: int = 1
    Ry: int = 1
    Cx: np.ndarray = field(default=None, repr=False)
    Cy: np.ndarray = field(default=None, repr=False)
    frame: Frame = field(default=None, repr=False)
    width: int = 0
    length: int = 0


def _analyse_at(a_terms, b_terms, width, length, end_strip, cap):
    h, v, frame = crossing_ribbons(length, width, end_strip)
    sh = string_segments((a_terms, b_terms), h, frame)
    sv = string_segments((a_terms, b_terms), v, frame)
    C = gf2.matmul_mod2(sh, sv.T)
    U, D, W = gf2.smith_normal_form(C)
    K = int(D.to_dense().sum())
    # rows of U^-1·sH and (W^-1)^T·sV are the diagonalized bases
    s_h = gf2.matmul_mod2(gf2.inverse(U).to_dense(), sh)[:K]
    s_v = gf2.matmul_mod2(gf2.inverse(W).to_dense().T, sv)[:K]
    if K == 0:
        empty = np.zeros((0, 0), np.uint8)
        return AnyonBasis(0, s_h, s_v, empty, empty, 1, 1, empty, empty, frame, width, length)
    Cx = gf2.matmul_mod2(s_h, frame.shift(s_v, 1, 0).T)
    Cy = gf2.matmul_mod2(frame.shift(s_h, 0, 1), s_v.T)
    Px = gf2.inverse(Cx).to_dense()
    Py = Cy
    return AnyonBasis(K, s_h, s_v, Px, Py, _order(Px, cap), _order(Py, cap), Cx, Cy,
                      frame, width, length)


def anyon_analysis(code, width: int | None = None, max_width: int | None = None,
                   order_cap: int = ORDER_CAP) -> AnyonBasis:
    """K, diagonal segment bases and translation action, grown until K is stable.

    Ribbons have length 3*width and end strips of the stabilizer diameter.
    K must agree at two consecutive widths.
    """
    a_terms, b_terms = _terms(code)
    r = max(stabilizer_diameter(a_terms, b_terms), 1)
    w = 2 * r + 1 if width is None else width
    max_width = 4 * r + 4 if max_width is None else max_width
    prev = None
    while w <= max_width:
        cur = _analyse_at(a_terms, b_terms, w, 3 * w, r, order_cap)
        if prev is not None and prev.K == cur.K:
            return prev
        prev = cur
        w += 1
    raise RegionTooSmall(f"K did not stabilize up to width {max_width}")


@dataclass(frozen=True)
class UnfrustratedReport:
    shape: TorusShape
    K: int
    Rx: int
    Ry: int
    z_symmetries: int
    x_symmetries: int

    @property
    def symmetry_count(self) -> int:
        return self.z_symmetries + self.x_symmetries

    @property
    def unfrustrated(self) -> bool:
        return self.symmetry_count == 2 * self.K


def symmetry_counts(a_terms, b_terms, shape: TorusShape) -> tuple[int, int]:
    """(Z, X) independent symmetry counts of the polynomials on ``shape``."""
    code = BBCode(shape, tuple(a_terms), tuple(b_terms))
    return code.sites - code.rank_hz, code.sites - code.rank_hx


def unfrustrated_torus(code, basis: AnyonBasis | None = None,
                       max_sites: int = MAX_TORUS_SITES) -> UnfrustratedReport:
    """Count symmetries on the smallest (a*Rx, b*Ry) torus wider than the checks."""
    a_terms, b_terms = _terms(code)
    basis = anyon_analysis(code) if basis is None else basis
    r = stabilizer_diameter(a_terms, b_terms)
    M = basis.Rx * -(-(r + 1) // basis.Rx)
    N = basis.Ry * -(-(r + 1) // basis.Ry)
    if M * N > max_sites:
        raise TorusTooLarge(f"unfrustrated torus {M}x{N} exceeds {max_sites} sites")
    shape = TorusShape(M, N, 0)
    z, x = symmetry_counts(a_terms, b_terms, shape)
    return UnfrustratedReport(shape, basis.K, basis.Rx, basis.Ry, z, x)
