"""Symmetries (check subsets whose product is the identity) and subsymmetries."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import gf2
from .code import BBCode
from .lattice import LatticePoly

MAX_SIMPLEX_K = 12


class NotASymmetry(ValueError):
    pass


class DependentSet(ValueError):
    pass


class NoPowerOfTwoOrder(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Symmetry:
    """A set of Z-check sites, as a site vector of length MN."""

    code: BBCode
    sites: np.ndarray
    label: tuple = ()

    @property
    def support(self) -> LatticePoly:
        return LatticePoly.from_site_vector(self.sites, self.code.shape)

    @property
    def size(self) -> int:
        return int(self.sites.sum())

    def __add__(self, other: "Symmetry") -> "Symmetry":
        label = tuple(a ^ b for a, b in zip(self.label, other.label)) if self.label and other.label else ()
        return Symmetry(self.code, self.sites ^ other.sites, label)


@dataclass(frozen=True, eq=False)
class Subsymmetry:
    code: BBCode
    side: str
    sites: np.ndarray

    @property
    def support(self) -> LatticePoly:
        return LatticePoly.from_site_vector(self.sites, self.code.shape)


def is_symmetry(code: BBCode, sites) -> bool:
    """Σ·A = Σ·B = 0, i.e. every qubit touches an even number of Σ's checks."""
    sites = np.asarray(sites, np.uint8)
    return not gf2.matmul_mod2(sites, code.hz_dense).any()


def _verified(code, sites, label=()):
    if not is_symmetry(code, sites):
        raise NotASymmetry("site set is not a symmetry")
    sites = np.asarray(sites, np.uint8).copy()
    sites.setflags(write=False)
    return Symmetry(code, sites, label)


def discover_symmetries_gauss(code: BBCode) -> list[Symmetry]:
    """Rows of the reduction transform that map H_Z to zero rows."""
    red = code.hz_reduction
    r = len(red.pivots)
    gamma = red.transform.to_dense()
    rows = gamma[r:]
    K = rows.shape[0]
    return [_verified(code, row, tuple(int(i == j) for i in range(K))) for j, row in enumerate(rows)]


def discover_symmetries_kernel(code: BBCode) -> list[Symmetry]:
    """Basis of ker(H_Zᵀ), computed independently of the transform."""
    basis = gf2.kernel(code.hz_dense.T)
    K = basis.shape[0]
    return [_verified(code, row, tuple(int(i == j) for i in range(K))) for j, row in enumerate(basis)]


def symmetry_from_poly(code: BBCode, poly: LatticePoly | str) -> Symmetry:
    if isinstance(poly, str):
        poly = LatticePoly.parse(poly, code.shape)
    return _verified(code, poly.to_site_vector())


def translated_generating_set(sigma: Symmetry, translations: Sequence) -> list[Symmetry]:
    """Translates of Σ by the given monomials; they must be independent."""
    code = sigma.code
    out = []
    for t in translations:
        if isinstance(t, str):
            t = LatticePoly.parse(t, code.shape)
        if isinstance(t, LatticePoly):
            if len(t) != 1:
                raise ValueError(f"translation {t} is not a monomial")
            (j, k), = t.terms
        else:
            j, k = t
        out.append(_verified(code, sigma.support.translate(j, k).to_site_vector()))
    stack = np.array([s.sites for s in out], np.uint8)
    if gf2.rank(stack) != len(out):
        raise DependentSet("translated symmetries are linearly dependent")
    K = len(out)
    return [Symmetry(code, s.sites, tuple(int(i == j) for i in range(K))) for j, s in enumerate(out)]


def combine(generators: Sequence[Symmetry], v) -> Symmetry:
    """Σ[v] = sum of generators j with v_j = 1."""
    v = tuple(int(b) for b in v)
    if len(v) != len(generators):
        raise ValueError("selector length differs from generator count")
    sites = np.zeros(generators[0].code.sites, np.uint8)
    for bit, g in zip(v, generators):
        if bit:
            sites ^= g.sites
    return Symmetry(generators[0].code, sites, v)


def all_combinations(generators: Sequence[Symmetry]) -> list[Symmetry]:
    """All 2^K - 1 nonzero combinations, indexed by the integer selector - 1.

    Bit j of the selector integer corresponds to generator j.
    """
    K = len(generators)
    if K > MAX_SIMPLEX_K:
        raise ValueError(f"over-matching is capped at K = {MAX_SIMPLEX_K}, got {K}")
    return [combine(generators, [(v >> j) & 1 for j in range(K)]) for v in range(1, 1 << K)]


def discover_subsymmetries(code: BBCode, side: str) -> list[Subsymmetry]:
    """Basis of site sets Σ with Σ·A = 0 (side L) or Σ·B = 0 (side R)."""
    side = side.upper()
    if side not in ("L", "R"):
        raise ValueError(f"side must be 'L' or 'R', got {side!r}")
    mat = code.a_mat if side == "L" else code.b_mat
    basis = gf2.kernel(np.ascontiguousarray(mat.T))
    return [Subsymmetry(code, side, row) for row in basis]


def is_subsymmetry(code: BBCode, side: str, sites) -> bool:
    mat = code.a_mat if side.upper() == "L" else code.b_mat
    return not gf2.matmul_mod2(np.asarray(sites, np.uint8), mat).any()


def _split_unit(terms, shape) -> LatticePoly:
    """f for a polynomial written as 1 + f, from its raw (uncanceled) terms."""
    terms = list(terms)
    if (0, 0) not in terms:
        raise ValueError(f"polynomial {terms} has no constant term, so it is not of the form 1 + f")
    terms.remove((0, 0))
    return LatticePoly.from_terms(terms, shape)


def _power_of_two_order(f: LatticePoly, max_log2: int) -> int:
    one = LatticePoly.one(f.shape)
    power = f
    for ell in range(max_log2 + 1):
        if power == one:
            return ell
        power = power * power
    raise NoPowerOfTwoOrder(f"no L = 2^l <= 2^{max_log2} with f^L = 1 for f = {f}")


def _telescoped(f: LatticePoly, ell: int) -> LatticePoly:
    """(1+f)(1+f²)···(1+f^(2^(ell-1))) = 1 + f + ... + f^(2^ell - 1)."""
    out = LatticePoly.one(f.shape)
    power = f
    for _ in range(ell):
        out = out * (LatticePoly.one(f.shape) + power)
        power = power * power
    return out


def infinite_symmetry(code: BBCode, translations=((0, 0),), max_log2: int = 10) -> list[Symmetry]:
    """Σ = Σ_f · Σ_g for A = 1 + f, B = 1 + g, plus the requested translates."""
    f = _split_unit(code.a_terms, code.shape)
    g = _split_unit(code.b_terms, code.shape)
    sigma = _telescoped(f, _power_of_two_order(f, max_log2)) * _telescoped(g, _power_of_two_order(g, max_log2))
    return [_verified(code, sigma.translate(j, k).to_site_vector()) for j, k in translations]


def span_equal(a: np.ndarray, b: np.ndarray) -> bool:
    a = np.asarray(a, np.uint8)
    b = np.asarray(b, np.uint8)
    ra, rb = gf2.rank(a), gf2.rank(b)
    return ra == rb == gf2.rank(np.vstack([a, b]))


def restricted_syndrome_parities(code: BBCode, sites) -> np.ndarray:
    """Per-qubit count of Σ's checks violated by that qubit's flip."""
    return np.asarray(sites, np.int64) @ code.hz_dense.astype(np.int64)


def even_parity_ok(code: BBCode, generators: Sequence[Symmetry]) -> bool:
    return all((restricted_syndrome_parities(code, g.sites) % 2 == 0).all() for g in generators)


def symmetry_count(code: BBCode) -> int:
    return code.sites - code.rank_hz

