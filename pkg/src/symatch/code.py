"""Bivariate bicycle codes: check matrices, syndromes, logicals, distance."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence, Union

import numpy as np

from . import gf2, kernels
from .gf2 import BinaryMatrix, NoSolution
from .lattice import LatticePoly, PauliVec, TorusShape, parse_terms


class CommutationFailure(ValueError):
    """H_X·H_Zᵀ is nonzero; the polynomial pair does not define a code."""


class SyndromeMismatch(ValueError):
    """The residual error has a nonzero syndrome."""


PolySpec = Union[str, LatticePoly, Sequence[tuple[int, int]]]


def _raw_terms(p: PolySpec, shape: TorusShape) -> tuple[tuple[int, int], ...]:
    if isinstance(p, str):
        return parse_terms(p)
    if isinstance(p, LatticePoly):
        if p.shape != shape:
            raise ValueError(f"polynomial lives on {p.shape}, code on {shape}")
        return tuple(p.sorted_terms())
    return tuple((int(j), int(k)) for j, k in p)


def circulant(terms, shape: TorusShape) -> np.ndarray:
    """Matrix with a 1 at [s, s·t] for each site s and term t (GF(2) sum)."""
    mn = shape.sites
    out = np.zeros((mn, mn), np.uint8)
    rows = np.arange(mn)
    for col in shape.shift_table(terms):
        out[rows, col] ^= 1
    return out


@dataclass(frozen=True, eq=False)
class BBCode:
    shape: TorusShape
    a_terms: tuple
    b_terms: tuple
    name: str = ""
    d: Optional[int] = None
    a_mat: np.ndarray = field(init=False, repr=False)
    b_mat: np.ndarray = field(init=False, repr=False)
    hz_dense: np.ndarray = field(init=False, repr=False)
    hx_dense: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        a = circulant(self.a_terms, self.shape)
        b = circulant(self.b_terms, self.shape)
        hz = np.hstack([a, b])
        hx = np.hstack([b.T, a.T])
        if gf2.matmul_mod2(hx, hz.T).any():
            raise CommutationFailure(f"checks of {self.name or 'code'} do not commute")
        for name, arr in (("a_mat", a), ("b_mat", b), ("hz_dense", hz), ("hx_dense", hx)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def M(self):
        return self.shape.M

    @property
    def N(self):
        return self.shape.N

    @property
    def sites(self) -> int:
        return self.shape.sites

    @property
    def n(self) -> int:
        return 2 * self.shape.sites

    @cached_property
    def A(self) -> LatticePoly:
        return LatticePoly.from_terms(self.a_terms, self.shape)

    @cached_property
    def B(self) -> LatticePoly:
        return LatticePoly.from_terms(self.b_terms, self.shape)

    @cached_property
    def hz(self) -> BinaryMatrix:
        return BinaryMatrix.from_dense(self.hz_dense)

    @cached_property
    def hx(self) -> BinaryMatrix:
        return BinaryMatrix.from_dense(self.hx_dense)

    @cached_property
    def rank_hz(self) -> int:
        return gf2.rank(self.hz)

    @cached_property
    def rank_hx(self) -> int:
        return gf2.rank(self.hx)

    @cached_property
    def k(self) -> int:
        return self.n - self.rank_hx - self.rank_hz

    @cached_property
    def hz_reduction(self) -> gf2.Reduction:
        return gf2.rref_with_transform(self.hz)

    @cached_property
    def _logicals(self):
        return _logical_basis(self)

    @property
    def z_logicals(self) -> np.ndarray:
        return self._logicals[0]

    @property
    def x_logicals(self) -> np.ndarray:
        return self._logicals[1]

    def relift(self, shape: TorusShape, name: str = "") -> "BBCode":
        """Same raw polynomials on a different torus."""
        return BBCode(shape, self.a_terms, self.b_terms, name=name)

    def with_params(self) -> str:
        d = "?" if self.d is None else str(self.d)
        return f"[[{self.n},{self.k},{d}]]"

    def __repr__(self):
        return f"BBCode({self.name or 'custom'} {self.with_params()} on {self.shape})"


def build_code(A: PolySpec, B: PolySpec, shape, *, name: str = "", d: Optional[int] = None) -> BBCode:
    if not isinstance(shape, TorusShape):
        shape = TorusShape(*shape)
    return BBCode(shape, _raw_terms(A, shape), _raw_terms(B, shape), name=name, d=d)


# ---------------------------------------------------------------- syndromes


def syndrome(code: BBCode, e) -> np.ndarray:
    e = np.asarray(e, dtype=np.uint8)
    if e.shape[-1] != code.n:
        raise ValueError(f"error has length {e.shape[-1]}, code has {code.n} qubits")
    return gf2.matmul_mod2(e, code.hz_dense.T)


def initial_correction(code: BBCode, s) -> np.ndarray:
    """Some C' with H_Z·C' = s, from the cached reduction of H_Z.

    Accepts a single syndrome or a (shots, MN) batch.
    """
    s = np.asarray(s, dtype=np.uint8)
    red = code.hz_reduction
    if s.shape[-1] != code.sites:
        raise ValueError(f"syndrome has length {s.shape[-1]}, expected {code.sites}")
    t = gf2.matmul_mod2(s, red.transform.to_dense().T)
    r = len(red.pivots)
    if t[..., r:].any():
        raise NoSolution("syndrome is not in the column space of H_Z")
    out = np.zeros(s.shape[:-1] + (code.n,), np.uint8)
    out[..., red.pivots] = t[..., :r]
    return out


# ---------------------------------------------------------------- logicals


def _logical_basis(code: BBCode):
    kz = gf2.kernel(code.hx)
    z = kz[gf2.independent_rows(kz, code.hz_dense)]
    kx = gf2.kernel(code.hz)
    x = kx[gf2.independent_rows(kx, code.hx_dense)]
    if z.shape[0] != code.k or x.shape[0] != code.k:
        raise RuntimeError("logical count disagrees with the rank formula")
    gram = gf2.matmul_mod2(z, x.T)
    x = gf2.matmul_mod2(gf2.inverse(gram).to_dense().T, x)
    for arr in (z, x):
        arr.setflags(write=False)
    return z, x


def logical_basis(code: BBCode):
    """(zLogicals, xLogicals) as (k, n) arrays with Z̄_i·X̄_j = δ_ij."""
    return code.z_logicals, code.x_logicals


def as_pauli_vecs(code: BBCode, rows) -> list[PauliVec]:
    return [PauliVec.from_vector(r, code.shape) for r in np.asarray(rows)]


@dataclass(frozen=True)
class FailureReport:
    flags: np.ndarray
    failed: bool


def is_logical_failure(code: BBCode, e, c, z_logicals=None) -> FailureReport:
    residual = (np.asarray(e, np.uint8) ^ np.asarray(c, np.uint8))
    if syndrome(code, residual).any():
        raise SyndromeMismatch("e + c does not have a trivial syndrome")
    zl = code.z_logicals if z_logicals is None else np.asarray(z_logicals, np.uint8)
    flags = gf2.matmul_mod2(zl, residual)
    return FailureReport(flags, bool(flags.any()))


# ---------------------------------------------------------------- distance


def _csr(dense):
    rows, cols = np.nonzero(dense)
    ptr = np.zeros(dense.shape[0] + 1, np.int64)
    np.cumsum(np.bincount(rows, minlength=dense.shape[0]), out=ptr[1:])
    return ptr, cols.astype(np.int64)


def brute_force_distance(code: BBCode, cap: int) -> Optional[int]:
    """Minimum weight of a nontrivial Z-logical, or None if it exceeds ``cap``.

    Translation invariance lets every candidate be shifted to contain the
    left qubit at the origin, or, if it has no left qubits, the right one.
    """
    hx = np.ascontiguousarray(code.hx_dense)
    hx_ptr, hx_q = _csr(hx)
    q_ptr, q_chk = _csr(np.ascontiguousarray(hx.T))
    mn = code.sites
    roots = np.array([0, mn], np.int64)
    excluded = np.zeros((2, code.n), np.uint8)
    excluded[1, :mn] = 1
    xlog = np.ascontiguousarray(code.x_logicals, dtype=np.uint8)
    w = kernels.min_logical_weight(hx_ptr, hx_q, q_ptr, q_chk, roots, excluded, xlog, int(cap))
    return None if w < 0 else int(w)
