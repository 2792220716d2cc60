"""Linear algebra over GF(2) on bit-packed rows.

Vectors are plain ``uint8`` numpy arrays with entries in {0, 1}. Matrices are
:class:`BinaryMatrix`, which stores each row as little-endian 64-bit words.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import kernels


class NoSolution(ValueError):
    """The right-hand side is outside the column space."""


def _pack(dense):
    dense = np.ascontiguousarray(dense, dtype=np.uint8)
    rows, cols = dense.shape
    nw = max(1, -(-cols // 64))
    padded = np.zeros((rows, nw * 64), np.uint8)
    padded[:, :cols] = dense
    return np.packbits(padded, axis=1, bitorder="little").view("<u8").astype(np.uint64)


def _unpack(words, cols):
    rows = words.shape[0]
    if rows == 0:
        return np.zeros((0, cols), np.uint8)
    raw = np.ascontiguousarray(words.astype("<u8")).view(np.uint8)
    return np.unpackbits(raw, axis=1, bitorder="little")[:, :cols].copy()


class BinaryMatrix:
    """Immutable dense GF(2) matrix with bit-packed rows."""

    __slots__ = ("rows", "cols", "words")

    def __init__(self, words, rows, cols):
        words = np.asarray(words, dtype=np.uint64)
        if words.shape != (rows, max(1, -(-cols // 64))):
            raise ValueError(f"word array shape {words.shape} does not fit {rows}x{cols}")
        words.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "words", words)

    def __setattr__(self, name, value):
        raise AttributeError("BinaryMatrix is immutable")

    @classmethod
    def from_dense(cls, dense) -> "BinaryMatrix":
        dense = np.asarray(dense)
        if dense.ndim != 2:
            raise ValueError("expected a 2-D array")
        if dense.size and not np.isin(dense, (0, 1)).all():
            raise ValueError("entries must be 0 or 1")
        return cls(_pack(dense), dense.shape[0], dense.shape[1])

    @classmethod
    def zeros(cls, rows, cols):
        return cls.from_dense(np.zeros((rows, cols), np.uint8))

    @classmethod
    def identity(cls, n):
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @property
    def shape(self):
        return (self.rows, self.cols)

    def to_dense(self) -> np.ndarray:
        return _unpack(self.words, self.cols)

    @property
    def T(self) -> "BinaryMatrix":
        return BinaryMatrix.from_dense(self.to_dense().T)

    def row(self, i) -> np.ndarray:
        return _unpack(self.words[i:i + 1], self.cols)[0]

    def __matmul__(self, other):
        a = self.to_dense().astype(np.float64)
        if isinstance(other, BinaryMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            prod = a @ other.to_dense().astype(np.float64)
            return BinaryMatrix.from_dense((prod.astype(np.int64) & 1).astype(np.uint8))
        v = np.asarray(other)
        if v.shape[0] != self.cols:
            raise ValueError(f"length mismatch: {self.cols} columns, vector {v.shape}")
        return ((a @ v.astype(np.float64)).astype(np.int64) & 1).astype(np.uint8)

    def __add__(self, other: "BinaryMatrix") -> "BinaryMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return BinaryMatrix(self.words ^ other.words, self.rows, self.cols)

    def __eq__(self, other):
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.words, other.words)

    def __hash__(self):
        return hash((self.rows, self.cols, self.words.tobytes()))

    def __repr__(self):
        return f"BinaryMatrix({self.rows}x{self.cols}, rank={rank(self)})"


def as_matrix(M) -> BinaryMatrix:
    return M if isinstance(M, BinaryMatrix) else BinaryMatrix.from_dense(M)


def matmul_mod2(a, b) -> np.ndarray:
    """Dense GF(2) product of uint8 arrays (float BLAS, exact below 2^53)."""
    prod = np.asarray(a, dtype=np.float64) @ np.asarray(b, dtype=np.float64)
    return (prod.astype(np.int64) & 1).astype(np.uint8)


class Reduction(NamedTuple):
    reduced: BinaryMatrix
    transform: BinaryMatrix
    pivots: np.ndarray


def _reduce(M: BinaryMatrix, with_transform: bool):
    mw = np.array(M.words, copy=True)
    if with_transform:
        tw = _pack(np.eye(M.rows, dtype=np.uint8))
    else:
        tw = np.zeros((M.rows, 0), np.uint64)
    piv = kernels.rref_packed(mw, tw, M.cols)
    return mw, tw, np.asarray(piv, dtype=np.int64)


def rref_with_transform(M) -> Reduction:
    """Return (R, Γ, pivots) with R = Γ·M in reduced row-echelon form."""
    M = as_matrix(M)
    mw, tw, piv = _reduce(M, True)
    return Reduction(BinaryMatrix(mw, M.rows, M.cols), BinaryMatrix(tw, M.rows, M.rows), piv)


def rref(M):
    """Reduced row-echelon form and pivot columns, without the transform."""
    M = as_matrix(M)
    mw, _, piv = _reduce(M, False)
    return BinaryMatrix(mw, M.rows, M.cols), piv


def rank(M) -> int:
    return int(len(rref(M)[1]))


def kernel(M) -> np.ndarray:
    """Basis of {v : M·v = 0}, one vector per row of the returned array."""
    M = as_matrix(M)
    R, piv = rref(M)
    dense = R.to_dense()[: len(piv)]
    free = np.setdiff1d(np.arange(M.cols), piv)
    basis = np.zeros((free.size, M.cols), np.uint8)
    basis[np.arange(free.size), free] = 1
    if len(piv):
        basis[:, piv] = dense[:, free].T
    return basis


def solve(M, b) -> np.ndarray:
    """Some x with M·x = b; raises :class:`NoSolution` if none exists."""
    M = as_matrix(M)
    b = np.asarray(b, dtype=np.uint8)
    if b.shape != (M.rows,):
        raise ValueError(f"right-hand side has shape {b.shape}, expected ({M.rows},)")
    red = rref_with_transform(M)
    return solve_reduced(red, b)


def solve_reduced(red: Reduction, b) -> np.ndarray:
    """Back-substitution with a cached reduction of M."""
    t = red.transform @ np.asarray(b, dtype=np.uint8)
    r = len(red.pivots)
    if t[r:].any():
        raise NoSolution("system is inconsistent")
    x = np.zeros(red.reduced.cols, np.uint8)
    x[red.pivots] = t[:r]
    return x


def inverse(M) -> BinaryMatrix:
    M = as_matrix(M)
    if M.rows != M.cols:
        raise ValueError("inverse of a non-square matrix")
    red = rref_with_transform(M)
    if len(red.pivots) != M.rows:
        raise NoSolution("matrix is singular")
    return red.transform


def smith_normal_form(M):
    """Return (U, D, W) with U·D·W = M, U and W invertible and
    D = diag(I_r, 0).
    """
    M = as_matrix(M)
    red = rref_with_transform(M)
    R = red.reduced.to_dense()
    piv = red.pivots
    r = len(piv)
    # column operations on R clear each pivot row except its pivot
    psi = np.eye(M.cols, dtype=np.uint8)
    for i, p in enumerate(piv):
        others = np.flatnonzero(R[i])
        others = others[others != p]
        if others.size:
            R[:, others] ^= R[:, [p]]
            psi[:, others] ^= psi[:, [p]]
    order = np.concatenate([piv, np.setdiff1d(np.arange(M.cols), piv)]).astype(np.int64)
    psi = psi[:, order]
    D = np.zeros(M.shape, np.uint8)
    D[np.arange(r), np.arange(r)] = 1
    U = inverse(red.transform)
    W = inverse(psi)
    return U, BinaryMatrix.from_dense(D), W


def independent_rows(rows, base=None) -> list[int]:
    """Greedy indices of ``rows`` that raise the rank over ``base``'s span."""
    rows = np.asarray(rows, dtype=np.uint8)
    cols = rows.shape[1]
    basis = np.zeros((0, cols), np.uint8) if base is None else np.asarray(base, np.uint8)
    current = rank(basis) if basis.shape[0] else 0
    keep = []
    for i, row in enumerate(rows):
        cand = np.vstack([basis, row[None, :]])
        r = rank(cand)
        if r > current:
            basis, current = cand, r
            keep.append(i)
    return keep


def in_rowspace(rows, v) -> bool:
    rows = np.asarray(rows, np.uint8)
    if rows.shape[0] == 0:
        return not np.asarray(v).any()
    return rank(np.vstack([rows, np.asarray(v, np.uint8)[None, :]])) == rank(rows)
