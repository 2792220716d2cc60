"""Bivariate polynomials over GF(2) on a (possibly twisted) torus.

A monomial x^j y^k is one lattice translation. The torus obeys x^M = 1 and
x^α y^N = 1, so every monomial has a unique canonical form with 0 <= j < M
and 0 <= k < N. Sites are indexed ``k*M + j``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

import numpy as np


@dataclass(frozen=True)
class TorusShape:
    M: int
    N: int
    alpha: int = 0

    def __post_init__(self):
        if self.M < 1 or self.N < 1:
            raise ValueError(f"torus periods must be positive, got {self.M}x{self.N}")
        if not 0 <= self.alpha < self.M:
            raise ValueError(f"twist must satisfy 0 <= alpha < M, got {self.alpha}")

    @property
    def sites(self) -> int:
        return self.M * self.N

    def canonicalize(self, j: int, k: int) -> tuple[int, int]:
        q, kk = divmod(k, self.N)
        return ((j - self.alpha * q) % self.M, kk)

    def canonicalize_array(self, j, k):
        q, kk = np.divmod(np.asarray(k), self.N)
        return (np.asarray(j) - self.alpha * q) % self.M, kk

    def index(self, j: int, k: int) -> int:
        j, k = self.canonicalize(j, k)
        return k * self.M + j

    def coords(self, idx):
        idx = np.asarray(idx)
        return idx % self.M, idx // self.M

    def shift_table(self, terms) -> np.ndarray:
        """(len(terms), sites) table: entry [t, s] is the site of s·terms[t]."""
        j, k = self.coords(np.arange(self.sites))
        out = np.empty((len(terms), self.sites), np.int64)
        for t, (dj, dk) in enumerate(terms):
            jj, kk = self.canonicalize_array(j + dj, k + dk)
            out[t] = kk * self.M + jj
        return out

    def __str__(self):
        return f"({self.M},{self.N},{self.alpha})"


def canonicalize(j: int, k: int, shape: TorusShape) -> tuple[int, int]:
    return shape.canonicalize(j, k)


_FACTOR = re.compile(r"([xy])(?:\^\{?(-?\d+)\}?)?")


def parse_terms(text: str) -> tuple[tuple[int, int], ...]:
    """Parse ``1 + x + x^-1*y^3`` into raw exponent pairs (no reduction).

    Factors within a monomial may be joined by ``*`` or juxtaposed (``x^2y``).
    """
    cleaned = text.replace(" ", "")
    if not cleaned:
        raise ValueError("empty polynomial")
    if cleaned == "0":
        return ()
    terms = []
    for chunk in cleaned.split("+"):
        if not chunk:
            raise ValueError(f"malformed polynomial {text!r}")
        j = k = 0
        body = chunk.replace("*", "")
        if body == "1":
            terms.append((0, 0))
            continue
        pos = 0
        while pos < len(body):
            m = _FACTOR.match(body, pos)
            if not m:
                raise ValueError(f"cannot parse monomial {chunk!r} in {text!r}")
            e = int(m.group(2)) if m.group(2) is not None else 1
            if m.group(1) == "x":
                j += e
            else:
                k += e
            pos = m.end()
        terms.append((j, k))
    return tuple(terms)


def format_monomial(j: int, k: int) -> str:
    parts = []
    if j:
        parts.append("x" if j == 1 else f"x^{j}")
    if k:
        parts.append("y" if k == 1 else f"y^{k}")
    return "*".join(parts) if parts else "1"


@dataclass(frozen=True)
class LatticePoly:
    shape: TorusShape
    terms: frozenset

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, int]], shape: TorusShape) -> "LatticePoly":
        out = set()
        for j, k in terms:
            out ^= {shape.canonicalize(j, k)}
        return cls(shape, frozenset(out))

    @classmethod
    def parse(cls, text: str, shape: TorusShape) -> "LatticePoly":
        return cls.from_terms(parse_terms(text), shape)

    @classmethod
    def zero(cls, shape):
        return cls(shape, frozenset())

    @classmethod
    def one(cls, shape):
        return cls(shape, frozenset({(0, 0)}))

    @classmethod
    def monomial(cls, j, k, shape):
        return cls.from_terms([(j, k)], shape)

    def _check(self, other):
        if not isinstance(other, LatticePoly):
            raise TypeError(f"expected LatticePoly, got {type(other).__name__}")
        if other.shape != self.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        self._check(other)
        return LatticePoly(self.shape, self.terms ^ other.terms)

    __sub__ = __add__

    def __mul__(self, other):
        self._check(other)
        if len(self.terms) > len(other.terms):
            self, other = other, self
        acc = np.zeros(self.shape.sites, np.uint8)
        if other.terms:
            vec = other.to_site_vector()
            for j, k in self.terms:
                acc ^= translate_vector(vec, j, k, self.shape)
        return LatticePoly.from_site_vector(acc, self.shape)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are only defined for monomials")
        out = LatticePoly.one(self.shape)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def translate(self, j: int, k: int) -> "LatticePoly":
        return LatticePoly.from_terms(((a + j, b + k) for a, b in self.terms), self.shape)

    def antipode(self) -> "LatticePoly":
        return LatticePoly.from_terms(((-a, -b) for a, b in self.terms), self.shape)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def to_site_vector(self) -> np.ndarray:
        v = np.zeros(self.shape.sites, np.uint8)
        for j, k in self.terms:
            v[k * self.shape.M + j] = 1
        return v

    @classmethod
    def from_site_vector(cls, vec, shape: TorusShape) -> "LatticePoly":
        vec = np.asarray(vec)
        if vec.shape != (shape.sites,):
            raise ValueError(f"site vector has shape {vec.shape}, expected ({shape.sites},)")
        idx = np.flatnonzero(vec & 1)
        return cls(shape, frozenset((int(i % shape.M), int(i // shape.M)) for i in idx))

    def sorted_terms(self):
        return sorted(self.terms, key=lambda t: (t[1], t[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(format_monomial(j, k) for j, k in self.sorted_terms())


def translate_vector(vec, j: int, k: int, shape: TorusShape) -> np.ndarray:
    """Site vector of x^j y^k · vec."""
    src = np.flatnonzero(vec)
    sj, sk = shape.coords(src)
    tj, tk = shape.canonicalize_array(sj + j, sk + k)
    out = np.zeros(shape.sites, np.uint8)
    out[tk * shape.M + tj] = 1
    return out


def antipode(p: LatticePoly) -> LatticePoly:
    return p.antipode()


@dataclass(frozen=True)
class PauliVec:
    """A Pauli of one type split into left and right qubit blocks."""

    left: LatticePoly
    right: LatticePoly

    def __post_init__(self):
        if self.left.shape != self.right.shape:
            raise ValueError("left and right blocks must share a shape")

    @property
    def shape(self):
        return self.left.shape

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.left.to_site_vector(), self.right.to_site_vector()])

    @classmethod
    def from_vector(cls, vec, shape: TorusShape) -> "PauliVec":
        vec = np.asarray(vec)
        mn = shape.sites
        if vec.shape != (2 * mn,):
            raise ValueError(f"expected length {2 * mn}, got {vec.shape}")
        return cls(LatticePoly.from_site_vector(vec[:mn], shape),
                   LatticePoly.from_site_vector(vec[mn:], shape))

    def weight(self) -> int:
        return len(self.left) + len(self.right)
