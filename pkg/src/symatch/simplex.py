"""Simplex-code outer decoding of over-matched commutator bits.

A word holds one bit b[v] per nonzero selector v in {0,1}^K, stored at
index v - 1 where bit j of the integer v selects generator j. A noiseless
word is linear: b[v] = <v, g> for the generator bits g.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


def popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class SimplexWord:
    K: int
    bits: np.ndarray  # length 2^K - 1, index v - 1

    def __post_init__(self):
        if self.bits.shape != ((1 << self.K) - 1,):
            raise ValueError(f"a K={self.K} word has {(1 << self.K) - 1} bits, got {self.bits.shape}")

    def __getitem__(self, v: int) -> int:
        return int(self.bits[v - 1])

    def generator_bits(self) -> np.ndarray:
        return self.bits[[(1 << j) - 1 for j in range(self.K)]].copy()


@lru_cache(maxsize=None)
def codewords(K: int) -> np.ndarray:
    """(2^K, 2^K - 1) array; row g is the codeword of generator bits g."""
    v = np.arange(1, 1 << K)
    g = np.arange(1 << K)
    overlap = g[:, None] & v[None, :]
    out = np.zeros(overlap.shape, np.uint8)
    for j in range(K):
        out ^= ((overlap >> j) & 1).astype(np.uint8)
    return out


def encode(K: int, generator_bits) -> np.ndarray:
    g = int(sum(int(b) << j for j, b in enumerate(generator_bits)))
    return codewords(K)[g].copy()


@lru_cache(maxsize=None)
def check_tables(K: int):
    """Checks C[c] for |c| <= K-2, grouped by weight, largest first.

    The check C[c] sums the word over V[c] = {v != 0 : v ⊇ c}. Returns a
    list of (selectors, membership matrix) per weight, then the global check.
    """
    v = np.arange(1, 1 << K)
    groups = []
    for w in range(K - 2, 0, -1):
        cs = np.array([c for c in range(1, 1 << K) if popcount(c) == w], np.int64)
        member = ((v[None, :] & cs[:, None]) == cs[:, None]).astype(np.uint8)
        groups.append((cs, member))
    return groups


def _apply_checks(bits: np.ndarray, K: int) -> np.ndarray:
    """Steps 1-2 of the outer decoder, vectorized over rows of ``bits``."""
    a = np.zeros_like(bits)
    for cs, member in check_tables(K):
        viol = (((bits ^ a).astype(np.int64) @ member.T.astype(np.int64)) & 1).astype(np.uint8)
        # checks of equal weight touch disjoint correction positions c
        a[:, cs - 1] ^= viol
    if K >= 2:
        glob = ((bits ^ a).sum(axis=1) & 1).astype(bool)
        a[glob] ^= 1
    return a


def simplex_outer_decode_batch(bits) -> np.ndarray:
    """Decode many words at once; ``bits`` is (shots, 2^K - 1)."""
    bits = np.atleast_2d(np.asarray(bits, np.uint8))
    K = int(np.log2(bits.shape[1] + 1))
    if (1 << K) - 1 != bits.shape[1]:
        raise ValueError("word length is not 2^K - 1")
    a = _apply_checks(bits, K)
    cw = codewords(K)
    # candidate a ^ cw[T]; minimise |a ^ cw[T]|, tie -> smallest generator bits of the result
    weights = (a[:, None, :] ^ cw[None, :, :]).sum(axis=2)
    gen_idx = [(1 << j) - 1 for j in range(K)]
    result_gen = (bits[:, gen_idx] ^ a[:, gen_idx])[:, None, :] ^ cw[None, :, :][:, :, gen_idx]
    # lexicographic order on (g_1, ..., g_K)
    lex = np.zeros(result_gen.shape[:2], np.int64)
    for j in range(K):
        lex = lex * 2 + result_gen[:, :, j]
    key = weights.astype(np.int64) * (1 << K) + lex
    best = np.argmin(key, axis=1)
    return result_gen[np.arange(bits.shape[0]), best]


def simplex_outer_decode(word: SimplexWord) -> np.ndarray:
    """Corrected generator bits b[e_1..e_K]."""
    return simplex_outer_decode_batch(word.bits[None, :])[0]


def nearest_codeword_bits(bits) -> np.ndarray:
    """Brute-force oracle: generator bits of the Hamming-nearest codeword
    (ties broken lexicographically on generator bits)."""
    bits = np.asarray(bits, np.uint8)
    K = int(np.log2(bits.size + 1))
    cw = codewords(K)
    dist = (cw ^ bits[None, :]).sum(axis=1)
    best = None
    for g in range(1 << K):
        gb = tuple((g >> j) & 1 for j in range(K))
        key = (int(dist[g]), gb)
        if best is None or key < best:
            best = key
    return np.array(best[1], np.uint8)
