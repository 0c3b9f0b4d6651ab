"""Permutations of [n] and their action on symmetric matrices.

Indices are 0-based everywhere in memory; the 1-based convention of the file
formats is converted at the I/O boundary only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Permutation:
    """A bijection of {0,...,n-1}; ``map[i]`` is the image of i."""

    map: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.map, dtype=np.int64)
        object.__setattr__(self, "map", m)
        if m.ndim != 1:
            raise ValueError("permutation map must be 1-d")
        n = m.size
        if n == 0 or np.any(np.sort(m) != np.arange(n)):
            raise ValueError("map is not a bijection of {0,...,n-1}")

    @property
    def n(self) -> int:
        return self.map.size

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(n))

    @classmethod
    def reversal(cls, n: int) -> "Permutation":
        return cls(np.arange(n)[::-1].copy())

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "Permutation":
        return cls(rng.permutation(n))

    def inverse(self) -> "Permutation":
        inv = np.empty(self.n, dtype=np.int64)
        inv[self.map] = np.arange(self.n)
        return Permutation(inv)

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self . other)(i) = self(other(i))."""
        if self.n != other.n:
            raise ValueError("size mismatch")
        return Permutation(self.map[other.map])

    def reverse(self) -> "Permutation":
        """Composition with the order-reversing permutation: i -> n-1-map[i]."""
        return Permutation(self.n - 1 - self.map)

    def __call__(self, i: int) -> int:
        return int(self.map[i])

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and np.array_equal(self.map, other.map)


def permute(M: np.ndarray, P: Permutation) -> np.ndarray:
    """Simultaneous row/column action: out[i, j] = M[P^-1(i), P^-1(j)]."""
    M = np.asarray(M)
    if M.shape[0] != M.shape[1] or M.shape[0] != P.n:
        raise ValueError("size mismatch between matrix and permutation")
    inv = P.inverse().map
    return M[np.ix_(inv, inv)]


def check_symmetric(M: np.ndarray, tol: float = 0.0) -> np.ndarray:
    """Validate an n-by-n symmetric float matrix and return it as float64."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("expected a square matrix")
    if not np.all(np.abs(M - M.T) <= tol):
        raise ValueError("matrix is not symmetric")
    return M
