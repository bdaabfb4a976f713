"""Subcarrier permutations (0-based)."""

from __future__ import annotations

import numpy as np

__all__ = ["InvalidPermutation", "Permutation"]


class InvalidPermutation(ValueError):
    pass


class Permutation:
    """Bijection from input subcarriers to output subcarriers.

    ``map[i]`` is the output subcarrier on which the relay forwards what
    it received on input subcarrier ``i``. Indices are 0-based.
    """

    __slots__ = ("map",)

    def __init__(self, mapping):
        m = np.asarray(mapping)
        if m.ndim != 1 or m.size == 0:
            raise InvalidPermutation("permutation must be a non-empty 1-D sequence")
        if not np.issubdtype(m.dtype, np.integer):
            if not np.all(m == np.round(m)):
                raise InvalidPermutation("permutation entries must be integers")
            m = m.astype(np.int64)
        m = m.astype(np.int64)
        if not np.array_equal(np.sort(m), np.arange(m.size)):
            raise InvalidPermutation(f"{m.tolist()} is not a bijection on 0..{m.size - 1}")
        m.setflags(write=False)
        self.map = m

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(n))

    @classmethod
    def from_one_based(cls, mapping) -> "Permutation":
        return cls(np.asarray(mapping) - 1)

    def one_based(self) -> list[int]:
        return (self.map + 1).tolist()

    @property
    def n(self) -> int:
        return self.map.size

    def matrix(self) -> np.ndarray:
        """Permutation matrix ``W`` with ``W[map[i], i] = 1``."""
        w = np.zeros((self.n, self.n), dtype=complex)
        w[self.map, np.arange(self.n)] = 1.0
        return w

    def inverse(self) -> "Permutation":
        return Permutation(np.argsort(self.map))

    def __len__(self):
        return self.n

    def __eq__(self, other):
        return isinstance(other, Permutation) and np.array_equal(self.map, other.map)

    def __hash__(self):
        return hash(self.map.tobytes())

    def __repr__(self):
        return f"Permutation({self.map.tolist()})"
