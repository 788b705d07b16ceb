"""Keyed permutation maps.

Both builders start from the affine position ``(i * k_a + k_b) mod N`` with
a fresh word pair per element. Unfolding draws the final position by rank
from the set of still-free positions; iteration walks from the affine
position toward a free slot in the direction given by ``k_a``'s parity.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels
from .errors import ConsistencyError
from .keyschedule import KeyMaterial
from .params import Method


def key_fingerprint(key: KeyMaterial) -> bytes:
    """Identifies a key state (bytes and cursor) without exposing it."""
    return hashlib.sha256(key.data + key.cursor.to_bytes(8, "big")).digest()[:16]


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PermutationMap:
    forward: np.ndarray
    inverse: np.ndarray
    method: Method
    key_fingerprint: bytes | None = None

    @classmethod
    def from_forward(cls, forward, method: Method = Method.AUTO, key_fingerprint: bytes | None = None):
        forward = np.asarray(forward, dtype=np.int64)
        n = len(forward)
        inverse = np.full(n, -1, dtype=np.int64)
        if n == 0 or forward.min() < 0 or forward.max() >= n:
            raise ConsistencyError("map is not a bijection on [0, N)")
        inverse[forward] = np.arange(n)
        if (inverse < 0).any():
            raise ConsistencyError("map is not a bijection on [0, N)")
        return cls(_frozen(forward), _frozen(inverse), method, key_fingerprint)

    @property
    def block_size(self) -> int:
        return len(self.forward)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PermutationMap):
            return NotImplemented
        return np.array_equal(self.forward, other.forward)

    def invert(self) -> "PermutationMap":
        if not np.array_equal(self.inverse[self.forward], np.arange(self.block_size)):
            raise ConsistencyError("map is not a bijection on [0, N)")
        return PermutationMap(self.inverse, self.forward, self.method, self.key_fingerprint)

    def to_csv(self, path: "str | Path") -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["index", "final"])
            w.writerows(enumerate(self.forward.tolist()))


def raw_final_position(i: int, k_a: int, k_b: int, block_size: int) -> int:
    return (i * k_a + k_b) % block_size


def raw_trace(block_size: int, map_key: KeyMaterial) -> np.ndarray:
    """Affine positions for every element, consuming words like the builders do."""
    return _kernels.raw_trace(map_key.next_words(2 * block_size), block_size)


def build_map_unfolding(block_size: int, map_key: KeyMaterial) -> PermutationMap:
    fp = key_fingerprint(map_key)
    words = map_key.next_words(2 * block_size)
    forward = _kernels.unfolding_map(words, block_size)
    return PermutationMap.from_forward(forward, Method.UNFOLDING, fp)


def build_map_iteration(block_size: int, map_key: KeyMaterial) -> PermutationMap:
    fp = key_fingerprint(map_key)
    words = map_key.next_words(2 * block_size)
    forward = _kernels.iteration_map(words, block_size)
    return PermutationMap.from_forward(forward, Method.ITERATION, fp)


def build_map(block_size: int, map_key: KeyMaterial, method: Method) -> PermutationMap:
    if method is Method.UNFOLDING:
        return build_map_unfolding(block_size, map_key)
    if method is Method.ITERATION:
        return build_map_iteration(block_size, map_key)
    raise ValueError("resolve Method.AUTO with select_method() first")


def invert(m: PermutationMap) -> PermutationMap:
    return m.invert()
