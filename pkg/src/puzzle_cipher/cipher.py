"""Block pipeline (shift, XOR, permute) and the per-stream state machine."""

from __future__ import annotations

import numpy as np

from .errors import InvalidArgument
from .keyschedule import KeyMaterial, KeyPair, apply_iv, derive_key_pair, regenerate_pair
from .params import CipherParams, Granularity, compute_block_size, padded_bytes, plan_message, select_method
from .permmap import PermutationMap, build_map

LEFT = "left"
RIGHT = "right"


def to_elements(block: bytes, granularity: Granularity) -> np.ndarray:
    arr = np.frombuffer(bytes(block), dtype=np.uint8)
    if granularity is Granularity.BIT:
        return np.unpackbits(arr)  # MSB first within each byte
    return arr.copy()


def from_elements(elements: np.ndarray, granularity: Granularity) -> bytes:
    if granularity is Granularity.BIT:
        return np.packbits(elements).tobytes()
    return elements.astype(np.uint8, copy=False).tobytes()


def xor_layer(block, block_number: int, xor_key: KeyMaterial, block_size: int) -> np.ndarray:
    """XOR against the key window starting at ``block_number * block_size``.

    ``block_size`` is in bytes here, whatever the granularity.
    """
    data = np.frombuffer(bytes(block), dtype=np.uint8) if not isinstance(block, np.ndarray) else block
    key = np.frombuffer(xor_key.data, dtype=np.uint8)
    start = (block_number * block_size) % len(key)
    idx = (np.arange(len(data)) + start) % len(key)
    return data ^ key[idx]


def shift_amount(m: PermutationMap, block_number: int) -> int:
    return int(m.forward[block_number % m.block_size])


def rotate_block(elements: np.ndarray, n: int, direction: str = LEFT) -> np.ndarray:
    """Left rotation moves the first ``n`` elements to the end."""
    size = len(elements)
    if size == 0:
        return elements.copy()
    n %= size
    if direction == RIGHT:
        n = (size - n) % size
    elif direction != LEFT:
        raise InvalidArgument(f"direction must be {LEFT!r} or {RIGHT!r}")
    return np.concatenate([elements[n:], elements[:n]])


def permute(elements: np.ndarray, m: PermutationMap) -> np.ndarray:
    if len(elements) != m.block_size:
        raise InvalidArgument(f"block has {len(elements)} elements, map expects {m.block_size}")
    out = np.empty_like(elements)
    out[m.forward] = elements
    return out


def unpermute(elements: np.ndarray, m: PermutationMap) -> np.ndarray:
    if len(elements) != m.block_size:
        raise InvalidArgument(f"block has {len(elements)} elements, map expects {m.block_size}")
    return elements[m.forward]


class StreamState:
    """Sequential encryption or decryption state for one stream.

    Maps are rebuilt every ``block_size`` blocks after regenerating both
    keys. A block whose element count differs from ``block_size`` (the tail
    of a message) gets its own map, drawn from the same epoch key state.
    """

    def __init__(self, keys: KeyPair, params: CipherParams, block_size: int | None = None):
        self.keys = keys
        self.params = params
        self.block_size = compute_block_size(params, keys.map_key) if block_size is None else block_size
        select_method(self.block_size, params.granularity)  # validates the minimum
        if params.granularity is Granularity.BIT and self.block_size % 8:
            raise InvalidArgument("bit block size must be a multiple of 8")
        self.block_number = 0
        self.blocks_since_regen = 0
        self.regenerations = 0
        self._maps: dict[int, PermutationMap] = {}

    @classmethod
    def open(cls, password, params: CipherParams, iv: bytes | None = None, block_size: int | None = None):
        keys = derive_key_pair(password, params.hash_alg)
        if iv is not None:
            keys = apply_iv(keys, iv)
        return cls(keys, params, block_size)

    @property
    def block_bytes(self) -> int:
        return self.block_size // self.params.granularity.elements_per_byte

    def map_for(self, elements: int) -> PermutationMap:
        m = self._maps.get(elements)
        if m is None:
            p = self.params
            method = select_method(elements, p.granularity, p.method, p.method_threshold)
            m = build_map(elements, self.keys.map_key.copy(), method)
            self._maps[elements] = m
        return m

    @property
    def current_map(self) -> PermutationMap:
        return self.map_for(self.block_size)

    def _elements_of(self, block: bytes) -> int:
        n = len(block) * self.params.granularity.elements_per_byte
        if n != self.block_size and n < self.params.granularity.minimum:
            raise InvalidArgument(f"block of {n} elements is below the minimum")
        return n

    def encrypt_block(self, block: bytes) -> bytes:
        gran = self.params.granularity
        m = self.map_for(self._elements_of(block))
        el = rotate_block(to_elements(block, gran), shift_amount(m, self.block_number), LEFT)
        mixed = xor_layer(from_elements(el, gran), self.block_number, self.keys.xor_key, self.block_bytes)
        out = from_elements(permute(to_elements(mixed.tobytes(), gran), m), gran)
        self._advance()
        return out

    def decrypt_block(self, block: bytes) -> bytes:
        gran = self.params.granularity
        m = self.map_for(self._elements_of(block))
        el = unpermute(to_elements(block, gran), m)
        mixed = xor_layer(from_elements(el, gran), self.block_number, self.keys.xor_key, self.block_bytes)
        out = from_elements(rotate_block(to_elements(mixed.tobytes(), gran), shift_amount(m, self.block_number), RIGHT), gran)
        self._advance()
        return out

    def _advance(self) -> None:
        self.block_number += 1
        self.blocks_since_regen += 1
        if self.blocks_since_regen == self.block_size:
            self.regenerate_epoch()

    def regenerate_epoch(self) -> None:
        self.keys = regenerate_pair(self.keys)
        self._maps.clear()
        self.blocks_since_regen = 0
        self.regenerations += 1


def encrypt_message(state: StreamState, data: bytes) -> bytes:
    """Encrypt a whole in-memory message with the file-mode block layout."""
    gran = state.params.granularity
    out, offset = [], 0
    for block in plan_message(len(data), state.params, state.block_size):
        chunk = data[offset:offset + block.data_len]
        chunk += bytes(padded_bytes(block, gran) - len(chunk))
        out.append(state.encrypt_block(chunk))
        offset += block.data_len
    return b"".join(out)


def decrypt_message(state: StreamState, data: bytes, plaintext_len: int) -> bytes:
    gran = state.params.granularity
    out, offset = [], 0
    for block in plan_message(plaintext_len, state.params, state.block_size):
        size = padded_bytes(block, gran)
        out.append(state.decrypt_block(data[offset:offset + size])[:block.data_len])
        offset += size
    return b"".join(out)
