"""Password to key-pair derivation, IV extension and key regeneration.

Two final keys come out of a password. The XOR key is consumed as bytes;
the map key is consumed as a stream of little-endian uint32 words whose
byte array rotates left by one byte every time the word view is exhausted.
"""

from __future__ import annotations

import enum
import hashlib
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import ConsistencyError, InvalidArgument

GROUP = 3
MIN_RECOMMENDED_PASSWORD = 8


class HashAlg(enum.IntEnum):
    SHA256 = 1
    SHA512 = 2

    @property
    def output_len(self) -> int:
        return 32 if self is HashAlg.SHA256 else 64

    def digest(self, data: bytes) -> bytes:
        name = "sha256" if self is HashAlg.SHA256 else "sha512"
        return hashlib.new(name, data).digest()

    @classmethod
    def parse(cls, value: "str | int | HashAlg") -> "HashAlg":
        if isinstance(value, HashAlg):
            return value
        if isinstance(value, int):
            try:
                return cls(value)
            except ValueError:
                raise InvalidArgument(f"unknown hash algorithm id {value}") from None
        key = value.replace("-", "").upper()
        if key not in cls.__members__:
            raise InvalidArgument(f"unknown hash algorithm {value!r}")
        return cls[key]


@dataclass
class KeyMaterial:
    """A final key with a byte view and a rotating 32-bit word view.

    ``data`` always holds the *current* byte arrangement, i.e. after any
    rotations performed by :meth:`next_words`. ``cursor`` indexes the word
    view and is kept strictly below :attr:`word_count`.
    """

    data: bytes
    cursor: int = 0

    def __post_init__(self) -> None:
        self.data = bytes(self.data)
        if not self.data or len(self.data) % 4:
            raise InvalidArgument("key length must be a positive multiple of 4 bytes")
        if not 0 <= self.cursor < self.word_count:
            raise InvalidArgument("word cursor out of range")

    def __len__(self) -> int:
        return len(self.data)

    @property
    def word_count(self) -> int:
        return len(self.data) // 4

    def words(self) -> np.ndarray:
        """Current word view, without touching the cursor."""
        return np.frombuffer(self.data, dtype="<u4").astype(np.uint32)

    def peek_words(self, n: int) -> np.ndarray:
        if n > self.word_count:
            raise InvalidArgument(f"key holds {self.word_count} words, {n} requested")
        return self.words()[:n]

    def copy(self) -> "KeyMaterial":
        return replace(self)

    def next_words(self, n: int) -> np.ndarray:
        """Consume ``n`` words, rotating the byte array on every exhaustion."""
        if n < 1:
            raise InvalidArgument("n must be >= 1")
        size = len(self.data)
        wc = size // 4
        buf = np.frombuffer(self.data, dtype=np.uint8)
        doubled = np.concatenate([buf, buf])
        out = np.empty(n, dtype=np.uint32)

        def sweep(rot: int) -> np.ndarray:
            rot %= size
            return doubled[rot:rot + size].view("<u4")

        rot = 0
        cursor = self.cursor
        take = min(n, wc - cursor)
        out[:take] = sweep(rot)[cursor:cursor + take]
        filled = take
        cursor += take
        if cursor == wc:
            rot, cursor = 1, 0

        full = (n - filled) // wc
        if full:
            windows = sliding_window_view(doubled, size)[:size]
            rows = windows[(rot + np.arange(full)) % size]
            out[filled:filled + full * wc] = np.ascontiguousarray(rows).view("<u4").ravel()
            filled += full * wc
            rot += full

        tail = n - filled
        if tail:
            out[filled:] = sweep(rot)[:tail]
            cursor = tail

        rot %= size
        self.data = self.data[rot:] + self.data[:rot]
        self.cursor = cursor
        return out


@dataclass
class KeyPair:
    xor_key: KeyMaterial
    map_key: KeyMaterial
    alg: HashAlg = field(default=HashAlg.SHA512)

    def copy(self) -> "KeyPair":
        return KeyPair(self.xor_key.copy(), self.map_key.copy(), self.alg)


def _as_bytes(password: "bytes | str") -> bytes:
    if isinstance(password, str):
        return password.encode("utf-8")
    return bytes(password)


def derive_parts(password: "bytes | str", alg: HashAlg) -> list[bytes]:
    """Digest every 3-byte-aligned prefix, always ending with the full password."""
    password = _as_bytes(password)
    if not password:
        raise InvalidArgument("password must not be empty")
    ends = list(range(GROUP, len(password), GROUP)) + [len(password)]
    return [alg.digest(password[:end]) for end in ends]


def second_pass(parts: list[bytes], alg: HashAlg) -> bytes:
    """Reverse pass over the prefix digests.

    Entries 0..N-2 hash the suffix concatenations parts[i:], and the last
    entry hashes every part except the second-to-last one.
    """
    n = len(parts)
    if n == 0:
        raise InvalidArgument("parts must not be empty")
    if n == 1:
        return alg.digest(parts[0])
    out = [alg.digest(b"".join(parts[i:])) for i in range(n - 1)]
    out.append(alg.digest(b"".join(parts[:n - 2] + parts[n - 1:])))
    return b"".join(out)


def xor_fold(intermediate: bytes) -> bytes:
    if len(intermediate) % 4:
        raise ConsistencyError("intermediate key length is not divisible by 4")
    q = len(intermediate) // 4
    e, f, g, h = (np.frombuffer(intermediate, np.uint8, q, i * q) for i in range(4))
    return np.concatenate([e ^ g, e ^ h, f ^ g, f ^ h]).tobytes()


def derive_key(password: "bytes | str", alg: HashAlg) -> bytes:
    return xor_fold(second_pass(derive_parts(password, alg), alg))


def derive_key_pair(password: "bytes | str", alg: HashAlg = HashAlg.SHA512) -> KeyPair:
    password = _as_bytes(password)
    if len(password) < MIN_RECOMMENDED_PASSWORD:
        warnings.warn(
            f"password shorter than {MIN_RECOMMENDED_PASSWORD} bytes", UserWarning, stacklevel=2
        )
    return KeyPair(
        xor_key=KeyMaterial(derive_key(password, alg)),
        map_key=KeyMaterial(derive_key(password[::-1], alg)),
        alg=alg,
    )


def extend_iv(iv: bytes, key_len: int, alg: HashAlg) -> bytes:
    """Hash chain over the IV, truncated to ``key_len``. The raw IV is not included."""
    if not iv:
        raise InvalidArgument("IV must not be empty")
    if key_len < 1:
        raise InvalidArgument("key_len must be >= 1")
    ext = alg.digest(bytes(iv))
    while len(ext) < key_len:
        ext += alg.digest(ext)
    return ext[:key_len]


def _xor(a: bytes, b: bytes) -> bytes:
    return (np.frombuffer(a, np.uint8) ^ np.frombuffer(b, np.uint8)).tobytes()


def xor_with_mask(keys: KeyPair, mask: bytes) -> KeyPair:
    return KeyPair(
        KeyMaterial(_xor(keys.xor_key.data, mask)),
        KeyMaterial(_xor(keys.map_key.data, mask)),
        keys.alg,
    )


def apply_iv(keys: KeyPair, iv: bytes) -> KeyPair:
    mask = extend_iv(iv, len(keys.xor_key), keys.alg)
    return xor_with_mask(keys, mask)


def regenerate(key: KeyMaterial, alg: HashAlg) -> KeyMaterial:
    """Replace every digest-sized block of the key with its own digest."""
    size = alg.output_len
    if len(key.data) % size:
        raise ConsistencyError(f"key length {len(key.data)} is not a multiple of {size}")
    blocks = (key.data[i:i + size] for i in range(0, len(key.data), size))
    return KeyMaterial(b"".join(alg.digest(b) for b in blocks))


def regenerate_pair(keys: KeyPair) -> KeyPair:
    return KeyPair(regenerate(keys.xor_key, keys.alg), regenerate(keys.map_key, keys.alg), keys.alg)
