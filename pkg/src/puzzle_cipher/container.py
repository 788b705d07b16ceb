"""File container and packet framing.

Container layout, all integers big-endian::

    magic "PZLE" | version u8 | hash id u8 | flags u8 | iv_len u16 | iv | plaintext_len u64

followed by the ciphertext blocks. Flags bit 0 is the granularity (1 = bit).
The reference block size is never written: both sides must agree on it out
of band. There is no authentication tag.
"""

from __future__ import annotations

import io
import os
import struct
from dataclasses import dataclass
from typing import BinaryIO

from .cipher import StreamState
from .errors import FormatError, InvalidArgument
from .keyschedule import HashAlg, KeyPair, regenerate_pair
from .params import CipherParams, Granularity, Method, padded_bytes, plan_message

MAGIC = b"PZLE"
VERSION = 1
MIN_IV_LEN = 8
DEFAULT_IV_LEN = 16
FLAG_BIT = 0x01

_FIXED = struct.Struct(">4sBBBH")
_LENGTH = struct.Struct(">Q")


@dataclass(frozen=True)
class ContainerHeader:
    hash_alg: HashAlg
    granularity: Granularity
    iv: bytes
    plaintext_len: int
    version: int = VERSION

    def __post_init__(self) -> None:
        if not MIN_IV_LEN <= len(self.iv) <= 0xFFFF:
            raise InvalidArgument(f"IV must be {MIN_IV_LEN}..65535 bytes, got {len(self.iv)}")
        if self.plaintext_len < 1:
            raise InvalidArgument("plaintext must not be empty")

    def __len__(self) -> int:
        return _FIXED.size + len(self.iv) + _LENGTH.size

    def pack(self) -> bytes:
        flags = FLAG_BIT if self.granularity is Granularity.BIT else 0
        return (
            _FIXED.pack(MAGIC, self.version, int(self.hash_alg), flags, len(self.iv))
            + self.iv
            + _LENGTH.pack(self.plaintext_len)
        )

    @classmethod
    def read(cls, src: BinaryIO) -> "ContainerHeader":
        fixed = _read_exact(src, _FIXED.size, 0)
        magic, version, alg_id, flags, iv_len = _FIXED.unpack(fixed)
        if magic != MAGIC:
            raise FormatError(f"bad magic {magic!r}")
        if version != VERSION:
            raise FormatError(f"unsupported container version {version}")
        try:
            alg = HashAlg(alg_id)
        except ValueError:
            raise FormatError(f"unknown hash algorithm id {alg_id}") from None
        if flags & ~FLAG_BIT:
            raise FormatError(f"unknown flags 0x{flags:02x}")
        if iv_len < MIN_IV_LEN:
            raise FormatError(f"IV length {iv_len} below minimum {MIN_IV_LEN}")
        iv = _read_exact(src, iv_len, _FIXED.size)
        (length,) = _LENGTH.unpack(_read_exact(src, _LENGTH.size, _FIXED.size + iv_len))
        if length == 0:
            raise FormatError("plaintext length is zero")
        gran = Granularity.BIT if flags & FLAG_BIT else Granularity.BYTE
        return cls(alg, gran, iv, length, version)


def _read_exact(src: BinaryIO, n: int, offset: int) -> bytes:
    try:
        data = src.read(n)
    except OSError as exc:
        raise OSError(f"read failed at byte {offset}: {exc}") from exc
    if len(data) != n:
        raise FormatError(f"truncated container: wanted {n} bytes at offset {offset}, got {len(data)}")
    return data


def _write(dst: BinaryIO, data: bytes, offset: int) -> None:
    try:
        dst.write(data)
    except OSError as exc:
        raise OSError(f"write failed at byte {offset}: {exc}") from exc


def _stream_length(src: BinaryIO) -> int:
    try:
        here = src.tell()
        end = src.seek(0, io.SEEK_END)
        src.seek(here)
    except (OSError, AttributeError, io.UnsupportedOperation) as exc:
        raise InvalidArgument("input is not seekable; pass length explicitly") from exc
    return end - here


def encrypt_stream(
    src: BinaryIO,
    dst: BinaryIO,
    password,
    params: CipherParams,
    iv: bytes | None = None,
    length: int | None = None,
) -> StreamState:
    """Encrypt ``src`` into a container on ``dst``, one block in memory at a time."""
    iv = os.urandom(DEFAULT_IV_LEN) if iv is None else bytes(iv)
    length = _stream_length(src) if length is None else length
    header = ContainerHeader(params.hash_alg, params.granularity, iv, length)
    state = StreamState.open(password, params, iv)
    _write(dst, header.pack(), 0)
    offset = len(header)
    for block in plan_message(length, params, state.block_size):
        data = _read_exact(src, block.data_len, offset - len(header))
        data += bytes(padded_bytes(block, params.granularity) - len(data))
        out = state.encrypt_block(data)
        _write(dst, out, offset)
        offset += len(out)
    return state


def decrypt_stream(
    src: BinaryIO,
    dst: BinaryIO,
    password,
    reference_block_size: int,
    granularity: Granularity | None = None,
    method: Method = Method.AUTO,
) -> StreamState:
    header = ContainerHeader.read(src)
    if granularity is not None and granularity is not header.granularity:
        raise FormatError(
            f"container holds {header.granularity.value} granularity, caller asked for {granularity.value}"
        )
    params = CipherParams(reference_block_size, header.granularity, header.hash_alg, method)
    state = StreamState.open(password, params, header.iv)
    offset = len(header)
    for block in plan_message(header.plaintext_len, params, state.block_size):
        size = padded_bytes(block, params.granularity)
        try:
            chunk = _read_exact(src, size, offset)
        except FormatError as exc:
            # a wrong reference size moves the padded tail, which looks the same
            raise FormatError(f"{exc} (truncated file or wrong reference block size)") from None
        plain = state.decrypt_block(chunk)
        _write(dst, plain[:block.data_len], offset)
        offset += size
    return state


def encrypt_file(plaintext: bytes, password, params: CipherParams, iv: bytes | None = None) -> bytes:
    out = io.BytesIO()
    encrypt_stream(io.BytesIO(plaintext), out, password, params, iv, len(plaintext))
    return out.getvalue()


def decrypt_file(
    container: bytes,
    password,
    reference_block_size: int,
    granularity: Granularity | None = None,
    method: Method = Method.AUTO,
) -> bytes:
    out = io.BytesIO()
    decrypt_stream(io.BytesIO(container), out, password, reference_block_size, granularity, method)
    return out.getvalue()


def _packet_state(payload: bytes, seq: int, keys: KeyPair, granularity: Granularity, method: Method) -> StreamState:
    if seq < 0:
        raise InvalidArgument("sequence number must be >= 0")
    elements = len(payload) * granularity.elements_per_byte
    if elements < granularity.minimum:
        raise InvalidArgument(
            f"packet of {elements} {granularity.value}s is below the minimum of {granularity.minimum}"
        )
    epochs, within = divmod(seq, elements)
    keys = keys.copy()
    for _ in range(epochs):
        keys = regenerate_pair(keys)
    params = CipherParams(elements, granularity, keys.alg, method)
    state = StreamState(keys, params, block_size=elements)
    state.block_number = seq
    state.blocks_since_regen = within
    return state


def encrypt_packet(
    payload: bytes,
    seq: int,
    keys: KeyPair,
    granularity: Granularity = Granularity.BYTE,
    method: Method = Method.AUTO,
) -> bytes:
    """Encrypt one packet as a single block whose size is the payload size.

    ``keys`` should already carry the session IV (see ``apply_iv``).
    """
    return _packet_state(payload, seq, keys, granularity, method).encrypt_block(payload)


def decrypt_packet(
    payload: bytes,
    seq: int,
    keys: KeyPair,
    granularity: Granularity = Granularity.BYTE,
    method: Method = Method.AUTO,
) -> bytes:
    return _packet_state(payload, seq, keys, granularity, method).decrypt_block(payload)
