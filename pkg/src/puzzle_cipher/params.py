"""Secret block sizing, granularity, map-method selection and message layout."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

from .errors import InvalidArgument
from .keyschedule import HashAlg, KeyMaterial

MIN_BYTE_BLOCK = 100
MIN_BIT_BLOCK = 128
DEFAULT_METHOD_THRESHOLD = 10_000


class Granularity(enum.Enum):
    BYTE = "byte"
    BIT = "bit"

    @property
    def minimum(self) -> int:
        return MIN_BYTE_BLOCK if self is Granularity.BYTE else MIN_BIT_BLOCK

    @property
    def elements_per_byte(self) -> int:
        return 1 if self is Granularity.BYTE else 8


class Method(enum.Enum):
    AUTO = "auto"
    UNFOLDING = "unfolding"
    ITERATION = "iteration"


@dataclass(frozen=True)
class CipherParams:
    """Stream configuration.

    ``reference_block_size`` counts elements: bytes for byte granularity,
    bits for bit granularity.
    """

    reference_block_size: int = 4096
    granularity: Granularity = Granularity.BYTE
    hash_alg: HashAlg = HashAlg.SHA512
    method: Method = Method.AUTO
    method_threshold: int = DEFAULT_METHOD_THRESHOLD

    def __post_init__(self) -> None:
        r = self.reference_block_size
        if self.granularity is Granularity.BYTE and r < MIN_BYTE_BLOCK:
            raise InvalidArgument(f"byte reference block size must be >= {MIN_BYTE_BLOCK}, got {r}")
        if self.granularity is Granularity.BIT and (r < MIN_BIT_BLOCK or r % 8):
            raise InvalidArgument(
                f"bit reference block size must be >= {MIN_BIT_BLOCK} and a multiple of 8, got {r}"
            )
        if self.method_threshold <= 0:
            raise InvalidArgument("method_threshold must be positive")


def compute_block_size(params: CipherParams, map_key: KeyMaterial) -> int:
    """Reference size plus the first six key words modulo half the reference size.

    The words are peeked, not consumed. Python integers keep the sum exact.
    """
    r = params.reference_block_size
    total = sum(int(w) for w in map_key.peek_words(6))
    size = r + total % (r // 2)
    if params.granularity is Granularity.BIT:
        size = max(MIN_BIT_BLOCK, size - size % 8)
    return size


def select_method(
    block_size: int,
    granularity: Granularity = Granularity.BYTE,
    override: Method = Method.AUTO,
    threshold: int = DEFAULT_METHOD_THRESHOLD,
) -> Method:
    if block_size < granularity.minimum:
        raise InvalidArgument(f"block size {block_size} is below the {granularity.value} minimum")
    if override is not Method.AUTO:
        return override
    return Method.UNFOLDING if block_size <= threshold else Method.ITERATION


class PlannedBlock(NamedTuple):
    index: int
    elements: int
    data_len: int  # plaintext bytes carried, the rest is zero padding


def padded_bytes(block: PlannedBlock, granularity: Granularity) -> int:
    return block.elements // granularity.elements_per_byte


def plan_message(total_len: int, params: CipherParams, block_size: int) -> list[PlannedBlock]:
    """Split ``total_len`` plaintext bytes into blocks of ``block_size`` elements.

    The residual becomes one last block with its own size, zero-padded up to
    the granularity minimum when it falls short of it.
    """
    if total_len < 1:
        raise InvalidArgument("message must not be empty")
    per = params.granularity.elements_per_byte
    if block_size % per:
        raise InvalidArgument("bit block size must be a multiple of 8")
    block_bytes = block_size // per
    full, rest = divmod(total_len, block_bytes)
    blocks = [PlannedBlock(i, block_size, block_bytes) for i in range(full)]
    if rest:
        elements = max(rest * per, params.granularity.minimum)
        blocks.append(PlannedBlock(full, elements, rest))
    return blocks
