"""Puzzle: a keyed transposition block cipher plus its analysis harness.

No integrity protection is provided. A wrong password or wrong reference
block size decrypts to garbage without any error.
"""

from .errors import ConsistencyError, FormatError, InvalidArgument, PuzzleError
from .keyschedule import HashAlg, KeyMaterial, KeyPair, derive_key_pair, apply_iv
from .params import CipherParams, Granularity, Method, compute_block_size, plan_message, select_method
from .permmap import PermutationMap, build_map, build_map_iteration, build_map_unfolding
from .cipher import StreamState
from .container import (
    ContainerHeader,
    decrypt_file,
    decrypt_packet,
    decrypt_stream,
    encrypt_file,
    encrypt_packet,
    encrypt_stream,
)

__version__ = "0.1.0"

__all__ = [
    "CipherParams",
    "ConsistencyError",
    "ContainerHeader",
    "FormatError",
    "Granularity",
    "HashAlg",
    "InvalidArgument",
    "KeyMaterial",
    "KeyPair",
    "Method",
    "PermutationMap",
    "PuzzleError",
    "StreamState",
    "apply_iv",
    "build_map",
    "build_map_iteration",
    "build_map_unfolding",
    "compute_block_size",
    "decrypt_file",
    "decrypt_packet",
    "decrypt_stream",
    "derive_key_pair",
    "encrypt_file",
    "encrypt_packet",
    "encrypt_stream",
    "plan_message",
    "select_method",
]
