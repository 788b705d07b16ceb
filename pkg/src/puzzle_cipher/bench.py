"""Encryption throughput measurement for both map methods."""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cipher import StreamState, encrypt_message
from .keyschedule import HashAlg, derive_key_pair
from .params import CipherParams, Granularity, Method

DEFAULT_SIZES = (100, 10_000, 1_000_000)
DEFAULT_BYTES = 1 << 20
BENCH_PASSWORD = "benchmark-password-0123456789"


@dataclass(frozen=True)
class BenchRow:
    method: Method
    block_size: int
    nbytes: int
    seconds: float
    mb_per_s: float
    cycles_per_byte: float | None


def cpu_hz() -> float | None:
    """Nominal clock from /proc/cpuinfo; None where unavailable."""
    try:
        text = Path("/proc/cpuinfo").read_text()
    except OSError:
        return None
    for line in text.splitlines():
        if line.lower().startswith("cpu mhz"):
            try:
                return float(line.split(":", 1)[1]) * 1e6
            except ValueError:
                return None
    return None


def bench_one(method: Method, block_size: int, nbytes: int = DEFAULT_BYTES, seed: int = 0) -> BenchRow:
    """Time stream setup, map construction and encryption of ``nbytes``.

    At least two blocks are always encrypted so the map build is amortised
    over real work.
    """
    nbytes = max(nbytes, 2 * block_size)
    data = np.random.default_rng(seed).integers(0, 256, nbytes, dtype=np.uint8).tobytes()
    keys = derive_key_pair(BENCH_PASSWORD, HashAlg.SHA512)
    params = CipherParams(block_size, Granularity.BYTE, HashAlg.SHA512, method)
    start = time.perf_counter()
    encrypt_message(StreamState(keys.copy(), params, block_size=block_size), data)
    seconds = time.perf_counter() - start
    hz = cpu_hz()
    return BenchRow(
        method,
        block_size,
        nbytes,
        seconds,
        nbytes / seconds / 1e6,
        seconds * hz / nbytes if hz else None,
    )


def warm_up() -> None:
    """Load the compiled map kernels so the first timed row does not pay for it."""
    for m in (Method.UNFOLDING, Method.ITERATION):
        bench_one(m, 100, 200)


def run_bench(sizes=DEFAULT_SIZES, nbytes: int = DEFAULT_BYTES) -> list[BenchRow]:
    warm_up()
    return [bench_one(m, n, nbytes) for m in (Method.UNFOLDING, Method.ITERATION) for n in sizes]


def format_table(rows: list[BenchRow]) -> str:
    lines = [f"{'method':<10} {'block':>9} {'bytes':>10} {'seconds':>9} {'MB/s':>9} {'cyc/B':>9}"]
    for r in rows:
        cpb = f"{r.cycles_per_byte:9.1f}" if r.cycles_per_byte is not None else f"{'n/a':>9}"
        lines.append(f"{r.method.value:<10} {r.block_size:>9} {r.nbytes:>10} {r.seconds:>9.3f} {r.mb_per_s:>9.2f} {cpb}")
    return "\n".join(lines)
