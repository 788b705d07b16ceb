"""Statistical measurements of the map builders and combinatoric estimates.

The trial harness regenerates the five appendix data sets: raw affine
positions, iteration maps, unfolding maps, and the per-position nonlinearity
flags of both builders. Each trial derives fresh keys from a random
64-character password with SHA-512.

The differential-linear relation an attacker would need to solve,

    final = ((initial + (block_number * A + B) mod N) * C + D) mod N

has four unknown 32-bit key words A, B, C, D. It is provided as
:func:`differential_linear_position` for experimentation; no solver exists.
"""

from __future__ import annotations

import json
import math
import string
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy import stats

from .cipher import StreamState, encrypt_message, shift_amount
from .errors import InvalidArgument
from .keyschedule import HashAlg, KeyMaterial, derive_key_pair
from .params import Granularity
from .permmap import (
    PermutationMap,
    build_map_iteration,
    build_map_unfolding,
    key_fingerprint,
    raw_trace,
)

ALPHA = 0.001
UNFOLDING_MIN_MEAN = 0.95
ITERATION_MAX_MEAN = 0.65
DECILE_MIN_FRACTION = 0.90
UNFOLDING_BEATS_FRACTION = 0.95
MIN_UNIFORMITY_TRIALS = 30
PASSWORD_ALPHABET = string.ascii_letters + string.digits + string.punctuation


@dataclass
class MapStats:
    final_positions: np.ndarray
    nonlinear_flags: np.ndarray
    nonlinear_coefficient: float
    bucket_counts: np.ndarray


@dataclass(frozen=True)
class UniformityResult:
    statistic: float
    dof: int
    p_value: float
    passed: bool


def raw_position_trace(block_size: int, map_key: KeyMaterial) -> np.ndarray:
    """Affine final positions with no collision handling. Does not consume ``map_key``."""
    return raw_trace(block_size, map_key.copy())


def nonlinear_profile(m: PermutationMap, map_key_snapshot: KeyMaterial) -> MapStats:
    """Flag each position where the built map left the affine formula.

    ``map_key_snapshot`` must be the key state the map was built from.
    """
    if m.key_fingerprint is not None and key_fingerprint(map_key_snapshot) != m.key_fingerprint:
        raise InvalidArgument("key snapshot does not match the state the map was built from")
    raw = raw_position_trace(m.block_size, map_key_snapshot)
    flags = m.forward != raw
    return MapStats(
        final_positions=np.asarray(m.forward),
        nonlinear_flags=flags,
        nonlinear_coefficient=float(flags.mean()),
        bucket_counts=np.bincount(m.forward, minlength=m.block_size),
    )


def uniformity_test(bucket_counts, trials: int, alpha: float = ALPHA) -> UniformityResult:
    """Pearson chi-square of ``bucket_counts`` against a flat expectation."""
    counts = np.asarray(bucket_counts, dtype=np.float64)
    if trials < MIN_UNIFORMITY_TRIALS:
        raise InvalidArgument(f"need at least {MIN_UNIFORMITY_TRIALS} trials, got {trials}")
    if counts.ndim != 1 or len(counts) < 2:
        raise InvalidArgument("histogram needs at least two buckets")
    total = counts.sum()
    if total <= 0:
        raise InvalidArgument("histogram is empty")
    expected = total / len(counts)
    statistic = float(((counts - expected) ** 2).sum() / expected)
    dof = len(counts) - 1
    p = float(stats.chi2.sf(statistic, dof))
    return UniformityResult(statistic, dof, p, p >= alpha)


def log10_permutations(block_size: int) -> float:
    if block_size < 1:
        raise InvalidArgument("block_size must be >= 1")
    return math.lgamma(block_size + 1) / math.log(10)


def log10_keyspace(key_bits: int) -> float:
    if key_bits < 1:
        raise InvalidArgument("key_bits must be >= 1")
    return key_bits * math.log10(2)


def differential_linear_position(initial: int, block_number: int, a: int, b: int, c: int, d: int, block_size: int) -> int:
    return ((initial + (block_number * a + b) % block_size) * c + d) % block_size


@dataclass
class DifferenceReport:
    count: int
    positions: list[int]
    predicted_position: int | None


def differential_probe(
    state_factory: Callable[[], StreamState], plaintext: bytes, byte_index: int
) -> DifferenceReport:
    """Encrypt ``plaintext`` and a copy with one byte flipped; compare ciphertexts.

    For byte granularity and a flip inside the first block, the difference
    should land on ``forward[(j - shift) mod N]`` and nowhere else.
    """
    first = state_factory()
    if len(plaintext) < first.block_bytes:
        raise InvalidArgument("plaintext must cover at least one block")
    if not 0 <= byte_index < len(plaintext):
        raise InvalidArgument("byte_index out of range")
    predicted = None
    if first.params.granularity is Granularity.BYTE and byte_index < first.block_bytes:
        m = first.current_map
        shift = shift_amount(m, first.block_number)
        predicted = int(m.forward[(byte_index - shift) % m.block_size])
    flipped = bytearray(plaintext)
    flipped[byte_index] ^= 0xFF
    a = np.frombuffer(encrypt_message(first, plaintext), np.uint8)
    b = np.frombuffer(encrypt_message(state_factory(), bytes(flipped)), np.uint8)
    positions = np.flatnonzero(a != b).tolist()
    return DifferenceReport(len(positions), positions, predicted)


def random_password(rng: np.random.Generator, length: int = 64) -> str:
    return "".join(rng.choice(list(PASSWORD_ALPHABET), size=length))


@dataclass
class TrialData:
    """Per-trial rows for the five appendix data sets, each shaped (trials, N)."""

    block_size: int
    raw: np.ndarray
    iteration: np.ndarray
    unfolding: np.ndarray
    iteration_flags: np.ndarray
    unfolding_flags: np.ndarray

    @property
    def trials(self) -> int:
        return self.raw.shape[0]


def run_trials(trials: int, block_size: int = 10_000, seed: int = 0, alg: HashAlg = HashAlg.SHA512) -> TrialData:
    if trials < 1:
        raise InvalidArgument("trials must be >= 1")
    rng = np.random.default_rng(seed)
    shape = (trials, block_size)
    raw = np.empty(shape, np.int64)
    it = np.empty(shape, np.int64)
    un = np.empty(shape, np.int64)
    it_flags = np.empty(shape, bool)
    un_flags = np.empty(shape, bool)
    for t in range(trials):
        key = derive_key_pair(random_password(rng), alg).map_key
        raw[t] = raw_position_trace(block_size, key)
        it[t] = build_map_iteration(block_size, key.copy()).forward
        un[t] = build_map_unfolding(block_size, key.copy()).forward
        it_flags[t] = it[t] != raw[t]
        un_flags[t] = un[t] != raw[t]
    return TrialData(block_size, raw, it, un, it_flags, un_flags)


@dataclass
class Check:
    name: str
    value: float | None
    threshold: float | None
    passed: bool | None
    detail: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"check": self.name, "value": self.value, "threshold": self.threshold, "passed": self.passed, **self.detail}


def decile_rates(flags: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-trial mean flag rate over the first and last tenth of the map."""
    tenth = max(1, flags.shape[1] // 10)
    return flags[:, :tenth].mean(axis=1), flags[:, -tenth:].mean(axis=1)


def summarize(data: TrialData, alpha: float = ALPHA) -> list[Check]:
    n = data.block_size
    un_coef = data.unfolding_flags.mean(axis=1)
    it_coef = data.iteration_flags.mean(axis=1)
    first, last = decile_rates(data.iteration_flags)
    decile_frac = float((last >= first).mean())
    first_linear = int((~data.unfolding_flags[:, 0]).sum())
    beats = float((un_coef > it_coef).mean())
    checks = [
        Check("unfolding_mean_coefficient", float(un_coef.mean()), UNFOLDING_MIN_MEAN, bool(un_coef.mean() >= UNFOLDING_MIN_MEAN)),
        Check("unfolding_first_element_linear", first_linear, data.trials, first_linear == data.trials),
        Check("iteration_mean_coefficient", float(it_coef.mean()), ITERATION_MAX_MEAN, bool(it_coef.mean() <= ITERATION_MAX_MEAN)),
        Check("iteration_last_decile_ge_first", decile_frac, DECILE_MIN_FRACTION, decile_frac >= DECILE_MIN_FRACTION),
        Check("unfolding_beats_iteration", beats, UNFOLDING_BEATS_FRACTION, beats >= UNFOLDING_BEATS_FRACTION),
    ]
    for name, rows in (("raw", data.raw), ("iteration", data.iteration), ("unfolding", data.unfolding)):
        counts = np.bincount(rows.ravel(), minlength=n)
        if data.trials >= MIN_UNIFORMITY_TRIALS:
            res = uniformity_test(counts, data.trials, alpha)
            checks.append(Check(f"{name}_uniformity_p", res.p_value, alpha, res.passed, {"chi2": res.statistic, "dof": res.dof}))
        else:
            checks.append(Check(f"{name}_uniformity_p", None, alpha, None, {"skipped": "too few trials"}))
    return checks


APPENDIX_FILES = {
    "appendix1.csv": "raw",
    "appendix2.csv": "iteration",
    "appendix3.csv": "unfolding",
    "appendix4.csv": "iteration_flags",
    "appendix5.csv": "unfolding_flags",
}


def write_csvs(data: TrialData, outdir: "str | Path") -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    trials, n = data.raw.shape
    trial_col = np.repeat(np.arange(trials), n)
    pos_col = np.tile(np.arange(n), trials)
    written = []
    for fname, attr in APPENDIX_FILES.items():
        values = getattr(data, attr).astype(np.int64).ravel()
        path = outdir / fname
        np.savetxt(
            path,
            np.column_stack([trial_col, pos_col, values]),
            fmt="%d",
            delimiter=",",
            header="trial,position,value",
            comments="",
        )
        written.append(path)
    return written


def write_report(checks: list[Check], path: "str | Path") -> None:
    with open(path, "w") as fh:
        for c in checks:
            fh.write(json.dumps(c.as_dict()) + "\n")
