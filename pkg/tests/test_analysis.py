import json
import math
import os

import numpy as np
import pytest

from conftest import words_key, zero_key
from puzzle_cipher import analysis
from puzzle_cipher.analysis import (
    differential_linear_position,
    differential_probe,
    log10_keyspace,
    log10_permutations,
    nonlinear_profile,
    raw_position_trace,
    uniformity_test,
)
from puzzle_cipher.cipher import StreamState
from puzzle_cipher.errors import InvalidArgument
from puzzle_cipher.keyschedule import HashAlg, KeyMaterial, KeyPair
from puzzle_cipher.params import CipherParams
from puzzle_cipher.permmap import build_map_iteration, build_map_unfolding


def test_raw_trace_examples():
    assert raw_position_trace(100, zero_key()).tolist() == [0] * 100
    key = words_key([1] * 200)
    assert raw_position_trace(100, key).tolist() == [(i + 1) % 100 for i in range(100)]
    assert key.cursor == 0


def test_zero_key_unfolding_profile():
    n = 100
    key = zero_key()
    m = build_map_unfolding(n, key.copy())
    prof = nonlinear_profile(m, key)
    assert not prof.nonlinear_flags[0] and prof.nonlinear_flags[1:].all()
    assert prof.nonlinear_coefficient == pytest.approx((n - 1) / n)
    assert prof.bucket_counts.tolist() == [1] * n


def test_profile_rejects_wrong_snapshot():
    key = KeyMaterial(os.urandom(64))
    m = build_map_iteration(200, key.copy())
    with pytest.raises(InvalidArgument):
        nonlinear_profile(m, KeyMaterial(os.urandom(64)))


def test_uniformity_examples():
    flat = uniformity_test([50] * 20, trials=50)
    assert flat.statistic == 0 and flat.passed
    spike = uniformity_test([1000] + [0] * 19, trials=50)
    assert not spike.passed
    with pytest.raises(InvalidArgument):
        uniformity_test([1000], trials=50)
    with pytest.raises(InvalidArgument):
        uniformity_test([50] * 20, trials=29)


def test_uniformity_matches_scipy():
    from scipy.stats import chisquare

    counts = np.random.default_rng(3).poisson(40, 300)
    res = uniformity_test(counts, trials=40)
    ref = chisquare(counts)
    assert res.statistic == pytest.approx(ref.statistic)
    assert res.p_value == pytest.approx(ref.pvalue)


def test_log10_permutations():
    assert log10_permutations(1) == 0
    assert log10_permutations(100) == pytest.approx(157.97, abs=0.01)
    assert log10_permutations(1_000_000) == pytest.approx(5_565_708.9, abs=1.0)
    with pytest.raises(InvalidArgument):
        log10_permutations(0)


def test_log10_permutations_against_exact_sum():
    exact = 0.0
    worst = 0.0
    for n in range(1, 10_001):
        exact += math.log10(n)
        worst = max(worst, abs(log10_permutations(n) - exact))
    assert worst < 1e-6


def test_log10_keyspace():
    assert log10_keyspace(256) == pytest.approx(77.06, abs=0.01)
    assert log10_keyspace(1024) == pytest.approx(308.25, abs=0.01)
    assert log10_keyspace(1) == pytest.approx(0.301, abs=0.001)


def test_differential_linear_identity():
    assert [differential_linear_position(i, 5, 0, 0, 1, 0, 10) for i in range(10)] == list(range(10))
    assert differential_linear_position(3, 2, 1, 1, 1, 0, 10) == 6


def test_probe_degenerate_state():
    keys = KeyPair(zero_key(), zero_key(), HashAlg.SHA512)
    factory = lambda: StreamState(keys.copy(), CipherParams(100), block_size=100)
    rep = differential_probe(factory, bytes(100), 0)
    assert rep.count == 1 and rep.positions == [0] and rep.predicted_position == 0


def test_probe_random_state():
    for seed in range(10):
        iv = seed.to_bytes(16, "big")
        factory = lambda: StreamState.open(b"probe-password", CipherParams(512), iv)
        n = factory().block_bytes
        j = (seed * 97) % n
        rep = differential_probe(factory, os.urandom(n), j)
        assert rep.count == 1 and rep.positions == [rep.predicted_position]


def test_probe_rejects_short_plaintext():
    factory = lambda: StreamState.open(b"probe-password", CipherParams(512), bytes(16))
    with pytest.raises(InvalidArgument):
        differential_probe(factory, bytes(10), 0)


def test_small_trial_run_and_outputs(tmp_path):
    data = analysis.run_trials(3, block_size=300, seed=5)
    assert data.raw.shape == (3, 300)
    assert ((0 <= data.raw) & (data.raw < 300)).all()
    for rows in (data.iteration, data.unfolding):
        assert all(sorted(r.tolist()) == list(range(300)) for r in rows)
    checks = analysis.summarize(data)
    names = {c.name for c in checks}
    assert "unfolding_mean_coefficient" in names and "raw_uniformity_p" in names
    assert all(c.passed is None for c in checks if c.name.endswith("uniformity_p"))
    paths = analysis.write_csvs(data, tmp_path)
    assert [p.name for p in paths] == [f"appendix{i}.csv" for i in range(1, 6)]
    lines = paths[0].read_text().splitlines()
    assert lines[0] == "trial,position,value" and len(lines) == 1 + 900
    assert lines[1] == f"0,0,{data.raw[0, 0]}"
    analysis.write_report(checks, tmp_path / "summary.jsonl")
    rows = [json.loads(l) for l in (tmp_path / "summary.jsonl").read_text().splitlines()]
    assert len(rows) == len(checks)


def test_trials_deterministic():
    a = analysis.run_trials(2, block_size=200, seed=11)
    b = analysis.run_trials(2, block_size=200, seed=11)
    assert np.array_equal(a.unfolding, b.unfolding) and np.array_equal(a.raw, b.raw)
