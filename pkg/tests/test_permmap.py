import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conftest import words_key, zero_key
from puzzle_cipher.errors import ConsistencyError
from puzzle_cipher.keyschedule import KeyMaterial
from puzzle_cipher.params import Method
from puzzle_cipher.permmap import (
    PermutationMap,
    build_map,
    build_map_iteration,
    build_map_unfolding,
    invert,
    raw_final_position,
    raw_trace,
)


def test_raw_final_position_examples():
    assert raw_final_position(1234, 0, 0, 10_000) == 0
    assert raw_final_position(5, 1, 1, 10) == 6
    # 9999 * (2**32 - 1) + (2**32 - 1) == 10000 * (2**32 - 1)
    big = 9999 * 4_294_967_295 + 4_294_967_295
    assert big % 10_000 == 0
    assert raw_final_position(9999, 4_294_967_295, 4_294_967_295, 10_000) == 0


def test_raw_trace_wide_arithmetic():
    n = 10_000
    key = words_key([4_294_967_295, 4_294_967_291] * n)
    expected = [(i * 4_294_967_295 + 4_294_967_291) % n for i in range(n)]
    assert raw_trace(n, key).tolist() == expected


def test_unfolding_zero_key_is_identity():
    assert build_map_unfolding(4, zero_key(32)).forward.tolist() == [0, 1, 2, 3]


def test_iteration_zero_key_walks_down():
    assert build_map_iteration(4, zero_key(32)).forward.tolist() == [0, 3, 2, 1]


def test_iteration_all_ones_is_rotation():
    assert build_map_iteration(4, words_key([1] * 8)).forward.tolist() == [1, 2, 3, 0]


def test_unfolding_small_against_naive():
    key = words_key([3_000_000_001, 17, 99, 4_000_000_000, 5, 6, 7, 2_222_222_222])
    assert build_map_unfolding(7, key.copy()).forward.tolist() == oracles.unfolding(7, key.data)


@pytest.mark.parametrize("n", [100, 101, 128, 997, 1000])
def test_builders_match_naive(n):
    rng = np.random.default_rng(n)
    for _ in range(5):
        data = rng.integers(0, 256, 4 * int(rng.integers(2, 200)), dtype=np.uint8).tobytes()
        assert build_map_unfolding(n, KeyMaterial(data)).forward.tolist() == oracles.unfolding(n, data)
        assert build_map_iteration(n, KeyMaterial(data)).forward.tolist() == oracles.iteration(n, data)
        assert raw_trace(n, KeyMaterial(data)).tolist() == oracles.raw_positions(n, data)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 300), st.integers(1, 40).flatmap(lambda k: st.binary(min_size=4 * k, max_size=4 * k)))
def test_builders_are_bijections(n, data):
    for build in (build_map_unfolding, build_map_iteration):
        m = build(n, KeyMaterial(data))
        assert sorted(m.forward.tolist()) == list(range(n))
        assert np.array_equal(m.inverse[m.forward], np.arange(n))


def test_unfolding_first_element_is_linear():
    rng = np.random.default_rng(7)
    for _ in range(20):
        key = KeyMaterial(rng.integers(0, 256, 256, dtype=np.uint8).tobytes())
        ka, kb = key.peek_words(2)
        m = build_map_unfolding(997, key)
        assert m.forward[0] == raw_final_position(0, int(ka), int(kb), 997)


def test_builder_consumes_two_words_per_element():
    data = bytes(range(64))
    for build in (build_map_unfolding, build_map_iteration):
        key = KeyMaterial(data)
        build(100, key)
        ws = oracles.WordStream(data)
        for _ in range(200):
            ws.next()
        assert key.data == bytes(ws.buf) and key.cursor == ws.cursor


def test_builders_deterministic():
    data = bytes(range(128))
    for method in (Method.UNFOLDING, Method.ITERATION):
        assert build_map(500, KeyMaterial(data), method) == build_map(500, KeyMaterial(data), method)
    with pytest.raises(ValueError):
        build_map(500, KeyMaterial(data), Method.AUTO)


def test_invert_examples():
    ident = PermutationMap.from_forward([0, 1, 2, 3])
    assert invert(ident).forward.tolist() == [0, 1, 2, 3]
    rot = PermutationMap.from_forward([1, 2, 3, 0])
    assert invert(rot).forward.tolist() == [3, 0, 1, 2]
    m = build_map_unfolding(500, KeyMaterial(bytes(range(200))))
    assert invert(invert(m)) == m


@pytest.mark.parametrize("bad", [[0, 0, 1], [0, 1, 3], [-1, 0, 1], []])
def test_non_bijection_rejected(bad):
    with pytest.raises(ConsistencyError):
        PermutationMap.from_forward(bad)


def test_map_arrays_are_read_only():
    m = PermutationMap.from_forward([1, 0])
    with pytest.raises(ValueError):
        m.forward[0] = 0


def test_to_csv(tmp_path):
    m = PermutationMap.from_forward([2, 0, 1])
    path = tmp_path / "map.csv"
    m.to_csv(path)
    assert path.read_text().splitlines() == ["index,final", "0,2", "1,0", "2,1"]
