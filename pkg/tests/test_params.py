import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conftest import words_key, zero_key
from puzzle_cipher.errors import InvalidArgument
from puzzle_cipher.keyschedule import KeyMaterial, derive_key_pair
from puzzle_cipher.params import (
    CipherParams,
    Granularity,
    Method,
    PlannedBlock,
    compute_block_size,
    padded_bytes,
    plan_message,
    select_method,
)

BYTE, BIT = Granularity.BYTE, Granularity.BIT


def test_zero_key_gives_reference_size():
    assert compute_block_size(CipherParams(100), zero_key()) == 100


def test_sum_modulo_half_reference():
    key = words_key([20, 17, 50, 0, 100, 0, 999, 999])  # sum 187, 187 % 50 == 37
    assert compute_block_size(CipherParams(100), key) == 137


def test_sum_is_not_truncated_to_32_bits():
    key = words_key([0xFFFFFFFF] * 8)
    assert compute_block_size(CipherParams(1000), key) == 1000 + (6 * 0xFFFFFFFF) % 500


def test_fixed_key_against_oracle():
    key = derive_key_pair(b"mypassword").map_key
    got = compute_block_size(CipherParams(4096), key)
    assert got == oracles.block_size(4096, False, key.data)
    assert key.cursor == 0


def test_bit_rounding_down_to_multiple_of_8():
    key = words_key([5, 0, 0, 0, 0, 0, 0, 0])
    assert compute_block_size(CipherParams(128, BIT), key) == 128
    key = words_key([13, 0, 0, 0, 0, 0, 0, 0])
    assert compute_block_size(CipherParams(128, BIT), key) == 136


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(reference_block_size=99),
        dict(reference_block_size=120, granularity=BIT),
        dict(reference_block_size=130, granularity=BIT),
        dict(method_threshold=0),
    ],
)
def test_invalid_params(kwargs):
    with pytest.raises(InvalidArgument):
        CipherParams(**kwargs)


@settings(max_examples=200, deadline=None)
@given(st.binary(min_size=24, max_size=24), st.integers(100, 100_000), st.booleans())
def test_block_size_range(raw, r, bits):
    key = KeyMaterial(raw)
    if bits:
        r = max(128, r - r % 8)
    size = compute_block_size(CipherParams(r, BIT if bits else BYTE), key)
    assert r <= size < r + r // 2
    if bits:
        assert size % 8 == 0 and size >= 128
    assert size == oracles.block_size(r, bits, raw)


@pytest.mark.parametrize(
    "size,gran,expected",
    [
        (10_000, BYTE, Method.UNFOLDING),
        (10_001, BYTE, Method.ITERATION),
        (128, BIT, Method.UNFOLDING),
        (100, BYTE, Method.UNFOLDING),
        (1_000_000, BYTE, Method.ITERATION),
    ],
)
def test_select_method(size, gran, expected):
    assert select_method(size, gran) is expected


def test_select_method_override_and_minimum():
    assert select_method(100, BYTE, Method.ITERATION) is Method.ITERATION
    assert select_method(50_000, BYTE, Method.UNFOLDING) is Method.UNFOLDING
    with pytest.raises(InvalidArgument):
        select_method(99, BYTE)
    with pytest.raises(InvalidArgument):
        select_method(120, BIT)


def test_plan_two_and_a_half_blocks():
    plan = plan_message(500, CipherParams(100), 200)
    assert plan == [PlannedBlock(0, 200, 200), PlannedBlock(1, 200, 200), PlannedBlock(2, 100, 100)]


def test_plan_exact_block():
    assert plan_message(137, CipherParams(100), 137) == [PlannedBlock(0, 137, 137)]


def test_plan_short_message_padded():
    plan = plan_message(40, CipherParams(100), 140)
    assert plan == [PlannedBlock(0, 100, 40)]
    assert padded_bytes(plan[0], BYTE) == 100


def test_plan_residual_padding_and_own_size():
    plan = plan_message(300, CipherParams(100), 134)
    assert [b.elements for b in plan] == [134, 134, 100]
    assert [b.data_len for b in plan] == [134, 134, 32]
    plan = plan_message(400, CipherParams(100), 150)
    assert [b.elements for b in plan] == [150, 150, 100]


def test_plan_bit_granularity():
    plan = plan_message(40, CipherParams(128, BIT), 152)
    assert [(b.elements, b.data_len) for b in plan] == [(152, 19), (152, 19), (128, 2)]
    assert padded_bytes(plan[-1], BIT) == 16


def test_plan_rejects_empty():
    with pytest.raises(InvalidArgument):
        plan_message(0, CipherParams(100), 100)


@given(st.integers(1, 50_000), st.integers(100, 5000), st.booleans())
def test_plan_invariants(total, size, bits):
    gran = BIT if bits else BYTE
    if bits:
        size = max(128, size - size % 8)
    plan = plan_message(total, CipherParams(128 if bits else 100, gran), size)
    assert sum(b.data_len for b in plan) == total
    assert all(b.elements == size for b in plan[:-1])
    assert [b.index for b in plan] == list(range(len(plan)))
    assert plan[-1].elements >= gran.minimum
