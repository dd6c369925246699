from __future__ import annotations

import json
from itertools import permutations

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from dilogskein.quiver import (
    Interval,
    InvalidTupleSeq,
    LimitExceeded,
    NotAPermutation,
    admissible_orders_by_filter,
    dimension_vector,
    enumerate_admissible_orders,
    enumerate_intervals,
    hom_nonzero,
    is_admissible_order,
    is_hom_ordered,
    order_from_json,
    order_to_json,
    order_to_tuple_sequence,
    tuple_sequence_to_order,
    validate_tuple_sequence,
)


def I(i, j):
    return Interval(i, j)


def hom_dimension(a: Interval, b: Interval, n: int) -> int:
    """dim Hom(V_a, V_b) by solving the commuting-square equations."""
    va, vb = dimension_vector(a, n), dimension_vector(b, n)
    slots = [k for k in range(n) if va[k] and vb[k]]
    if not slots:
        return 0
    idx = {k: s for s, k in enumerate(slots)}
    rows = []
    for k in range(n - 1):
        # arrow k -> k+1 acts by 1 inside an interval, 0 otherwise
        arr_a = 1 if va[k] and va[k + 1] else 0
        arr_b = 1 if vb[k] and vb[k + 1] else 0
        row = [0] * len(slots)
        if k in idx and arr_b:
            row[idx[k]] += arr_b
        if k + 1 in idx and arr_a:
            row[idx[k + 1]] -= arr_a
        if any(row):
            rows.append(row)
    if not rows:
        return len(slots)
    return len(slots) - sp.Matrix(rows).rank()


def test_enumerate_intervals():
    assert enumerate_intervals(1) == [I(1, 1)]
    assert enumerate_intervals(2) == [I(1, 1), I(1, 2), I(2, 2)]
    assert len(enumerate_intervals(3)) == 6


def test_hom_examples():
    assert hom_nonzero(I(1, 2), I(1, 1))
    assert not hom_nonzero(I(1, 1), I(1, 2))
    assert not hom_nonzero(I(1, 1), I(3, 3))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_hom_matches_linear_algebra(n):
    ivs = enumerate_intervals(n)
    for a in ivs:
        for b in ivs:
            assert hom_nonzero(a, b) == (hom_dimension(a, b, n) > 0), (a, b)


def test_admissible_examples():
    assert is_admissible_order([I(1, 1), I(1, 2), I(2, 2)])
    assert not is_admissible_order([I(1, 2), I(1, 1), I(2, 2)])
    assert is_admissible_order([I(1, 1), I(1, 2), I(2, 2), I(1, 3), I(2, 3), I(3, 3)])


def test_not_a_permutation():
    with pytest.raises(NotAPermutation):
        is_admissible_order([I(1, 1), I(1, 1), I(2, 2)])
    with pytest.raises(NotAPermutation):
        is_admissible_order([I(1, 1), I(2, 2)])


@pytest.mark.parametrize("n,count", [(1, 1), (2, 1), (3, 2), (4, 12), (5, 286)])
def test_order_counts(n, count):
    orders = enumerate_admissible_orders(n)
    assert len(orders) == count
    assert len(set(orders)) == count
    assert orders == sorted(orders)
    assert all(is_admissible_order(o) for o in orders)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_orders_match_permutation_filter(n):
    assert enumerate_admissible_orders(n) == admissible_orders_by_filter(n)


def test_order_cap():
    with pytest.raises(LimitExceeded):
        enumerate_admissible_orders(6)


@pytest.mark.parametrize("n", [2, 3])
def test_cover_and_hom_formulations_agree(n):
    for p in permutations(enumerate_intervals(n)):
        assert is_admissible_order(p) == is_hom_ordered(p)


@pytest.mark.parametrize("n", [4, 5])
def test_cover_and_hom_formulations_agree_on_orders(n):
    assert all(is_hom_ordered(o) for o in enumerate_admissible_orders(n))


def test_tuple_sequence_examples():
    assert order_to_tuple_sequence([I(1, 1)]) == [(0,), (1,)]
    assert order_to_tuple_sequence([I(1, 1), I(1, 2), I(2, 2)]) == [(0, 0), (1, 0), (1, 1), (1, 2)]
    first = enumerate_admissible_orders(3)[0]
    seq = order_to_tuple_sequence(first)
    assert len(seq) == 7 and seq[-1] == (1, 2, 3)


def test_tuple_sequence_inverse_examples():
    assert tuple_sequence_to_order([(0, 0), (1, 0), (1, 1), (1, 2)]) == (I(1, 1), I(1, 2), I(2, 2))
    assert tuple_sequence_to_order([(0,), (1,)]) == (I(1, 1),)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_round_trip(n):
    for o in enumerate_admissible_orders(n):
        ts = order_to_tuple_sequence(o)
        assert validate_tuple_sequence(ts)
        assert tuple_sequence_to_order(ts) == o
        assert ts[0] == (0,) * n and ts[-1] == tuple(range(1, n + 1))
        for a, b in zip(ts, ts[1:]):
            diffs = [y - x for x, y in zip(a, b) if x != y]
            assert diffs == [1]


def test_validation_diagnostics():
    assert validate_tuple_sequence([(0, 0), (1, 0), (1, 1), (1, 2)])
    v = validate_tuple_sequence([(0, 0), (0, 1), (1, 1), (1, 2)])
    assert not v and v.property == 3
    v = validate_tuple_sequence([(0, 0), (2, 0)])
    assert not v and v.property in (1, 4)
    v = validate_tuple_sequence([(0, 0, 0), (1, 0, 0), (1, 0, 1)])
    assert not v and v.property == 3
    v = validate_tuple_sequence([(0, 0, 0), (1, 0, 0), (1, 2, 0)])
    assert not v and v.property == 4
    v = validate_tuple_sequence([(1, 0)])
    assert not v and v.property == 2


def test_raise_by_two_is_property_four():
    # entry 2 may hold 2, so only the step rule is violated
    v = validate_tuple_sequence([(0, 0), (0, 2)])
    assert not v and v.property == 3
    v = validate_tuple_sequence([(0, 0, 0), (1, 0, 0), (1, 1, 0), (1, 1, 2)])
    assert not v and v.property in (3, 4)
    v = validate_tuple_sequence([(0, 0, 0), (1, 0, 0), (1, 2, 0)])
    assert v.property == 4


def test_invalid_sequence_raises():
    with pytest.raises(InvalidTupleSeq):
        tuple_sequence_to_order([(0, 0), (0, 1)])
    with pytest.raises(InvalidTupleSeq):
        tuple_sequence_to_order([(0, 0), (1, 0)])


@given(st.data())
def test_corrupted_sequences_rejected(data):
    n = data.draw(st.integers(2, 4))
    orders = enumerate_admissible_orders(n)
    o = orders[data.draw(st.integers(0, len(orders) - 1))]
    ts = [list(a) for a in order_to_tuple_sequence(o)]
    k = data.draw(st.integers(1, len(ts) - 1))
    j = data.draw(st.integers(0, n - 1))
    delta = data.draw(st.sampled_from([-1, 1, 2]))
    ts[k][j] += delta
    if ts[k][j] < 0:
        ts[k][j] = 2
    # any single-entry corruption of an interior tuple breaks a property
    assert not validate_tuple_sequence(ts)


def test_dimension_vectors():
    assert dimension_vector(I(1, 1), 2) == (1, 0)
    assert dimension_vector(I(1, 2), 2) == (1, 1)
    assert dimension_vector(I(2, 3), 4) == (0, 1, 1, 0)


def test_json_round_trip():
    o = enumerate_admissible_orders(3)[1]
    text = json.dumps(order_to_json(o))
    assert order_from_json(json.loads(text)) == o
