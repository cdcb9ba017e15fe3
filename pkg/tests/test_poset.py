"""Poset construction, validation, and the toggle move."""

import pytest
from hypothesis import given, strategies as st

from cftpsample.errors import (
    CapacityExceeded,
    CycleDetected,
    IdentifierOutOfRange,
    RedundantCover,
)
from cftpsample.poset import (
    DOWN,
    UP,
    OrderIdeal,
    apply_move,
    bottom_ideal,
    build_poset,
    is_order_ideal,
    poset_from_json,
    poset_to_json,
    toggle_bits,
    top_ideal,
)


def chain(m):
    return build_poset(m, [(i, i + 1) for i in range(m - 1)])


def test_empty_poset():
    p = build_poset(0, [])
    assert p.m == 0
    assert bottom_ideal(p).bits == top_ideal(p).bits == 0


def test_chain_structure():
    p = chain(3)
    assert p.covers == ((0, 1), (1, 2))
    assert p.ranks == (0, 1, 2)
    assert p.graded
    assert p.lower_masks == (0, 1, 2)
    assert p.upper_masks == (2, 4, 0)


def test_antichain_is_graded():
    p = build_poset(4, [])
    assert p.ranks == (0, 0, 0, 0)
    assert p.graded


def test_ungraded_poset_detected():
    # 0<1<2 and 0<2 is redundant; instead use 0<1<3, 2<3: ranks 0,1,0,2
    p = build_poset(4, [(0, 1), (1, 3), (2, 3)])
    assert p.ranks == (0, 1, 0, 2)
    assert not p.graded


def test_cycle_detected():
    with pytest.raises(CycleDetected):
        build_poset(2, [(0, 1), (1, 0)])
    with pytest.raises(CycleDetected):
        build_poset(1, [(0, 0)])


def test_redundant_cover_rejected():
    with pytest.raises(RedundantCover):
        build_poset(3, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(RedundantCover):
        build_poset(2, [(0, 1), (0, 1)])


def test_out_of_range_cover():
    with pytest.raises(IdentifierOutOfRange):
        build_poset(2, [(0, 2)])
    with pytest.raises(IdentifierOutOfRange):
        build_poset(2, [(-1, 0)])


def test_capacity_cap():
    with pytest.raises(CapacityExceeded):
        build_poset(10, [], max_elements=5)


def test_is_order_ideal_chain():
    p = chain(3)
    assert is_order_ideal(p, 0b000)
    assert is_order_ideal(p, 0b001)
    assert is_order_ideal(p, 0b011)
    assert is_order_ideal(p, 0b111)
    assert not is_order_ideal(p, 0b010)
    assert not is_order_ideal(p, 0b100)
    assert not is_order_ideal(p, 0b110)


def test_is_order_ideal_iterable_and_range_check():
    p = chain(3)
    assert is_order_ideal(p, [0, 1])
    assert not is_order_ideal(p, {1})
    with pytest.raises(IdentifierOutOfRange):
        is_order_ideal(p, 0b1000)


def test_toggle_blocked_and_allowed():
    p = chain(3)
    assert toggle_bits(p, 0b000, 1, True) == 0b000  # needs 0 first
    assert toggle_bits(p, 0b001, 1, True) == 0b011
    assert toggle_bits(p, 0b011, 0, False) == 0b011  # 1 sits above
    assert toggle_bits(p, 0b011, 1, False) == 0b001


def test_apply_move_tracks_size():
    p = chain(3)
    i = bottom_ideal(p)
    i = apply_move(p, i, 0, UP)
    i = apply_move(p, i, 1, UP)
    assert (i.bits, i.size) == (0b011, 2)
    i = apply_move(p, i, 0, DOWN)  # blocked
    assert (i.bits, i.size) == (0b011, 2)
    i = apply_move(p, i, 1, DOWN)
    assert (i.bits, i.size) == (0b001, 1)


def test_apply_move_validates_arguments():
    p = chain(2)
    with pytest.raises(IdentifierOutOfRange):
        apply_move(p, bottom_ideal(p), 5, UP)
    with pytest.raises(ValueError):
        apply_move(p, bottom_ideal(p), 0, "sideways")


def test_order_ideal_members_and_contains():
    i = OrderIdeal.from_bits(0b1011)
    assert i.members() == (0, 1, 3)
    assert 1 in i and 2 not in i
    assert len(i) == 3


def test_json_round_trip():
    p = build_poset(4, [(0, 2), (1, 2), (2, 3)])
    doc = poset_to_json(p)
    q = poset_from_json(doc)
    assert q.covers == p.covers and q.m == p.m


@given(st.integers(1, 6), st.data())
def test_toggles_preserve_ideals(m, data):
    # random grid-ish posets: covers (i, j) sampled from i<j candidates
    candidates = [(i, j) for i in range(m) for j in range(i + 1, m)]
    subset = data.draw(st.lists(st.sampled_from(candidates), unique=True, max_size=6)) if candidates else []
    try:
        p = build_poset(m, subset)
    except RedundantCover:
        return
    bits = 0
    for step in data.draw(
        st.lists(st.tuples(st.integers(0, m - 1), st.booleans()), max_size=30)
    ):
        bits = toggle_bits(p, bits, step[0], step[1])
        assert is_order_ideal(p, bits)
