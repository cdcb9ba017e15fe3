"""Corridor lattice paths: region construction, counting, word codec."""

import math

import pytest

from cftpsample.errors import EmptyRegion
from cftpsample.families import corridor_path_count
from cftpsample.families.paths import (
    catalan_paths_system,
    catalan_region,
    ideal_to_steps,
    ideal_to_word,
    path_region,
    path_region_poset,
    steps_to_ideal,
    word_to_ideal,
)
from cftpsample.oracle import enumerate_ideals


def catalan(n):
    return math.comb(2 * n, n) // (n + 1)


def test_unconstrained_counts_are_binomial():
    for a, b in ((1, 1), (2, 2), (3, 2), (4, 4)):
        p = path_region_poset(a, b)
        assert enumerate_ideals(p).count == math.comb(a + b, a), (a, b)


def test_unconstrained_reduces_to_grid_poset():
    # the cell poset of the free a x b corridor is the a*b box of height 1
    p = path_region_poset(2, 3)
    assert p.m == 6
    assert enumerate_ideals(p).count == math.comb(5, 2)


def test_catalan_counts():
    for n in (1, 2, 3, 4, 5):
        p = catalan_paths_system(n)
        assert enumerate_ideals(p).count == catalan(n), n


def test_catalan_region_bounds():
    r = catalan_region(3)
    assert r.lo == (1, 2, 3)
    assert r.hi == (3, 3, 3)
    with pytest.raises(ValueError):
        catalan_region(0)


def test_corridor_width_zero_single_path():
    r = path_region(3, 3, [1, 2, 3], [1, 2, 3])
    assert r.poset.m == 0
    assert enumerate_ideals(r.poset).count == 1
    assert corridor_path_count(r) == 1


def test_empty_region_raises():
    # lower bound above upper bound after envelope normalization
    with pytest.raises(EmptyRegion):
        path_region(2, 3, [3, 0], [3, 2])
    with pytest.raises(EmptyRegion):
        path_region(2, 2, [2, 2], [2, 1])


def test_bounds_are_normalized_monotone():
    # raw bounds get prefix-max / suffix-min envelopes without changing paths
    r = path_region(3, 4, [2, 0, 1], [4, 3, 4])
    assert r.lo == (2, 2, 2)
    assert r.hi == (3, 3, 4)
    assert corridor_path_count(r) == enumerate_ideals(r.poset).count


def test_bounds_clamped_to_range():
    r = path_region(2, 3, [-5, -5], [99, 99])
    assert r.lo == (0, 0) and r.hi == (3, 3)


def test_dp_count_matches_enumeration_on_catalan_and_corridors():
    cases = [
        catalan_region(4),
        path_region(3, 3),
        path_region(3, 5, [1, 1, 2], [4, 4, 5]),
        path_region(4, 4, None, [2, 3, 4, 4]),
    ]
    for r in cases:
        assert corridor_path_count(r) == enumerate_ideals(r.poset).count


def test_steps_codec_round_trip():
    r = catalan_region(3)
    for bits in enumerate_ideals(r.poset).states:
        mu = ideal_to_steps(r, bits)
        assert steps_to_ideal(r, mu) == bits
        assert all(r.lo[i] <= mu[i] <= r.hi[i] for i in range(3))
        assert all(mu[i] <= mu[i + 1] for i in range(2))


def test_steps_codec_validates():
    r = catalan_region(3)
    with pytest.raises(ValueError):
        steps_to_ideal(r, (1, 2))  # wrong length
    with pytest.raises(ValueError):
        steps_to_ideal(r, (0, 2, 3))  # below corridor
    with pytest.raises(ValueError):
        steps_to_ideal(r, (3, 2, 3))  # not weakly increasing


def test_word_golden_values():
    r = catalan_region(2)
    assert ideal_to_word(r, 0) == "UDUD"
    full = (1 << r.poset.m) - 1
    assert ideal_to_word(r, full) == "UUDD"
    words = {ideal_to_word(r, bits) for bits in enumerate_ideals(r.poset).states}
    assert words == {"UDUD", "UUDD"}


def test_word_round_trip_and_aliases():
    r = catalan_region(3)
    for bits in enumerate_ideals(r.poset).states:
        w = ideal_to_word(r, bits)
        assert len(w) == 6
        assert word_to_ideal(r, w) == bits
        assert word_to_ideal(r, w.replace("U", "R")) == bits


def test_word_rejects_garbage():
    r = catalan_region(2)
    with pytest.raises(ValueError):
        word_to_ideal(r, "UDXD")
    with pytest.raises(ValueError):
        word_to_ideal(r, "UD")  # too short
    with pytest.raises(ValueError):
        word_to_ideal(r, "DDUU")  # outside corridor
