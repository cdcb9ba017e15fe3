"""Ground-truth layer: enumeration, exact counting, census, statistics.

These are the tools the acceptance tests lean on, so they get their own
goldens here, computed by hand or by a second independent method.
"""

from fractions import Fraction

import numpy as np
import pytest

from cftpsample.errors import BudgetExceeded, ExpectedCountTooSmall, LimitExceeded
from cftpsample.families import antichain_poset, chain_poset, make_family
from cftpsample.oracle import (
    IdealCounter,
    chi_square_uniformity,
    count_ideals,
    enumerate_ideals,
    enumerate_states,
    exact_cftp_census,
    forward_bias_exact,
    recursive_exact_sample,
    total_variation,
)
from cftpsample.randomness import RandomnessOracle


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def test_enumerate_ideals_chain():
    res = enumerate_ideals(chain_poset(2))
    assert res.states == (0, 1, 3)
    assert res.count == 3
    assert res.by_rank == {0: 1, 1: 1, 2: 1}
    assert res.index() == {0: 0, 1: 1, 3: 2}


def test_enumerate_ideals_antichain():
    res = enumerate_ideals(antichain_poset(3))
    assert res.count == 8
    assert res.by_rank == {0: 1, 1: 3, 2: 3, 3: 1}


def test_enumerate_limits():
    with pytest.raises(LimitExceeded):
        enumerate_ideals(chain_poset(10), limit=5)
    with pytest.raises(LimitExceeded):
        enumerate_states(make_family("antichain4").system, limit=7)


def test_enumerate_states_matches_ideals():
    inst = make_family("boxes", {"a": 2, "b": 2, "c": 2})
    assert enumerate_states(inst.system).count == 20
    assert enumerate_ideals(inst.poset).count == 20


# ---------------------------------------------------------------------------
# Deletion-recursion counting
# ---------------------------------------------------------------------------


def test_count_ideals_closed_forms():
    for n in range(1, 9):
        assert count_ideals(chain_poset(n)) == n + 1
        assert count_ideals(antichain_poset(n)) == 2**n


@pytest.mark.parametrize(
    "family,params",
    [
        ("boxes", {"a": 2, "b": 2, "c": 2}),
        ("boxes", {"a": 3, "b": 2, "c": 2}),
        ("catalan", {"n": 4}),
        ("paths", {"a": 3, "b": 3}),
    ],
)
def test_count_ideals_matches_enumeration(family, params):
    inst = make_family(family, params)
    assert count_ideals(inst.poset) == enumerate_ideals(inst.poset).count
    if inst.count_exact is not None:
        assert count_ideals(inst.poset) == inst.count_exact


def test_count_ideals_budget():
    with pytest.raises(BudgetExceeded):
        count_ideals(make_family("boxes", {"a": 3, "b": 3, "c": 3}).poset, budget=10)


def test_counter_closure_masks():
    p = chain_poset(3)
    c = IdealCounter(p)
    assert c.below == [0b001, 0b011, 0b111]
    assert c.above == [0b111, 0b110, 0b100]


# ---------------------------------------------------------------------------
# Recursive exact sampler
# ---------------------------------------------------------------------------


def test_recursive_sample_deterministic():
    p = make_family("boxes", {"a": 2, "b": 2, "c": 1}).poset
    a = recursive_exact_sample(p, RandomnessOracle(11))
    b = recursive_exact_sample(p, RandomnessOracle(11))
    assert a.bits == b.bits and a.size == b.size


def test_recursive_sample_yields_ideals_only():
    p = make_family("catalan", {"n": 3}).poset
    valid = set(enumerate_ideals(p).states)
    counter = IdealCounter(p)
    for seed in range(200):
        out = recursive_exact_sample(p, RandomnessOracle(seed), counter=counter)
        assert out.bits in valid


def test_recursive_sample_uniform_smoke():
    p = make_family("boxes", {"a": 2, "b": 2, "c": 1}).poset
    res = enumerate_ideals(p)
    idx = res.index()
    counts = [0] * res.count
    counter = IdealCounter(p)
    n = 3000
    for i in range(n):
        out = recursive_exact_sample(p, RandomnessOracle(1000 + i), counter=counter)
        counts[idx[out.bits]] += 1
    assert chi_square_uniformity(counts, alpha=0.001).passed


# ---------------------------------------------------------------------------
# Exhaustive CFTP census
# ---------------------------------------------------------------------------


def test_census_single_element_exact():
    sys = make_family("chain1").system
    res = exact_cftp_census(sys, horizon=1)
    assert res.uncoalesced == 0
    assert res.lower == {0: Fraction(1, 2), 1: Fraction(1, 2)}
    assert res.upper == res.lower


def test_census_chain2_brackets_third():
    sys = make_family("chain2").system
    res = exact_cftp_census(sys, horizon=6)
    third = Fraction(1, 3)
    assert res.states == (0, 1, 3)
    assert res.uncoalesced > 0
    for s in res.states:
        assert res.lower[s] <= third <= res.upper[s]
        assert res.upper[s] == res.lower[s] + res.uncoalesced
    assert sum(res.lower.values()) + res.uncoalesced == 1


def test_census_antichain2_brackets_quarter():
    sys = make_family("antichain2").system
    res = exact_cftp_census(sys, horizon=4)
    quarter = Fraction(1, 4)
    for s in res.states:
        assert res.lower[s] <= quarter <= res.upper[s]


def test_census_nesting_check():
    sys = make_family("chain2").system
    plain = exact_cftp_census(sys, horizon=4)
    checked = exact_cftp_census(sys, horizon=4, check_nesting=True)
    assert plain.lower == checked.lower
    assert plain.uncoalesced == checked.uncoalesced


def test_census_other_schedules():
    sys = make_family("chain2").system
    third = Fraction(1, 3)
    for schedule in ("sweep", "rank-parity"):
        res = exact_cftp_census(sys, schedule=schedule, horizon=6)
        for s in res.states:
            assert res.lower[s] <= third <= res.upper[s]
    # sweep touches every site per 2-cycle, so horizon 6 coalesces a lot
    sweep = exact_cftp_census(sys, schedule="sweep", horizon=6)
    assert sweep.uncoalesced < Fraction(1, 4)


def test_census_budget_and_bad_schedule():
    sys = make_family("boxes", {"a": 2, "b": 2, "c": 2}).system
    with pytest.raises(BudgetExceeded):
        exact_cftp_census(sys, horizon=4, budget=100)
    with pytest.raises(ValueError):
        exact_cftp_census(make_family("chain2").system, schedule="zigzag", horizon=2)


# ---------------------------------------------------------------------------
# Forward-coupling bias, exact
# ---------------------------------------------------------------------------


def test_forward_bias_chain2_golden():
    sys = make_family("chain2").system
    dist = forward_bias_exact(sys)
    assert dist == {0: Fraction(1, 4), 1: Fraction(1, 2), 3: Fraction(1, 4)}


def test_forward_bias_antichain2_uniform():
    sys = make_family("antichain2").system
    dist = forward_bias_exact(sys)
    assert set(dist.values()) == {Fraction(1, 4)}


def test_forward_bias_single_element():
    dist = forward_bias_exact(make_family("chain1").system)
    assert dist == {0: Fraction(1, 2), 1: Fraction(1, 2)}


def test_forward_bias_sums_to_one_and_budget():
    sys = make_family("boxes", {"a": 2, "b": 2, "c": 1}).system
    dist = forward_bias_exact(sys)
    assert sum(dist.values()) == 1
    assert len(dist) == 6
    with pytest.raises(BudgetExceeded):
        forward_bias_exact(sys, budget=2)


# ---------------------------------------------------------------------------
# Chi-square and TV helpers
# ---------------------------------------------------------------------------


def test_chi_square_calibration():
    rng = np.random.default_rng(42)
    passes = 0
    trials = 200
    for _ in range(trials):
        counts = rng.multinomial(400, [0.25] * 4)
        if chi_square_uniformity(counts, alpha=0.05).passed:
            passes += 1
    # should pass about 95% of the time; far below that means miscalibration
    assert passes >= 0.88 * trials


def test_chi_square_rejects_bias():
    res = chi_square_uniformity([700, 100, 100, 100], alpha=0.001)
    assert not res.passed
    assert res.pvalue < 1e-6
    assert res.degrees == 3


def test_chi_square_weighted():
    # counts exactly proportional to the weights: statistic 0
    res = chi_square_uniformity([250, 500, 250], weights=[1, 2, 1])
    assert res.statistic == 0 and res.passed and res.pvalue == 1.0


def test_chi_square_guards():
    with pytest.raises(ExpectedCountTooSmall):
        chi_square_uniformity([2, 2])
    with pytest.raises(ValueError):
        chi_square_uniformity([])
    with pytest.raises(ValueError):
        chi_square_uniformity([10, 10], weights=[1, 1, 1])
    single = chi_square_uniformity([50])
    assert single.degrees == 0 and single.passed and single.pvalue == 1.0


def test_total_variation():
    assert total_variation([0.5, 0.5], [1.0, 0.0]) == 0.5
    assert total_variation([0.25] * 4, [0.25] * 4) == 0.0
    assert total_variation([Fraction(1, 2), Fraction(1, 2)], [0.5, 0.5]) == 0.0
