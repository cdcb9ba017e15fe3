"""Brute-force ground truth and statistical verification utilities.

Everything here is deliberately independent of the sampling engine:
ideal enumeration walks membership decisions element by element,
counting uses the up-set/down-set deletion recursion, the census
enumerates every discretized randomness sequence outright, and the
forward-bias solver does exact linear algebra on the coupled pair chain.
The test suite plays these against the engine; they must not share its
code paths.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from scipy.stats import chi2 as _chi2

from .errors import (
    BudgetExceeded,
    ExpectedCountTooSmall,
    LimitExceeded,
)
from .poset import OrderIdeal, Poset


@dataclass(frozen=True)
class EnumerationResult:
    """All states of a finite system in canonical order."""

    states: tuple
    count: int
    by_rank: dict

    def index(self) -> dict:
        return {s: i for i, s in enumerate(self.states)}


def enumerate_ideals(p: Poset, limit: int = 1_000_000) -> EnumerationResult:
    """Every order ideal as a bitmask, ascending.

    Walks the elements in a linear extension, splitting each partial
    ideal on membership of the next element; an element may join exactly
    when all its lower covers already did.  LimitExceeded fires during
    the walk, not after.
    """
    order = sorted(range(p.m), key=lambda x: (p.ranks[x], x))
    ideals = [0]
    for x in order:
        need = p.lower_masks[x]
        bit = 1 << x
        grown = []
        for ideal in ideals:
            grown.append(ideal)
            if ideal & need == need:
                grown.append(ideal | bit)
                if len(grown) > limit:
                    raise LimitExceeded(f"more than {limit} ideals")
        ideals = grown
    ideals.sort()
    by_rank: dict = {}
    for ideal in ideals:
        r = ideal.bit_count()
        by_rank[r] = by_rank.get(r, 0) + 1
    return EnumerationResult(tuple(ideals), len(ideals), by_rank)


def enumerate_states(sys, limit: int = 1_000_000) -> EnumerationResult:
    """Toggle-reachability closure from the bottom state of any system."""
    seen = {sys.bottom}
    frontier = [sys.bottom]
    while frontier:
        state = frontier.pop()
        for site in range(sys.site_count):
            for up in (False, True):
                nxt = sys.update(state, site, up)
                if nxt not in seen:
                    seen.add(nxt)
                    if len(seen) > limit:
                        raise LimitExceeded(f"more than {limit} states")
                    frontier.append(nxt)
    states = tuple(sorted(seen))
    by_rank: dict = {}
    for s in states:
        r = sys.rank_of(s)
        by_rank[r] = by_rank.get(r, 0) + 1
    return EnumerationResult(states, len(states), by_rank)


class IdealCounter:
    """Exact |J(P)| via count(S) = count(S minus up-set) + count(S minus down-set).

    Memoized on the element-subset bitmask, which canonically encodes the
    induced subposet.  The budget bounds distinct subproblems; counting
    ideals is #P-complete, so there is no safe default but a budget.
    """

    def __init__(self, p: Poset, budget: int = 200_000):
        self.p = p
        self.budget = budget
        self.below = _closure(p, upward=False)
        self.above = _closure(p, upward=True)
        self._memo: dict = {0: 1}

    def count(self, subset: int) -> int:
        memo = self._memo
        got = memo.get(subset)
        if got is not None:
            return got
        stack = [subset]
        while stack:
            s = stack[-1]
            if s in memo:
                stack.pop()
                continue
            x = (s & -s).bit_length() - 1
            without = s & ~self.above[x]
            with_x = s & ~self.below[x]
            a, b = memo.get(without), memo.get(with_x)
            if a is not None and b is not None:
                memo[s] = a + b
                stack.pop()
                continue
            if len(memo) + len(stack) > self.budget:
                raise BudgetExceeded(
                    f"ideal counting exceeded {self.budget} subproblems"
                )
            if a is None:
                stack.append(without)
            if b is None:
                stack.append(with_x)
        return memo[subset]

    def total(self) -> int:
        return self.count((1 << self.p.m) - 1)


def _closure(p: Poset, *, upward: bool) -> list:
    """Transitive closure masks (element included), one pass along ranks."""
    masks = p.upper_masks if upward else p.lower_masks
    # covers always point from smaller rank to larger, so rank order is
    # a valid dependency order in both directions
    order = sorted(range(p.m), key=lambda x: p.ranks[x], reverse=upward)
    out = [0] * p.m
    for x in order:
        acc = (1 << x) | masks[x]
        rest = masks[x]
        while rest:
            y = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            acc |= out[y]
        out[x] = acc
    return out


def count_ideals(p: Poset, budget: int = 200_000) -> int:
    """Exact number of order ideals; see IdealCounter."""
    return IdealCounter(p, budget).total()


def _draw_uniform_int(oracle, times, n: int) -> int:
    """Exact uniform integer in [0, n) by top-bits rejection."""
    if n <= 1:
        return 0
    k = (n - 1).bit_length()
    words = (k + 63) // 64
    while True:
        r = 0
        for _ in range(words):
            r = (r << 64) | oracle.raw(next(times), 0)
        r >>= words * 64 - k
        if r < n:
            return r


def recursive_exact_sample(
    p: Poset, oracle, *, counter: IdealCounter | None = None, time_base: int = 0,
    budget: int = 200_000,
) -> OrderIdeal:
    """Uniform ideal without any Markov chain: decide one element at a time.

    Element x of the remaining induced subposet S joins with probability
    count(S minus down-set of x) / count(S); joining forces the whole
    down-set in, declining removes the whole up-set.  Each decision uses
    an exactly uniform integer, so the output law is exactly uniform.
    Pass a shared counter when drawing many samples from one poset.
    """
    if counter is None:
        counter = IdealCounter(p, budget)
    times = itertools.count(time_base)
    remaining = (1 << p.m) - 1
    ideal = 0
    while remaining:
        x = (remaining & -remaining).bit_length() - 1
        c_all = counter.count(remaining)
        c_in = counter.count(remaining & ~counter.below[x])
        u = _draw_uniform_int(oracle, times, c_all)
        if u < c_in:
            ideal |= counter.below[x] & remaining
            remaining &= ~counter.below[x]
        else:
            remaining &= ~counter.above[x]
    return OrderIdeal(ideal, ideal.bit_count())


# ---------------------------------------------------------------------------
# Exhaustive CFTP census
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CensusResult:
    """Exact probability bounds from enumerating every coin sequence.

    lower[s] is the mass that provably lands on s (coalesced within the
    horizon); upper[s] adds the uncoalesced mass, which could in
    principle end anywhere.
    """

    states: tuple
    lower: dict
    upper: dict
    uncoalesced: Fraction
    horizon: int

    def __post_init__(self):
        total = sum(self.lower.values(), Fraction(0)) + self.uncoalesced
        assert total == 1, f"census mass {total} != 1"


def _census_branches(sys, schedule, t):
    """All equiprobable (discretized) randomness outcomes at time t."""
    kind = getattr(schedule, "kind", schedule)
    n = sys.site_count
    if kind == "uniform":
        return [("site", s, up) for s in range(n) for up in (False, True)]
    if kind == "sweep":
        s = (-t - 1) % n
        return [("site", s, up) for up in (False, True)]
    if kind == "rank-parity":
        parity = t % 2
        m = sys.batch_coin_count(parity)
        return [("batch", parity, ups) for ups in itertools.product((False, True), repeat=m)]
    raise ValueError(f"unknown schedule {kind!r}")


def _census_windows(horizon: int) -> list:
    t = 1
    out = []
    while t < horizon:
        out.append(t)
        t *= 2
    out.append(horizon)
    return out


def _apply_branch(sys, state, branch):
    if branch[0] == "site":
        return sys.update(state, branch[1], branch[2])
    return sys.batch_update(state, branch[1], list(branch[2]))


def exact_cftp_census(
    sys,
    schedule="uniform",
    horizon: int = 4,
    budget: int = 1_000_000,
    *,
    check_nesting: bool = False,
) -> CensusResult:
    """Run the capped sampler under EVERY possible randomness assignment.

    The coin is discretized to up/down, exact for the fair threshold 1/2.
    Window lengths follow the doubling rule capped at the horizon; by the
    nesting property a window that coalesces determines the infinite-
    horizon answer, so the tallies are true lower bounds on each state's
    probability.  check_nesting re-runs every longer window to assert
    that property on the spot.
    """
    states = enumerate_states(sys, limit=budget).states
    if sys.site_count == 0:
        return CensusResult(
            states, {sys.bottom: Fraction(1)}, {sys.bottom: Fraction(1)}, Fraction(0), horizon
        )
    per_time = [_census_branches(sys, schedule, t) for t in range(-horizon, 0)]
    total_leaves = math.prod(len(b) for b in per_time)
    if total_leaves > budget:
        raise BudgetExceeded(
            f"census needs {total_leaves} sequences, budget {budget}"
        )
    prob = Fraction(1, total_leaves)
    windows = _census_windows(horizon)
    lower: dict = {s: Fraction(0) for s in states}
    uncoalesced = Fraction(0)
    for assignment in itertools.product(*per_time):
        outcome = None
        for t_back in windows:
            low, high = sys.bottom, sys.top
            for t in range(-t_back, 0):
                branch = assignment[horizon + t]
                low = _apply_branch(sys, low, branch)
                high = _apply_branch(sys, high, branch)
            if low == high:
                if outcome is None:
                    outcome = low
                    if not check_nesting:
                        break
                else:
                    assert outcome == low, "nesting property violated"
        if outcome is None:
            uncoalesced += prob
        else:
            lower[outcome] += prob
    upper = {s: lower[s] + uncoalesced for s in states}
    return CensusResult(states, lower, upper, uncoalesced, horizon)


# ---------------------------------------------------------------------------
# Statistical tests
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    degrees: int
    pvalue: float
    alpha: float
    passed: bool


def chi_square_uniformity(counts, weights=None, alpha: float = 0.001) -> ChiSquareResult:
    """Goodness-of-fit of observed counts against expected weights.

    weights default to uniform; they need not be normalized.  Requires
    every expected cell count to be at least 5.
    """
    counts = list(counts)
    if not counts:
        raise ValueError("no cells")
    n = sum(counts)
    if weights is None:
        weights = [1.0] * len(counts)
    else:
        weights = [float(w) for w in weights]
        if len(weights) != len(counts):
            raise ValueError("weights and counts must align")
    z = sum(weights)
    expected = [n * w / z for w in weights]
    low = min(expected)
    if low < 5:
        raise ExpectedCountTooSmall(
            f"minimum expected cell count {low:.3g} is below 5; raise N"
        )
    stat = sum((c - e) ** 2 / e for c, e in zip(counts, expected))
    degrees = len(counts) - 1
    if degrees == 0:
        return ChiSquareResult(stat, 0, 1.0, alpha, True)
    pvalue = float(_chi2.sf(stat, degrees))
    return ChiSquareResult(stat, degrees, pvalue, alpha, pvalue >= alpha)


def total_variation(freqs, target) -> float:
    """TV distance between two aligned distributions."""
    return 0.5 * sum(abs(float(a) - float(b)) for a, b in zip(freqs, target))


# ---------------------------------------------------------------------------
# Exact forward-coupling bias
# ---------------------------------------------------------------------------


def forward_bias_exact(sys, budget: int = 20_000) -> dict:
    """Absorption law of the forward-coupled (low, high) chain, exactly.

    Transitions pick a uniform site and a fair coin; pairs with equal
    components absorb.  Solved over the rationals, so the 2-chain comes
    out (1/4, 1/2, 1/4) on the nose.
    """
    n = sys.site_count
    if n == 0:
        return {sys.bottom: Fraction(1)}
    start = (sys.bottom, sys.top)
    if start[0] == start[1]:
        return {sys.bottom: Fraction(1)}
    step_prob = Fraction(1, 2 * n)

    pairs = [start]
    index = {start: 0}
    transitions = []  # per transient pair: dict target pair -> prob
    absorbing: dict = {}
    i = 0
    while i < len(pairs):
        pair = pairs[i]
        i += 1
        if pair[0] == pair[1]:
            absorbing[pair] = pair[0]
            transitions.append(None)
            continue
        move: dict = {}
        for site in range(n):
            for up in (False, True):
                nxt = (
                    sys.update(pair[0], site, up),
                    sys.update(pair[1], site, up),
                )
                move[nxt] = move.get(nxt, Fraction(0)) + step_prob
        transitions.append(move)
        for nxt in move:
            if nxt not in index:
                if len(pairs) >= budget:
                    raise BudgetExceeded(
                        f"more than {budget} coupled pair states"
                    )
                index[nxt] = len(pairs)
                pairs.append(nxt)

    transient = [p for p in pairs if p[0] != p[1]]
    trans_index = {p: r for r, p in enumerate(transient)}
    targets = sorted({absorbing[p] for p in pairs if p in absorbing})
    tcol = {s: c for c, s in enumerate(targets)}

    # rows: (I - Q) x = R, solved by Gauss-Jordan over Fractions
    size = len(transient)
    width = size + len(targets)
    rows = []
    for p in transient:
        row = [Fraction(0)] * width
        row[trans_index[p]] = Fraction(1)
        for nxt, pr in transitions[index[p]].items():
            if nxt[0] == nxt[1]:
                row[size + tcol[nxt[0]]] += pr
            else:
                row[trans_index[nxt]] -= pr
        rows.append(row)

    for col in range(size):
        pivot = next(r for r in range(col, size) if rows[r][col] != 0)
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inv = rows[col][col]
        rows[col] = [v / inv for v in rows[col]]
        for r in range(size):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]

    out_row = rows[trans_index[start]]
    dist = {s: out_row[size + c] for s, c in tcol.items()}
    assert sum(dist.values()) == 1
    return dist
