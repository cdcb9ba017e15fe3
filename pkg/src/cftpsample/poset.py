"""Finite posets, order ideals, and the single-site toggle move.

A poset on elements 0..m-1 is given by its cover relation: pairs (lo, hi)
with lo covered by hi, no intermediate element between them.  Construction
validates that the pairs are acyclic and Hasse-minimal (a pair implied by
a chain of other pairs is rejected, since such redundancy is almost always
a caller bug) and derives per-element cover lists and masks.

An order ideal is a downward-closed subset, stored as a bit vector in a
Python int (bit x set = element x present).  The ideals of a poset form a
distributive lattice under inclusion, with meet/join = intersection/union.
The elementary Markov move on this lattice toggles one element:

    up   at x: add x    if the result is still an ideal, else do nothing
    down at x: remove x if the result is still an ideal, else do nothing

Blocked moves leave the ideal unchanged, which makes the move monotone:
i subseteq j implies apply_move(i, x, c) subseteq apply_move(j, x, c) for
every site x and coin c.  That monotonicity is what the coupling-from-the-
past engine relies on, and it is exercised exhaustively in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    CapacityExceeded,
    CycleDetected,
    IdentifierOutOfRange,
    RedundantCover,
)

#: Default cap on poset size; generous enough for a 32x32x32 box of cells.
DEFAULT_MAX_ELEMENTS = 1 << 20

UP = "up"
DOWN = "down"


@dataclass(frozen=True)
class Poset:
    """Validated finite poset given by covers.

    Fields are immutable; instances are safe to share across threads and
    processes.  ``ranks`` stores the longest-chain height of each element;
    ``graded`` is True when every cover raises that height by exactly one,
    which is the condition for the rank-parity update schedule.
    """

    m: int
    covers: tuple[tuple[int, int], ...]
    lower: tuple[tuple[int, ...], ...]
    upper: tuple[tuple[int, ...], ...]
    lower_masks: tuple[int, ...]
    upper_masks: tuple[int, ...]
    ranks: tuple[int, ...]
    graded: bool

    def __repr__(self) -> str:
        return f"Poset(m={self.m}, covers={len(self.covers)}, graded={self.graded})"


@dataclass(frozen=True)
class OrderIdeal:
    """A downward-closed subset as a bit vector, with its size cached."""

    bits: int
    size: int

    @staticmethod
    def from_bits(bits: int) -> "OrderIdeal":
        return OrderIdeal(bits, bits.bit_count())

    def members(self) -> tuple[int, ...]:
        bits = self.bits
        out = []
        while bits:
            low = bits & -bits
            out.append(low.bit_length() - 1)
            bits ^= low
        return tuple(out)

    def __contains__(self, x: int) -> bool:
        return (self.bits >> x) & 1 == 1

    def __len__(self) -> int:
        return self.size


def build_poset(
    elements: int,
    covers: Iterable[Sequence[int]],
    *,
    max_elements: int = DEFAULT_MAX_ELEMENTS,
) -> Poset:
    """Validate a cover relation and assemble a Poset.

    Raises IdentifierOutOfRange, CycleDetected, or RedundantCover on bad
    input, and CapacityExceeded when elements > max_elements.
    """
    m = int(elements)
    if m < 0:
        raise IdentifierOutOfRange("element count must be nonnegative")
    if m > max_elements:
        raise CapacityExceeded(f"poset with {m} elements exceeds capacity {max_elements}")

    seen: set[tuple[int, int]] = set()
    pairs: list[tuple[int, int]] = []
    for pair in covers:
        lo, hi = int(pair[0]), int(pair[1])
        if not (0 <= lo < m and 0 <= hi < m):
            raise IdentifierOutOfRange(f"cover ({lo}, {hi}) outside 0..{m - 1}")
        if lo == hi:
            raise CycleDetected(f"self-cover at element {lo}")
        if (lo, hi) in seen:
            raise RedundantCover(f"duplicate cover ({lo}, {hi})")
        seen.add((lo, hi))
        pairs.append((lo, hi))
    pairs.sort()

    lower: list[list[int]] = [[] for _ in range(m)]
    upper: list[list[int]] = [[] for _ in range(m)]
    for lo, hi in pairs:
        lower[hi].append(lo)
        upper[lo].append(hi)

    order = _topological_order(m, lower, upper)

    upper_masks = [0] * m
    lower_masks = [0] * m
    for lo, hi in pairs:
        upper_masks[lo] |= 1 << hi
        lower_masks[hi] |= 1 << lo

    _check_hasse_minimal(order, lower, upper, upper_masks)

    ranks = [0] * m
    for v in order:
        if lower[v]:
            ranks[v] = max(ranks[u] for u in lower[v]) + 1
    graded = all(ranks[hi] == ranks[lo] + 1 for lo, hi in pairs)

    return Poset(
        m=m,
        covers=tuple(pairs),
        lower=tuple(tuple(xs) for xs in lower),
        upper=tuple(tuple(xs) for xs in upper),
        lower_masks=tuple(lower_masks),
        upper_masks=tuple(upper_masks),
        ranks=tuple(ranks),
        graded=graded,
    )


def _topological_order(m, lower, upper) -> list[int]:
    """Kahn's algorithm on the cover digraph; raises CycleDetected."""
    indeg = [len(lower[v]) for v in range(m)]
    frontier = [v for v in range(m) if indeg[v] == 0]
    order: list[int] = []
    while frontier:
        v = frontier.pop()
        order.append(v)
        for w in upper[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                frontier.append(w)
    if len(order) != m:
        raise CycleDetected("cover relation contains a directed cycle")
    return order


def _check_hasse_minimal(order, lower, upper, upper_masks) -> None:
    """Reject any cover that is implied by a chain of two or more covers.

    Walks elements top-down computing reach[v] = bitmask of everything
    strictly above v.  A cover (v, u) is redundant exactly when u is
    reachable from some other upper cover of v.  Reach sets are freed as
    soon as every lower neighbor has consumed them, which keeps peak
    memory proportional to the poset width rather than its size.
    """
    pending = [len(lower[v]) for v in range(len(order))]
    reach: dict[int, int] = {}
    for v in reversed(order):
        above = 0
        for u in upper[v]:
            above |= reach[u]
        bad = upper_masks[v] & above
        if bad:
            hi = bad.bit_length() - 1
            raise RedundantCover(f"cover ({v}, {hi}) is implied by transitivity")
        reach[v] = above | upper_masks[v]
        for u in upper[v]:
            pending[u] -= 1
            if pending[u] == 0:
                del reach[u]


def is_order_ideal(p: Poset, subset: Iterable[int] | OrderIdeal | int) -> bool:
    """True when the subset is downward closed in p."""
    bits = _subset_bits(p, subset)
    probe = bits
    while probe:
        low = probe & -probe
        x = low.bit_length() - 1
        if bits & p.lower_masks[x] != p.lower_masks[x]:
            return False
        probe ^= low
    return True


def _subset_bits(p: Poset, subset) -> int:
    if isinstance(subset, OrderIdeal):
        return subset.bits
    if isinstance(subset, int):
        bits = subset
    else:
        bits = 0
        for x in subset:
            bits |= 1 << x
    if bits >> p.m:
        raise IdentifierOutOfRange("subset references elements outside the poset")
    return bits


def toggle_bits(p: Poset, bits: int, x: int, up: bool) -> int:
    """Core toggle on a raw bit vector.  Blocked moves return bits unchanged."""
    if up:
        need = p.lower_masks[x]
        if bits & need == need:
            return bits | (1 << x)
        return bits
    if bits & p.upper_masks[x]:
        return bits
    return bits & ~(1 << x)


def apply_move(p: Poset, ideal: OrderIdeal, site: int, coin: str) -> OrderIdeal:
    """Apply one toggle move; the result is always a valid ideal.

    ``coin`` is "up" or "down".  The input must already be a valid ideal
    (not re-validated here; use is_order_ideal when in doubt).
    """
    if not 0 <= site < p.m:
        raise IdentifierOutOfRange(f"site {site} outside 0..{p.m - 1}")
    if coin == UP:
        up = True
    elif coin == DOWN:
        up = False
    else:
        raise ValueError(f"coin must be 'up' or 'down', got {coin!r}")
    bits = toggle_bits(p, ideal.bits, site, up)
    if bits == ideal.bits:
        return ideal
    return OrderIdeal(bits, ideal.size + (1 if up else -1))


def bottom_ideal(p: Poset) -> OrderIdeal:
    """The empty ideal."""
    return OrderIdeal(0, 0)


def top_ideal(p: Poset) -> OrderIdeal:
    """The full ideal containing every element."""
    return OrderIdeal((1 << p.m) - 1, p.m)


def rank(ideal: OrderIdeal) -> int:
    """Number of elements in the ideal (its height above the empty ideal)."""
    return ideal.size


def poset_to_json(p: Poset) -> dict:
    """Canonical JSON form: element count plus lexicographically sorted covers."""
    return {"elements": p.m, "covers": [list(c) for c in p.covers]}


def poset_from_json(obj: dict, *, max_elements: int = DEFAULT_MAX_ELEMENTS) -> Poset:
    return build_poset(obj["elements"], obj["covers"], max_elements=max_elements)
