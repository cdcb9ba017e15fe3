"""Monotone lattice paths in a corridor, as ideals of a cell poset.

A minimal path from (0, a) to (b, 0) takes b right-steps and a
down-steps.  Writing mu_r for the number of right-steps taken before the
r-th down-step, paths correspond to weakly increasing sequences
0 <= mu_1 <= ... <= mu_a <= b.  A corridor clamps each mu_r to
[lo_r, hi_r]; with both bound sequences weakly increasing the admissible
sequences are exactly the order ideals of the poset of cells

    (r, x)   for 1 <= r <= a,  lo_r < x <= hi_r

where (r, x) covers (r, x-1) and (r+1, x): row r of an ideal is the
prefix (lo_r, mu_r], and the cross-row covers force mu to increase.
Unconstrained bounds recover the a x b grid (ideals = partitions in an
a x b box); the diagonal corridor lo = (1, 2, ..., n), hi = (n, ..., n)
on an n x n region yields the Catalan objects.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import EmptyRegion
from ..poset import DEFAULT_MAX_ELEMENTS, Poset, build_poset


@dataclass(frozen=True)
class PathRegion:
    """A normalized corridor together with its cell poset.

    lo and hi are the effective bounds: weakly increasing, entrywise
    lo_r <= hi_r, clamped to [0, b].  cells lists the poset elements as
    (r, x) pairs in element-id order.
    """

    a: int
    b: int
    lo: tuple[int, ...]
    hi: tuple[int, ...]
    cells: tuple[tuple[int, int], ...]
    poset: Poset

    @property
    def cell_index(self) -> dict:
        return {rx: i for i, rx in enumerate(self.cells)}


def path_region(
    a: int,
    b: int,
    lower_bound=None,
    upper_bound=None,
    *,
    max_elements: int = DEFAULT_MAX_ELEMENTS,
) -> PathRegion:
    """Build the corridor carrier; see module docstring for conventions.

    Bounds may be any integer sequences of length a; they are clamped to
    [0, b] and tightened to the monotone envelope (prefix-max of the
    lower bounds, suffix-min of the upper), which leaves the path set
    unchanged.  EmptyRegion if no path satisfies the bounds.
    """
    if a < 0 or b < 0:
        raise ValueError("corridor dimensions must be nonnegative")
    lo = list(lower_bound) if lower_bound is not None else [0] * a
    hi = list(upper_bound) if upper_bound is not None else [b] * a
    if len(lo) != a or len(hi) != a:
        raise ValueError(f"bound sequences must have length a={a}")
    lo = [min(max(v, 0), b) for v in lo]
    hi = [min(max(v, 0), b) for v in hi]
    for r in range(1, a):
        lo[r] = max(lo[r], lo[r - 1])
    for r in range(a - 2, -1, -1):
        hi[r] = min(hi[r], hi[r + 1])
    if any(l > h for l, h in zip(lo, hi)):
        raise EmptyRegion(f"no monotone path fits the corridor lo={lo} hi={hi}")

    cells = []
    for r in range(1, a + 1):
        for x in range(lo[r - 1] + 1, hi[r - 1] + 1):
            cells.append((r, x))
    index = {rx: i for i, rx in enumerate(cells)}
    covers = []
    for (r, x), i in index.items():
        if (r, x + 1) in index:
            covers.append((i, index[(r, x + 1)]))
        if (r - 1, x) in index:
            covers.append((i, index[(r - 1, x)]))
    poset = build_poset(len(cells), covers, max_elements=max_elements)
    return PathRegion(a, b, tuple(lo), tuple(hi), tuple(cells), poset)


def path_region_poset(a, b, lower_bound=None, upper_bound=None, **kw) -> Poset:
    """The cell poset alone, for callers that do not need the codec."""
    return path_region(a, b, lower_bound, upper_bound, **kw).poset


def catalan_region(n: int, **kw) -> PathRegion:
    """Diagonal corridor whose ideals are counted by the Catalan numbers."""
    if n < 1:
        raise ValueError("n must be positive")
    return path_region(n, n, list(range(1, n + 1)), [n] * n, **kw)


def catalan_paths_system(n: int, **kw) -> Poset:
    """Staircase cell poset with ideal count C(n)."""
    return catalan_region(n, **kw).poset


def ideal_to_steps(region: PathRegion, bits: int) -> tuple[int, ...]:
    """The mu-sequence of an ideal: right-steps before each down-step."""
    mu = []
    i = 0
    for r in range(1, region.a + 1):
        width = region.hi[r - 1] - region.lo[r - 1]
        run = 0
        while run < width and (bits >> (i + run)) & 1:
            run += 1
        mu.append(region.lo[r - 1] + run)
        i += width
    return tuple(mu)


def steps_to_ideal(region: PathRegion, mu) -> int:
    """Inverse of ideal_to_steps; validates the corridor and monotonicity."""
    mu = tuple(mu)
    if len(mu) != region.a:
        raise ValueError(f"expected {region.a} down-steps")
    prev = 0
    bits = 0
    i = 0
    for r in range(1, region.a + 1):
        v = mu[r - 1]
        lo, hi = region.lo[r - 1], region.hi[r - 1]
        if not (lo <= v <= hi):
            raise ValueError(f"mu_{r}={v} outside corridor [{lo},{hi}]")
        if v < prev:
            raise ValueError("mu must be weakly increasing")
        bits |= ((1 << (v - lo)) - 1) << i
        i += hi - lo
        prev = v
    return bits


def ideal_to_word(region: PathRegion, bits: int) -> str:
    """Render the path as a step word, 'U' per right-step and 'D' per down-step."""
    mu = ideal_to_steps(region, bits)
    out = []
    prev = 0
    for v in mu:
        out.append("U" * (v - prev))
        out.append("D")
        prev = v
    out.append("U" * (region.b - prev))
    return "".join(out)


def word_to_ideal(region: PathRegion, word: str) -> int:
    """Parse a step word back to an ideal; accepts U/R for right and D for down."""
    mu = []
    rights = 0
    for ch in word:
        if ch in "UR":
            rights += 1
        elif ch == "D":
            mu.append(rights)
        else:
            raise ValueError(f"unexpected step {ch!r}")
    if len(mu) != region.a or rights != region.b:
        raise ValueError(
            f"expected {region.a} down-steps and {region.b} right-steps"
        )
    return steps_to_ideal(region, mu)
