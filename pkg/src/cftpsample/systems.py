"""Monotone toggle systems: the state-space contract the sampler runs on.

Each sampleable family exposes the same small interface: a finite set of
sites, a bottom and a top state, and a pure update

    update(state, site, up) -> state

that either performs the requested elementary move or, when the move is
blocked, returns the state unchanged.  The engine requires the coupled
monotonicity property

    leq(s, t)  implies  leq(update(s, x, c), update(t, x, c))

for every site x and coin c.  Order ideals of a poset are the canonical
instance; corner-sum matrices, height functions, and two-colored
independent sets provide the same contract over array-like states.

States are immutable, hashable values (ints, tuples).  Systems whose hot
loop benefits from a mutable working form can override thaw/freeze/same;
the engine brackets every run with thaw/freeze and compares working states
with same().

Graded systems additionally assign each site a parity in {0, 1} such that
same-parity toggles commute (each site's blocking condition reads only
opposite-parity information).  That licenses the batch update: applying
one coin to every site of a parity class in any order, or all at once.
"""

from __future__ import annotations

from typing import Any, Sequence

import numpy as np

from .errors import NotGraded
from .poset import Poset, toggle_bits

State = Any


class MonotoneToggleSystem:
    """Base class; subclasses set site_count, bottom, top and implement update."""

    name: str = "abstract"
    site_count: int = 0
    bottom: State = None
    top: State = None

    def update(self, state: State, site: int, up: bool) -> State:
        raise NotImplementedError

    def leq(self, a: State, b: State) -> bool:
        raise NotImplementedError

    def rank_of(self, state: State) -> int:
        """Elementary-toggle distance of state above bottom."""
        raise NotImplementedError

    # -- grading / batch protocol ------------------------------------------

    #: False for systems with no commuting site classes.
    graded: bool = False

    def parity_of(self, site: int) -> int:
        raise NotGraded(f"{self.name} has no site grading")

    def parity_sites(self, parity: int) -> tuple[int, ...]:
        """Sites of one parity class, ascending."""
        if not self.graded:
            raise NotGraded(f"{self.name} has no site grading")
        cache = getattr(self, "_parity_cache", None)
        if cache is None:
            cache = {
                pr: tuple(x for x in range(self.site_count) if self.parity_of(x) == pr)
                for pr in (0, 1)
            }
            self._parity_cache = cache
        return cache[parity]

    def batch_coin_count(self, parity: int) -> int:
        """Number of coin values one batch step consumes."""
        return len(self.parity_sites(parity))

    def batch_coin_index(self, site: int) -> int:
        """Index into the batch coin vector used by a given site."""
        return self.parity_sites(self.parity_of(site)).index(site)

    def batch_update(self, state: State, parity: int, ups: Sequence[bool]) -> State:
        """Toggle every site of one parity class, site x using ups[coin index of x].

        Same-parity toggles commute, so the application order is immaterial;
        the default applies them in ascending site order.
        """
        sites = self.parity_sites(parity)
        for x in sites:
            state = self.update(state, x, bool(ups[self.batch_coin_index(x)]))
        return state

    # -- working-form protocol ---------------------------------------------

    def thaw(self, state: State) -> Any:
        """Working form for a run; default is the state itself."""
        return state

    def freeze(self, working: Any) -> State:
        """Canonical immutable state from a working form."""
        return working

    def same(self, a: Any, b: Any) -> bool:
        """Equality on working forms."""
        return a == b


class IdealToggleSystem(MonotoneToggleSystem):
    """Order ideals of a poset under the single-element toggle.

    States are raw bit vectors (ints); bottom is 0 and top has every bit
    set.  Rank is the ideal size.  The system is graded exactly when the
    poset is, with site parity = element height parity.
    """

    def __init__(self, p: Poset, name: str = "ideals"):
        self.poset = p
        self.name = name
        self.site_count = p.m
        self.bottom = 0
        self.top = (1 << p.m) - 1
        self.graded = p.graded

    def update(self, state: int, site: int, up: bool) -> int:
        return toggle_bits(self.poset, state, site, up)

    def leq(self, a: int, b: int) -> bool:
        return a & ~b == 0

    def rank_of(self, state: int) -> int:
        return state.bit_count()

    def parity_of(self, site: int) -> int:
        if not self.graded:
            raise NotGraded(f"{self.name}: underlying poset is not graded")
        return self.poset.ranks[site] & 1


def ideal_system(p: Poset, name: str = "ideals") -> IdealToggleSystem:
    """The monotone toggle system on the order ideals of p."""
    return IdealToggleSystem(p, name)


def as_bool_array(ups: Sequence[bool] | np.ndarray, n: int) -> np.ndarray:
    """Validate and normalize a batch coin vector to a length-n bool array."""
    arr = np.asarray(ups, dtype=bool)
    if arr.shape != (n,):
        raise ValueError(f"expected {n} batch coins, got shape {arr.shape}")
    return arr
