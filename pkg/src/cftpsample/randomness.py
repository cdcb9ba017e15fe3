"""Counter-based randomness for simulations that re-read the past.

Coupling from the past repeatedly extends a run further back in time while
*reusing* every coin flip already consumed at the time steps it shares with
earlier, shorter runs.  A stateful generator makes that reuse awkward (one
must save and restore internal state per step); a counter-based generator
makes it trivial.  Here a draw is a pure function of

    (seed, time step t, lane)

so any step can be replayed at any moment, in any order, on any worker.
Time steps are integers of either sign (backward simulation uses t < 0),
mapped to distinct counters with a zigzag code.  Lane 0 carries the site
selection value for a step, lanes 1..n carry coin values, so a step that
needs a whole batch of coins still touches only its own counter range.

The generator is the splitmix64 finalizer used in hash mode: the output for
counter c under seed s is mix(mix(s) xor c*GOLDEN), where mix is the
standard two-round xor-shift-multiply permutation.  It is cheap in pure
Python, vectorizes directly over numpy uint64 arrays, and passes the usual
equidistribution smoke tests (see tests/test_randomness.py).  The
construction is named by ``algorithm_id`` and recorded in every sample
record; changing it is a format break.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MULT1 = 0xBF58476D1CE4E5B9
_MULT2 = 0x94D049BB133111EB

# Lane layout: counter = zigzag(t) << LANE_BITS | lane.  2**21 lanes per time
# step leaves room for one site-selection lane plus a coin per site at the
# maximum supported poset capacity (2**20 elements).
_LANE_BITS = 21

#: Identifier stored in sample records so a re-run can verify it is replaying
#: the same bit stream construction.
ALGORITHM_ID = "splitmix64-ctr/v1"

_TO_UNIT = 2.0 ** -53


def mix64(z: int) -> int:
    """The splitmix64 output permutation on 64-bit integers."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * _MULT1) & _MASK64
    z = ((z ^ (z >> 27)) * _MULT2) & _MASK64
    return z ^ (z >> 31)


def _zigzag(t: int) -> int:
    # 0, -1, 1, -2, 2, ... -> 0, 1, 2, 3, 4, ...
    return ((-t) << 1) - 1 if t < 0 else t << 1


class RandomnessOracle:
    """Pure-function randomness source keyed by a 64-bit seed.

    Instances are immutable and cheap; equality is by (seed, algorithm_id).
    All methods are safe to call concurrently.
    """

    __slots__ = ("seed", "algorithm_id", "_key")

    def __init__(self, seed: int):
        self.seed = int(seed)
        self.algorithm_id = ALGORITHM_ID
        self._key = mix64((self.seed + _GOLDEN) & _MASK64)

    def __repr__(self) -> str:
        return f"RandomnessOracle(seed={self.seed})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RandomnessOracle)
            and self.seed == other.seed
            and self.algorithm_id == other.algorithm_id
        )

    def __hash__(self) -> int:
        return hash((self.seed, self.algorithm_id))

    def raw(self, t: int, lane: int) -> int:
        """64-bit output for time step t, lane index lane."""
        ctr = (_zigzag(t) << _LANE_BITS) | lane
        return mix64(self._key ^ ((ctr * _GOLDEN) & _MASK64))

    def draw(self, t: int) -> tuple[int, float]:
        """The (site value, coin value) pair for a single-site time step.

        The site value is a raw 64-bit integer; schedules resolve it to a
        site index.  The coin value lies in [0, 1).
        """
        return self.raw(t, 0), (self.raw(t, 1) >> 11) * _TO_UNIT

    def coin(self, t: int) -> float:
        """Coin value in [0, 1) for time step t (lane 1)."""
        return (self.raw(t, 1) >> 11) * _TO_UNIT

    def coins(self, t: int, n: int) -> np.ndarray:
        """Vector of n coin values in [0, 1) for time step t (lanes 1..n)."""
        if n < 0:
            raise ValueError("coin count must be nonnegative")
        if n <= 8:
            return np.array(
                [(self.raw(t, 1 + lane) >> 11) * _TO_UNIT for lane in range(n)],
                dtype=np.float64,
            )
        base = np.uint64((_zigzag(t) << _LANE_BITS) + 1)
        ctrs = base + np.arange(n, dtype=np.uint64)
        z = np.uint64(self._key) ^ (ctrs * np.uint64(_GOLDEN))
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MULT1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MULT2)
        z = z ^ (z >> np.uint64(31))
        return (z >> np.uint64(11)).astype(np.float64) * _TO_UNIT
