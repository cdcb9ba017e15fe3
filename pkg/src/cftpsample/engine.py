"""Coupling-from-the-past sampling over monotone toggle systems.

The sampler evolves the bottom and top states of a system jointly,
feeding both trajectories the same site choices and the same coins from
a counter-based randomness oracle.  Windows double backwards (1, 2, 4,
8, ... steps into the past) and every window reuses the oracle values of
the times it shares with earlier windows; when the two trajectories
meet at time zero the common state is an exact draw from the stationary
distribution: uniform for a fair coin, proportional to q^rank for the
q-biased coin.

Running the coupled pair forward until it meets is NOT exact sampling;
forward_coalescence_sample implements it anyway, clearly labeled, so the
bias is demonstrable rather than folklore.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass

import numpy as np

from .errors import (
    HorizonExceeded,
    MaxTriesExceeded,
    NonPositiveQ,
    NotGraded,
)
from .randomness import RandomnessOracle, mix64

_MASK64 = (1 << 64) - 1

# Salts for seed streams derived inside rejection loops.  Retries must not
# walk the caller's own seed line: a caller drawing many samples with seeds
# s, s+1, s+2, ... would otherwise replay the exact draws a neighbouring
# call already rejected and return duplicated states.
_RANK_RETRY_SALT = 0x52414E4B52455452  # "RANKRETR"
_PILOT_SALT = 0x50494C4F5450524F  # "PILOTPRO"


def biased_coin_threshold(q) -> float:
    """Up-move probability q/(1+q).

    Detailed balance across every toggle edge then gives up/down ratio q,
    so single-site dynamics are reversible with stationary weight q^rank.
    """
    q = float(q)
    if not q > 0:
        raise NonPositiveQ(f"q must be positive, got {q}")
    return q / (1.0 + q)


class Schedule:
    """Site-selection rule; never reads coin outcomes."""

    kind = "?"
    is_batch = False

    def site_at(self, oracle: RandomnessOracle, t: int, site_count: int) -> int:
        raise NotImplementedError


class UniformSchedule(Schedule):
    """Site drawn from the oracle's site lane by multiply-and-floor."""

    kind = "uniform"

    def site_at(self, oracle, t, site_count):
        return (oracle.raw(t, 0) * site_count) >> 64


class SweepSchedule(Schedule):
    """Deterministic rotation; ascending site index going backward in time."""

    kind = "sweep"

    def site_at(self, oracle, t, site_count):
        if t < 0:
            return (-t - 1) % site_count
        return t % site_count


class RankParitySchedule(Schedule):
    """Alternate whole parity classes, even rank first in forward order."""

    kind = "rank-parity"
    is_batch = True

    def parity_at(self, t: int) -> int:
        return t % 2


_SCHEDULES = {
    "uniform": UniformSchedule,
    "sweep": SweepSchedule,
    "rank-parity": RankParitySchedule,
}


def make_schedule(spec, sys=None) -> Schedule:
    if isinstance(spec, Schedule):
        sched = spec
    else:
        try:
            sched = _SCHEDULES[spec]()
        except KeyError:
            raise ValueError(f"unknown schedule {spec!r}") from None
    if sched.is_batch and sys is not None and not sys.graded:
        raise NotGraded(f"{sys.name} has no parity grading for rank-parity updates")
    return sched


@dataclass(frozen=True)
class SampleRecord:
    """One exact draw plus everything needed to reproduce it bit-exactly."""

    state: object
    seed: int
    algorithm_id: str
    schedule: str
    q: float
    t_final: int
    update_count: int

    def to_json_dict(self, family=None, params=None, state_encoder=None) -> dict:
        out = {}
        if family is not None:
            out["family"] = family
        if params is not None:
            out["params"] = params
        out.update(
            seed=self.seed,
            algorithm_id=self.algorithm_id,
            schedule=self.schedule,
            q=self.q,
            T_final=self.t_final,
            update_count=self.update_count,
            state=state_encoder(self.state) if state_encoder else self.state,
        )
        return out


def _ups_key(ups):
    if isinstance(ups, np.ndarray):
        return ups.tobytes()
    return bytes(bool(u) for u in ups)


def _note_randomness(trace, t, value):
    """Record the randomness used at time t; any disagreement with an
    earlier window is a reuse bug, which must never happen."""
    prev = trace.setdefault(t, value)
    if prev != value:
        raise AssertionError(f"randomness at t={t} changed between windows")


def _run_window(sys, oracle, schedule, thresh, from_t, to_t=0, trace=None):
    """Evolve (bottom, top) over [from_t, to_t); returns (low, high, updates).

    Once the two trajectories meet, only one is evolved further; the
    result is identical because both maps agree from that point on.
    """
    n = sys.site_count
    updates = 0
    merged = False
    batch = schedule.is_batch
    if batch:
        low = sys.thaw(sys.bottom)
        high = sys.thaw(sys.top)
    else:
        low = sys.bottom
        high = sys.top
    for t in range(from_t, to_t):
        if batch:
            parity = schedule.parity_at(t)
            m = sys.batch_coin_count(parity)
            coins = oracle.coins(t, m)
            if isinstance(coins, np.ndarray):
                ups = coins < thresh
            else:
                ups = [c < thresh for c in coins]
            if trace is not None:
                _note_randomness(trace, t, (parity, _ups_key(ups)))
            low = sys.batch_update(low, parity, ups)
            updates += m
            if not merged:
                high = sys.batch_update(high, parity, ups)
                updates += m
                merged = sys.same(low, high)
        else:
            site = schedule.site_at(oracle, t, n)
            up = oracle.coin(t) < thresh
            if trace is not None:
                _note_randomness(trace, t, (site, up))
            low = sys.update(low, site, up)
            updates += 1
            if not merged:
                high = sys.update(high, site, up)
                updates += 1
                merged = low == high
    if batch:
        low = sys.freeze(low)
        high = low if merged else sys.freeze(high)
    elif merged:
        high = low
    return low, high, updates


def coupled_run(sys, from_t, to_t, oracle, schedule="uniform", q=1.0):
    """One coupled window [from_t, to_t); returns the final (low, high).

    Both trajectories see identical sites and coins, so low leq high
    throughout; equality at the end means every start would have reached
    the same state.
    """
    if from_t > to_t:
        raise ValueError("from_t must not exceed to_t")
    sched = make_schedule(schedule, sys)
    thresh = biased_coin_threshold(q)
    low, high, _ = _run_window(sys, oracle, sched, thresh, from_t, to_t)
    return low, high


def _resolve_oracle(oracle, seed):
    if oracle is None:
        if seed is None:
            raise ValueError("pass an oracle or a seed")
        return RandomnessOracle(seed)
    if seed is not None and seed != oracle.seed:
        raise ValueError("oracle and seed disagree")
    return oracle


def cftp_sample(
    sys,
    oracle=None,
    schedule="uniform",
    q=1.0,
    *,
    seed=None,
    max_horizon=None,
    trace=None,
) -> SampleRecord:
    """Exact draw from the stationary distribution of the toggle chain.

    Doubles the backward window until the coupled run coalesces; the
    values at shared times are reused verbatim across windows because the
    oracle is a pure function of (seed, t).  max_horizon, when set, turns
    an unusually deep run into HorizonExceeded instead of continuing;
    there is no fallback that would bias the draw.
    """
    oracle = _resolve_oracle(oracle, seed)
    sched = make_schedule(schedule, sys)
    thresh = biased_coin_threshold(q)
    if max_horizon is not None and max_horizon < 1:
        raise ValueError("max_horizon must be at least 1")

    def record(state, t_final, updates):
        return SampleRecord(
            state=state,
            seed=oracle.seed,
            algorithm_id=oracle.algorithm_id,
            schedule=sched.kind,
            q=float(q),
            t_final=t_final,
            update_count=updates,
        )

    if sys.site_count == 0:
        return record(sys.bottom, 0, 0)

    total = 0
    t_back = 1
    while True:
        low, high, used = _run_window(sys, oracle, sched, thresh, -t_back, 0, trace)
        total += used
        if low == high:
            return record(low, t_back, total)
        if max_horizon is not None and t_back >= max_horizon:
            raise HorizonExceeded(
                f"no coalescence within horizon {max_horizon} on {sys.name}"
            )
        t_back *= 2
        if max_horizon is not None and t_back > max_horizon:
            t_back = max_horizon


def forward_coalescence_sample(
    sys, oracle=None, schedule="uniform", q=1.0, *, seed=None, max_steps=None
):
    """Run the coupled pair FORWARD from time 0 until it meets.

    The meeting state is a stopping-time functional of the trajectory,
    not a stationary draw: on the 2-chain it lands on the middle state
    half the time instead of a third.  Kept for demonstration; use
    cftp_sample for actual sampling.
    """
    oracle = _resolve_oracle(oracle, seed)
    sched = make_schedule(schedule, sys)
    thresh = biased_coin_threshold(q)
    if sys.site_count == 0:
        return sys.bottom
    low, high = sys.bottom, sys.top
    t = 0
    while low != high:
        if max_steps is not None and t >= max_steps:
            raise HorizonExceeded(f"no meeting within {max_steps} forward steps")
        if sched.is_batch:
            parity = sched.parity_at(t)
            m = sys.batch_coin_count(parity)
            coins = oracle.coins(t, m)
            ups = coins < thresh if isinstance(coins, np.ndarray) else [
                c < thresh for c in coins
            ]
            low = sys.batch_update(low, parity, ups)
            high = sys.batch_update(high, parity, ups)
        else:
            site = sched.site_at(oracle, t, sys.site_count)
            up = oracle.coin(t) < thresh
            low = sys.update(low, site, up)
            high = sys.update(high, site, up)
        t += 1
    return low


def batch_parity_update(sys, state, parity, coins, q=1.0):
    """Apply one whole parity class given coin values in [0,1).

    Same-parity updates commute, so the result equals sequential
    application in any order; systems may vectorize.
    """
    if not sys.graded:
        raise NotGraded(f"{sys.name} has no parity grading")
    thresh = biased_coin_threshold(q)
    m = sys.batch_coin_count(parity)
    if isinstance(coins, np.ndarray):
        if coins.shape != (m,):
            raise ValueError(f"expected {m} coins, got shape {coins.shape}")
        ups = coins < thresh
    else:
        coins = list(coins)
        if len(coins) != m:
            raise ValueError(f"expected {m} coins, got {len(coins)}")
        ups = [c < thresh for c in coins]
    return sys.batch_update(state, parity, ups)


def _mean_rank_exact(by_rank: dict, log_q: float) -> float:
    """Mean of rank under weights count * q^rank, computed stably."""
    items = sorted(by_rank.items())
    logs = [math.log(c) + r * log_q for r, c in items]
    m = max(logs)
    ws = [math.exp(l - m) for l in logs]
    z = sum(ws)
    return sum(r * w for (r, _), w in zip(items, ws)) / z


def _auto_q(sys, k, seed, schedule, pilot=200):
    """Bisection on log q so the stationary mean rank is near k.

    Uses exact rank counts when the system is small enough to enumerate,
    otherwise a pilot-sampling estimate per probe.  The choice only
    affects acceptance rate, never the conditional law on rank k.
    """
    from .errors import LimitExceeded
    from .oracle import enumerate_states

    lo, hi = -20.0, 20.0
    by_rank = None
    try:
        by_rank = enumerate_states(sys, limit=20000).by_rank
    except LimitExceeded:
        pass
    for probe in range(30):
        mid = (lo + hi) / 2.0
        if by_rank is not None:
            mean = _mean_rank_exact(by_rank, mid)
        else:
            q = math.exp(mid)
            base = mix64((seed ^ _PILOT_SALT) & _MASK64) + probe * pilot
            ranks = [
                sys.rank_of(
                    cftp_sample(
                        sys, seed=(base + j) & _MASK64, schedule=schedule, q=q
                    ).state
                )
                for j in range(pilot)
            ]
            mean = sum(ranks) / len(ranks)
        if mean < k:
            lo = mid
        else:
            hi = mid
    return math.exp((lo + hi) / 2.0)


def sample_rank(
    sys,
    k,
    q="auto",
    max_tries=10000,
    *,
    seed=None,
    schedule="uniform",
) -> SampleRecord:
    """First cftp_sample draw whose rank equals k; exactly uniform there.

    The stationary law q^rank is constant on each rank level, so
    conditioning on rank k gives the uniform distribution on that level
    for every q; q is tuned (or given) purely to make hits frequent.
    Retries walk a seed stream hashed away from the caller's seed, so
    calls made with consecutive seeds never share draws.
    """
    if seed is None:
        raise ValueError("sample_rank needs a seed")
    max_rank = sys.rank_of(sys.top)
    if not 0 <= k <= max_rank:
        raise ValueError(f"rank {k} outside [0, {max_rank}]")
    if q == "auto":
        q = _auto_q(sys, k, seed, schedule)
    else:
        q = float(q)
    hits: dict = {}
    base = mix64((seed ^ _RANK_RETRY_SALT) & _MASK64)
    for i in range(max_tries):
        rec = cftp_sample(sys, seed=(base + i) & _MASK64, schedule=schedule, q=q)
        r = sys.rank_of(rec.state)
        hits[r] = hits.get(r, 0) + 1
        if r == k:
            return rec
    raise MaxTriesExceeded(
        f"rank {k} not hit in {max_tries} tries at q={q:.6g} "
        f"(acceptance estimate {hits.get(k, 0)}/{max_tries})",
        tries=max_tries,
        hits=hits,
    )


@dataclass(frozen=True)
class CoalescenceStats:
    """Empirical coupling-time diagnostics over independent seeds."""

    trials: int
    t_finals: tuple
    histogram: dict
    mean: float
    median: float
    window_frequency: dict
    mean_updates: float

    def to_json_dict(self) -> dict:
        return {
            "trials": self.trials,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "mean": self.mean,
            "median": self.median,
            "window_frequency": {
                str(k): v for k, v in sorted(self.window_frequency.items())
            },
            "mean_updates": self.mean_updates,
        }


def coalescence_stats(
    sys, schedule="uniform", trials=100, *, seed=0, q=1.0
) -> CoalescenceStats:
    """Run independent samples and aggregate the detected horizons."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    finals = []
    update_counts = []
    for i in range(trials):
        rec = cftp_sample(sys, seed=(seed + i) & _MASK64, schedule=schedule, q=q)
        finals.append(rec.t_final)
        update_counts.append(rec.update_count)
    hist: dict = {}
    for t in finals:
        hist[t] = hist.get(t, 0) + 1
    # a trial probes every window up to its coalescence horizon
    freq = {}
    for t in sorted(hist):
        attempts = sum(1 for f in finals if f >= t)
        freq[t] = hist[t] / attempts
    return CoalescenceStats(
        trials=trials,
        t_finals=tuple(finals),
        histogram=hist,
        mean=statistics.fmean(finals),
        median=statistics.median(finals),
        window_frequency=freq,
        mean_updates=statistics.fmean(update_counts),
    )
