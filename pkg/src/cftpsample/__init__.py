"""Exact sampling from finite distributive lattices by coupling from the past.

The package samples uniformly random order ideals of finite posets (and
monotone height-array families carrying the same lattice structure) with
no approximation error: boxed plane partitions / lozenge tilings, domino
tilings, alternating-sign matrices, corridor lattice paths, and bipartite
independent sets.  Brute-force oracles and an exhaustive randomness
census verify exactness on small instances.

Typical use:

    from cftpsample import make_family, cftp_sample
    inst = make_family("boxes", {"a": 8, "b": 8, "c": 8})
    rec = cftp_sample(inst.system, seed=42)
    print(inst.encode_state(rec.state))
"""

from .engine import (
    CoalescenceStats,
    SampleRecord,
    batch_parity_update,
    biased_coin_threshold,
    cftp_sample,
    coalescence_stats,
    coupled_run,
    forward_coalescence_sample,
    make_schedule,
    sample_rank,
)
from .errors import (
    BudgetExceeded,
    CapacityExceeded,
    CycleDetected,
    EmptyRegion,
    ExpectedCountTooSmall,
    HorizonExceeded,
    IdentifierOutOfRange,
    LimitExceeded,
    MaxTriesExceeded,
    NonPositiveQ,
    NotBipartite,
    NotGraded,
    NotSimplyConnected,
    NotTileable,
    RedundantCover,
    SamplerError,
    UnsupportedFamily,
)
from .families import FAMILY_NAMES, FamilyInstance, make_family
from .oracle import (
    CensusResult,
    ChiSquareResult,
    EnumerationResult,
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
from .poset import (
    OrderIdeal,
    Poset,
    apply_move,
    bottom_ideal,
    build_poset,
    is_order_ideal,
    poset_from_json,
    poset_to_json,
    top_ideal,
)
from .randomness import ALGORITHM_ID, RandomnessOracle
from .render import RenderSpec, render_ascii, render_domino_svg, render_lozenge_svg, render_state
from .systems import IdealToggleSystem, MonotoneToggleSystem, ideal_system

__version__ = "0.1.0"

__all__ = [
    "ALGORITHM_ID",
    "BudgetExceeded",
    "CapacityExceeded",
    "CensusResult",
    "ChiSquareResult",
    "CoalescenceStats",
    "CycleDetected",
    "EmptyRegion",
    "EnumerationResult",
    "ExpectedCountTooSmall",
    "FAMILY_NAMES",
    "FamilyInstance",
    "HorizonExceeded",
    "IdealCounter",
    "IdealToggleSystem",
    "IdentifierOutOfRange",
    "LimitExceeded",
    "MaxTriesExceeded",
    "MonotoneToggleSystem",
    "NonPositiveQ",
    "NotBipartite",
    "NotGraded",
    "NotSimplyConnected",
    "NotTileable",
    "OrderIdeal",
    "Poset",
    "RandomnessOracle",
    "RedundantCover",
    "RenderSpec",
    "SampleRecord",
    "SamplerError",
    "UnsupportedFamily",
    "apply_move",
    "batch_parity_update",
    "biased_coin_threshold",
    "bottom_ideal",
    "build_poset",
    "cftp_sample",
    "chi_square_uniformity",
    "coalescence_stats",
    "count_ideals",
    "coupled_run",
    "enumerate_ideals",
    "enumerate_states",
    "exact_cftp_census",
    "forward_bias_exact",
    "forward_coalescence_sample",
    "ideal_system",
    "is_order_ideal",
    "make_family",
    "make_schedule",
    "poset_from_json",
    "poset_to_json",
    "recursive_exact_sample",
    "render_ascii",
    "render_domino_svg",
    "render_lozenge_svg",
    "render_state",
    "sample_rank",
    "top_ideal",
    "total_variation",
]
