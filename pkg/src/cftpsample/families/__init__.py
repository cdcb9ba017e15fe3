"""Family registry: build a sampleable instance from a name and parameters.

This is the one place that knows every family's parameter names, state
encoding, and exact count.  The CLI and the test suite go through
make_family; library users who want a specific system can import the
family modules directly.

Descriptors:

    boxes       a, b, c                 plane partitions in an a x b x c box
    filaments   a, b, c                 same states, diagonal-chain sites
    catalan     n                       paths below the diagonal
    paths       a, b [, lower, upper]   corridor-constrained lattice paths
    asm         n                       alternating-sign matrices
    indep       graph                   two-colored independent sets
    domino      region                  domino tilings of a cell region
    chainN / antichainN                 tiny built-in posets for demos

graph/region values may be a JSON file path, an inline JSON string, or
the already-parsed object; the loaded object is embedded in the canonical
params so every sample record is self-contained.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

from ..errors import UnsupportedFamily
from ..poset import OrderIdeal, Poset, build_poset
from ..systems import MonotoneToggleSystem, ideal_system
from . import asm as asm_mod
from . import boxes as boxes_mod
from . import domino as domino_mod
from . import indep as indep_mod
from . import paths as paths_mod

#: boxes instances at or below this volume also get the explicit cell poset
_BOXES_POSET_LIMIT = 4096

FAMILY_NAMES = (
    "boxes",
    "filaments",
    "catalan",
    "paths",
    "asm",
    "indep",
    "domino",
    "chainN",
    "antichainN",
)


@dataclass
class FamilyInstance:
    """Everything the sampler, CLI, and renderers need for one family.

    kind selects the renderer; encode_state/decode_state convert between
    engine states and the JSON payload stored in sample records; carrier
    holds the family-specific geometry (BoxesParams, PathRegion, ...).
    """

    family: str
    params: dict
    system: MonotoneToggleSystem
    kind: str
    poset: Poset | None
    count_exact: int | None
    encode_state: Callable[[Any], dict]
    decode_state: Callable[[dict], Any]
    carrier: Any = None


def _as_int(params: dict, key: str) -> int:
    if key not in params:
        raise ValueError(f"missing required parameter {key!r}")
    try:
        return int(params[key])
    except (TypeError, ValueError):
        raise ValueError(f"parameter {key!r} must be an integer, got {params[key]!r}")


def _int_list(value) -> list[int]:
    # colon-separated on the command line, a real list from code
    if isinstance(value, str):
        value = value.split(":")
    return [int(v) for v in value]


def _json_value(value, base_dir: str):
    """A parameter that names a JSON object: path, inline text, or the object."""
    if isinstance(value, (dict, list)):
        return value
    text = str(value).strip()
    if text.startswith("{") or text.startswith("["):
        return json.loads(text)
    path = Path(base_dir) / text if base_dir else Path(text)
    if not path.exists():
        raise ValueError(f"no such file: {path}")
    with open(path) as f:
        return json.load(f)


def _reject_unknown(params: dict, allowed: set) -> None:
    extra = set(params) - allowed
    if extra:
        raise ValueError(f"unknown parameter(s): {', '.join(sorted(extra))}")


def chain_poset(m: int) -> Poset:
    return build_poset(m, [(i, i + 1) for i in range(m - 1)])


def antichain_poset(m: int) -> Poset:
    return build_poset(m, [])


def asm_count(n: int) -> int:
    """Number of n x n alternating-sign matrices, by the product formula."""
    num = 1
    den = 1
    for k in range(n):
        num *= math.factorial(3 * k + 1)
        den *= math.factorial(n + k)
    assert num % den == 0
    return num // den


def corridor_path_count(region: paths_mod.PathRegion) -> int:
    """Paths through the corridor, by direct dynamic programming."""
    prev = {x: 1 for x in range(region.lo[0], region.hi[0] + 1)} if region.a else {0: 1}
    for r in range(1, region.a):
        lo, hi = region.lo[r], region.hi[r]
        cur = {}
        running = 0
        ys = sorted(prev)
        yi = 0
        for x in range(lo, hi + 1):
            while yi < len(ys) and ys[yi] <= x:
                running += prev[ys[yi]]
                yi += 1
            cur[x] = running
        prev = cur
    return sum(prev.values())


# ---------------------------------------------------------------------------
# per-family encode/decode payloads
# ---------------------------------------------------------------------------


def _parts_payload(parts) -> dict:
    return {"parts": [list(r) for r in parts]}


def _surface_encode(p: boxes_mod.BoxesParams):
    def encode(state) -> dict:
        rows = [list(state[i * p.b : (i + 1) * p.b]) for i in range(p.a)]
        return {"parts": rows}

    return encode


def _surface_decode(p: boxes_mod.BoxesParams):
    def decode(payload: dict):
        pp = boxes_mod.PlanePartition(tuple(tuple(r) for r in payload["parts"]))
        if len(pp.parts) != p.a or any(len(r) != p.b for r in pp.parts):
            raise ValueError(f"expected a {p.a}x{p.b} parts matrix")
        if any(v > p.c for r in pp.parts for v in r):
            raise ValueError(f"part exceeds box height {p.c}")
        return tuple(v for r in pp.parts for v in r)

    return decode


def _filament_encode(p: boxes_mod.BoxesParams):
    def encode(bits: int) -> dict:
        pp = boxes_mod.ideal_to_plane_partition(OrderIdeal.from_bits(bits), p)
        return _parts_payload(pp.parts)

    return encode


def _filament_decode(p: boxes_mod.BoxesParams):
    def decode(payload: dict) -> int:
        pp = boxes_mod.PlanePartition(tuple(tuple(r) for r in payload["parts"]))
        return boxes_mod.plane_partition_to_ideal(pp, p).bits

    return decode


def _path_encode(region: paths_mod.PathRegion):
    def encode(bits: int) -> dict:
        return {"word": paths_mod.ideal_to_word(region, bits)}

    return encode


def _path_decode(region: paths_mod.PathRegion):
    def decode(payload: dict) -> int:
        return paths_mod.word_to_ideal(region, payload["word"])

    return decode


def _asm_encode(n: int):
    def encode(state) -> dict:
        m = asm_mod.corner_sum_to_asm(asm_mod.corner_matrix(state, n))
        return {"matrix": [list(r) for r in m]}

    return encode


def _asm_decode(n: int):
    def decode(payload: dict):
        m = tuple(tuple(r) for r in payload["matrix"])
        if not asm_mod.is_asm(m):
            raise ValueError("matrix violates the alternating-sign axioms")
        if len(m) != n:
            raise ValueError(f"expected a {n}x{n} matrix")
        return asm_mod.corner_flat(asm_mod.asm_to_corner_sum(m), n)

    return decode


def _indep_encode(system: indep_mod.IndependentSetSystem):
    def encode(state) -> dict:
        blacks, whites = system.members(state)
        return {"black": list(blacks), "white": list(whites)}

    return encode


def _indep_decode(system: indep_mod.IndependentSetSystem):
    def decode(payload: dict):
        return system.state_of_members(payload["black"], payload["white"])

    return decode


def _domino_encode(region: domino_mod.DominoRegion):
    def encode(state) -> dict:
        tiling = domino_mod.heights_to_dominoes(region, state)
        return {"dominoes": [[list(a), list(b)] for a, b in tiling]}

    return encode


def _domino_decode(region: domino_mod.DominoRegion):
    def decode(payload: dict):
        return domino_mod.dominoes_to_heights(region, payload["dominoes"])

    return decode


def _ideal_encode(bits: int) -> dict:
    return {"members": list(OrderIdeal.from_bits(bits).members())}


def _ideal_decode(payload: dict) -> int:
    bits = 0
    for x in payload["members"]:
        bits |= 1 << int(x)
    return bits


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def _make_boxes(params: dict, base_dir: str) -> FamilyInstance:
    _reject_unknown(params, {"a", "b", "c"})
    p = boxes_mod.BoxesParams(_as_int(params, "a"), _as_int(params, "b"), _as_int(params, "c"))
    poset = boxes_mod.boxes_poset(p) if p.volume <= _BOXES_POSET_LIMIT else None
    return FamilyInstance(
        family="boxes",
        params={"a": p.a, "b": p.b, "c": p.c},
        system=boxes_mod.boxes_system(p),
        kind="plane-partition",
        poset=poset,
        count_exact=boxes_mod.macmahon_count(p),
        encode_state=_surface_encode(p),
        decode_state=_surface_decode(p),
        carrier=p,
    )


def _make_filaments(params: dict, base_dir: str) -> FamilyInstance:
    _reject_unknown(params, {"a", "b", "c"})
    p = boxes_mod.BoxesParams(_as_int(params, "a"), _as_int(params, "b"), _as_int(params, "c"))
    system = boxes_mod.filament_system(p)
    return FamilyInstance(
        family="filaments",
        params={"a": p.a, "b": p.b, "c": p.c},
        system=system,
        kind="plane-partition",
        poset=system.poset,
        count_exact=boxes_mod.macmahon_count(p),
        encode_state=_filament_encode(p),
        decode_state=_filament_decode(p),
        carrier=p,
    )


def _make_catalan(params: dict, base_dir: str) -> FamilyInstance:
    _reject_unknown(params, {"n"})
    n = _as_int(params, "n")
    region = paths_mod.catalan_region(n)
    return FamilyInstance(
        family="catalan",
        params={"n": n},
        system=ideal_system(region.poset, name=f"catalan({n})"),
        kind="path",
        poset=region.poset,
        count_exact=math.comb(2 * n, n) // (n + 1),
        encode_state=_path_encode(region),
        decode_state=_path_decode(region),
        carrier=region,
    )


def _make_paths(params: dict, base_dir: str) -> FamilyInstance:
    _reject_unknown(params, {"a", "b", "lower", "upper"})
    a, b = _as_int(params, "a"), _as_int(params, "b")
    lower = _int_list(params["lower"]) if "lower" in params else None
    upper = _int_list(params["upper"]) if "upper" in params else None
    region = paths_mod.path_region(a, b, lower, upper)
    canon: dict = {"a": a, "b": b}
    if lower is not None:
        canon["lower"] = lower
    if upper is not None:
        canon["upper"] = upper
    return FamilyInstance(
        family="paths",
        params=canon,
        system=ideal_system(region.poset, name=f"paths({a},{b})"),
        kind="path",
        poset=region.poset,
        count_exact=corridor_path_count(region),
        encode_state=_path_encode(region),
        decode_state=_path_decode(region),
        carrier=region,
    )


def _make_asm(params: dict, base_dir: str) -> FamilyInstance:
    _reject_unknown(params, {"n"})
    n = _as_int(params, "n")
    return FamilyInstance(
        family="asm",
        params={"n": n},
        system=asm_mod.asm_system(n),
        kind="asm",
        poset=None,
        count_exact=asm_count(n),
        encode_state=_asm_encode(n),
        decode_state=_asm_decode(n),
        carrier=None,
    )


def _make_indep(params: dict, base_dir: str) -> FamilyInstance:
    _reject_unknown(params, {"graph"})
    if "graph" not in params:
        raise ValueError("missing required parameter 'graph'")
    obj = _json_value(params["graph"], base_dir)
    graph = indep_mod.load_graph(obj)
    system = indep_mod.independent_sets_system(graph)
    canon = {
        "graph": {
            "black": list(graph.black),
            "white": list(graph.white),
            "edges": [list(e) for e in graph.edges],
        }
    }
    return FamilyInstance(
        family="indep",
        params=canon,
        system=system,
        kind="indep",
        poset=None,
        count_exact=None,
        encode_state=_indep_encode(system),
        decode_state=_indep_decode(system),
        carrier=graph,
    )


def _make_domino(params: dict, base_dir: str) -> FamilyInstance:
    _reject_unknown(params, {"region"})
    if "region" not in params:
        raise ValueError("missing required parameter 'region'")
    obj = _json_value(params["region"], base_dir)
    cells = domino_mod.load_region(obj)
    region = domino_mod.build_region(cells)
    system = domino_mod.DominoHeightSystem(region)
    canon = {"region": [list(c) for c in sorted(cells)]}
    return FamilyInstance(
        family="domino",
        params=canon,
        system=system,
        kind="domino",
        poset=None,
        count_exact=None,
        encode_state=_domino_encode(region),
        decode_state=_domino_decode(region),
        carrier=region,
    )


def _make_tiny(kind: str, m: int) -> FamilyInstance:
    poset = chain_poset(m) if kind == "chain" else antichain_poset(m)
    name = f"{kind}{m}"
    return FamilyInstance(
        family=name,
        params={},
        system=ideal_system(poset, name=name),
        kind="ideal",
        poset=poset,
        count_exact=m + 1 if kind == "chain" else 2**m,
        encode_state=_ideal_encode,
        decode_state=_ideal_decode,
        carrier=None,
    )


_BUILDERS = {
    "boxes": _make_boxes,
    "filaments": _make_filaments,
    "catalan": _make_catalan,
    "paths": _make_paths,
    "asm": _make_asm,
    "indep": _make_indep,
    "domino": _make_domino,
}

_TINY_RE = re.compile(r"^(chain|antichain)([1-9]\d*)$")


def make_family(family: str, params: dict | None = None, base_dir: str = ".") -> FamilyInstance:
    """Build the FamilyInstance for a descriptor.

    params values may be strings (from the command line) or typed values;
    base_dir anchors relative file paths in graph/region parameters.
    Raises UnsupportedFamily for an unknown name and ValueError for bad
    parameters.
    """
    params = dict(params or {})
    builder = _BUILDERS.get(family)
    if builder is not None:
        return builder(params, base_dir)
    tiny = _TINY_RE.match(family)
    if tiny:
        _reject_unknown(params, set())
        return _make_tiny(tiny.group(1), int(tiny.group(2)))
    raise UnsupportedFamily(
        f"unknown family {family!r}; expected one of {', '.join(FAMILY_NAMES)}"
    )
