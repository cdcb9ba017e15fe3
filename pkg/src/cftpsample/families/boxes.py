"""Boxed plane partitions: ideals of a product of three chains.

The poset is the a x b x c grid of unit boxes ordered componentwise.  An
order ideal is a stable stack of boxes pushed into the corner of an
a x b x c room: the ideal contains (i, j, k) exactly when the column over
cell (i, j) has height greater than k.  Ideals therefore correspond to
plane partitions (an a x b matrix of column heights, weakly decreasing
along rows and columns, entries at most c), and drawing the stack in
isometric projection gives a lozenge tiling of a hexagon with side
lengths a, b, c.

The number of ideals has MacMahon's classical product form

    prod_{i<a} prod_{j<b} prod_{k<c} (i+j+k+2) / (i+j+k+1)

computed here in exact integer arithmetic and cross-checked against brute
force enumeration in the tests.

Two equivalent toggle systems are provided.  ideal_system(boxes_poset(p))
works on bit-vector ideals; BoxSurfaceSystem works directly on the height
matrix, which is what makes large instances practical: its rank-parity
batch update is vectorized over the whole matrix, using one coin per
column of each parity class.  Within a parity class at most one box per
column is toggleable (the box at the surface), so a per-column coin is a
per-site coin for every site that can act; the correspondence with
sequential single-site updates is exercised exhaustively in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..errors import CapacityExceeded
from ..poset import DEFAULT_MAX_ELEMENTS, OrderIdeal, Poset, build_poset
from ..systems import MonotoneToggleSystem, as_bool_array, ideal_system


@dataclass(frozen=True)
class BoxesParams:
    """Side lengths of the box; all positive."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if min(self.a, self.b, self.c) < 1:
            raise ValueError("box sides must be positive")

    @property
    def volume(self) -> int:
        return self.a * self.b * self.c


def box_index(params: BoxesParams, i: int, j: int, k: int) -> int:
    """Dense element id of box (i, j, k)."""
    return (i * params.b + j) * params.c + k


def box_coords(params: BoxesParams, x: int) -> tuple[int, int, int]:
    """Inverse of box_index."""
    k = x % params.c
    ij = x // params.c
    return ij // params.b, ij % params.b, k


def boxes_poset(params: BoxesParams, *, max_elements: int = DEFAULT_MAX_ELEMENTS) -> Poset:
    """The componentwise-ordered a x b x c grid poset."""
    a, b, c = params.a, params.b, params.c
    if params.volume > max_elements:
        raise CapacityExceeded(
            f"boxes({a},{b},{c}) has {params.volume} elements, capacity {max_elements}"
        )
    covers = []
    for i in range(a):
        for j in range(b):
            for k in range(c):
                x = box_index(params, i, j, k)
                if i + 1 < a:
                    covers.append((x, box_index(params, i + 1, j, k)))
                if j + 1 < b:
                    covers.append((x, box_index(params, i, j + 1, k)))
                if k + 1 < c:
                    covers.append((x, x + 1))
    return build_poset(params.volume, covers, max_elements=max_elements)


def macmahon_count(params: BoxesParams) -> int:
    """Number of plane partitions in the a x b x c box, exactly.

    Factors are grouped by the coordinate sum s = i+j+k, which appears
    N(s) times; the product telescopes to an exact integer.
    """
    a, b, c = params.a, params.b, params.c
    mult: dict[int, int] = {}
    for i in range(a):
        for j in range(b):
            for k in range(c):
                s = i + j + k
                mult[s] = mult.get(s, 0) + 1
    total = Fraction(1)
    for s, n in mult.items():
        total *= Fraction(s + 2, s + 1) ** n
    assert total.denominator == 1
    return total.numerator


@dataclass(frozen=True)
class PlanePartition:
    """Column-height matrix of a box stacking; rows and columns weakly decrease."""

    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = self.parts
        for r in rows:
            if any(r[j] < r[j + 1] for j in range(len(r) - 1)):
                raise ValueError("plane partition rows must weakly decrease")
            if any(v < 0 for v in r):
                raise ValueError("plane partition entries must be nonnegative")
        for i in range(len(rows) - 1):
            if any(rows[i][j] < rows[i + 1][j] for j in range(len(rows[i]))):
                raise ValueError("plane partition columns must weakly decrease")

    @property
    def volume(self) -> int:
        return sum(sum(r) for r in self.parts)


def ideal_to_plane_partition(ideal: OrderIdeal, params: BoxesParams) -> PlanePartition:
    """Column heights of an ideal: part(i, j) = number of boxes over cell (i, j)."""
    a, b, c = params.a, params.b, params.c
    bits = ideal.bits
    rows = []
    for i in range(a):
        row = []
        for j in range(b):
            base = (i * b + j) * c
            h = 0
            while h < c and (bits >> (base + h)) & 1:
                h += 1
            row.append(h)
        rows.append(tuple(row))
    return PlanePartition(tuple(rows))


def plane_partition_to_ideal(pp: PlanePartition, params: BoxesParams) -> OrderIdeal:
    """Inverse codec: the ideal containing (i, j, k) for every k < part(i, j)."""
    a, b, c = params.a, params.b, params.c
    if len(pp.parts) != a or any(len(r) != b for r in pp.parts):
        raise ValueError(f"expected a {a}x{b} matrix")
    bits = 0
    size = 0
    for i in range(a):
        for j in range(b):
            h = pp.parts[i][j]
            if h > c:
                raise ValueError(f"part {h} exceeds box height {c}")
            base = (i * b + j) * c
            bits |= ((1 << h) - 1) << base
            size += h
    return OrderIdeal(bits, size)


# ---------------------------------------------------------------------------
# Lozenge tiling of the hexagon
# ---------------------------------------------------------------------------

#: Unit rhombus orientations, named by the axis their face is normal to.
ORIENTATIONS = ("X", "Y", "Z")

_FACE_OFFSETS = {
    # corner offsets of the unit face, counterclockwise in its own plane
    "X": ((0, 0, 0), (0, 1, 0), (0, 1, 1), (0, 0, 1)),
    "Y": ((0, 0, 0), (1, 0, 0), (1, 0, 1), (0, 0, 1)),
    "Z": ((0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)),
}


@dataclass(frozen=True)
class Lozenge:
    """One rhombus of the tiling: face orientation plus its anchor corner."""

    orientation: str
    anchor: tuple[int, int, int]

    def corners(self) -> tuple[tuple[int, int, int], ...]:
        ax, ay, az = self.anchor
        return tuple(
            (ax + dx, ay + dy, az + dz) for dx, dy, dz in _FACE_OFFSETS[self.orientation]
        )

    def center(self) -> tuple[float, float, float]:
        cs = self.corners()
        return (
            sum(p[0] for p in cs) / 4.0,
            sum(p[1] for p in cs) / 4.0,
            sum(p[2] for p in cs) / 4.0,
        )


def plane_partition_to_lozenges(pp: PlanePartition, params: BoxesParams) -> list[Lozenge]:
    """The visible surface of the stacking as a list of unit rhombi.

    Exactly a*b faces are normal to z (stack tops), b*c normal to x, and
    a*c normal to y; together they project to a tiling of the hexagon.
    """
    a, b, c = params.a, params.b, params.c
    parts = pp.parts
    tiles: list[Lozenge] = []
    for i in range(a):
        for j in range(b):
            tiles.append(Lozenge("Z", (i, j, parts[i][j])))
    for j in range(b):
        for k in range(c):
            level = sum(1 for i in range(a) if parts[i][j] > k)
            tiles.append(Lozenge("X", (level, j, k)))
    for i in range(a):
        for k in range(c):
            level = sum(1 for j in range(b) if parts[i][j] > k)
            tiles.append(Lozenge("Y", (i, level, k)))
    return tiles


def complement_ideal(bits: int, params: BoxesParams) -> int:
    """Image of an ideal under the central symmetry of the box.

    Maps (i, j, k) to (a-1-i, b-1-j, c-1-k) on the complement set; the
    result is again an ideal, with size volume - |I|.
    """
    a, b, c = params.a, params.b, params.c
    out = 0
    for i in range(a):
        for j in range(b):
            for k in range(c):
                if not (bits >> box_index(params, i, j, k)) & 1:
                    out |= 1 << box_index(params, a - 1 - i, b - 1 - j, c - 1 - k)
    return out


# ---------------------------------------------------------------------------
# Surface toggle system
# ---------------------------------------------------------------------------


class BoxSurfaceSystem(MonotoneToggleSystem):
    """Toggle dynamics on the height matrix itself.

    The state is the flattened a x b height matrix as a tuple.  Site ids
    match boxes_poset element ids, so this system and the bit-vector ideal
    system driven by identical randomness produce identical stackings.

    A toggle at site (i, j, k) can only act when k is at the surface of
    column (i, j): up requires part(i, j) == k plus room from the (i-1, j)
    and (i, j-1) columns; down requires part(i, j) == k + 1 plus clearance
    from the (i+1, j) and (i, j+1) columns.  The site grading is the
    coordinate-sum parity, and a batch step consumes one coin per column
    (coin index i*b + j): at most one site per column per parity class can
    act, so sharing a coin across a column's sites is still one coin per
    acting site.
    """

    def __init__(self, params: BoxesParams):
        self.params = params
        self.name = f"boxes({params.a},{params.b},{params.c})"
        a, b, c = params.a, params.b, params.c
        self.site_count = params.volume
        self.bottom = (0,) * (a * b)
        self.top = (c,) * (a * b)
        self.graded = True
        self._parity_grid = np.add.outer(np.arange(a), np.arange(b)) % 2

    def update(self, state: tuple, site: int, up: bool) -> tuple:
        p = self.params
        a, b, c = p.a, p.b, p.c
        k = site % c
        ij = site // c
        i, j = ij // b, ij % b
        v = state[ij]
        if up:
            if v != k:
                return state
            if i > 0 and state[ij - b] <= k:
                return state
            if j > 0 and state[ij - 1] <= k:
                return state
            return state[:ij] + (v + 1,) + state[ij + 1 :]
        if v != k + 1:
            return state
        if i + 1 < a and state[ij + b] > k:
            return state
        if j + 1 < b and state[ij + 1] > k:
            return state
        return state[:ij] + (v - 1,) + state[ij + 1 :]

    def leq(self, s: tuple, t: tuple) -> bool:
        return all(x <= y for x, y in zip(s, t))

    def rank_of(self, state: tuple) -> int:
        return sum(state)

    def parity_of(self, site: int) -> int:
        p = self.params
        k = site % p.c
        ij = site // p.c
        return (ij // p.b + ij % p.b + k) & 1

    def batch_coin_count(self, parity: int) -> int:
        return self.params.a * self.params.b

    def batch_coin_index(self, site: int) -> int:
        return site // self.params.c

    def thaw(self, state: tuple) -> np.ndarray:
        return np.array(state, dtype=np.int64).reshape(self.params.a, self.params.b)

    def freeze(self, working: np.ndarray) -> tuple:
        return tuple(working.ravel().tolist())

    def same(self, x: np.ndarray, y: np.ndarray) -> bool:
        return bool(np.array_equal(x, y))

    def batch_update(self, state, parity: int, ups: Sequence[bool]):
        """Vectorized parity batch on either a working array or a tuple state."""
        p = self.params
        a, b, c = p.a, p.b, p.c
        tupled = not isinstance(state, np.ndarray)
        grid = self.thaw(state) if tupled else state
        up_grid = as_bool_array(ups, a * b).reshape(a, b)

        # Surface sites: the up move toggles box (i, j, grid) when that box
        # has the requested parity; the down move toggles box (i, j, grid-1).
        surf_parity = (self._parity_grid + grid) & 1
        can_up = (surf_parity == parity) & (grid < c) & up_grid
        if a > 1:
            can_up[1:, :] &= grid[:-1, :] > grid[1:, :]
        if b > 1:
            can_up[:, 1:] &= grid[:, :-1] > grid[:, 1:]

        can_down = (surf_parity != parity) & (grid > 0) & ~up_grid
        if a > 1:
            can_down[:-1, :] &= grid[1:, :] < grid[:-1, :]
        if b > 1:
            can_down[:, :-1] &= grid[:, 1:] < grid[:, :-1]

        out = grid + can_up.astype(np.int64) - can_down.astype(np.int64)
        return self.freeze(out) if tupled else out


def boxes_system(params: BoxesParams) -> BoxSurfaceSystem:
    """The standard sampleable system for the boxes family."""
    return BoxSurfaceSystem(params)


def boxes_ideal_system(params: BoxesParams, **kw):
    """Bit-vector reference system over the same site indexing (small boxes)."""
    name = f"boxes-ideals({params.a},{params.b},{params.c})"
    return ideal_system(boxes_poset(params, **kw), name=name)


# ---------------------------------------------------------------------------
# Filament moves
# ---------------------------------------------------------------------------


class FilamentSystem(MonotoneToggleSystem):
    """Ideal dynamics whose sites are the diagonal filaments of the box.

    A filament is a maximal chain (i, j, k), (i+1, j+1, k+1), ... of boxes
    along the main diagonal direction; there is one per base box with some
    coordinate equal to zero.  An ideal meets each filament in a prefix.
    The up move adjoins the smallest absent element of the filament and
    the down move deletes the largest present one, each only when the
    result is still an ideal.  Geometrically these are the elementary
    hexagon moves of the tiling, one site per diagonal line of hexagons.
    """

    def __init__(self, params: BoxesParams, *, max_elements: int = DEFAULT_MAX_ELEMENTS):
        self.params = params
        self.poset = boxes_poset(params, max_elements=max_elements)
        self.name = f"filaments({params.a},{params.b},{params.c})"
        a, b, c = params.a, params.b, params.c
        fils = []
        for i in range(a):
            for j in range(b):
                for k in range(c):
                    if min(i, j, k) == 0:
                        chain = []
                        t = 0
                        while i + t < a and j + t < b and k + t < c:
                            chain.append(box_index(params, i + t, j + t, k + t))
                            t += 1
                        fils.append(tuple(chain))
        fils.sort()
        self.filaments = tuple(fils)
        self.site_count = len(fils)
        self.bottom = 0
        self.top = (1 << params.volume) - 1
        self.graded = False

    def update(self, state: int, site: int, up: bool) -> int:
        chain = self.filaments[site]
        if up:
            for x in chain:
                if not (state >> x) & 1:
                    need = self.poset.lower_masks[x]
                    if state & need == need:
                        return state | (1 << x)
                    return state
            return state
        for x in reversed(chain):
            if (state >> x) & 1:
                if state & self.poset.upper_masks[x]:
                    return state
                return state & ~(1 << x)
        return state

    def leq(self, a: int, b: int) -> bool:
        return a & ~b == 0

    def rank_of(self, state: int) -> int:
        return state.bit_count()


def filament_system(params: BoxesParams, **kw) -> FilamentSystem:
    return FilamentSystem(params, **kw)
