"""Domino tilings of a simply connected region via height functions.

Cells are unit squares named by their lower-left corner (x, y), colored
black when (x + y) is even.  A tiling assigns an integer height to every
vertex (cell corner) by the standard rule: walking along a grid edge
with a black cell on the left, the height rises by 1 if no domino
crosses the edge and falls by 3 if one does (the white-left direction
negates both).  Boundary edges are never crossed, so boundary heights
are forced once a base vertex is fixed; we pin the lexicographically
smallest boundary vertex to 0.

Height functions of tilings are exactly the integer functions that take
the forced boundary values and change by the legal amounts across every
edge.  Pointwise min and max of two of them are again height functions,
so tilings form a distributive lattice.  The extremes are computed by
multi-source Dijkstra from the boundary: along the black-left direction
of an edge the rise is at most 1, along the white-left direction at most
3, and since any two valid heights of a vertex are congruent mod 4, the
shortest-path bound is itself a valid height function exactly when the
region is tileable.

A toggle site is an interior vertex (all four incident cells in the
region).  Raising the height by 4 is legal exactly at a strict local
minimum, lowering at a strict local maximum; both correspond to rotating
the two dominoes of a 2 x 2 block.  Interior vertices of equal
coordinate parity are never adjacent, and an update reads only the four
neighbor heights, so the two parity classes commute internally.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from ..errors import NotSimplyConnected, NotTileable
from ..systems import MonotoneToggleSystem

Cell = tuple[int, int]
Vertex = tuple[int, int]


def load_region(obj) -> frozenset:
    """Cells from the JSON shape [[x, y], ...]."""
    cells = set()
    for item in obj:
        x, y = item
        cells.add((int(x), int(y)))
    return frozenset(cells)


def is_black(cell: Cell) -> bool:
    return (cell[0] + cell[1]) % 2 == 0


def _cell_edges(cell: Cell):
    x, y = cell
    yield ((x, y), (x + 1, y))
    yield ((x, y + 1), (x + 1, y + 1))
    yield ((x, y), (x, y + 1))
    yield ((x + 1, y), (x + 1, y + 1))


def _edge_cells(u: Vertex, v: Vertex) -> tuple[Cell, Cell]:
    """The two cells flanking an undirected edge: (left-of-u->v, right-of-u->v)."""
    (x1, y1), (x2, y2) = u, v
    if y1 == y2:  # horizontal, left cell is above when walking +x
        return (min(x1, x2), y1), (min(x1, x2), y1 - 1)
    return (x1 - 1, min(y1, y2)), (x1, min(y1, y2))


def _left_cell(u: Vertex, v: Vertex) -> Cell:
    """Cell on the left when walking the directed edge u -> v."""
    (x1, y1), (x2, y2) = u, v
    if y1 == y2:
        x = min(x1, x2)
        return (x, y1) if x2 > x1 else (x, y1 - 1)
    y = min(y1, y2)
    return (x1 - 1, y) if y2 > y1 else (x1, y)


@dataclass(frozen=True)
class DominoRegion:
    """Carrier: validated region with vertex indexing and extreme heights."""

    cells: frozenset
    vertices: tuple[Vertex, ...]
    h_min: tuple[int, ...]
    h_max: tuple[int, ...]
    interior: tuple[Vertex, ...]

    @property
    def vertex_index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}


def _region_structure(cells: frozenset):
    if not cells:
        raise NotTileable("empty region")
    vertices = set()
    edge_count: dict = {}
    for c in cells:
        x, y = c
        vertices.update([(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)])
        for e in _cell_edges(c):
            edge_count[e] = edge_count.get(e, 0) + 1

    # face connectivity through shared edges
    cells_list = list(cells)
    stack = [cells_list[0]]
    seen = {cells_list[0]}
    while stack:
        x, y = stack.pop()
        for nb in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if nb in cells and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    if len(seen) != len(cells):
        raise NotSimplyConnected("region is disconnected")

    # Euler count: a connected polyomino has E - V + 1 independent cycles,
    # one per cell exactly when there are no holes
    if len(edge_count) - len(vertices) + 1 != len(cells):
        raise NotSimplyConnected("region has a hole")

    boundary = [e for e, k in edge_count.items() if k == 1]
    interior = [e for e, k in edge_count.items() if k == 2]
    return vertices, boundary, interior


def _boundary_heights(cells: frozenset, boundary_edges) -> dict:
    """Forced heights on boundary vertices, pinned at the smallest vertex.

    Each boundary edge is directed with its region cell on the left and
    contributes the uncrossed increment +1/-1 by that cell's color;
    inconsistent propagation means no tiling exists.
    """
    adj: dict = {}
    for u, v in boundary_edges:
        left, right = _edge_cells(u, v)
        if left in cells:
            d = 1 if is_black(left) else -1
            adj.setdefault(u, []).append((v, d))
            adj.setdefault(v, []).append((u, -d))
        else:
            d = 1 if is_black(right) else -1
            adj.setdefault(v, []).append((u, d))
            adj.setdefault(u, []).append((v, -d))
    start = min(adj)
    h = {start: 0}
    stack = [start]
    while stack:
        u = stack.pop()
        for v, d in adj[u]:
            hv = h[u] + d
            if v not in h:
                h[v] = hv
                stack.append(v)
            elif h[v] != hv:
                raise NotTileable("boundary height walk is inconsistent")
    if len(h) != len(adj):
        # a second boundary component would mean a hole, caught earlier
        raise NotSimplyConnected("boundary is not connected")
    return h


def _extreme_heights(cells, vertices, boundary_h, interior_edges, maximal: bool):
    """Multi-source Dijkstra bound; for minimal heights the color roles swap."""
    adj: dict = {v: [] for v in vertices}
    for u, v in interior_edges:
        for a, b in ((u, v), (v, u)):
            w = (1 if maximal else 3) if is_black(_left_cell(a, b)) else (3 if maximal else 1)
            adj[a].append((b, w))
    sign = 1 if maximal else -1
    dist = {v: sign * boundary_h[v] for v in boundary_h}
    heap = [(d, v) for v, d in dist.items()]
    heapq.heapify(heap)
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, w in adj[u]:
            nd = d + w
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    if len(dist) != len(vertices):
        raise NotTileable("region graph leaves vertices unreachable")
    for v, hv in boundary_h.items():
        if dist[v] != sign * hv:
            raise NotTileable("boundary heights violate an interior constraint")
    return {v: sign * dist[v] for v in dist}


def _check_heights(cells, h: dict) -> None:
    """Every edge difference must be a legal increment; crossings must pair
    each cell with exactly one neighbor."""
    crossings: dict = {c: 0 for c in cells}
    edges = set()
    for c in cells:
        edges.update(_cell_edges(c))
    for u, v in edges:
        d = h[v] - h[u]
        legal = (1, -3) if is_black(_left_cell(u, v)) else (-1, 3)
        if d not in legal:
            raise NotTileable("extreme heights do not form a tiling")
        if abs(d) == 3:
            a, b = _edge_cells(u, v)
            for cell in (a, b):
                if cell not in crossings:
                    raise NotTileable("a boundary edge is crossed")
                crossings[cell] += 1
    if any(k != 1 for k in crossings.values()):
        raise NotTileable("crossed edges do not pair the cells into dominoes")


def build_region(cells: frozenset) -> DominoRegion:
    """Validate a region and compute its extreme height functions."""
    blacks = sum(1 for c in cells if is_black(c))
    vertices, boundary_edges, interior_edges = _region_structure(cells)
    if 2 * blacks != len(cells):
        raise NotTileable(
            f"color imbalance: {blacks} black vs {len(cells) - blacks} white cells"
        )
    boundary_h = _boundary_heights(cells, boundary_edges)
    hmax = _extreme_heights(cells, vertices, boundary_h, interior_edges, maximal=True)
    hmin = _extreme_heights(cells, vertices, boundary_h, interior_edges, maximal=False)
    _check_heights(cells, hmax)
    _check_heights(cells, hmin)
    order = tuple(sorted(vertices))
    interior = tuple(
        v
        for v in order
        if all(
            (v[0] + dx, v[1] + dy) in cells
            for dx, dy in ((0, 0), (-1, 0), (0, -1), (-1, -1))
        )
    )
    return DominoRegion(
        cells,
        order,
        tuple(hmin[v] for v in order),
        tuple(hmax[v] for v in order),
        interior,
    )


class DominoHeightSystem(MonotoneToggleSystem):
    """Toggle dynamics on height-function tuples over the region's vertices."""

    def __init__(self, region: DominoRegion, name: str = "domino"):
        self.region = region
        self.name = name
        self.site_count = len(region.interior)
        self.bottom = region.h_min
        self.top = region.h_max
        self.graded = True
        index = region.vertex_index
        self._site_vertex = [index[v] for v in region.interior]
        self._site_parity = [(v[0] + v[1]) & 1 for v in region.interior]
        self._neighbors = []
        for v in region.interior:
            x, y = v
            self._neighbors.append(
                tuple(index[(x + dx, y + dy)] for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)))
            )

    def update(self, state: tuple, site: int, up: bool) -> tuple:
        idx = self._site_vertex[site]
        v = state[idx]
        nbrs = self._neighbors[site]
        if up:
            if all(state[u] > v for u in nbrs):
                return state[:idx] + (v + 4,) + state[idx + 1 :]
            return state
        if all(state[u] < v for u in nbrs):
            return state[:idx] + (v - 4,) + state[idx + 1 :]
        return state

    def leq(self, s: tuple, t: tuple) -> bool:
        return all(x <= y for x, y in zip(s, t))

    def rank_of(self, state: tuple) -> int:
        total = sum(state) - sum(self.bottom)
        assert total % 4 == 0
        return total // 4

    def parity_of(self, site: int) -> int:
        return self._site_parity[site]


def domino_system(cells) -> DominoHeightSystem:
    """Build the toggle system for a raw cell set."""
    region = build_region(frozenset(cells))
    return DominoHeightSystem(region)


def heights_to_dominoes(region: DominoRegion, state: tuple) -> tuple:
    """The tiling itself: sorted pairs of cells joined across crossed edges."""
    h = {v: state[i] for i, v in enumerate(region.vertices)}
    edges = set()
    for c in region.cells:
        edges.update(_cell_edges(c))
    dominoes = []
    for u, v in edges:
        if abs(h[v] - h[u]) == 3:
            a, b = _edge_cells(u, v)
            dominoes.append(tuple(sorted((a, b))))
    dominoes.sort()
    covered = [c for d in dominoes for c in d]
    if sorted(covered) != sorted(region.cells):
        raise ValueError("heights do not encode a tiling of the region")
    return tuple(dominoes)


def dominoes_to_heights(region: DominoRegion, dominoes) -> tuple:
    """Rebuild the height tuple of a tiling by propagating edge increments."""
    crossed = set()
    for a, b in dominoes:
        a, b = tuple(a), tuple(b)
        shared = set(_cell_edges(a)) & set(_cell_edges(b))
        if len(shared) != 1:
            raise ValueError(f"cells {a} and {b} are not adjacent")
        crossed.add(next(iter(shared)))
    edges = set()
    for c in region.cells:
        edges.update(_cell_edges(c))
    adj: dict = {}
    for u, v in edges:
        base = 1 if is_black(_left_cell(u, v)) else -1
        d = base * (-3 if (u, v) in crossed else 1)
        adj.setdefault(u, []).append((v, d))
        adj.setdefault(v, []).append((u, -d))
    # the smallest vertex lies on the boundary, where every tiling agrees
    start = region.vertices[0]
    h = {start: region.h_min[0]}
    stack = [start]
    while stack:
        u = stack.pop()
        for v, d in adj[u]:
            hv = h[u] + d
            if v not in h:
                h[v] = hv
                stack.append(v)
            elif h[v] != hv:
                raise ValueError("dominoes do not form a consistent tiling")
    return tuple(h[v] for v in region.vertices)
