"""Independent sets of a bipartite graph as a distributive lattice.

States carry the black and white members of an independent set.  The
order is S <= T iff S_black is a subset of T_black and S_white a
superset of T_white; joins and meets take unions on one side and
intersections on the other, so the bottom state is (no blacks, all
whites) and the top is (all blacks, no whites).

Sites are vertices.  The up move at a black vertex adjoins it when no
adjacent white vertex is a member (otherwise it is blocked); the up move
at a white vertex removes it, which is always legal.  Down moves mirror
both rules.  Updates at a vertex read only the membership of the
opposite color, so all-black and all-white batches each commute
internally; the parity classes are the poset ranks of the underlying
order (white vertices and isolated black vertices at rank 0, black
vertices with neighbors at rank 1).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import NotBipartite
from ..systems import MonotoneToggleSystem


@dataclass(frozen=True)
class BipartiteGraph:
    """Vertex labels in input order, with an explicit 2-coloring."""

    black: tuple
    white: tuple
    edges: tuple[tuple, ...]

    def __post_init__(self):
        seen = set()
        for v in self.black + self.white:
            if v in seen:
                raise NotBipartite(f"vertex {v!r} listed twice")
            seen.add(v)
        blacks = set(self.black)
        for u, v in self.edges:
            if u not in seen or v not in seen:
                raise NotBipartite(f"edge ({u!r},{v!r}) uses an unknown vertex")
            if (u in blacks) == (v in blacks):
                raise NotBipartite(f"edge ({u!r},{v!r}) joins same-color vertices")


def load_graph(obj) -> BipartiteGraph:
    """Build a graph from the JSON shape {"black": [...], "white": [...], "edges": [[u,v],...]}."""
    try:
        black = tuple(obj["black"])
        white = tuple(obj["white"])
        edges = tuple((u, v) for u, v in obj.get("edges", []))
    except (KeyError, TypeError, ValueError) as exc:
        raise NotBipartite(f"malformed graph object: {exc}") from exc
    return BipartiteGraph(black, white, edges)


class IndependentSetSystem(MonotoneToggleSystem):
    """Toggle dynamics on (black_bits, white_bits) membership pairs.

    Site ids enumerate black vertices first, then white, in input order.
    """

    def __init__(self, graph: BipartiteGraph, name: str = "indep"):
        self.graph = graph
        self.name = name
        nb, nw = len(graph.black), len(graph.white)
        self.nb, self.nw = nb, nw
        self.site_count = nb + nw
        bidx = {v: i for i, v in enumerate(graph.black)}
        widx = {v: i for i, v in enumerate(graph.white)}
        self.black_adj = [0] * nb
        self.white_adj = [0] * nw
        for u, v in graph.edges:
            if u in widx:
                u, v = v, u
            self.black_adj[bidx[u]] |= 1 << widx[v]
            self.white_adj[widx[v]] |= 1 << bidx[u]
        self.bottom = (0, (1 << nw) - 1)
        self.top = ((1 << nb) - 1, 0)
        self.graded = True

    def update(self, state: tuple, site: int, up: bool) -> tuple:
        bb, wb = state
        if site < self.nb:
            bit = 1 << site
            if up:
                if wb & self.black_adj[site]:
                    return state
                return (bb | bit, wb)
            return (bb & ~bit, wb)
        w = site - self.nb
        bit = 1 << w
        if up:
            return (bb, wb & ~bit)
        if bb & self.white_adj[w]:
            return state
        return (bb, wb | bit)

    def leq(self, s: tuple, t: tuple) -> bool:
        return s[0] & ~t[0] == 0 and t[1] & ~s[1] == 0

    def rank_of(self, state: tuple) -> int:
        return state[0].bit_count() + self.nw - state[1].bit_count()

    def parity_of(self, site: int) -> int:
        if site < self.nb:
            return 1 if self.black_adj[site] else 0
        return 0

    def members(self, state: tuple) -> tuple[tuple, tuple]:
        """Labels of the black and white members, in input order."""
        bb, wb = state
        blacks = tuple(v for i, v in enumerate(self.graph.black) if (bb >> i) & 1)
        whites = tuple(v for i, v in enumerate(self.graph.white) if (wb >> i) & 1)
        return blacks, whites

    def state_of_members(self, blacks, whites) -> tuple:
        bidx = {v: i for i, v in enumerate(self.graph.black)}
        widx = {v: i for i, v in enumerate(self.graph.white)}
        bb = 0
        for v in blacks:
            bb |= 1 << bidx[v]
        wb = 0
        for v in whites:
            wb |= 1 << widx[v]
        for i in range(self.nb):
            if (bb >> i) & 1 and self.black_adj[i] & wb:
                raise ValueError("members are not independent")
        return (bb, wb)


def independent_sets_system(graph: BipartiteGraph) -> IndependentSetSystem:
    return IndependentSetSystem(graph)
