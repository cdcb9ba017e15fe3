"""Two-colored independent sets: graph validation, order, moves, counts."""

import itertools

import pytest

from cftpsample.errors import NotBipartite
from cftpsample.families.indep import (
    BipartiteGraph,
    independent_sets_system,
    load_graph,
)
from cftpsample.oracle import enumerate_states


def brute_force_independent_sets(graph):
    """All independent sets by direct subset filtering; no system code."""
    verts = list(graph.black) + list(graph.white)
    edges = {frozenset(e) for e in graph.edges}
    out = []
    for r in range(len(verts) + 1):
        for sub in itertools.combinations(verts, r):
            s = set(sub)
            if all(not (frozenset((u, v)) <= s) for u, v in edges):
                out.append(frozenset(s))
    return out


def path_graph():
    return BipartiteGraph(("b1", "b2"), ("w",), (("b1", "w"), ("b2", "w")))


def test_graph_validation():
    with pytest.raises(NotBipartite):
        BipartiteGraph(("a",), ("a",), ())  # duplicate vertex
    with pytest.raises(NotBipartite):
        BipartiteGraph(("a",), ("b",), (("a", "c"),))  # unknown endpoint
    with pytest.raises(NotBipartite):
        BipartiteGraph(("a", "b"), ("c",), (("a", "b"),))  # same-color edge
    with pytest.raises(NotBipartite):
        BipartiteGraph(("a",), ("b", "c"), (("b", "c"),))


def test_load_graph_json_shape():
    g = load_graph({"black": ["b1", "b2"], "white": ["w"], "edges": [["b1", "w"]]})
    assert g.black == ("b1", "b2") and g.white == ("w",)
    assert g.edges == (("b1", "w"),)


def test_single_edge_three_states():
    g = BipartiteGraph(("b",), ("w",), (("b", "w"),))
    sys = independent_sets_system(g)
    assert enumerate_states(sys).count == 3
    assert len(brute_force_independent_sets(g)) == 3


def test_path_bwb_five_states():
    g = path_graph()
    sys = independent_sets_system(g)
    states = enumerate_states(sys).states
    assert len(states) == 5
    assert len(brute_force_independent_sets(g)) == 5
    members = {frozenset(sys.members(s)[0]) | frozenset(sys.members(s)[1]) for s in states}
    assert members == set(map(frozenset, brute_force_independent_sets(g)))


def test_empty_graph_two_blacks():
    g = BipartiteGraph(("b1", "b2"), (), ())
    sys = independent_sets_system(g)
    assert enumerate_states(sys).count == 4


def test_bottom_top_and_rank():
    g = path_graph()
    sys = independent_sets_system(g)
    assert sys.members(sys.bottom) == ((), ("w",))
    assert sys.members(sys.top) == (("b1", "b2"), ())
    assert sys.rank_of(sys.bottom) == 0
    assert sys.rank_of(sys.top) == 3  # two blacks in, one white out
    assert sys.leq(sys.bottom, sys.top)


def test_update_rules():
    g = path_graph()
    sys = independent_sets_system(g)
    s0 = sys.bottom  # (no blacks, white in)
    # black add blocked by adjacent white member
    assert sys.update(s0, 0, True) == s0
    # white up = removal, always allowed
    s1 = sys.update(s0, 2, True)
    assert sys.members(s1) == ((), ())
    # now black add succeeds
    s2 = sys.update(s1, 0, True)
    assert sys.members(s2) == (("b1",), ())
    # white down = re-add blocked by the black member
    assert sys.update(s2, 2, False) == s2
    # black down = removal always allowed
    assert sys.update(s2, 0, False) == s1


def test_independence_invariant_everywhere():
    g = path_graph()
    sys = independent_sets_system(g)
    for s in enumerate_states(sys).states:
        blacks, whites = sys.members(s)
        chosen = set(blacks) | set(whites)
        for u, v in g.edges:
            assert not (u in chosen and v in chosen)
        for site in range(sys.site_count):
            for up in (False, True):
                out = sys.update(s, site, up)
                ob, ow = sys.members(out)
                assert abs(sys.rank_of(out) - sys.rank_of(s)) <= 1


def test_parity_classes():
    g = BipartiteGraph(("b1", "b2", "lone"), ("w",), (("b1", "w"), ("b2", "w")))
    sys = independent_sets_system(g)
    # connected blacks odd, isolated black and whites even
    assert sys.parity_of(0) == 1
    assert sys.parity_of(1) == 1
    assert sys.parity_of(2) == 0
    assert sys.parity_of(3) == 0
    assert sys.graded


def test_state_of_members_round_trip_and_validation():
    g = path_graph()
    sys = independent_sets_system(g)
    for s in enumerate_states(sys).states:
        blacks, whites = sys.members(s)
        assert sys.state_of_members(blacks, whites) == s
    with pytest.raises(ValueError):
        sys.state_of_members(("b1",), ("w",))  # adjacent pair
    with pytest.raises(KeyError):
        sys.state_of_members(("nope",), ())
