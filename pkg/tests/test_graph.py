import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import brute_force_hereditary_saturated, load, random_graph, reachable, small_graphs
from talented.graph import (
    Edge,
    EnumerationCapError,
    Graph,
    GraphError,
    GraphFormatError,
    condition_K,
    condition_L,
    covering_window,
    cycle_has_exit,
    enumerate_hereditary_saturated,
    format_graph,
    hereditary_saturated_closure,
    is_cofinal_wrt,
    is_downward_directed,
    line_points,
    parse_graph,
    quotient_graph,
    simple_cycles,
    sinks,
    tree,
)


@pytest.fixture
def ex26():
    return load("ex26.g")


@pytest.fixture
def cycle4():
    return load("cycle4.g")


@pytest.fixture
def fib():
    return load("fib.g")


@pytest.fixture
def line():
    return load("line.g")


def test_parse_single_loop():
    g = parse_graph("vertices: u\nedge e u u")
    assert g.vertices == ("u",)
    assert len(g.edges) == 1


def test_parse_example(ex26):
    assert g_shape(ex26) == (4, 6)
    assert ex26.vertices == ("o", "u", "v", "x")


def g_shape(g):
    return len(g.vertices), len(g.edges)


def test_parse_regular_and_sink():
    g = parse_graph("vertices: u w\nedge e u w")
    assert not g.is_sink("u")
    assert g.is_sink("w")


def test_parse_auto_ids_and_cumulative_vertices():
    g = parse_graph("vertices: a\nvertices: b  # trailing comment\nedge a b\nedge x a a\nedge b a")
    assert g.vertices == ("a", "b")
    assert [e.id for e in g.edges] == ["e1", "x", "e3"]


@pytest.mark.parametrize(
    "text, line",
    [
        ("vertices: u\nedge e u w", 2),
        ("vertices: u u", 1),
        ("vertices: u\nedge e u u\nedge e u u", 3),
        ("vertices: u\nbogus u", 2),
        ("vertices: u\nedge u", 2),
        ("vertices: u$", 1),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(GraphFormatError) as exc:
        parse_graph(text)
    assert exc.value.line == line


def test_format_round_trip(ex26):
    assert parse_graph(format_graph(ex26)) == ex26


def test_sinks(ex26, line):
    assert sinks(parse_graph("vertices: u\nedge e u u")) == frozenset()
    assert sinks(line) == {"w"}
    assert sinks(ex26) == frozenset()


def test_tree(ex26, line, cycle4):
    assert tree(ex26, "v") == {"v", "x"}
    assert tree(line, "w") == {"w"}
    for v in cycle4.vertices:
        assert tree(cycle4, v) == set(cycle4.vertices)


def test_simple_cycles_examples(ex26, fib, line):
    assert simple_cycles(line) == []
    cycles = simple_cycles(ex26)
    assert [c.literal() for c in cycles] == ["alpha beta", "delta mu"]
    assert [c.literal() for c in simple_cycles(fib)] == ["e", "f g"]


def test_cycle_exits(ex26):
    ab, dm = simple_cycles(ex26)
    assert cycle_has_exit(ex26, ab)
    assert not cycle_has_exit(ex26, dm)
    loop = parse_graph("vertices: u\nedge e u u")
    assert not cycle_has_exit(loop, simple_cycles(loop)[0])


def test_parallel_edge_is_an_exit():
    g = parse_graph("vertices: u v\nedge a u v\nedge b u v\nedge c v u")
    cycles = simple_cycles(g)
    assert len(cycles) == 2
    assert all(cycle_has_exit(g, c) for c in cycles)


def test_condition_L(ex26, fib, line):
    assert not condition_L(ex26)
    assert condition_L(fib)
    assert condition_L(line)


def _vertex_cycle_count(g):
    # Oracle: networkx enumerates vertex cycles of the simple digraph; each
    # lifts to prod(multiplicities) edge cycles.
    d = nx.DiGraph()
    d.add_nodes_from(g.vertices)
    mult = {}
    for e in g.edges:
        mult[(e.src, e.dst)] = mult.get((e.src, e.dst), 0) + 1
        d.add_edge(e.src, e.dst)
    total = 0
    for cyc in nx.simple_cycles(d):
        k = 1
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            k *= mult[(a, b)]
        total += k
    return total


def test_simple_cycles_against_networkx():
    rng = random.Random(7)
    for _ in range(300):
        g = random_graph(rng, 6, 12)
        cycles = simple_cycles(g)
        assert len(cycles) == _vertex_cycle_count(g)
        for c in cycles:
            vs = c.vertices
            assert len(set(vs)) == len(vs)
            assert all(a.dst == b.src for a, b in zip(c.edges, c.edges[1:] + c.edges[:1]))
            assert c.edges[0].id == min(e.id for e in c.edges)
        assert len({c.edges for c in cycles}) == len(cycles)


def test_closure_examples(ex26, cycle4):
    assert hereditary_saturated_closure(ex26, []) == frozenset()
    assert hereditary_saturated_closure(ex26, ["v"]) == {"v", "x"}
    for v in cycle4.vertices:
        assert hereditary_saturated_closure(cycle4, [v]) == set(cycle4.vertices)


def test_closure_saturates_but_never_adds_sinks():
    g = parse_graph("vertices: a b s\nedge a b\nedge x b b")
    # s is an isolated sink; saturation must not pull it in.
    assert hereditary_saturated_closure(g, ["b"]) == {"a", "b"}
    assert "s" not in hereditary_saturated_closure(g, ["a"])


def test_closure_of_sink_pulls_in_line():
    g = load("line.g")
    assert hereditary_saturated_closure(g, ["w"]) == {"u", "w"}


def test_enumeration_examples(ex26, cycle4):
    assert enumerate_hereditary_saturated(ex26) == [frozenset(), {"v", "x"}, {"o", "u", "v", "x"}]
    assert enumerate_hereditary_saturated(parse_graph("vertices: u\nedge e u u")) == [frozenset(), {"u"}]
    assert enumerate_hereditary_saturated(cycle4) == [frozenset(), set(cycle4.vertices)]


def test_enumeration_matches_brute_force():
    rng = random.Random(11)
    for _ in range(300):
        g = random_graph(rng, 7, 10)
        expected = sorted(brute_force_hereditary_saturated(g), key=g.sort_key)
        assert enumerate_hereditary_saturated(g) == expected


def test_enumeration_cap():
    g = Graph([f"v{i}" for i in range(21)])
    with pytest.raises(EnumerationCapError):
        enumerate_hereditary_saturated(g)
    assert len(enumerate_hereditary_saturated(Graph(["a", "b", "c"]), cap=3)) == 8
    with pytest.raises(EnumerationCapError):
        condition_K(Graph(["a", "b", "c"]), cap=2)


@st.composite
def graphs_and_sets(draw):
    n = draw(st.integers(1, 6))
    vs = [f"v{i}" for i in range(n)]
    pairs = draw(st.lists(st.tuples(st.sampled_from(vs), st.sampled_from(vs)), max_size=10))
    g = Graph(vs, [Edge(f"e{k}", a, b) for k, (a, b) in enumerate(pairs)])
    s = draw(st.sets(st.sampled_from(vs)))
    t = draw(st.sets(st.sampled_from(vs)))
    return g, s, s | t


@settings(max_examples=200, deadline=None)
@given(graphs_and_sets())
def test_closure_idempotent_and_monotone(data):
    g, s, t = data
    cs = hereditary_saturated_closure(g, s)
    assert hereditary_saturated_closure(g, cs) == cs
    assert cs <= hereditary_saturated_closure(g, t)
    assert set(s) <= cs


def test_lattice_closed_under_meet_and_join():
    rng = random.Random(3)
    for _ in range(100):
        g = random_graph(rng, 6, 9)
        sets = enumerate_hereditary_saturated(g)
        found = set(sets)
        for a, b in itertools.combinations(sets, 2):
            assert a & b in found
            assert hereditary_saturated_closure(g, a | b) in found
        for h in sets:
            assert hereditary_saturated_closure(g, h) == h


def test_quotient_graph_examples(ex26):
    q = quotient_graph(ex26, ex26.vertices, {"v", "x"})
    assert q.vertices == ("o", "u")
    assert [e.id for e in q.edges] == ["alpha", "beta"]
    assert quotient_graph(ex26, ex26.vertices, []) == ex26
    empty = quotient_graph(ex26, ex26.vertices, ex26.vertices)
    assert empty.vertices == () and empty.edges == ()


def test_quotient_graph_validation(ex26):
    with pytest.raises(GraphError):
        quotient_graph(ex26, ex26.vertices, {"v"})
    with pytest.raises(GraphError):
        quotient_graph(ex26, {"v", "x"}, ex26.vertices)
    with pytest.raises(GraphError):
        quotient_graph(ex26, {"o"}, [])


def test_covering_window_counts(ex26):
    w = covering_window(ex26, 0, 1)
    assert g_shape(w) == (8, 6)
    assert g_shape(covering_window(ex26, 3, 3)) == (4, 0)


def test_covering_window_of_loop_graph():
    # u with loop e and u -> v -> u, levels -1..2
    g = parse_graph("vertices: u v\nedge e u u\nedge f u v\nedge g v u")
    w = covering_window(g, -1, 2)
    assert set(w.vertices) == {f"{v}@{n}" for v in "uv" for n in range(-1, 3)}
    assert {(e.id, e.src, e.dst) for e in w.edges if e.id.endswith("@0")} == {
        ("e@0", "u@0", "u@1"),
        ("f@0", "u@0", "v@1"),
        ("g@0", "v@0", "u@1"),
    }
    assert len(w.edges) == 9


def test_covering_window_acyclic_and_stationary():
    rng = random.Random(5)
    for _ in range(50):
        g = random_graph(rng, 5, 8)
        w = covering_window(g, -2, 3)
        assert simple_cycles(w) == []
        layers = {}
        for e in w.edges:
            base, level = e.id.rsplit("@", 1)
            src = e.src.rsplit("@", 1)
            dst = e.dst.rsplit("@", 1)
            assert int(src[1]) == int(level) and int(dst[1]) == int(level) + 1
            layers.setdefault(int(level), set()).add((base, src[0], dst[0]))
        assert len({frozenset(s) for s in layers.values()}) <= 1


def test_downward_directed(ex26):
    assert is_downward_directed(ex26, "o", "v")
    loops = parse_graph("vertices: a b\nedge a a\nedge b b")
    assert not is_downward_directed(loops, "a", "b")
    assert is_downward_directed(loops, "a", "a")


def test_cofinal_wrt(ex26):
    assert not is_cofinal_wrt(ex26, "v", "o")
    assert is_cofinal_wrt(ex26, "v", "v")
    assert is_cofinal_wrt(ex26, "o", "v")


def test_cofinal_wrt_agrees_with_all_hereditary_saturated_sets():
    rng = random.Random(17)
    for _ in range(100):
        g = random_graph(rng, 6, 9)
        sets = enumerate_hereditary_saturated(g)
        for v, w in itertools.product(g.vertices, repeat=2):
            expected = all(w in h for h in sets if v in h)
            assert is_cofinal_wrt(g, v, w) == expected


def test_line_points(ex26, cycle4, line):
    assert [(p.vertex, p.sink, p.distance) for p in line_points(line)] == [("u", "w", 1), ("w", "w", 0)]
    assert line_points(ex26) == []
    assert line_points(cycle4) == []


def test_line_points_brute_force():
    rng = random.Random(23)
    for _ in range(200):
        g = random_graph(rng, 6, 7)
        cyc = {v for c in simple_cycles(g) for v in c.vertices}
        expected = [
            v
            for v in g.vertices
            if all(g.out_degree(u) <= 1 for u in reachable(g, v)) and not (reachable(g, v) & cyc)
        ]
        assert [p.vertex for p in line_points(g)] == expected


def test_condition_K(ex26, fib, line):
    assert not condition_K(ex26)
    assert condition_K(fib)
    assert condition_K(line)


def test_condition_K_implies_L():
    for g in small_graphs(2, 2):
        if condition_K(g):
            assert condition_L(g)


def test_graph_values_are_shareable(ex26):
    assert hash(ex26) == hash(load("ex26.g"))
    with pytest.raises(AttributeError):
        ex26.vertices = ()
