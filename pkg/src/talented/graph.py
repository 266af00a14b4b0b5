"""
Finite directed multigraphs and the graph-side predicates used throughout
the package: trees, cycles and exits, hereditary saturated sets, quotient
graphs, covering-graph windows, cofinality and line-points.

Graphs are immutable. Vertex order is declaration order and every listing
operation is deterministic, so results can be frozen into golden tests.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

DEFAULT_ENUMERATION_CAP = 20

TOKEN = re.compile(r"[A-Za-z0-9_@.\-]+\Z")


class GraphError(ValueError):
    pass


class GraphFormatError(GraphError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EnumerationCapError(GraphError):
    pass


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    dst: str


class Graph:
    """A finite directed multigraph with ordered vertices and edges."""

    def __init__(self, vertices: Iterable[str], edges: Iterable[Edge] = ()):
        self._vertices = tuple(vertices)
        self._edges = tuple(edges)
        seen = set()
        for v in self._vertices:
            if v in seen:
                raise GraphError(f"duplicate vertex {v!r}")
            seen.add(v)
        ids = set()
        for e in self._edges:
            if e.id in ids:
                raise GraphError(f"duplicate edge id {e.id!r}")
            ids.add(e.id)
            for end in (e.src, e.dst):
                if end not in seen:
                    raise GraphError(f"edge {e.id!r} uses undeclared vertex {end!r}")

    @property
    def vertices(self) -> tuple[str, ...]:
        return self._vertices

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    def __len__(self):
        return len(self._vertices)

    def __contains__(self, v):
        return v in self.index

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._vertices == other._vertices and self._edges == other._edges

    def __hash__(self):
        return hash((self._vertices, self._edges))

    def __repr__(self):
        return f"Graph({len(self._vertices)} vertices, {len(self._edges)} edges)"

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self._vertices)}

    @cached_property
    def edge_by_id(self) -> dict[str, Edge]:
        return {e.id: e for e in self._edges}

    @cached_property
    def _out(self) -> dict[str, tuple[Edge, ...]]:
        out: dict[str, list[Edge]] = {v: [] for v in self._vertices}
        for e in self._edges:
            out[e.src].append(e)
        return {v: tuple(es) for v, es in out.items()}

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        return self._out[v]

    def out_degree(self, v: str) -> int:
        return len(self._out[v])

    def is_sink(self, v: str) -> bool:
        return not self._out[v]

    def successors(self, v: str) -> list[str]:
        """Distinct out-neighbours of v in vertex order."""
        targets = {e.dst for e in self._out[v]}
        return [w for w in self._vertices if w in targets]

    @cached_property
    def sink_indices(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self._vertices) if not self._out[v])

    @cached_property
    def out_rows(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per vertex index, the (target index, edge multiplicity) pairs."""
        rows = []
        for v in self._vertices:
            counts: dict[int, int] = {}
            for e in self._out[v]:
                j = self.index[e.dst]
                counts[j] = counts.get(j, 0) + 1
            rows.append(tuple(sorted(counts.items())))
        return tuple(rows)

    def sort_key(self, vertex_set: Iterable[str]) -> tuple:
        idx = sorted(self.index[v] for v in vertex_set)
        return (len(idx), idx)

    def ordered(self, vertex_set: Iterable[str]) -> list[str]:
        members = set(vertex_set)
        return [v for v in self._vertices if v in members]


class Cycle(NamedTuple):
    """A simple cycle, stored in canonical rotation."""

    edges: tuple[Edge, ...]

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(e.src for e in self.edges)

    def __len__(self):
        return len(self.edges)

    def literal(self) -> str:
        return " ".join(e.id for e in self.edges)


class LinePoint(NamedTuple):
    vertex: str
    sink: str
    distance: int


def parse_graph(text: str) -> Graph:
    vertices: list[str] = []
    declared: set[str] = set()
    pending: list[tuple[int, str, str, str]] = []
    edge_ids: set[str] = set()
    edge_count = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("vertices:"):
            for name in line[len("vertices:"):].split():
                if not TOKEN.match(name):
                    raise GraphFormatError(f"bad vertex id {name!r}", lineno)
                if name in declared:
                    raise GraphFormatError(f"duplicate vertex {name!r}", lineno)
                declared.add(name)
                vertices.append(name)
            continue
        parts = line.split()
        if parts[0] != "edge":
            raise GraphFormatError(f"unrecognised statement {parts[0]!r}", lineno)
        edge_count += 1
        if len(parts) == 4:
            eid, src, dst = parts[1:]
        elif len(parts) == 3:
            eid, (src, dst) = f"e{edge_count}", parts[1:]
        else:
            raise GraphFormatError("expected 'edge [id] src dst'", lineno)
        for tok in (eid, src, dst):
            if not TOKEN.match(tok):
                raise GraphFormatError(f"bad token {tok!r}", lineno)
        if eid in edge_ids:
            raise GraphFormatError(f"duplicate edge id {eid!r}", lineno)
        edge_ids.add(eid)
        pending.append((lineno, eid, src, dst))
    for lineno, eid, src, dst in pending:
        for end in (src, dst):
            if end not in declared:
                raise GraphFormatError(f"edge {eid!r} uses undeclared vertex {end!r}", lineno)
    return Graph(vertices, [Edge(eid, src, dst) for _, eid, src, dst in pending])


def format_graph(g: Graph) -> str:
    lines = ["vertices: " + " ".join(g.vertices)] if g.vertices else []
    lines += [f"edge {e.id} {e.src} {e.dst}" for e in g.edges]
    return "\n".join(lines) + "\n"


def relabel(g: Graph, mapping: dict[str, str], order: Iterable[str] | None = None) -> Graph:
    """Rename vertices by `mapping`; `order` optionally reorders the new vertex list."""
    vertices = [mapping[v] for v in g.vertices]
    if order is not None:
        vertices = list(order)
    edges = [Edge(e.id, mapping[e.src], mapping[e.dst]) for e in g.edges]
    return Graph(vertices, edges)


def sinks(g: Graph) -> frozenset[str]:
    return frozenset(v for v in g.vertices if g.is_sink(v))


def tree(g: Graph, v: str) -> frozenset[str]:
    """All vertices reachable from v, including v itself."""
    seen = {v}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        for w in g.successors(u):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return frozenset(seen)


def simple_cycles(g: Graph) -> list[Cycle]:
    # Each cycle is found once, from its lowest-index vertex; parallel
    # edges give distinct cycles.
    found = []
    order = g.index
    for start in g.vertices:
        lo = order[start]
        path: list[Edge] = []
        on_path = {start}

        def extend(u):
            for e in g.out_edges(u):
                w = e.dst
                if w == start:
                    found.append(_canonical_rotation(path + [e]))
                elif order[w] > lo and w not in on_path:
                    on_path.add(w)
                    path.append(e)
                    extend(w)
                    path.pop()
                    on_path.discard(w)

        extend(start)
    found.sort(key=lambda c: (len(c), [e.id for e in c.edges]))
    return found


def _canonical_rotation(edges: list[Edge]) -> Cycle:
    k = min(range(len(edges)), key=lambda i: edges[i].id)
    return Cycle(tuple(edges[k:] + edges[:k]))


def cycle_has_exit(g: Graph, c: Cycle) -> bool:
    on_cycle = {e.id for e in c.edges}
    return any(e.id not in on_cycle for v in c.vertices for e in g.out_edges(v))


def noexit_cycles(g: Graph) -> list[Cycle]:
    return [c for c in simple_cycles(g) if not cycle_has_exit(g, c)]


def condition_L(g: Graph) -> bool:
    return all(cycle_has_exit(g, c) for c in simple_cycles(g))


def is_hereditary(g: Graph, s: Iterable[str]) -> bool:
    s = set(s)
    return all(w in s for v in s for w in g.successors(v))


def is_saturated(g: Graph, s: Iterable[str]) -> bool:
    s = set(s)
    for v in g.vertices:
        if v not in s and not g.is_sink(v) and all(w in s for w in g.successors(v)):
            return False
    return True


def hereditary_saturated_closure(g: Graph, s: Iterable[str]) -> frozenset[str]:
    closed: set[str] = set()
    for v in s:
        if v not in g:
            raise GraphError(f"unknown vertex {v!r}")
        if v not in closed:
            closed |= tree(g, v)
    # A regular vertex whose successors all lie in a hereditary set can be
    # added without breaking hereditariness.
    changed = True
    while changed:
        changed = False
        for v in g.vertices:
            if v not in closed and not g.is_sink(v) and all(w in closed for w in g.successors(v)):
                closed.add(v)
                changed = True
    return frozenset(closed)


def _check_cap(g: Graph, cap: int | None):
    limit = DEFAULT_ENUMERATION_CAP if cap is None else cap
    if len(g) > limit:
        raise EnumerationCapError(f"graph has {len(g)} vertices, enumeration cap is {limit}")


def enumerate_hereditary_saturated(g: Graph, cap: int | None = None) -> list[frozenset[str]]:
    """
    All hereditary saturated subsets, sorted by size and then by vertex order.

    Every such set is the closure of its members added one at a time, so
    closing each known set together with one extra vertex reaches them all.
    """
    _check_cap(g, cap)
    empty: frozenset[str] = frozenset()
    found = {empty}
    queue = deque([empty])
    while queue:
        h = queue.popleft()
        for v in g.vertices:
            if v in h:
                continue
            bigger = hereditary_saturated_closure(g, h | {v})
            if bigger not in found:
                found.add(bigger)
                queue.append(bigger)
    return sorted(found, key=g.sort_key)


def is_hereditary_saturated(g: Graph, s: Iterable[str]) -> bool:
    s = frozenset(s)
    return is_hereditary(g, s) and is_saturated(g, s)


def quotient_graph(g: Graph, h2: Iterable[str], h1: Iterable[str]) -> Graph:
    """The graph H2/H1: vertices H2 minus H1, edges from H2 that avoid H1."""
    h2, h1 = frozenset(h2), frozenset(h1)
    for name, s in (("h1", h1), ("h2", h2)):
        unknown = s - set(g.vertices)
        if unknown:
            raise GraphError(f"{name} contains unknown vertices {sorted(unknown)}")
        if not is_hereditary_saturated(g, s):
            raise GraphError(f"{name} is not hereditary saturated")
    if not h1 <= h2:
        raise GraphError("h1 is not contained in h2")
    vertices = [v for v in g.vertices if v in h2 and v not in h1]
    edges = [e for e in g.edges if e.src in h2 and e.dst not in h1]
    return Graph(vertices, edges)


def covering_window(g: Graph, lo: int, hi: int) -> Graph:
    """Levels lo..hi of the covering graph; edge e@n runs from s(e)@n to r(e)@(n+1)."""
    if lo > hi:
        raise GraphError("covering window needs lo <= hi")
    vertices = [f"{v}@{n}" for n in range(lo, hi + 1) for v in g.vertices]
    edges = [
        Edge(f"{e.id}@{n}", f"{e.src}@{n}", f"{e.dst}@{n + 1}")
        for n in range(lo, hi)
        for e in g.edges
    ]
    return Graph(vertices, edges)


def is_downward_directed(g: Graph, u: str, v: str) -> bool:
    return not tree(g, u).isdisjoint(tree(g, v))


def is_cofinal_wrt(g: Graph, v: str, w: str) -> bool:
    """True when every hereditary saturated set containing v also contains w."""
    return w in hereditary_saturated_closure(g, [v])


def has_no_bifurcation(g: Graph, v: str) -> bool:
    return all(g.out_degree(u) <= 1 for u in tree(g, v))


def line_points(g: Graph) -> list[LinePoint]:
    result = []
    for v in g.vertices:
        if not has_no_bifurcation(g, v):
            continue
        # With out-degree <= 1 the forward path is unique; in a finite
        # graph it either reaches a sink or loops.
        seen = set()
        u, dist = v, 0
        while not g.is_sink(u) and u not in seen:
            seen.add(u)
            u = g.out_edges(u)[0].dst
            dist += 1
        if g.is_sink(u):
            result.append(LinePoint(v, u, dist))
    return result


def condition_K(g: Graph, cap: int | None = None) -> bool:
    everything = frozenset(g.vertices)
    return all(
        condition_L(quotient_graph(g, everything, h))
        for h in enumerate_hereditary_saturated(g, cap)
    )
