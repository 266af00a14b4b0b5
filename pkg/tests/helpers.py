"""Graph generators and independent oracles shared by the test modules."""

from __future__ import annotations

import itertools
import random
from pathlib import Path

from talented.graph import Edge, Graph, parse_graph
from talented.monoid import GradedElement, expand_step

DATA = Path(__file__).parent / "data"


def load(name: str) -> Graph:
    return parse_graph((DATA / name).read_text())


def random_graph(rng: random.Random, max_vertices: int = 6, max_edges: int = 12, min_vertices: int = 1) -> Graph:
    n = rng.randint(min_vertices, max_vertices)
    vertices = [f"v{i}" for i in range(n)]
    m = rng.randint(0, max_edges)
    edges = []
    for k in range(m):
        edges.append(Edge(f"e{k}", rng.choice(vertices), rng.choice(vertices)))
    return Graph(vertices, edges)


def random_element(rng: random.Random, g: Graph, max_mass: int = 4, shifts=(-2, 2)) -> GradedElement:
    mass = rng.randint(1, max_mass)
    return GradedElement(
        [((rng.choice(g.vertices), rng.randint(*shifts)), 1) for _ in range(mass)]
    )


def random_rewrite(rng: random.Random, g: Graph, a: GradedElement, steps: int) -> GradedElement:
    """Apply up to `steps` random one-step rewrites."""
    for _ in range(steps):
        movable = [(v, i) for (v, i) in a.terms if not g.is_sink(v)]
        if not movable:
            break
        v, i = rng.choice(sorted(movable))
        a = expand_step(g, a, v, i)
    return a


def small_graphs(max_vertices: int = 3, max_parallel: int = 2):
    """
    Every graph with up to `max_vertices` vertices and up to `max_parallel`
    parallel edges per ordered pair, one representative per isomorphism class.
    """
    for n in range(1, max_vertices + 1):
        pairs = [(i, j) for i in range(n) for j in range(n)]
        perms = list(itertools.permutations(range(n)))
        seen = set()
        for counts in itertools.product(range(max_parallel + 1), repeat=len(pairs)):
            key = dict(zip(pairs, counts))
            canon = min(
                tuple(key[(p[i], p[j])] for i, j in pairs) for p in perms
            )
            if canon in seen:
                continue
            seen.add(canon)
            vertices = [f"v{i}" for i in range(n)]
            edges = []
            for (i, j), c in zip(pairs, counts):
                for k in range(c):
                    edges.append(Edge(f"e{i}{j}{k}", vertices[i], vertices[j]))
            yield Graph(vertices, edges)


def brute_force_hereditary_saturated(g: Graph) -> list[frozenset[str]]:
    out = []
    vs = g.vertices
    for mask in range(1 << len(vs)):
        s = frozenset(v for k, v in enumerate(vs) if mask >> k & 1)
        hereditary = all(e.dst in s for e in g.edges if e.src in s)
        saturated = all(
            v in s
            for v in vs
            if g.out_edges(v) and all(e.dst in s for e in g.out_edges(v))
        )
        if hereditary and saturated:
            out.append(s)
    return out


def reachable(g: Graph, v: str) -> set[str]:
    """Plain DFS reachability, written independently of talented.graph.tree."""
    seen, stack = {v}, [v]
    while stack:
        u = stack.pop()
        for e in g.edges:
            if e.src == u and e.dst not in seen:
                seen.add(e.dst)
                stack.append(e.dst)
    return seen


# Graded K0 separator over finite fields. Sending v@i to t^i e_v in
# F_p^n modulo the span of e_v - t * sum e_r(e) (regular v) kills every
# defining relation, so distinct images prove inequality in the graded
# monoid. Shares nothing with the canonical-form code.

SEPARATOR_PRIMES = ((5, 2), (7, 3), (11, 2), (13, 6), (7, 1), (3, 1))


def _reduce_mod(rows, p):
    basis = []
    for r in rows:
        r = [x % p for x in r]
        for b in basis:
            c = next(k for k, x in enumerate(b) if x)
            if r[c]:
                f = r[c]
                r = [(x - f * y) % p for x, y in zip(r, b)]
        if any(r):
            c = next(k for k, x in enumerate(r) if x)
            inv = pow(r[c], -1, p)
            r = [x * inv % p for x in r]
            basis = [
                [(x - b[c] * y) % p for x, y in zip(b, r)] if b[c] else b for b in basis
            ]
            basis.append(r)
    return basis


def graded_separator(g: Graph, a: GradedElement, b: GradedElement) -> bool:
    n = len(g)
    for p, t in SEPARATOR_PRIMES:
        rows = []
        for v in g.vertices:
            if g.out_edges(v):
                r = [0] * n
                r[g.index[v]] += 1
                for e in g.out_edges(v):
                    r[g.index[e.dst]] -= t
                rows.append(r)
        basis = _reduce_mod(rows, p)
        d = [0] * n
        for (v, i), c in a.terms.items():
            d[g.index[v]] += c * pow(t, i, p)
        for (v, i), c in b.terms.items():
            d[g.index[v]] -= c * pow(t, i, p)
        d = [x % p for x in d]
        for r in basis:
            c = next(k for k, x in enumerate(r) if x)
            if d[c]:
                f = d[c]
                d = [(x - f * y) % p for x, y in zip(d, r)]
        if any(d):
            return True
    return False


def residue_separator(g: Graph, a: GradedElement, b: GradedElement) -> bool:
    """
    Paths into sinks are invariant under rewriting: the number of length-L
    paths from v to a sink s, weighted by the coefficient of v@i, counts the
    copies of s@(i+L) every full expansion must contain. Differing counts
    prove inequality.
    """
    shifts = [i for _, i in a.terms] + [i for _, i in b.terms]
    if not shifts:
        return False
    sinks = [v for v in g.vertices if not g.out_edges(v)]
    longest = max(shifts) - min(shifts) + 2 * len(g)
    # paths[L][v][s]: number of length-L paths from v ending at sink s
    paths = [{v: {s: int(v == s) for s in sinks} for v in g.vertices}]
    for _ in range(longest):
        prev = paths[-1]
        paths.append({
            v: {s: sum(prev[e.dst][s] for e in g.out_edges(v)) for s in sinks}
            for v in g.vertices
        })

    def profile(x):
        counts = {}
        for (v, i), c in x.terms.items():
            for length, row in enumerate(paths):
                for s, k in row[v].items():
                    if k:
                        counts[(s, i + length)] = counts.get((s, i + length), 0) + c * k
        return {key: c for key, c in counts.items() if key[1] <= min(shifts) + longest}

    return profile(a) != profile(b)
