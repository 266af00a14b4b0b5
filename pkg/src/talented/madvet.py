"""
Mad Veterinarian puzzles: machines turn one animal into a multiset of
animals. A puzzle is a graph with one vertex per species and one edge per
produced animal, and "can X become Y" is equality in the graph monoid.
In the graded variant each produced animal is one month older, which is
equality in the graded monoid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import Edge, Graph
from .monoid import (
    DEFAULT_BUDGET,
    Equality,
    MonoidError,
    eq_graded,
    eq_ungraded,
    parse_element,
    parse_ungraded,
)
from .oracle import reduct_search, run_oracle


class PuzzleError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class MadVetPuzzle:
    species: list[str]
    machines: list[tuple[str, dict[str, int]]]
    queries: list[tuple[str, str, bool]] = field(default_factory=list)


def parse_puzzle(text: str) -> MadVetPuzzle:
    species: list[str] = []
    machines = []
    queries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if line.startswith("species:"):
            species += line[len("species:"):].split()
        elif head == "machine":
            src, arrow, out = rest.partition("->")
            if not arrow or not src.strip() or not out.strip():
                raise PuzzleError("expected 'machine X -> Y Z ...'", lineno)
            outputs: dict[str, int] = {}
            for tok in out.split():
                count, star, name = tok.partition("*")
                if star:
                    if not count.isdigit() or int(count) < 1:
                        raise PuzzleError(f"bad count in {tok!r}", lineno)
                    outputs[name] = outputs.get(name, 0) + int(count)
                else:
                    outputs[tok] = outputs.get(tok, 0) + 1
            machines.append((src.strip(), outputs))
        elif head in ("query", "query-graded"):
            left, eq, right = rest.partition("=")
            if not eq or not left.strip() or not right.strip():
                raise PuzzleError("expected 'query X = Y'", lineno)
            queries.append((left.strip(), right.strip(), head == "query-graded"))
        else:
            raise PuzzleError(f"unrecognised statement {head!r}", lineno)
    known = set(species)
    for src, outputs in machines:
        for name in [src, *outputs]:
            if name not in known:
                raise PuzzleError(f"machine uses unknown species {name!r}")
    return MadVetPuzzle(species, machines, queries)


def puzzle_graph(p: MadVetPuzzle) -> Graph:
    edges = []
    for k, (src, outputs) in enumerate(p.machines, start=1):
        j = 0
        for name in p.species:
            for _ in range(outputs.get(name, 0)):
                j += 1
                edges.append(Edge(f"m{k}.{j}", src, name))
    return Graph(p.species, edges)


@dataclass
class QueryResult:
    source: str
    target: str
    graded: bool
    verdict: str
    trace: list[str] | None

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "graded": self.graded,
            "verdict": self.verdict,
            "trace": self.trace,
        }


def _ungraded_trace(g, a, b, budget):
    res = reduct_search(g, a.terms, b.terms, budget)
    if not res.found:
        return None
    fmt = lambda d: parse_ungraded(" + ".join(f"{c}*{v}" for v, c in d.items()), g).format(g)
    return _join(a.format(g), b.format(g), [fmt(s) for _, s in res.path_a], [fmt(s) for _, s in res.path_b])


def _graded_trace(g, a, b, budget):
    res = run_oracle(g, a, b, budget)
    if res.verdict != "EQUAL":
        return None
    fmt = lambda d: parse_element(" + ".join(f"{c}*{v}@{i}" for (v, i), c in d.items()), g).format(g)
    return _join(a.format(g), b.format(g), [fmt(s) for _, s in res.path_a], [fmt(s) for _, s in res.path_b])


def _join(start, end, forward, backward):
    """Source, its rewrites up to the common reduct, then the target's rewrites in reverse."""
    trace = [start] + forward
    back = [end] + backward
    back.reverse()
    if trace[-1] == back[0]:
        back = back[1:]
    return trace + back


def solve_madvet(p: MadVetPuzzle, budget: int = DEFAULT_BUDGET) -> list[QueryResult]:
    if budget <= 0:
        raise PuzzleError("budget must be positive")
    g = puzzle_graph(p)
    results = []
    for left, right, graded in p.queries:
        try:
            if graded:
                a, b = parse_element(left, g), parse_element(right, g)
                equal = eq_graded(g, a, b)
                verdict = "EQUAL" if equal else "NOT_EQUAL"
                trace = _graded_trace(g, a, b, budget) if equal else None
            else:
                a, b = parse_ungraded(left, g), parse_ungraded(right, g)
                verdict = eq_ungraded(g, a, b, budget).value
                trace = _ungraded_trace(g, a, b, budget) if verdict == Equality.EQUAL.value else None
        except MonoidError as exc:
            raise PuzzleError(f"query {left} = {right}: {exc}") from exc
        results.append(QueryResult(left, right, graded, verdict, trace))
    return results
