"""
Breadth-first search for a common reduct under the one-step rewriting
relation. Two nonzero elements of the free monoid are equal in the graph
monoid exactly when they rewrite to a common element, so a hit is a proof
of equality; running out of budget proves nothing.

`run_oracle` lifts graded elements into a finite window of the covering
graph and searches there. It is the certification oracle for `eq_graded`
and deliberately shares no code with the canonical-form machinery.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field

from .graph import Graph, covering_window


@dataclass
class SearchResult:
    found: bool
    common: dict[str, int] | None = None
    # Rewrite chains from each side to the common reduct; each step is
    # (expanded vertex, element after the step).
    path_a: list[tuple[str, dict[str, int]]] = field(default_factory=list)
    path_b: list[tuple[str, dict[str, int]]] = field(default_factory=list)
    states_a: int = 0
    states_b: int = 0


def _freeze(counts) -> tuple:
    return tuple(sorted((k, c) for k, c in counts.items() if c))


class _Side:
    def __init__(self, start: tuple):
        self.parent: dict[tuple, tuple | None] = {start: None}
        self.queue = deque([start])

    def chain(self, state, names) -> list[tuple[str, dict[str, int]]]:
        steps = []
        while self.parent[state] is not None:
            prev, vertex = self.parent[state]
            steps.append((names[vertex], {names[k]: c for k, c in state}))
            state = prev
        steps.reverse()
        return steps


def reduct_search(g: Graph, a: dict[str, int], b: dict[str, int], budget: int) -> SearchResult:
    """
    Interleaved BFS over reducts of `a` and `b` (vertex -> multiplicity),
    keeping at most `budget` distinct states per side.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    idx = g.index
    names = g.vertices
    rows = g.out_rows
    start_a = _freeze({idx[v]: c for v, c in a.items()})
    start_b = _freeze({idx[v]: c for v, c in b.items()})
    sides = (_Side(start_a), _Side(start_b))
    if start_a == start_b:
        return SearchResult(True, dict(_named(start_a, names)), states_a=1, states_b=1)

    turn = 0
    while sides[0].queue or sides[1].queue:
        me, other = sides[turn], sides[1 - turn]
        if me.queue:
            state = me.queue.popleft()
            for i, _ in state:
                if not rows[i]:
                    continue
                nxt = Counter(dict(state))
                nxt[i] -= 1
                for j, mult in rows[i]:
                    nxt[j] += mult
                key = _freeze(nxt)
                if key in me.parent:
                    continue
                hit = key in other.parent
                if not hit and len(me.parent) >= budget:
                    continue
                me.parent[key] = (state, i)
                if hit:
                    chains = [me.chain(key, names), other.chain(key, names)]
                    if turn == 1:
                        chains.reverse()
                    return SearchResult(
                        True,
                        dict(_named(key, names)),
                        chains[0],
                        chains[1],
                        len(sides[0].parent),
                        len(sides[1].parent),
                    )
                me.queue.append(key)
        turn = 1 - turn
    return SearchResult(False, states_a=len(sides[0].parent), states_b=len(sides[1].parent))


def _named(state, names):
    return [(names[k], c) for k, c in state]


@dataclass
class OracleResult:
    verdict: str  # "EQUAL" or "UNKNOWN"
    common: dict[tuple[str, int], int] | None
    path_a: list[tuple[tuple[str, int], dict[tuple[str, int], int]]]
    path_b: list[tuple[tuple[str, int], dict[tuple[str, int], int]]]
    states: int
    max_level: int
    window: tuple[int, int]


def _split(name: str) -> tuple[str, int]:
    v, _, level = name.rpartition("@")
    return v, int(level)


def run_oracle(g: Graph, a, b, budget: int, depth: int | None = None) -> OracleResult:
    """
    Search for a common reduct of graded elements `a` and `b` inside the
    covering window from their lowest shift to `depth` levels past their
    highest shift (default: the vertex count).
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    shifts = [i for _, i in a.terms] + [i for _, i in b.terms]
    if not shifts:
        return OracleResult("EQUAL", {}, [], [], 0, 0, (0, 0))
    if not a.terms or not b.terms:
        return OracleResult("UNKNOWN", None, [], [], 0, max(shifts), (0, 0))
    lo = min(shifts)
    hi = max(shifts) + (len(g) if depth is None else depth)
    window = covering_window(g, lo, hi)
    lift = lambda x: {f"{v}@{i}": c for (v, i), c in x.terms.items()}
    res = reduct_search(window, lift(a), lift(b), budget)
    unlift = lambda d: {_split(k): c for k, c in d.items()}
    states = res.states_a + res.states_b
    if not res.found:
        return OracleResult("UNKNOWN", None, [], [], states, hi, (lo, hi))
    common = unlift(res.common)
    levels = [lvl for (_, lvl) in common]
    for _, st in res.path_a + res.path_b:
        levels.extend(lvl for (_, lvl) in unlift(st))
    path = lambda p: [(_split(v), unlift(st)) for v, st in p]
    return OracleResult(
        "EQUAL", common, path(res.path_a), path(res.path_b), states, max(levels), (lo, hi)
    )
