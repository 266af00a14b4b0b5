"""
Structure analysis: graph conditions paired with their monoid-side
counterparts (every graph-side verdict is re-derived inside the monoid and
the two must agree), the invariant fingerprint of a graph, and a comparator
that checks necessary conditions for two graphs to have isomorphic graded
monoids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .graph import (
    Cycle,
    Graph,
    condition_K,
    condition_L,
    cycle_has_exit,
    enumerate_hereditary_saturated,
    line_points,
    noexit_cycles,
    quotient_graph,
    simple_cycles,
)
from .ideals import lattice
from .monoid import (
    GradedElement,
    Verdict,
    compare_orbit,
    default_horizon,
    eq_graded,
    orbit_equivalent,
    shift,
)

CAVEAT = "necessary, not sufficient"


class ConsistencyError(AssertionError):
    """A graph-side verdict disagreed with its monoid-side counterpart."""


def exists_periodic_element(g: Graph) -> tuple[str, int] | None:
    """Base vertex and length of the first exitless cycle, verified in the monoid."""
    cycles = noexit_cycles(g)
    if not cycles:
        return None
    c = cycles[0]
    v = min(c.vertices, key=g.index.__getitem__)
    a = GradedElement.vertex(v)
    if not eq_graded(g, shift(a, len(c)), a):
        raise ConsistencyError(f"{v} is not fixed by a shift of {len(c)}")
    return v, len(c)


def cycle_witness(c: Cycle) -> GradedElement:
    return GradedElement([((e.dst, 0), 1) for e in c.edges])


def exists_properly_infinite_witness(g: Graph, horizon: int | None = None) -> GradedElement | None:
    """
    For the first cycle with an exit, the sum of the ranges of its edges;
    shifting this element by -1 makes it strictly larger.
    """
    for c in simple_cycles(g):
        if cycle_has_exit(g, c):
            a = cycle_witness(c)
            got = compare_orbit(g, a, -1, horizon).verdict
            if got is not Verdict.GT:
                raise ConsistencyError(f"expected GT for {a.format(g)}, got {got.value}")
            return a
    return None


def action_free(g: Graph) -> bool:
    free = exists_periodic_element(g) is None
    if free != condition_L(g):
        raise ConsistencyError("action freeness disagrees with Condition (L)")
    return free


def _quotients(g: Graph, cap: int | None = None):
    everything = frozenset(g.vertices)
    for h in enumerate_hereditary_saturated(g, cap):
        yield h, quotient_graph(g, everything, h)


def action_free_all_quotients(g: Graph, cap: int | None = None) -> bool:
    free = all(action_free(q) for _, q in _quotients(g, cap))
    if free != condition_K(g, cap):
        raise ConsistencyError("freeness on quotients disagrees with Condition (K)")
    return free


@dataclass
class StructureReport:
    condition_L: bool
    condition_K: bool
    graded_simple: bool
    simple: bool
    purely_infinite_simple: bool
    has_nongraded_ideal: bool
    witnesses: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "condition_L": self.condition_L,
            "condition_K": self.condition_K,
            "graded_simple": self.graded_simple,
            "simple": self.simple,
            "purely_infinite_simple": self.purely_infinite_simple,
            "has_nongraded_ideal": self.has_nongraded_ideal,
            "witnesses": dict(sorted(self.witnesses.items())),
        }


def _set_literal(g: Graph, h) -> str:
    return "{" + ",".join(g.ordered(h)) + "}"


def nongraded_skeleton(g: Graph, cap: int | None = None) -> list[tuple[frozenset[str], Cycle]]:
    """Pairs (H, cycle) where the cycle avoids H and has all of its exits in H."""
    found = []
    for h in enumerate_hereditary_saturated(g, cap):
        for c in simple_cycles(g):
            if any(v in h for v in c.vertices):
                continue
            on_cycle = {e.id for e in c.edges}
            exits = [e for v in c.vertices for e in g.out_edges(v) if e.id not in on_cycle]
            if all(e.dst in h for e in exits):
                found.append((h, c))
    return found


def _orbit_growth_shift(g: Graph, v: str, horizon: int | None) -> int | None:
    """Some n < 0 with the n-shift of v strictly above v, searched up to the cycle-length lcm."""
    lengths = [len(c) for c in simple_cycles(g)]
    bound = math.lcm(*lengths) if lengths else 1
    a = GradedElement.vertex(v)
    base = default_horizon(g) if horizon is None else horizon
    for k in range(1, bound + 1):
        if compare_orbit(g, a, -k, base + k).verdict is Verdict.GT:
            return -k
    return None


def structure_report(g: Graph, cap: int | None = None, horizon: int | None = None) -> StructureReport:
    w: dict[str, str] = {}
    cond_l = condition_L(g)
    periodic = exists_periodic_element(g)
    if (periodic is None) != cond_l:
        raise ConsistencyError("periodic witness disagrees with Condition (L)")
    cycles = simple_cycles(g)
    if cond_l:
        w["condition_L"] = "every cycle has an exit" if cycles else "no cycles"
    else:
        c = noexit_cycles(g)[0]
        w["condition_L"] = f"cycle {c.literal()} has no exit; {periodic[0]}@{periodic[1]} = {periodic[0]}@0"

    cond_k = action_free_all_quotients(g, cap)
    if cond_k:
        w["condition_K"] = "every quotient graph satisfies Condition (L)"
    else:
        for h, q in _quotients(g, cap):
            bad = noexit_cycles(q)
            if bad:
                w["condition_K"] = f"E/{_set_literal(g, h)} has exitless cycle {bad[0].literal()}"
                break

    lat = lattice(g, cap)
    graded_simple = len(lat.ideals) == 2
    if graded_simple:
        w["graded_simple"] = "only ideals are 0 and M"
    else:
        proper = [i for i in lat.ideals if not i.is_zero and not i.is_full]
        if proper:
            w["graded_simple"] = f"proper ideal generated by {_set_literal(g, proper[0].generators)}"
        else:
            w["graded_simple"] = "empty graph"

    simple = graded_simple and cond_l
    cycle_with_exit = next((c for c in cycles if cycle_has_exit(g, c)), None)
    pis = simple and cycle_with_exit is not None
    if simple:
        w["simple"] = "graded simple and the action is free"
    if pis:
        a = exists_properly_infinite_witness(g, horizon)
        w["purely_infinite_simple"] = f"cycle {cycle_with_exit.literal()} has an exit; -1 shift of {a.format(g)} is larger"
        for v in g.vertices:
            if _orbit_growth_shift(g, v, horizon) is None:
                raise ConsistencyError(f"no negative shift of {v} found strictly above it")

    skeleton = nongraded_skeleton(g, cap)
    periodic_quotient = next(
        ((h, q) for h, q in _quotients(g, cap) if exists_periodic_element(q) is not None), None
    )
    if bool(skeleton) != (periodic_quotient is not None):
        raise ConsistencyError("non-graded ideal skeleton disagrees with quotient periodicity")
    if skeleton:
        w["has_nongraded_ideal"] = "; ".join(
            f"H={_set_literal(g, h)}, cycle {c.literal()}" for h, c in skeleton
        )

    return StructureReport(cond_l, cond_k, graded_simple, simple, pis, bool(skeleton), w)


@dataclass(frozen=True)
class Fingerprint:
    vertex_count: int
    noexit_cycle_lengths: tuple[int, ...]
    line_point_classes: int
    ideal_lattice_signature: tuple[tuple[int, int], ...]
    per_ideal_noexit: tuple[tuple[tuple[str, ...], tuple[int, ...]], ...]

    def to_dict(self) -> dict:
        return {
            "vertex_count": self.vertex_count,
            "noexit_cycle_lengths": list(self.noexit_cycle_lengths),
            "line_point_classes": self.line_point_classes,
            "ideal_lattice_signature": [list(p) for p in self.ideal_lattice_signature],
            "per_ideal_noexit": [
                {"ideal": list(h), "noexit_cycle_lengths": list(ls)} for h, ls in self.per_ideal_noexit
            ],
        }


def line_point_classes(g: Graph) -> list[list[str]]:
    """Line-points grouped into orbit classes of the graded monoid."""
    classes: list[list[str]] = []
    for lp in line_points(g):
        for cls in classes:
            if orbit_equivalent(g, cls[0], lp.vertex) is not None:
                cls.append(lp.vertex)
                break
        else:
            classes.append([lp.vertex])
    return classes


def fingerprint(g: Graph, cap: int | None = None) -> Fingerprint:
    lat = lattice(g, cap)
    everything = frozenset(g.vertices)
    per_ideal = tuple(
        (
            tuple(i.label()),
            tuple(sorted(len(c) for c in noexit_cycles(quotient_graph(g, everything, i.generators)))),
        )
        for i in lat.ideals
    )
    return Fingerprint(
        vertex_count=len(g),
        noexit_cycle_lengths=tuple(sorted(len(c) for c in noexit_cycles(g))),
        line_point_classes=len(line_point_classes(g)),
        ideal_lattice_signature=tuple(lat.covers()),
        per_ideal_noexit=per_ideal,
    )


@dataclass
class ComparisonReport:
    matched: list[str]
    mismatched: list[tuple[str, object, object]]
    verdict: str
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "matched": list(self.matched),
            "mismatched": [{"invariant": n, "first": a, "second": b} for n, a, b in self.mismatched],
            "verdict": self.verdict,
            "notes": list(self.notes),
        }


def _poset_isomorphic(n: int, below1: set, below2: set, labels1: list, labels2: list) -> bool:
    """Backtracking search for an order- and label-preserving bijection."""
    if n != len(labels2):
        return False

    def profile(i, below, labels):
        down = sum(1 for j in range(n) if (j, i) in below)
        up = sum(1 for j in range(n) if (i, j) in below)
        return (down, up, labels[i])

    p1 = [profile(i, below1, labels1) for i in range(n)]
    p2 = [profile(i, below2, labels2) for i in range(n)]
    if sorted(p1) != sorted(p2):
        return False
    image: dict[int, int] = {}
    used: set[int] = set()

    def extend(i):
        if i == n:
            return True
        for j in range(n):
            if j in used or p1[i] != p2[j]:
                continue
            if all(((k, i) in below1) == ((image[k], j) in below2) and ((i, k) in below1) == ((j, image[k]) in below2) for k in image):
                image[i] = j
                used.add(j)
                if extend(i + 1):
                    return True
                del image[i]
                used.discard(j)
        return False

    return extend(0)


def compare(g1: Graph, g2: Graph, cap: int | None = None) -> ComparisonReport:
    f1, f2 = fingerprint(g1, cap), fingerprint(g2, cap)
    matched, mismatched = [], []

    def check(name, a, b):
        if a == b:
            matched.append(name)
        else:
            mismatched.append((name, a, b))

    check("noexit_cycle_lengths", list(f1.noexit_cycle_lengths), list(f2.noexit_cycle_lengths))
    check("line_point_classes", f1.line_point_classes, f2.line_point_classes)

    l1, l2 = lattice(g1, cap), lattice(g2, cap)
    n1, n2 = len(l1.ideals), len(l2.ideals)
    blank1, blank2 = [None] * n1, [None] * n2
    if _poset_isomorphic(n1, set(l1.order), set(l2.order), blank1, blank2):
        matched.append("ideal_lattice")
    else:
        mismatched.append(("ideal_lattice", f"{n1} ideals", f"{n2} ideals"))
    labels1 = [ls for _, ls in f1.per_ideal_noexit]
    labels2 = [ls for _, ls in f2.per_ideal_noexit]
    if _poset_isomorphic(n1, set(l1.order), set(l2.order), labels1, labels2):
        matched.append("per_ideal_noexit")
    else:
        mismatched.append(("per_ideal_noexit", sorted(labels1), sorted(labels2)))

    notes = [CAVEAT]
    if f1.vertex_count != f2.vertex_count:
        notes.append(
            f"vertex counts differ ({f1.vertex_count} vs {f2.vertex_count}); "
            "not an invariant, recorded for the vertex-sum check only"
        )
    verdict = "NOT_Z_ISOMORPHIC" if mismatched else "NECESSARY_CONDITIONS_HOLD"
    return ComparisonReport(matched, mismatched, verdict, notes)
