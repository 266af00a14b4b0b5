"""
Elements of the graph monoid M_E and its graded refinement, with exact
normal forms and decision procedures.

A graded element is a finite sum of generators v@i. The defining relation
rewrites an occurrence of a regular vertex v@i into the sum of r(e)@(i+1)
over the edges leaving v, and the integer action moves every shift by n.
Rewriting only ever raises shifts, so fully expanding an element up to a
horizon level m gives a unique `CanonicalForm`: sinks freeze where they
appear and everything else ends up on level m.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

from .graph import Graph, has_no_bifurcation, line_points, noexit_cycles
from .intlin import cokernel_invariants, echelon_rows, in_row_span
from .oracle import reduct_search

DEFAULT_BUDGET = 100_000


class MonoidError(ValueError):
    pass


class ElementSyntaxError(MonoidError):
    def __init__(self, message: str, column: int):
        self.column = column
        super().__init__(f"column {column}: {message}")


class _Element:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | Iterable = ()):
        merged: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for key, count in items:
            if count < 0:
                raise MonoidError("multiplicities must be nonnegative")
            if count:
                merged[key] = merged.get(key, 0) + count
        self._terms = merged
        self._hash = None

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return type(self)(list(self._terms.items()) + list(other._terms.items()))

    @property
    def mass(self) -> int:
        return sum(self._terms.values())

    def __repr__(self):
        return f"{type(self).__name__}({self.format()!r})"


class GradedElement(_Element):
    """A finite N-combination of generators (vertex, shift)."""

    @classmethod
    def vertex(cls, v: str, shift: int = 0, count: int = 1) -> GradedElement:
        return cls({(v, shift): count})

    @property
    def support(self) -> frozenset[str]:
        return frozenset(v for v, _ in self._terms)

    @property
    def min_shift(self) -> int | None:
        return min((i for _, i in self._terms), default=None)

    @property
    def max_shift(self) -> int | None:
        return max((i for _, i in self._terms), default=None)

    def format(self, g: Graph | None = None) -> str:
        if not self._terms:
            return "0"
        order = g.index if g is not None else {}
        keys = sorted(self._terms, key=lambda k: (order.get(k[0], len(order)), k[0], k[1]))
        parts = []
        for v, i in keys:
            c = self._terms[(v, i)]
            parts.append(f"{c}*{v}@{i}" if c > 1 else f"{v}@{i}")
        return " + ".join(parts)

    __str__ = format


class UngradedElement(_Element):
    """A finite N-combination of vertices: an element of the free monoid on E^0."""

    @property
    def support(self) -> frozenset[str]:
        return frozenset(self._terms)

    def format(self, g: Graph | None = None) -> str:
        if not self._terms:
            return "0"
        order = g.index if g is not None else {}
        keys = sorted(self._terms, key=lambda v: (order.get(v, len(order)), v))
        return " + ".join(
            f"{self._terms[v]}*{v}" if self._terms[v] > 1 else v for v in keys
        )

    __str__ = format


_TERM = re.compile(r"\s*(?:(\d+)\s*\*\s*)?([A-Za-z0-9_.@\-]+?)(?:@([+-]?\d+))?\s*\Z")


def _parse_terms(text: str, g: Graph | None):
    if text.strip() == "0" and (g is None or "0" not in g):
        return []
    terms = []
    col = 1
    for chunk in text.split("+"):
        m = _TERM.match(chunk)
        if not m or not chunk.strip():
            raise ElementSyntaxError(f"cannot parse term {chunk.strip()!r}", col)
        count = int(m.group(1)) if m.group(1) else 1
        if count == 0:
            raise ElementSyntaxError("term count must be positive", col)
        vertex = m.group(2)
        if g is not None and vertex not in g:
            raise ElementSyntaxError(f"unknown vertex {vertex!r}", col)
        shift = int(m.group(3)) if m.group(3) is not None else None
        terms.append((vertex, shift, count))
        col += len(chunk) + 1
    return terms


def parse_element(text: str, g: Graph | None = None) -> GradedElement:
    """Parse `2*u@-1 + v` style literals; the default shift is 0."""
    return GradedElement(
        [((v, 0 if i is None else i), c) for v, i, c in _parse_terms(text, g)]
    )


def parse_ungraded(text: str, g: Graph | None = None) -> UngradedElement:
    terms = _parse_terms(text, g)
    if any(i is not None for _, i, _ in terms):
        raise ElementSyntaxError("shifts are not allowed in ungraded elements", 1)
    return UngradedElement([(v, c) for v, _, c in terms])


@dataclass(frozen=True)
class TransitionMatrix:
    vertices: tuple[str, ...]
    entries: tuple[tuple[int, ...], ...]

    def __getitem__(self, pair):
        v, w = pair
        return self.entries[self.vertices.index(v)][self.vertices.index(w)]


def transition_matrix(g: Graph) -> TransitionMatrix:
    n = len(g)
    rows = []
    for row in g.out_rows:
        r = [0] * n
        for j, mult in row:
            r[j] = mult
        rows.append(tuple(r))
    return TransitionMatrix(g.vertices, tuple(rows))


@dataclass(frozen=True)
class CanonicalForm:
    horizon: int
    frontier: dict[str, int]
    residues: dict[int, dict[str, int]]

    @property
    def mass(self) -> int:
        return sum(self.frontier.values()) + sum(
            c for r in self.residues.values() for c in r.values()
        )

    def as_element(self) -> GradedElement:
        terms = [((v, self.horizon), c) for v, c in self.frontier.items()]
        terms += [((v, lvl), c) for lvl, r in self.residues.items() for v, c in r.items()]
        return GradedElement(terms)

    def __add__(self, other: CanonicalForm) -> CanonicalForm:
        if self.horizon != other.horizon:
            raise MonoidError("canonical forms at different horizons")
        frontier = dict(self.frontier)
        for v, c in other.frontier.items():
            frontier[v] = frontier.get(v, 0) + c
        residues = {lvl: dict(r) for lvl, r in self.residues.items()}
        for lvl, r in other.residues.items():
            slot = residues.setdefault(lvl, {})
            for v, c in r.items():
                slot[v] = slot.get(v, 0) + c
        return CanonicalForm(self.horizon, frontier, dict(sorted(residues.items())))


def shift(a: GradedElement, n: int) -> GradedElement:
    return GradedElement({(v, i + n): c for (v, i), c in a._terms.items()})


def add(a: GradedElement, b: GradedElement) -> GradedElement:
    return a + b


def forgetful(a: GradedElement) -> UngradedElement:
    return UngradedElement([(v, c) for (v, _), c in a._terms.items()])


def expand_step(g: Graph, a: GradedElement, v: str, i: int) -> GradedElement:
    """Rewrite one occurrence of v@i into the ranges of v's edges at level i+1."""
    if a._terms.get((v, i), 0) < 1:
        raise MonoidError(f"{v}@{i} does not occur in the element")
    if g.is_sink(v):
        raise MonoidError(f"{v} is a sink and cannot be rewritten")
    terms = dict(a._terms)
    terms[(v, i)] -= 1
    for e in g.out_edges(v):
        terms[(e.dst, i + 1)] = terms.get((e.dst, i + 1), 0) + 1
    return GradedElement(terms)


# Level-by-level expansion works on dense integer vectors in vertex order.


def _step(g: Graph, vec: list[int]) -> list[int]:
    out = [0] * len(vec)
    rows = g.out_rows
    for i, c in enumerate(vec):
        if c:
            for j, mult in rows[i]:
                out[j] += c * mult
    return out


def _freeze_sinks(g: Graph, vec: list[int]) -> dict[str, int]:
    return {g.vertices[i]: vec[i] for i in g.sink_indices if vec[i]}


def _expand(g: Graph, a: GradedElement, m: int):
    """Residues below level m and the dense frontier vector at level m."""
    n = len(g)
    if not a:
        return {}, [0] * n
    if m < a.max_shift:
        raise MonoidError(f"horizon {m} is below the element's top shift {a.max_shift}")
    buckets: dict[int, list[int]] = {}
    for (v, i), c in a._terms.items():
        buckets.setdefault(i, [0] * n)[g.index[v]] += c
    residues = {}
    level = a.min_shift
    vec = buckets.get(level, [0] * n)
    while level < m:
        frozen = _freeze_sinks(g, vec)
        if frozen:
            residues[level] = frozen
        vec = _step(g, vec)
        level += 1
        if level in buckets:
            vec = [x + y for x, y in zip(vec, buckets[level])]
    return residues, vec


def _dense_to_map(g: Graph, vec: list[int]) -> dict[str, int]:
    return {g.vertices[i]: c for i, c in enumerate(vec) if c}


def canonical_form(g: Graph, a: GradedElement, m: int) -> CanonicalForm:
    residues, vec = _expand(g, a, m)
    return CanonicalForm(m, _dense_to_map(g, vec), residues)


def deepen(g: Graph, cf: CanonicalForm, m: int) -> CanonicalForm:
    """Continue expanding a canonical form from its horizon to level m."""
    if m < cf.horizon:
        raise MonoidError("cannot deepen to a lower horizon")
    residues = {lvl: dict(r) for lvl, r in cf.residues.items()}
    vec = [cf.frontier.get(v, 0) for v in g.vertices]
    for level in range(cf.horizon, m):
        frozen = _freeze_sinks(g, vec)
        if frozen:
            residues[level] = frozen
        vec = _step(g, vec)
    return CanonicalForm(m, _dense_to_map(g, vec), residues)


def _top(*elems: GradedElement) -> int | None:
    shifts = [e.max_shift for e in elems if e]
    return max(shifts) if shifts else None


def eq_graded(g: Graph, a: GradedElement, b: GradedElement) -> bool:
    """
    Exact equality in the graded monoid.

    Both sides are expanded to their common top shift; from there the
    frontier difference d evolves as d -> dT, and the left kernels of the
    powers of T stabilise within |E^0| steps, so |E^0| further levels decide.
    Frozen sink residues must agree at every level along the way.
    """
    if not a or not b:
        return not a and not b
    m0 = _top(a, b)
    res_a, va = _expand(g, a, m0)
    res_b, vb = _expand(g, b, m0)
    if res_a != res_b:
        return False
    for _ in range(len(g) + 1):
        if va == vb:
            return True
        if _freeze_sinks(g, va) != _freeze_sinks(g, vb):
            return False
        va, vb = _step(g, va), _step(g, vb)
    return False


class Order(str, enum.Enum):
    LEQ = "LEQ"
    NOT_LEQ = "NOT_LEQ"
    UNKNOWN = "UNKNOWN"


def default_horizon(g: Graph) -> int:
    return max(1, 3 * len(g))


def leq_graded(g: Graph, a: GradedElement, b: GradedElement, horizon: int | None = None) -> Order:
    """
    Three-valued test of a <= b at level (top shift + horizon).

    LEQ is certified by pointwise domination of the expanded forms (the
    difference is itself an element); NOT_LEQ by a frozen residue of a that
    exceeds b's. Anything else is UNKNOWN.
    """
    if horizon is None:
        horizon = default_horizon(g)
    if horizon < 1:
        raise MonoidError("horizon must be positive")
    if not a:
        return Order.LEQ
    if not b:
        return Order.NOT_LEQ
    m = _top(a, b) + horizon
    res_a, va = _expand(g, a, m)
    res_b, vb = _expand(g, b, m)
    for lvl, r in res_a.items():
        other = res_b.get(lvl, {})
        if any(c > other.get(v, 0) for v, c in r.items()):
            return Order.NOT_LEQ
    if all(x <= y for x, y in zip(va, vb)):
        return Order.LEQ
    return Order.UNKNOWN


class Verdict(str, enum.Enum):
    EQ = "EQ"
    GT = "GT"
    INCOMPARABLE = "INCOMPARABLE"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class OrbitComparison:
    verdict: Verdict
    witness: CanonicalForm | None = None


def compare_orbit(g: Graph, a: GradedElement, n: int, horizon: int | None = None) -> OrbitComparison:
    """
    Compare the shifted element (shift n < 0) with a. GT means the shift is
    strictly larger. A strictly smaller shift is impossible, so that verdict
    does not exist.
    """
    if n >= 0:
        raise MonoidError("orbit comparison needs a negative shift")
    if horizon is None:
        horizon = default_horizon(g)
    moved = shift(a, n)
    if eq_graded(g, moved, a):
        witness = canonical_form(g, a, _top(a) + len(g)) if a else None
        return OrbitComparison(Verdict.EQ, witness)
    up = leq_graded(g, a, moved, horizon)
    if up is Order.LEQ:
        m = _top(a, moved) + horizon
        ra, va = _expand(g, a, m)
        rb, vb = _expand(g, moved, m)
        residues = {}
        for lvl in sorted(set(ra) | set(rb)):
            diff = {v: rb.get(lvl, {}).get(v, 0) - ra.get(lvl, {}).get(v, 0) for v in rb.get(lvl, {})}
            diff = {v: c for v, c in diff.items() if c}
            if diff:
                residues[lvl] = diff
        frontier = _dense_to_map(g, [y - x for x, y in zip(va, vb)])
        return OrbitComparison(Verdict.GT, CanonicalForm(m, frontier, residues))
    down = leq_graded(g, moved, a, horizon)
    if up is Order.NOT_LEQ and down is Order.NOT_LEQ:
        return OrbitComparison(Verdict.INCOMPARABLE)
    return OrbitComparison(Verdict.UNKNOWN)


def noexit_vertices(g: Graph) -> frozenset[str]:
    return frozenset(v for c in noexit_cycles(g) for v in c.vertices)


def is_periodic(g: Graph, a: GradedElement) -> int | None:
    """Least positive period of a, or None when a is aperiodic."""
    if not a:
        raise MonoidError("the zero element has no period")
    m = a.max_shift + 2 * len(g)
    residues, vec = _expand(g, a, m)
    if residues:
        return None
    cycles = noexit_cycles(g)
    on_cycles = {v for c in cycles for v in c.vertices}
    if any(c and g.vertices[i] not in on_cycles for i, c in enumerate(vec)):
        return None
    # The frontier is a sum of vertices on exitless cycles, each fixed by
    # its cycle length, so the lcm is always a period.
    bound = math.lcm(*(len(c) for c in cycles))
    for p in range(1, bound + 1):
        if bound % p == 0 and eq_graded(g, shift(a, p), a):
            return p
    raise AssertionError("lcm of exitless cycle lengths failed to be a period")


def is_minimal_vertex(g: Graph, v: str) -> bool:
    return has_no_bifurcation(g, v)


class Equality(str, enum.Enum):
    EQUAL = "EQUAL"
    NOT_EQUAL = "NOT_EQUAL"
    UNKNOWN = "UNKNOWN"


@lru_cache(maxsize=256)
def _relation_basis(g: Graph) -> list[list[int]]:
    rows = []
    for i, row in enumerate(g.out_rows):
        if not row:
            continue
        r = [0] * len(g)
        r[i] += 1
        for j, mult in row:
            r[j] -= mult
        rows.append(r)
    return echelon_rows(rows)


def cokernel_separates(g: Graph, a: UngradedElement, b: UngradedElement) -> bool:
    """
    True when a and b have different images in the group Z^{E^0} modulo the
    defining relations. Every relation dies there, so different images
    prove a != b in M_E.
    """
    diff = [a._terms.get(v, 0) - b._terms.get(v, 0) for v in g.vertices]
    return not in_row_span(_relation_basis(g), diff)


def monoid_group(g: Graph) -> tuple[list[int], int]:
    """Torsion coefficients and free rank of the group completion of M_E."""
    rows = []
    for i, row in enumerate(g.out_rows):
        if row:
            r = [0] * len(g)
            r[i] += 1
            for j, mult in row:
                r[j] -= mult
            rows.append(r)
    return cokernel_invariants(rows, len(g))


def eq_ungraded(g: Graph, a: UngradedElement, b: UngradedElement, budget: int = DEFAULT_BUDGET) -> Equality:
    if budget <= 0:
        raise MonoidError("budget must be positive")
    if not a or not b:
        return Equality.EQUAL if not a and not b else Equality.NOT_EQUAL
    if cokernel_separates(g, a, b):
        return Equality.NOT_EQUAL
    if reduct_search(g, a._terms, b._terms, budget).found:
        return Equality.EQUAL
    return Equality.UNKNOWN


def orbit_equivalent(g: Graph, v: str, w: str) -> int | None:
    """
    Some k with k-shift of v equal to w, or None. For periodic vertices the
    answer is reduced into [0, period).
    """
    if v == w:
        return 0
    lines = {lp.vertex: lp for lp in line_points(g)}
    if v in lines or w in lines:
        if v in lines and w in lines and lines[v].sink == lines[w].sink:
            # v = sink@dist(v), so shifting v by k lands on w when
            # dist(v) + k = dist(w).
            return lines[w].distance - lines[v].distance
        return None
    n = len(g)
    target = GradedElement.vertex(w)
    period = None
    if has_no_bifurcation(g, v) and has_no_bifurcation(g, w):
        period = is_periodic(g, GradedElement.vertex(v))
    for k in sorted(range(-2 * n, 2 * n + 1), key=lambda k: (abs(k), -k)):
        if eq_graded(g, GradedElement.vertex(v, k), target):
            return k % period if period else k
    return None
