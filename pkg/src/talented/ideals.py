"""
Z-order-ideals of the graded monoid, represented by their hereditary
saturated generator sets. Order-ideals are infinite, so membership is
decided by following how the support of an element moves under expansion.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

from .graph import (
    Graph,
    enumerate_hereditary_saturated,
    hereditary_saturated_closure,
    is_downward_directed,
    is_hereditary_saturated,
    quotient_graph,
)
from .monoid import GradedElement, Order, eq_graded, leq_graded


class IdealError(ValueError):
    pass


@dataclass(frozen=True)
class OrderIdeal:
    generators: frozenset[str]
    owner: Graph = field(repr=False, compare=False)

    def __post_init__(self):
        if not is_hereditary_saturated(self.owner, self.generators):
            raise IdealError("ideal generators must be hereditary saturated")

    def __eq__(self, other):
        if not isinstance(other, OrderIdeal):
            return NotImplemented
        return self.owner == other.owner and self.generators == other.generators

    def __hash__(self):
        return hash(self.generators)

    @property
    def is_zero(self) -> bool:
        return not self.generators

    @property
    def is_full(self) -> bool:
        return self.generators == frozenset(self.owner.vertices)

    def __le__(self, other: OrderIdeal) -> bool:
        _same_owner(self, other)
        return self.generators <= other.generators

    def meet(self, other: OrderIdeal) -> OrderIdeal:
        _same_owner(self, other)
        return OrderIdeal(self.generators & other.generators, self.owner)

    def join(self, other: OrderIdeal) -> OrderIdeal:
        _same_owner(self, other)
        return OrderIdeal(
            hereditary_saturated_closure(self.owner, self.generators | other.generators),
            self.owner,
        )

    def label(self) -> list[str]:
        return self.owner.ordered(self.generators)


def _same_owner(i: OrderIdeal, j: OrderIdeal):
    if i.owner != j.owner:
        raise IdealError("ideals belong to different graphs")


def zero_ideal(g: Graph) -> OrderIdeal:
    return OrderIdeal(frozenset(), g)


def full_ideal(g: Graph) -> OrderIdeal:
    return OrderIdeal(frozenset(g.vertices), g)


def ideal_generated_by(g: Graph, a: GradedElement) -> OrderIdeal:
    return OrderIdeal(hereditary_saturated_closure(g, a.support), g)


def contains(ideal: OrderIdeal, a: GradedElement) -> bool:
    """
    Exact membership. The support set is pushed forward one expansion at a
    time, sinks dropping out as frozen residues; the walk through subsets
    of E^0 must repeat, and a belongs to the ideal iff every frozen sink and
    every support set on the repeating stretch lies in the generators.
    """
    g, h = ideal.owner, ideal.generators
    for v in a.support:
        if v not in g:
            raise IdealError(f"element uses vertex {v!r} outside the ideal's graph")
    support = frozenset(a.support)
    visits: dict[frozenset[str], int] = {}
    trail: list[frozenset[str]] = []
    while support not in visits:
        if any(v not in h for v in support if g.is_sink(v)):
            return False
        visits[support] = len(trail)
        trail.append(support)
        support = frozenset(w for v in support for w in g.successors(v))
    return all(s <= h for s in trail[visits[support]:])


@dataclass(frozen=True)
class IdealLattice:
    ideals: tuple[OrderIdeal, ...]
    order: frozenset[tuple[int, int]]  # (i, j) when ideals[i] is contained in ideals[j]

    def covers(self) -> list[tuple[int, int]]:
        pairs = []
        for i, j in sorted(self.order):
            if i == j:
                continue
            if not any((i, k) in self.order and (k, j) in self.order for k in range(len(self.ideals)) if k not in (i, j)):
                pairs.append((i, j))
        return pairs

    def index(self, ideal: OrderIdeal) -> int:
        return self.ideals.index(ideal)


def lattice(g: Graph, cap: int | None = None) -> IdealLattice:
    ideals = tuple(OrderIdeal(h, g) for h in enumerate_hereditary_saturated(g, cap))
    order = frozenset(
        (i, j)
        for i, a in enumerate(ideals)
        for j, b in enumerate(ideals)
        if a.generators <= b.generators
    )
    return IdealLattice(ideals, order)


def is_simple(g: Graph, cap: int | None = None) -> bool:
    """Only the trivial ideals; a graph whose lattice collapses to one point is not simple."""
    return len(lattice(g, cap).ideals) == 2


def is_prime(ideal: OrderIdeal) -> bool:
    """A proper ideal is prime iff the vertices outside it are downward directed."""
    if ideal.is_full:
        return False
    rest = _quotient(ideal)
    return all(is_downward_directed(rest, u, v) for u, v in itertools.combinations(rest.vertices, 2))


def is_prime_by_elements(ideal: OrderIdeal, horizon: int | None = None) -> bool:
    """
    Element-wise primeness: for all vertices u, v outside the ideal, some
    vertex z outside it has shifts of z below both u and v. Order
    certificates come from `leq_graded`, which is sound, so a True here
    is always backed by explicit certificates.
    """
    if ideal.is_full:
        return False
    g, h = ideal.owner, ideal.generators
    outside = [v for v in g.vertices if v not in h]
    n = len(g)

    def below(z, u):
        target = GradedElement.vertex(u)
        return any(
            leq_graded(g, GradedElement.vertex(z, k), target, horizon) is Order.LEQ
            for k in range(0, n + 1)
        )

    for u, v in itertools.combinations_with_replacement(outside, 2):
        if not any(below(z, u) and below(z, v) for z in outside):
            return False
    return True


def is_prime_by_lattice(ideal: OrderIdeal, lat: IdealLattice | None = None) -> bool:
    """The definition: N1 meet N2 inside N forces N1 or N2 inside N."""
    if ideal.is_full:
        return False
    lat = lat or lattice(ideal.owner)
    for a, b in itertools.combinations_with_replacement(lat.ideals, 2):
        if a.meet(b) <= ideal and not (a <= ideal or b <= ideal):
            return False
    return True


@dataclass(frozen=True)
class QuotientContext:
    ideal: OrderIdeal
    quotient: Graph

    def project(self, a: GradedElement) -> GradedElement:
        """Image in the quotient monoid: terms inside the ideal vanish."""
        h = self.ideal.generators
        return GradedElement({(v, i): c for (v, i), c in a.terms.items() if v not in h})


def _quotient(ideal: OrderIdeal) -> Graph:
    g = ideal.owner
    return quotient_graph(g, g.vertices, ideal.generators)


def quotient_context(ideal: OrderIdeal) -> QuotientContext:
    return QuotientContext(ideal, _quotient(ideal))


class Sim(str, enum.Enum):
    SIM = "SIM"
    NOT_SIM = "NOT_SIM"
    UNKNOWN = "UNKNOWN"


def quotient_sim(ideal: OrderIdeal, a: GradedElement, b: GradedElement) -> Sim:
    """
    Decide a ~ b modulo the ideal by comparing projections in the quotient
    graph's monoid, which is isomorphic to the quotient monoid.
    """
    for v in a.support | b.support:
        if v not in ideal.owner:
            raise IdealError(f"element uses vertex {v!r} outside the ideal's graph")
    ctx = quotient_context(ideal)
    if eq_graded(ctx.quotient, ctx.project(a), ctx.project(b)):
        return Sim.SIM
    return Sim.NOT_SIM


def direct_sim_search(ideal: OrderIdeal, a: GradedElement, b: GradedElement, budget: int, max_mass: int = 2) -> Sim:
    """
    Bounded cross-check: look for i, j in the ideal, built from generator
    vertices at shifts near a and b, with a + i = b + j. Finds SIM or gives
    up with UNKNOWN.
    """
    g, h = ideal.owner, ideal.generators
    if eq_graded(g, a, b):
        return Sim.SIM
    shifts = [s for s in (a.min_shift, a.max_shift, b.min_shift, b.max_shift) if s is not None] or [0]
    lo, hi = min(shifts) - 1, max(shifts) + len(g)
    gens = [(v, i) for v in g.ordered(h) for i in range(lo, hi + 1)]
    pool = [GradedElement()]
    for size in range(1, max_mass + 1):
        pool += [GradedElement([(t, 1) for t in combo]) for combo in itertools.combinations_with_replacement(gens, size)]
    tried = 0
    for i in pool:
        for j in pool:
            if tried >= budget:
                return Sim.UNKNOWN
            tried += 1
            if eq_graded(g, a + i, b + j):
                return Sim.SIM
    return Sim.UNKNOWN


def ideal_of_set(g: Graph, vertices) -> OrderIdeal:
    unknown = set(vertices) - set(g.vertices)
    if unknown:
        raise IdealError(f"unknown vertices {sorted(unknown)}")
    return OrderIdeal(frozenset(vertices), g)


def intersects(g: Graph, u: str, v: str) -> bool:
    """Whether the ideals generated by u and v meet nontrivially."""
    return bool(ideal_generated_by(g, GradedElement.vertex(u)).meet(ideal_generated_by(g, GradedElement.vertex(v))).generators)

