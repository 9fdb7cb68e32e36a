"""The inverse monoid of bisections of a finite pmp groupoid.

A bisection is a finite arrow set on which source and range are injective;
the product is the set of all defined pairwise products, the inverse is
elementwise. Idempotents are exactly the unit-arrow sets, identified with
elements of the measure algebra of the unit space.

The pseudometric implemented here is the disagreement mass

    d(a, b) = mass of the set of source units of the symmetric difference,

i.e. the measure of the units where a and b differ as decorated partial
maps. This is the metric pinned down by the exact trace identities

    tr(a) = 1 - d(s(a), 1) - d(s(a), a)
    d(a, b) = tr(s(a)) + tr(s(b)) - tr(s(a)s(b)) - tr(b^-1 a)

which hold exactly for it (see the verification suites). Its range-side
mirror mass(r(a \\ b) union r(b \\ a)) is exposed separately: the two agree
on the full group but differ for proper partial bisections, so d is not
invariant under inversion in general; the exact correction is

    d(a^-1, b^-1) - d(a, b) = mass(r(a) u r(b)) - mass(s(a) u s(b)).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, permutations, product
from math import comb, factorial

from .groupoid import Arrow, FiniteGroupoid, Unit


class UnionIncompatibleError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CapExceededError(RuntimeError):
    def __init__(self, predicted: int, cap: int, what: str):
        super().__init__(f"{what}: predicted count {predicted} exceeds cap {cap}")
        self.predicted = predicted
        self.cap = cap


@dataclass(frozen=True)
class Bisection:
    groupoid: FiniteGroupoid
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        object.__setattr__(self, "arrows", tuple(sorted(self.arrows)))
        sources = [a.source for a in self.arrows]
        ranges = [a.range for a in self.arrows]
        if len(set(sources)) != len(sources):
            raise ValueError("source map not injective")
        if len(set(ranges)) != len(ranges):
            raise ValueError("range map not injective")
        for a in self.arrows:
            if not 0 <= a.comp < len(self.groupoid.components):
                raise ValueError(f"arrow {a} not in the groupoid")
            comp = self.groupoid.components[a.comp]
            if (
                not 0 <= a.g < comp.group_order
                or not 0 <= a.y_to < comp.base_size
                or not 0 <= a.y_from < comp.base_size
            ):
                raise ValueError(f"arrow {a} not in the groupoid")

    def __len__(self):
        return len(self.arrows)

    def __iter__(self):
        return iter(self.arrows)

    @cached_property
    def by_range(self) -> dict[Unit, Arrow]:
        return {a.range: a for a in self.arrows}

    @cached_property
    def by_source(self) -> dict[Unit, Arrow]:
        return {a.source: a for a in self.arrows}

    @cached_property
    def source_units(self) -> frozenset[Unit]:
        return frozenset(a.source for a in self.arrows)

    @cached_property
    def range_units(self) -> frozenset[Unit]:
        return frozenset(a.range for a in self.arrows)

    @cached_property
    def fix_units(self) -> frozenset[Unit]:
        return frozenset(a.source for a in self.arrows if a.is_unit())

    @cached_property
    def supp_units(self) -> frozenset[Unit]:
        return self.source_units - self.fix_units

    def compose(self, other: "Bisection") -> "Bisection":
        """Product self*other: all defined products ab, a in self, b in other."""
        if self.groupoid != other.groupoid:
            raise ValueError("bisections live on different groupoids")
        g = self.groupoid
        out = []
        for b in other.arrows:
            a = self.by_source.get(b.range)
            if a is not None:
                out.append(g.mul(a, b))
        return Bisection(g, tuple(out))

    def __mul__(self, other):
        return self.compose(other)

    def inverse(self) -> "Bisection":
        g = self.groupoid
        return Bisection(g, tuple(g.inv(a) for a in self.arrows))

    def trace(self) -> Fraction:
        g = self.groupoid
        return sum(
            (g.unit_mass(a.comp) for a in self.arrows if a.is_unit()), Fraction(0)
        )

    def distance(self, other: "Bisection") -> Fraction:
        """Mass of the source units of the symmetric difference."""
        if self.groupoid != other.groupoid:
            raise ValueError("bisections live on different groupoids")
        mine, theirs = self.by_source, other.by_source
        disagree = {
            u for u in mine.keys() | theirs.keys() if mine.get(u) != theirs.get(u)
        }
        return self.groupoid.mass(disagree)

    def range_distance(self, other: "Bisection") -> Fraction:
        """Range-side mirror of distance; differs off the full group."""
        return self.inverse().distance(other.inverse())

    def is_idempotent(self) -> bool:
        return all(a.is_unit() for a in self.arrows)

    def is_full(self) -> bool:
        n = self.groupoid.n_units
        return len(self.source_units) == n and len(self.range_units) == n

    def restrict_sources(self, units) -> "Bisection":
        units = frozenset(units)
        return Bisection(
            self.groupoid, tuple(a for a in self.arrows if a.source in units)
        )


def bisection(g: FiniteGroupoid, arrows) -> Bisection:
    return Bisection(g, tuple(arrows))


def empty_bisection(g: FiniteGroupoid) -> Bisection:
    return Bisection(g, ())


def unit_bisection(g: FiniteGroupoid) -> Bisection:
    return Bisection(g, tuple(g.unit_arrow(u) for u in g.units()))


def idempotent(g: FiniteGroupoid, units) -> Bisection:
    return Bisection(g, tuple(g.unit_arrow(u) for u in units))


def projections(alpha: Bisection):
    """(s, r, fix, supp) of a bisection, as unit sets."""
    return (
        alpha.source_units,
        alpha.range_units,
        alpha.fix_units,
        alpha.supp_units,
    )


def act(alpha: Bisection, units) -> frozenset[Unit]:
    """Image of a unit set under a full-group element: ranges over sources in it."""
    if not alpha.is_full():
        raise ValueError("action is defined for full-group elements only")
    units = frozenset(units)
    return frozenset(a.range for a in alpha.arrows if a.source in units)


def union_compatible(alpha: Bisection, beta: Bisection) -> Bisection:
    """Union of two bisections when it is again one.

    Compatibility (beta^-1 alpha and beta alpha^-1 idempotent) is exactly
    injectivity of source and range on the union; the failure witness is a
    colliding arrow pair.
    """
    if alpha.groupoid != beta.groupoid:
        raise ValueError("bisections live on different groupoids")
    if not (beta * alpha.inverse()).is_idempotent():
        for u, a in alpha.by_source.items():
            b = beta.by_source.get(u)
            if b is not None and b != a:
                raise UnionIncompatibleError(
                    f"arrows {a} and {b} share source {u}", witness=(a, b)
                )
        raise AssertionError("non-idempotent beta*alpha^-1 without a source collision")
    if not (beta.inverse() * alpha).is_idempotent():
        for u, a in alpha.by_range.items():
            b = beta.by_range.get(u)
            if b is not None and b != a:
                raise UnionIncompatibleError(
                    f"arrows {a} and {b} share range {u}", witness=(a, b)
                )
        raise AssertionError("non-idempotent beta^-1*alpha without a range collision")
    return Bisection(alpha.groupoid, tuple(set(alpha.arrows) | set(beta.arrows)))


def extend_to_full_group(gamma: Bisection) -> Bisection:
    """The full-group completion: close every partial orbit chain of gamma.

    Stage n collects the arrows of (gamma^-1)^n whose source is outside
    s(gamma) and range outside r(gamma); the union of gamma, all stages and
    the untouched units is a full-group element containing gamma. Stage
    sources and ranges are checked disjoint and exactly covering, which in
    the finite setting must hold on the nose.
    """
    g = gamma.groupoid
    arrows = set(gamma.arrows)
    s_gamma, r_gamma = gamma.source_units, gamma.range_units
    seen_sources = [s_gamma]
    seen_ranges = [r_gamma]

    inv = gamma.inverse()
    power = inv
    for _ in range(g.n_arrows):
        if len(power) == 0:
            break
        stage = Bisection(
            g,
            tuple(
                a
                for a in power.arrows
                if a.source not in s_gamma and a.range not in r_gamma
            ),
        )
        if len(stage):
            for prev in seen_sources[1:]:
                assert not (stage.source_units & prev)
            for prev in seen_ranges[1:]:
                assert not (stage.range_units & prev)
            seen_sources.append(stage.source_units)
            seen_ranges.append(stage.range_units)
            arrows |= set(stage.arrows)
        power = power * inv

    touched = s_gamma | r_gamma
    covered_sources = frozenset().union(*seen_sources)
    covered_ranges = frozenset().union(*seen_ranges)
    assert covered_sources == touched and covered_ranges == touched
    for u in g.units():
        if u not in touched:
            arrows.add(g.unit_arrow(u))

    out = Bisection(g, tuple(arrows))
    assert out.is_full() and set(gamma.arrows) <= set(out.arrows)
    return out


# ---------------------------------------------------------------------------
# Enumeration


def semigroup_count(g: FiniteGroupoid) -> int:
    total = 1
    for c in g.components:
        n, m = c.base_size, c.group_order
        total *= sum(comb(n, k) ** 2 * factorial(k) * m**k for k in range(n + 1))
    return total


def group_count(g: FiniteGroupoid) -> int:
    total = 1
    for c in g.components:
        total *= factorial(c.base_size) * c.group_order**c.base_size
    return total


def malg_count(g: FiniteGroupoid) -> int:
    return 2**g.n_units


def _component_bisections(g: FiniteGroupoid, ci: int, full_only: bool):
    c = g.components[ci]
    n, m = c.base_size, c.group_order
    sizes = [n] if full_only else range(n + 1)
    for k in sizes:
        for dom in combinations(range(n), k):
            for img in permutations(range(n), k):
                for gs in product(range(m), repeat=k):
                    yield tuple(
                        Arrow(ci, gs[t], img[t], dom[t]) for t in range(k)
                    )


def enumerate_semigroup(g: FiniteGroupoid, cap: int = 10**6):
    """All bisections of g, in a fixed order. Raises if the count exceeds cap."""
    predicted = semigroup_count(g)
    if predicted > cap:
        raise CapExceededError(predicted, cap, "full semigroup enumeration")
    pieces = [list(_component_bisections(g, ci, False)) for ci in range(len(g.components))]
    for combo in product(*pieces):
        yield Bisection(g, tuple(a for piece in combo for a in piece))


def enumerate_group(g: FiniteGroupoid, cap: int = 10**6):
    predicted = group_count(g)
    if predicted > cap:
        raise CapExceededError(predicted, cap, "full group enumeration")
    pieces = [list(_component_bisections(g, ci, True)) for ci in range(len(g.components))]
    for combo in product(*pieces):
        yield Bisection(g, tuple(a for piece in combo for a in piece))


def enumerate_malg(g: FiniteGroupoid, cap: int = 10**6):
    predicted = malg_count(g)
    if predicted > cap:
        raise CapExceededError(predicted, cap, "measure algebra enumeration")
    units = list(g.units())
    for k in range(len(units) + 1):
        for subset in combinations(units, k):
            yield frozenset(subset)


def enumerate_elements(g: FiniteGroupoid, kind: str, cap: int = 10**6):
    """Dispatch by kind: "semigroup", "group" or "malg"."""
    if kind == "semigroup":
        return enumerate_semigroup(g, cap)
    if kind == "group":
        return enumerate_group(g, cap)
    if kind == "malg":
        return enumerate_malg(g, cap)
    raise ValueError(f"unknown enumeration kind {kind!r}")


def sample_bisection(g: FiniteGroupoid, rng: random.Random) -> Bisection:
    arrows = []
    for ci, c in enumerate(g.components):
        n, m = c.base_size, c.group_order
        dom = [y for y in range(n) if rng.random() < 0.5]
        img = rng.sample(range(n), len(dom))
        for y_from, y_to in zip(dom, img):
            arrows.append(Arrow(ci, rng.randrange(m), y_to, y_from))
    return Bisection(g, tuple(arrows))


def sample_full_group(g: FiniteGroupoid, rng: random.Random) -> Bisection:
    arrows = []
    for ci, c in enumerate(g.components):
        n, m = c.base_size, c.group_order
        img = rng.sample(range(n), n)
        for y_from, y_to in zip(range(n), img):
            arrows.append(Arrow(ci, rng.randrange(m), y_to, y_from))
    return Bisection(g, tuple(arrows))
