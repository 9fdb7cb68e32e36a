"""Exact verification: almost-morphism reports, embedding certificates and
named invariant suites.

Every comparison is an exact rational (in)equality; epsilon thresholds are
strict rational comparisons. Checks run exhaustively whenever the tuple
count fits the budget cap and fall back to seeded sampling otherwise, and
each report records which regime ran, so a report is a deterministic
function of (inputs, seed, budget).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from math import lcm

from .constructions import (
    SemigroupMap,
    TransversalSystem,
    _blocks,
    block_components,
    finite_index_map,
    identity_map,
    product_embedding,
    rectangle,
    rectangle_decompose,
)
from .groupoid import FiniteGroupoid, product_groupoid
from .semigroup import (
    Bisection,
    act,
    empty_bisection,
    enumerate_group,
    enumerate_malg,
    enumerate_semigroup,
    extend_to_full_group,
    group_count,
    idempotent,
    malg_count,
    sample_bisection,
    sample_full_group,
    semigroup_count,
    unit_bisection,
)
from .symmetric import ladder_profile

DEFAULT_SEED = 1729


class IncompletePairListError(ValueError):
    """A pair-list map is missing a required product image."""


@dataclass(frozen=True)
class SuiteBudget:
    exhaustive_cap: int = 200_000
    sample_count: int = 500
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.exhaustive_cap < 1 or self.sample_count < 1:
            raise ValueError("budget caps must be positive")


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    params: dict
    budget: SuiteBudget
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


# ---------------------------------------------------------------------------
# Element pools and tuple budgets


def _elements(g: FiniteGroupoid, kind: str, budget: SuiteBudget):
    counts = {
        "semigroup": semigroup_count,
        "group": group_count,
        "malg": malg_count,
    }
    count = counts[kind](g)
    if count <= budget.exhaustive_cap:
        if kind == "semigroup":
            return list(enumerate_semigroup(g, cap=budget.exhaustive_cap)), True
        if kind == "group":
            return list(enumerate_group(g, cap=budget.exhaustive_cap)), True
        return list(enumerate_malg(g, cap=budget.exhaustive_cap)), True

    rng = random.Random(budget.seed)
    target = min(budget.sample_count, count)
    if kind == "malg":
        units = list(g.units())
        pool = {frozenset(), frozenset(units)}
        while len(pool) < target:
            pool.add(frozenset(u for u in units if rng.random() < 0.5))
        return sorted(pool, key=sorted), False
    if kind == "group":
        pool = {unit_bisection(g)}
        draw = sample_full_group
    else:
        pool = {unit_bisection(g), empty_bisection(g)}
        draw = sample_bisection
    while len(pool) < target:
        pool.add(draw(g, rng))
    return sorted(pool, key=lambda b: b.arrows), False


def _tuples(n: int, arity: int, budget: SuiteBudget):
    total = n**arity
    if total <= budget.exhaustive_cap:
        return iproduct(range(n), repeat=arity), True, total
    rng = random.Random(budget.seed + arity)
    sampled = [
        tuple(rng.randrange(n) for _ in range(arity))
        for _ in range(budget.sample_count)
    ]
    return sampled, False, len(sampled)


def _weight_vector(g: FiniteGroupoid):
    """Unit masses as integers over a common denominator."""
    denom = lcm(*(g.unit_mass(c).denominator for c in range(len(g.components))))
    w = {u: int(g.unit_mass(u[0]) * denom) for u in g.units()}
    return denom, w


def _dist_int(a: Bisection, b: Bisection, w) -> int:
    mine, theirs = a.by_source, b.by_source
    return sum(
        w[u] for u in mine.keys() | theirs.keys() if mine.get(u) != theirs.get(u)
    )


def _arrows_repr(b: Bisection) -> list:
    return [list(a) for a in b.arrows]


# ---------------------------------------------------------------------------
# Almost morphisms


@dataclass(frozen=True)
class AlmostMorphismReport:
    k_size: int
    epsilon: Fraction
    max_product_deviation: Fraction
    max_trace_deviation: Fraction
    max_distance_deviation: Fraction
    passed: bool
    witnesses: dict


def check_almost_morphism(pi, K, epsilon) -> AlmostMorphismReport:
    """Exact deviations of a candidate map on a finite set K.

    pi is a semigroup map or a finite pair list (dict); a pair list missing
    the image of some product of K-elements is rejected as incomplete. The
    verdict uses the product and trace deviations, strictly below epsilon;
    the distance deviation is measured and reported alongside.
    """
    epsilon = Fraction(epsilon)
    K = list(K)
    if isinstance(pi, SemigroupMap):
        lookup = pi
    else:
        table = dict(pi)

        def lookup(x: Bisection) -> Bisection:
            if x not in table:
                raise IncompletePairListError(
                    f"pair list does not cover a required element ({len(x)} arrows)"
                )
            return table[x]

    if len({a.groupoid for a in K}) > 1:
        raise ValueError("K mixes groupoids")

    images = {a: lookup(a) for a in K}
    prod_dev = Fraction(0)
    trace_dev = Fraction(0)
    dist_dev = Fraction(0)
    witnesses = {}
    for a in K:
        dev = abs(a.trace() - images[a].trace())
        if dev > trace_dev:
            trace_dev = dev
            witnesses["trace"] = a
    for a in K:
        for b in K:
            ab_img = lookup(a * b)
            dev = ab_img.distance(images[a] * images[b])
            if dev > prod_dev:
                prod_dev = dev
                witnesses["product"] = (a, b)
            dev = abs(a.distance(b) - images[a].distance(images[b]))
            if dev > dist_dev:
                dist_dev = dev
                witnesses["distance"] = (a, b)
    return AlmostMorphismReport(
        k_size=len(K),
        epsilon=epsilon,
        max_product_deviation=prod_dev,
        max_trace_deviation=trace_dev,
        max_distance_deviation=dist_dev,
        passed=prod_dev < epsilon and trace_dev < epsilon,
        witnesses=witnesses,
    )


@dataclass(frozen=True)
class EmbeddingReport:
    label: str
    element_count: int
    pair_count: int
    exhaustive: bool
    max_product_deviation: Fraction
    max_trace_deviation: Fraction
    max_distance_deviation: Fraction
    unit_preserved: bool
    injective: bool
    trace_iso_consistent: bool
    witnesses: dict

    @property
    def multiplicative(self) -> bool:
        return self.max_product_deviation == 0

    @property
    def trace_preserving(self) -> bool:
        return self.max_trace_deviation == 0

    @property
    def isometric(self) -> bool:
        return self.max_distance_deviation == 0

    @property
    def passed(self) -> bool:
        return (
            self.multiplicative
            and self.trace_preserving
            and self.isometric
            and self.unit_preserved
            and self.injective
            and self.trace_iso_consistent
        )


def check_embedding(m: SemigroupMap, budget: SuiteBudget | None = None) -> EmbeddingReport:
    """Certificate that a map is an exact embedding on the tested set.

    For an exactly multiplicative unit-preserving map, trace preservation
    and isometry are equivalent; the report cross-checks that equivalence
    concretely and flags any discrepancy as an implementation bug.
    """
    budget = budget or SuiteBudget()
    elements, exhaustive = _elements(m.domain, "semigroup", budget)
    n = len(elements)
    pair_iter, pairs_exhaustive, pair_count = _tuples(n, 2, budget)
    exhaustive = exhaustive and pairs_exhaustive

    images = [m(a) for a in elements]
    unit_ok = m(unit_bisection(m.domain)) == unit_bisection(m.codomain)
    injective = len(set(images)) == len(set(elements))

    prod_dev = Fraction(0)
    trace_dev = Fraction(0)
    dist_dev = Fraction(0)
    witnesses = {}
    for a, fa in zip(elements, images):
        dev = abs(a.trace() - fa.trace())
        if dev > trace_dev:
            trace_dev = dev
            witnesses["trace"] = a
    for ia, ib in pair_iter:
        a, b = elements[ia], elements[ib]
        dev = m(a * b).distance(images[ia] * images[ib])
        if dev > prod_dev:
            prod_dev = dev
            witnesses["product"] = (a, b)
        dev = abs(a.distance(b) - images[ia].distance(images[ib]))
        if dev > dist_dev:
            dist_dev = dev
            witnesses["distance"] = (a, b)

    consistent = True
    if prod_dev == 0 and unit_ok:
        consistent = (trace_dev == 0) == (dist_dev == 0)
    return EmbeddingReport(
        label=m.label,
        element_count=n,
        pair_count=pair_count,
        exhaustive=exhaustive,
        max_product_deviation=prod_dev,
        max_trace_deviation=trace_dev,
        max_distance_deviation=dist_dev,
        unit_preserved=unit_ok,
        injective=injective,
        trace_iso_consistent=consistent,
        witnesses=witnesses,
    )


# ---------------------------------------------------------------------------
# Named suites


def _result(name, passed, **details) -> CheckResult:
    return CheckResult(name, passed, details)


def suite_inverse_monoid(g: FiniteGroupoid, budget: SuiteBudget) -> list[CheckResult]:
    elements, exhaustive = _elements(g, "semigroup", budget)
    n = len(elements)
    one = unit_bisection(g)
    zero = empty_bisection(g)
    checks = []

    bad = [a for a in elements if not (a * one == a == one * a)]
    checks.append(_result("unit-law", not bad, tested=n, exhaustive=exhaustive))
    bad = [a for a in elements if not (zero * a == zero == a * zero)]
    checks.append(_result("zero-absorbing", not bad, tested=n, exhaustive=exhaustive))

    bad = [a for a in elements if a * a.inverse() * a != a or a.inverse() * a * a.inverse() != a.inverse()]
    checks.append(_result("inverse-law", not bad, tested=n, exhaustive=exhaustive))

    tuples, exh3, cnt3 = _tuples(n, 3, budget)
    viol = 0
    for ia, ib, ic in tuples:
        a, b, c = elements[ia], elements[ib], elements[ic]
        if (a * b) * c != a * (b * c):
            viol += 1
    checks.append(
        _result("associativity", viol == 0, tested=cnt3, exhaustive=exh3, violations=viol)
    )

    pair_iter, exh2, cnt2 = _tuples(n, 2, budget)
    viol = 0
    for ia, ib in pair_iter:
        a, b = elements[ia], elements[ib]
        if a * b * a == a and b * a * b == b and b != a.inverse():
            viol += 1
    checks.append(
        _result("inverse-uniqueness", viol == 0, tested=cnt2, exhaustive=exh2, violations=viol)
    )

    bad = [a for a in elements if a.is_idempotent() != (a * a == a)]
    checks.append(
        _result("idempotents-are-unit-sets", not bad, tested=n, exhaustive=exhaustive)
    )

    idems = [a for a in elements if a.is_idempotent()]
    viol = sum(1 for e in idems for f in idems if e * f != f * e)
    checks.append(
        _result("idempotents-commute", viol == 0, tested=len(idems) ** 2, exhaustive=exhaustive)
    )
    return checks


def suite_metric(g: FiniteGroupoid, budget: SuiteBudget) -> list[CheckResult]:
    elements, exhaustive = _elements(g, "semigroup", budget)
    n = len(elements)
    denom, w = _weight_vector(g)
    total = sum(w.values())
    index = {a: i for i, a in enumerate(elements)}

    def to_index(x: Bisection) -> int | None:
        return index.get(x)

    dist = [[_dist_int(a, b, w) for b in elements] for a in elements]
    checks = []

    bad = [
        a
        for a in elements
        if g.mass(a.source_units) != g.mass(a.range_units)
    ]
    checks.append(_result("pmp-mass-law", not bad, tested=n, exhaustive=exhaustive))

    viol = sum(1 for i in range(n) for j in range(n) if dist[i][j] != dist[j][i])
    checks.append(_result("symmetry", viol == 0, tested=n * n, exhaustive=exhaustive))

    viol = sum(
        1
        for i in range(n)
        for j in range(n)
        if (dist[i][j] == 0) != (elements[i] == elements[j])
    )
    checks.append(
        _result("zero-iff-equal", viol == 0, tested=n * n, exhaustive=exhaustive)
    )

    tuples, exh3, cnt3 = _tuples(n, 3, budget)
    viol = 0
    for ia, ib, ic in tuples:
        if dist[ia][ic] > dist[ia][ib] + dist[ib][ic]:
            viol += 1
    checks.append(
        _result("triangle", viol == 0, tested=cnt3, exhaustive=exh3, violations=viol)
    )

    inv_index = [index[a.inverse()] for a in elements] if exhaustive else None
    viol = 0
    witness = None
    full = [i for i, a in enumerate(elements) if a.is_full()]
    if inv_index is not None:
        for i in range(n):
            for j in range(n):
                if dist[inv_index[i]][inv_index[j]] != dist[i][j]:
                    viol += 1
                    if witness is None:
                        witness = (
                            _arrows_repr(elements[i]),
                            _arrows_repr(elements[j]),
                        )
        tested = n * n
    else:
        for a in elements:
            for b in elements:
                if _dist_int(a.inverse(), b.inverse(), w) != _dist_int(a, b, w):
                    viol += 1
                    if witness is None:
                        witness = (_arrows_repr(a), _arrows_repr(b))
        tested = n * n
    checks.append(
        _result(
            "inverse-invariance",
            viol == 0,
            tested=tested,
            exhaustive=exhaustive,
            violations=viol,
            witness=witness,
            note="fails off the full group; see inverse-invariance-corrected",
        )
    )

    viol = 0
    for i in full:
        for j in full:
            a, b = elements[i], elements[j]
            if _dist_int(a.inverse(), b.inverse(), w) != dist[i][j]:
                viol += 1
    checks.append(
        _result(
            "inverse-invariance-full-group",
            viol == 0,
            tested=len(full) ** 2,
            exhaustive=exhaustive,
        )
    )

    viol = 0
    for i in range(n):
        for j in range(n):
            a, b = elements[i], elements[j]
            lhs = _dist_int(a.inverse(), b.inverse(), w) - dist[i][j]
            rhs = sum(w[u] for u in a.range_units | b.range_units) - sum(
                w[u] for u in a.source_units | b.source_units
            )
            if lhs != rhs:
                viol += 1
    checks.append(
        _result(
            "inverse-invariance-corrected",
            viol == 0,
            tested=n * n,
            exhaustive=exhaustive,
        )
    )

    prod_idx = None
    if exhaustive:
        prod_idx = [[to_index(a * b) for b in elements] for a in elements]
    quad_total = n**4
    viol = 0
    if prod_idx is not None and quad_total <= budget.exhaustive_cap:
        rng_n = range(n)
        for ia in rng_n:
            prod_a = prod_idx[ia]
            dist_a = dist[ia]
            for ic in rng_n:
                d_ac = dist_a[ic]
                prod_c = prod_idx[ic]
                for ib in rng_n:
                    row = dist[prod_a[ib]]
                    dist_b = dist[ib]
                    for idd in rng_n:
                        bound = d_ac + dist_b[idd]
                        if bound >= total:
                            continue
                        if row[prod_c[idd]] > bound:
                            viol += 1
        tested, exh4 = quad_total, True
    else:
        tuples4, exh4, tested = _tuples(n, 4, budget)
        for ia, ib, ic, idd in tuples4:
            a, b, c, d = (elements[k] for k in (ia, ib, ic, idd))
            if _dist_int(a * b, c * d, w) > dist[ia][ic] + dist[ib][idd]:
                viol += 1
    checks.append(
        _result(
            "product-inequality",
            viol == 0,
            tested=tested,
            exhaustive=exh4,
            violations=viol,
        )
    )

    pair_iter, exh2, cnt2 = _tuples(n, 2, budget)
    viol = 0
    for ia, ib in pair_iter:
        a, b = elements[ia], elements[ib]
        lhs = _dist_int(a, b.inverse(), w)
        rhs = _dist_int(a, a * b * a, w) + _dist_int(b, b * a * b, w)
        if lhs > rhs:
            viol += 1
    checks.append(
        _result(
            "inverse-triangle",
            viol == 0,
            tested=cnt2,
            exhaustive=exh2,
            violations=viol,
        )
    )
    return checks


def suite_trace_distance(g: FiniteGroupoid, budget: SuiteBudget) -> list[CheckResult]:
    elements, exhaustive = _elements(g, "semigroup", budget)
    one = unit_bisection(g)
    checks = []

    bad = 0
    for a in elements:
        s = idempotent(g, a.source_units)
        if a.trace() != 1 - s.distance(one) - s.distance(a):
            bad += 1
    checks.append(
        _result(
            "trace-from-distance",
            bad == 0,
            tested=len(elements),
            exhaustive=exhaustive,
        )
    )

    pair_iter, exh2, cnt2 = _tuples(len(elements), 2, budget)
    bad = 0
    for ia, ib in pair_iter:
        a, b = elements[ia], elements[ib]
        sa = idempotent(g, a.source_units)
        sb = idempotent(g, b.source_units)
        rhs = sa.trace() + sb.trace() - (sa * sb).trace() - (b.inverse() * a).trace()
        if a.distance(b) != rhs:
            bad += 1
    checks.append(
        _result(
            "distance-from-trace",
            bad == 0,
            tested=cnt2,
            exhaustive=exh2,
        )
    )
    return checks


def suite_supports(g: FiniteGroupoid, budget: SuiteBudget) -> list[CheckResult]:
    group, exhaustive = _elements(g, "group", budget)
    malg, malg_exh = _elements(g, "malg", budget)
    one = unit_bisection(g)
    checks = []

    viol = 0
    for a in group:
        for b in group:
            left = a.supp_units == b.fix_units
            right = a.distance(b) == 1 and a.trace() + b.trace() == 1
            if left != right:
                viol += 1
    checks.append(
        _result(
            "supp-eq-fix",
            viol == 0,
            tested=len(group) ** 2,
            exhaustive=exhaustive,
        )
    )

    viol = 0
    for a in group:
        for b in group:
            left = not (a.supp_units & b.supp_units)
            right = a.distance(b) == one.distance(a) + one.distance(b)
            if left != right:
                viol += 1
    checks.append(
        _result(
            "disjoint-supports",
            viol == 0,
            tested=len(group) ** 2,
            exhaustive=exhaustive,
        )
    )

    viol = 0
    for a in group:
        inv = a.inverse()
        for b in group:
            if (a * b * inv).supp_units != act(a, b.supp_units):
                viol += 1
    checks.append(
        _result(
            "covariance",
            viol == 0,
            tested=len(group) ** 2,
            exhaustive=exhaustive,
        )
    )

    viol = 0
    for a in group:
        for units in malg:
            image = act(a, units)
            if g.mass(image) != g.mass(units):
                viol += 1
    checks.append(
        _result(
            "action-preserves-mass",
            viol == 0,
            tested=len(group) * len(malg),
            exhaustive=exhaustive and malg_exh,
        )
    )

    viol = 0
    for a in group:
        for units_a in malg:
            for units_b in malg:
                if units_a <= units_b and not act(a, units_a) <= act(a, units_b):
                    viol += 1
    checks.append(
        _result(
            "action-preserves-order",
            viol == 0,
            tested=len(group) * len(malg) ** 2,
            exhaustive=exhaustive and malg_exh,
        )
    )

    quad_iter, exh4, cnt4 = _tuples(len(group), 2, budget)
    viol = 0
    for ia, ib in quad_iter:
        ap, bp = group[ia], group[ib]
        binv = bp.inverse()
        for units_a in malg:
            for units_b in malg:
                left = (ap * idempotent(g, units_a)) * (bp * idempotent(g, units_b))
                pulled = act(binv, units_a)
                right = ap * bp * idempotent(g, frozenset(units_b) & pulled)
                if left != right:
                    viol += 1
    checks.append(
        _result(
            "corner-product-identity",
            viol == 0,
            tested=cnt4 * len(malg) ** 2,
            exhaustive=exh4 and malg_exh,
        )
    )
    return checks


def suite_extension(g: FiniteGroupoid, budget: SuiteBudget) -> list[CheckResult]:
    elements, exhaustive = _elements(g, "semigroup", budget)
    contains = 0
    full = 0
    idem = 0
    for gamma in elements:
        ext = extend_to_full_group(gamma)
        if not set(gamma.arrows) <= set(ext.arrows):
            contains += 1
        if not ext.is_full():
            full += 1
        if gamma.is_full() and ext != gamma:
            idem += 1
    n = len(elements)
    return [
        _result("extension-contains", contains == 0, tested=n, exhaustive=exhaustive),
        _result("extension-full", full == 0, tested=n, exhaustive=exhaustive),
        _result("extension-fixes-full-group", idem == 0, tested=n, exhaustive=exhaustive),
    ]


def suite_finite_index(
    g: FiniteGroupoid, sub_arrows, budget: SuiteBudget, system: TransversalSystem | None = None
) -> list[CheckResult]:
    from .constructions import find_transversals

    checks = []
    if system is None:
        system = find_transversals(g, sub_arrows)
    problems = system.violations()
    checks.append(
        _result(
            "transversal-partition",
            not problems,
            index=system.index,
            problems=problems,
        )
    )

    elements, exhaustive = _elements(g, "semigroup", budget)
    n_el = len(elements)
    blocks = {}
    block_failures = 0
    for a in elements:
        try:
            blocks[a] = block_components(a, system)
        except AssertionError:
            block_failures += 1
    checks.append(
        _result(
            "block-asserts",
            block_failures == 0,
            tested=n_el,
            exhaustive=exhaustive,
        )
    )

    viol = 0
    trace_viol = 0
    nn = system.index
    for a in elements:
        ba = blocks[a]
        for i in range(nn):
            if ba[i][i].trace() != a.trace():
                trace_viol += 1
    pair_iter, exh2, cnt2 = _tuples(n_el, 2, budget)
    for ia, ib in pair_iter:
        a, b = elements[ia], elements[ib]
        bab = _blocks(a * b, system)
        for i in range(nn):
            for l in range(nn):
                union = set()
                for j in range(nn):
                    union |= set((blocks[a][i][j] * blocks[b][j][l]).arrows)
                if union != set(bab[i][l].arrows):
                    viol += 1
    checks.append(
        _result(
            "block-identity",
            viol == 0,
            tested=cnt2 * nn * nn,
            exhaustive=exh2,
            violations=viol,
        )
    )
    checks.append(
        _result(
            "diagonal-trace",
            trace_viol == 0,
            tested=n_el * nn,
            exhaustive=exhaustive,
        )
    )

    lift = finite_index_map(system)
    report = check_embedding(lift, budget)
    checks.append(
        _result(
            "lift-exact-embedding",
            report.passed,
            label=report.label,
            element_count=report.element_count,
            exhaustive=report.exhaustive,
            max_product_deviation=report.max_product_deviation,
            max_trace_deviation=report.max_trace_deviation,
            max_distance_deviation=report.max_distance_deviation,
        )
    )
    return checks


def suite_rectangles(
    left: FiniteGroupoid, right: FiniteGroupoid, budget: SuiteBudget
) -> list[CheckResult]:
    ps = product_groupoid(left, right)
    elements, exhaustive = _elements(ps.groupoid, "semigroup", budget)
    id_left, id_right = identity_map(left), identity_map(right)
    checks = []

    invariant_viol = 0
    cover_viol = 0
    redecomp_viol = 0
    for phi in elements:
        u1 = rectangle_decompose(ps, phi, reverse=False)
        u2 = rectangle_decompose(ps, phi, reverse=True)
        if u1.violations() or u2.violations():
            invariant_viol += 1
        if u1.as_bisection() != phi or u2.as_bisection() != phi:
            cover_viol += 1
        img1 = product_embedding(id_left, id_right, u1)
        img2 = product_embedding(id_left, id_right, u2)
        if img1 != img2:
            redecomp_viol += 1
    n = len(elements)
    checks.append(
        _result("monoid-invariants", invariant_viol == 0, tested=n, exhaustive=exhaustive)
    )
    checks.append(
        _result("decomposition-covers", cover_viol == 0, tested=n, exhaustive=exhaustive)
    )
    checks.append(
        _result(
            "redecomposition-invariance",
            redecomp_viol == 0,
            tested=n,
            exhaustive=exhaustive,
        )
    )

    lefts, lexh = _elements(left, "semigroup", budget)
    rights, rexh = _elements(right, "semigroup", budget)
    viol = sum(
        1
        for a in lefts
        for b in rights
        if rectangle(ps, a, b).trace() != a.trace() * b.trace()
    )
    checks.append(
        _result(
            "rectangle-trace-multiplicative",
            viol == 0,
            tested=len(lefts) * len(rights),
            exhaustive=lexh and rexh,
        )
    )
    return checks


def suite_ladder(n: int, p_list, budget: SuiteBudget) -> list[CheckResult]:
    reports = ladder_profile(
        n,
        p_list,
        pair_cap=budget.exhaustive_cap,
        sample_count=budget.sample_count,
        seed=budget.seed,
    )
    checks = []
    for rep in reports:
        ok = rep.bound is None or rep.observed_sup <= rep.bound
        if rep.p % rep.n == 0:
            ok = ok and rep.observed_sup == 0
        checks.append(
            _result(
                f"ladder-{rep.n}-to-{rep.p}",
                ok,
                bound=rep.bound,
                observed_sup=rep.observed_sup,
                trace_sup=rep.trace_sup,
                pairs_tested=rep.pairs_tested,
                exhaustive=rep.exhaustive,
            )
        )
    return checks


SUITES = {
    "inverse-monoid": suite_inverse_monoid,
    "metric-prop": suite_metric,
    "trace-distance": suite_trace_distance,
    "supports": suite_supports,
    "extension": suite_extension,
    "finite-index": suite_finite_index,
    "rectangles": suite_rectangles,
    "ladder": suite_ladder,
}


def run_suite(name: str, budget: SuiteBudget | None = None, **params) -> SuiteResult:
    """Run a named invariant suite; deterministic given (params, seed, budget)."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; known: {sorted(SUITES)}")
    budget = budget or SuiteBudget()
    checks = SUITES[name](budget=budget, **params)
    printable = {}
    for key, value in params.items():
        if isinstance(value, FiniteGroupoid):
            printable[key] = f"groupoid[{value.n_units} units, {len(value.components)} components]"
        elif isinstance(value, frozenset):
            printable[key] = f"{len(value)} arrows"
        else:
            printable[key] = value
    return SuiteResult(name, printable, budget, tuple(checks))
