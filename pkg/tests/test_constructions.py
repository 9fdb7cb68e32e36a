from fractions import Fraction

import pytest

from soficlab import cayley
from soficlab.groupoid import (
    Arrow,
    connected_groupoid,
    convex_combination,
    full_relation,
    group_groupoid,
    point_groupoid,
    product_groupoid,
)
from soficlab.constructions import (
    NoTransversalError,
    TransversalSystem,
    block_components,
    embed_connected,
    embed_convex,
    embed_convex_pair,
    find_transversals,
    finite_index_lift,
    finite_index_map,
    general_map,
    group_subgroupoid,
    identity_map,
    product_embedding,
    rectangle,
    rectangle_decompose,
    restrict_almost_morphism,
    step_map,
    unit_subgroupoid,
)
from soficlab.semigroup import (
    bisection,
    empty_bisection,
    enumerate_semigroup,
    idempotent,
    unit_bisection,
)

HALF = Fraction(1, 2)
Z2 = group_groupoid(cayley.cyclic(2))
Z4 = group_groupoid(cayley.cyclic(4))
S3 = group_groupoid(cayley.symmetric(3))
REL2 = full_relation(2)
Z2Y2 = connected_groupoid(cayley.cyclic(2), 2)


def pin(g, mapping):
    return bisection(g, [Arrow(0, 0, y, x) for x, y in mapping.items()])


def exact_on(m, elements):
    elements = list(elements)
    images = {a: m(a) for a in elements}
    if len(set(images.values())) != len(elements):
        return False
    for a in elements:
        if images[a].trace() != a.trace():
            return False
        for b in elements:
            if m(a * b) != images[a] * images[b]:
                return False
            if images[a].distance(images[b]) != a.distance(b):
                return False
    return True


class TestEmbedConnected:
    def test_group_nonunit_becomes_swap(self):
        m = embed_connected(Z2)
        image = m(bisection(Z2, [Arrow(0, 1, 0, 0)]))
        assert {a.y_from: a.y_to for a in image.arrows} == {0: 1, 1: 0}
        assert image.trace() == 0

    def test_unit_to_identity(self):
        m = embed_connected(Z2Y2)
        assert m(unit_bisection(Z2Y2)) == unit_bisection(m.codomain)

    def test_point_indexing(self):
        # the arrow (e, 1 <- 0) moves both group levels of base point 0
        m = embed_connected(Z2Y2)
        image = m(bisection(Z2Y2, [Arrow(0, 0, 1, 0)]))
        assert {a.y_from: a.y_to for a in image.arrows} == {0: 2, 1: 3}
        assert image.distance(unit_bisection(m.codomain)) == 1

    def test_exact_embedding_exhaustive(self):
        for g in (Z2, Z2Y2, group_groupoid(cayley.cyclic(3))):
            assert exact_on(embed_connected(g), enumerate_semigroup(g))

    def test_rejects_disconnected(self):
        g = convex_combination([(HALF, Z2), (HALF, point_groupoid())])
        with pytest.raises(ValueError):
            embed_connected(g)


class TestEmbedConvex:
    def test_single_component_reduces(self):
        m = embed_convex(Z2Y2)
        assert m.codomain == embed_connected(Z2Y2).codomain
        assert exact_on(m, enumerate_semigroup(Z2Y2))

    def test_half_half_mixture(self):
        g = convex_combination([(HALF, Z2), (HALF, point_groupoid())])
        m = embed_convex(g)
        assert m.codomain == full_relation(4)
        assert exact_on(m, enumerate_semigroup(g))
        # the Z2 nonunit paired with nothing has trace 0
        comp = next(i for i, c in enumerate(g.components) if c.group_order == 2)
        alpha = bisection(g, [Arrow(comp, 1, 0, 0)])
        assert m(alpha).trace() == 0

    def test_proportional_blocks(self):
        g = convex_combination([(Fraction(1, 3), Z2), (Fraction(2, 3), point_groupoid())])
        m = embed_convex(g)
        assert m.codomain == full_relation(6)  # q = 3 blocks of size 2
        assert exact_on(m, enumerate_semigroup(g))

    def test_three_components(self):
        g = convex_combination(
            [
                (Fraction(1, 6), Z2),
                (Fraction(1, 3), point_groupoid()),
                (HALF, full_relation(2)),
            ]
        )
        assert exact_on(embed_convex(g), enumerate_semigroup(g))


class TestEmbedConvexPair:
    def test_t_one_returns_first(self):
        m = embed_convex(Z2Y2)
        assert embed_convex_pair(m, m, Fraction(1)) is m

    def test_identity_doubling_preserves_trace(self):
        mid = identity_map(REL2)
        m = embed_convex_pair(mid, mid, HALF)
        assert m.domain == REL2
        for a in enumerate_semigroup(REL2):
            assert m(a).trace() == a.trace()
            assert m(a).is_idempotent() == a.is_idempotent()
        assert exact_on(m, enumerate_semigroup(REL2))

    def test_reweighted_measures_blend(self):
        # same groupoid shape, two different measures
        nu = convex_combination([(Fraction(1, 4), Z2), (Fraction(3, 4), point_groupoid())])
        rho = convex_combination([(Fraction(3, 4), Z2), (Fraction(1, 4), point_groupoid())])
        m = embed_convex_pair(embed_convex(nu), embed_convex(rho), Fraction(1, 3))
        blended = m.domain
        assert sorted(c.weight for c in blended.components) == sorted(
            [Fraction(1, 3) * Fraction(1, 4) + Fraction(2, 3) * Fraction(3, 4),
             Fraction(1, 3) * Fraction(3, 4) + Fraction(2, 3) * Fraction(1, 4)]
        )
        for a in enumerate_semigroup(blended):
            assert m(a).trace() == a.trace()
        assert exact_on(m, enumerate_semigroup(blended))

    def test_incompatible_domains_rejected(self):
        with pytest.raises(ValueError):
            embed_convex_pair(embed_convex(Z2), embed_convex(REL2), HALF)


class TestRestrictAlmostMorphism:
    def test_whole_space_unchanged_values(self):
        theta = identity_map(REL2)
        m = restrict_almost_morphism(theta, list(REL2.units()))
        assert m.domain == REL2
        for a in enumerate_semigroup(REL2):
            assert m(a).trace() == a.trace()

    def test_corner_normalizes_trace(self):
        theta = identity_map(REL2)
        m = restrict_almost_morphism(theta, [(0, 0)])
        one_corner = unit_bisection(m.domain)
        assert one_corner.trace() == 1
        assert m(one_corner).trace() == 1

    def test_normalized_trace_formula(self):
        # tr_H(a) = tr(a) / tr(1_H) under the identity map
        theta = identity_map(full_relation(3))
        units = [(0, 0), (0, 1)]
        m = restrict_almost_morphism(theta, units)
        one_h = idempotent(theta.domain, units)
        for a in enumerate_semigroup(m.domain):
            lifted_trace = m(a).trace() * one_h.trace()
            assert lifted_trace == a.trace() * one_h.trace()
        assert exact_on(m, enumerate_semigroup(m.domain))

    def test_zero_trace_corner_rejected(self):
        g = REL2
        collapse = lambda a: empty_bisection(g)
        from soficlab.constructions import SemigroupMap

        theta = SemigroupMap(g, g, collapse, "collapse")
        with pytest.raises(ValueError):
            restrict_almost_morphism(theta, [(0, 0)])

    def test_non_idempotent_image_rejected(self):
        g = REL2
        swap = pin(g, {0: 1, 1: 0})
        from soficlab.constructions import SemigroupMap

        theta = SemigroupMap(g, g, lambda a: swap, "const-swap")
        with pytest.raises(ValueError):
            restrict_almost_morphism(theta, [(0, 0)])


class TestFindTransversals:
    def test_whole_groupoid_is_index_one(self):
        system = find_transversals(REL2, frozenset(REL2.arrows()))
        assert system.index == 1
        assert system.transversals[0] == unit_bisection(REL2)

    def test_z4_over_z2(self):
        system = find_transversals(Z4, group_subgroupoid(Z4, [0, 2]))
        assert system.index == 2
        got = [sorted(a.g for a in psi.arrows) for psi in system.transversals]
        assert got == [[0], [1]]

    def test_full_relation_over_units(self):
        system = find_transversals(REL2, unit_subgroupoid(REL2))
        assert system.index == 2
        assert system.transversals[0] == unit_bisection(REL2)
        assert system.transversals[1] == pin(REL2, {0: 1, 1: 0})

    def test_s3_over_z3(self):
        system = find_transversals(S3, group_subgroupoid(S3, [0, 3, 4]))
        assert system.index == 2
        assert sorted(a.g for a in system.transversals[1].arrows) == [1]

    def test_not_unit_full_rejected(self):
        with pytest.raises(ValueError):
            find_transversals(REL2, frozenset([REL2.unit_arrow((0, 0))]))

    def test_no_system_reported(self):
        # the 3-element rotation subgroup has no 2-element partition in S3?
        # use instead a subgroupoid of uneven coset counts: units inside Z2
        with pytest.raises(NoTransversalError) as err:
            find_transversals(
                convex_combination([(HALF, Z2), (HALF, point_groupoid())]),
                unit_subgroupoid(convex_combination([(HALF, Z2), (HALF, point_groupoid())])),
            )
        assert "differ" in str(err.value)


class TestBlockComponents:
    def test_unit_blocks_are_diagonal(self):
        system = find_transversals(Z4, group_subgroupoid(Z4, [0, 2]))
        blocks = block_components(unit_bisection(Z4), system)
        assert blocks[0][0] == unit_bisection(Z4)
        assert blocks[1][1] == unit_bisection(Z4)
        assert len(blocks[0][1]) == len(blocks[1][0]) == 0

    def test_z4_generator_blocks(self):
        system = find_transversals(Z4, group_subgroupoid(Z4, [0, 2]))
        blocks = block_components(bisection(Z4, [Arrow(0, 1, 0, 0)]), system)
        grid = [[sorted(a.g for a in blocks[i][j].arrows) for j in range(2)] for i in range(2)]
        assert grid == [[[], [2]], [[0], []]]

    def test_z4_square_blocks_diagonal(self):
        system = find_transversals(Z4, group_subgroupoid(Z4, [0, 2]))
        blocks = block_components(bisection(Z4, [Arrow(0, 2, 0, 0)]), system)
        grid = [[sorted(a.g for a in blocks[i][j].arrows) for j in range(2)] for i in range(2)]
        assert grid == [[[2], []], [[], [2]]]


class TestFiniteIndexLift:
    @pytest.fixture(params=["z4", "rel2", "s3"])
    def setup(self, request):
        cases = {
            "z4": (Z4, group_subgroupoid(Z4, [0, 2])),
            "rel2": (REL2, unit_subgroupoid(REL2)),
            "s3": (S3, group_subgroupoid(S3, [0, 3, 4])),
        }
        g, sub = cases[request.param]
        return g, find_transversals(g, sub)

    def test_lift_is_exact_embedding(self, setup):
        g, system = setup
        assert exact_on(finite_index_map(system), enumerate_semigroup(g))

    def test_unit_lifts_to_unit(self, setup):
        g, system = setup
        m = finite_index_map(system)
        assert m(unit_bisection(g)) == unit_bisection(m.codomain)

    def test_z4_worked_example(self):
        system = find_transversals(Z4, group_subgroupoid(Z4, [0, 2]))
        m = finite_index_map(system)
        a = bisection(Z4, [Arrow(0, 1, 0, 0)])
        a2 = bisection(Z4, [Arrow(0, 2, 0, 0)])
        assert m(a).trace() == 0
        assert m(a) * m(a) == m(a2)

    def test_rel2_swap_lifts_off_diagonal(self):
        system = find_transversals(REL2, unit_subgroupoid(REL2))
        m = finite_index_map(system)
        image = m(pin(REL2, {0: 1, 1: 0}))
        # the N^2-relation part of every image arrow is off-diagonal
        data_pairs = {(a.y_to % 2, a.y_from % 2) for a in image.arrows}
        assert data_pairs == {(0, 1), (1, 0)}

    def test_invalid_system_caught(self):
        # a deliberately broken "system": the identity twice
        bogus = TransversalSystem(
            REL2, unit_subgroupoid(REL2), (unit_bisection(REL2), unit_bisection(REL2))
        )
        assert bogus.violations()
        with pytest.raises(NoTransversalError):
            finite_index_lift(unit_bisection(REL2), bogus)


class TestRectangles:
    PS = product_groupoid(REL2, REL2)

    def test_unit_is_single_rectangle(self):
        u = rectangle_decompose(self.PS, unit_bisection(self.PS.groupoid))
        assert len(u.parts) == 1
        assert u.parts[0] == (unit_bisection(REL2), unit_bisection(REL2))

    def test_pure_rectangle_remerges(self):
        swap = pin(REL2, {0: 1, 1: 0})
        phi = rectangle(self.PS, swap, unit_bisection(REL2))
        u = rectangle_decompose(self.PS, phi)
        assert len(u.parts) == 1
        assert u.parts[0] == (swap, unit_bisection(REL2))

    def test_mixed_element_needs_two_rectangles(self):
        swap = pin(REL2, {0: 1, 1: 0})
        part1 = rectangle(self.PS, pin(REL2, {0: 0}), pin(REL2, {0: 0}))
        part2 = rectangle(self.PS, pin(REL2, {1: 1}), swap)
        phi = bisection(self.PS.groupoid, part1.arrows + part2.arrows)
        u = rectangle_decompose(self.PS, phi)
        assert len(u.parts) >= 2
        assert not u.violations()
        assert u.as_bisection() == phi

    def test_every_product_bisection_decomposes(self):
        for phi in enumerate_semigroup(self.PS.groupoid):
            u = rectangle_decompose(self.PS, phi)
            assert not u.violations()
            assert u.as_bisection() == phi

    def test_redecomposition_invariance(self):
        mid = identity_map(REL2)
        for phi in enumerate_semigroup(self.PS.groupoid):
            u1 = rectangle_decompose(self.PS, phi, reverse=False)
            u2 = rectangle_decompose(self.PS, phi, reverse=True)
            assert product_embedding(mid, mid, u1) == product_embedding(mid, mid, u2)

    def test_trace_multiplicative_on_rectangles(self):
        for a in enumerate_semigroup(REL2):
            for b in enumerate_semigroup(REL2):
                assert rectangle(self.PS, a, b).trace() == a.trace() * b.trace()

    def test_product_embedding_with_real_stages(self):
        phi_m = embed_connected(Z2)
        psi_m = identity_map(REL2)
        ps = product_groupoid(Z2, REL2)
        nonunit = bisection(Z2, [Arrow(0, 1, 0, 0)])
        swap = pin(REL2, {0: 1, 1: 0})
        u = rectangle_decompose(ps, rectangle(ps, nonunit, swap))
        image = product_embedding(phi_m, psi_m, u)
        assert image.trace() == nonunit.trace() * swap.trace()


class TestLadderMaps:
    def test_step_map_multiplicative_not_isometric(self):
        m = step_map(2)
        elements = list(enumerate_semigroup(m.domain))
        assert all(m(a * b) == m(a) * m(b) for a in elements for b in elements)
        one = unit_bisection(m.domain)
        assert abs(m(one).trace() - one.trace()) == Fraction(1, 3)

    def test_general_map_exact_at_multiples(self):
        m = general_map(2, 6)
        assert exact_on(m, enumerate_semigroup(m.domain))
