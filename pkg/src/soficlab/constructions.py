"""Constructive embeddings between full semigroups.

Each construction returns a semigroup map: the evaluator is total on the
domain's bisections, and the companion certificates (see verify) confirm
multiplicativity, trace preservation and isometry exactly on whatever set
is exercised. At this finite scale every construction is exact, not
approximate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from math import lcm
from typing import Callable

from .groupoid import (
    Arrow,
    FiniteGroupoid,
    ProductStructure,
    corner,
    convex_combination_with_maps,
    full_relation,
    product_groupoid,
    subgroupoid_as_groupoid,
    subgroupoid_violations,
)
from .semigroup import Bisection, idempotent
from . import symmetric


class NoTransversalError(RuntimeError):
    """Raised with an explanation when no transversal system exists."""


@dataclass(eq=False)
class SemigroupMap:
    domain: FiniteGroupoid
    codomain: FiniteGroupoid
    evaluator: Callable[[Bisection], Bisection]
    label: str

    def __call__(self, alpha: Bisection) -> Bisection:
        if alpha.groupoid != self.domain:
            raise ValueError("bisection not in the domain of this map")
        out = self.evaluator(alpha)
        if out.groupoid != self.codomain:
            raise ValueError(f"evaluator of {self.label} left its codomain")
        return out


def identity_map(g: FiniteGroupoid) -> SemigroupMap:
    return SemigroupMap(g, g, lambda a: a, "identity")


def compose_maps(outer: SemigroupMap, inner: SemigroupMap) -> SemigroupMap:
    if inner.codomain != outer.domain:
        raise ValueError("maps do not compose")
    return SemigroupMap(
        inner.domain,
        outer.codomain,
        lambda a: outer(inner(a)),
        f"{outer.label}.{inner.label}",
    )


# ---------------------------------------------------------------------------
# Connected pieces: [[Gamma x Y^2]] -> [[(Gamma x Y)^2]]


def embed_connected(g: FiniteGroupoid) -> SemigroupMap:
    """Isometric embedding of a connected groupoid's semigroup into partial
    injections on the set Gamma x Y.

    The arrow (gr, y_to, y_from) becomes the partial injection defined on
    Gamma x {y_from} sending (h, y_from) to (gr*h, y_to); points are indexed
    y*|Gamma| + h.
    """
    if len(g.components) != 1:
        raise ValueError("embed_connected needs a connected groupoid")
    comp = g.components[0]
    m, k = comp.group_order, comp.base_size
    codomain = full_relation(m * k)
    table = comp.table

    def point(h: int, y: int) -> int:
        return y * m + h

    def run(alpha: Bisection) -> Bisection:
        out = []
        for a in alpha.arrows:
            for h in range(m):
                out.append(
                    Arrow(0, 0, point(table[a.g][h], a.y_to), point(h, a.y_from))
                )
        return Bisection(codomain, tuple(out))

    return SemigroupMap(g, codomain, run, f"connected[{m}x{k}^2]")


# ---------------------------------------------------------------------------
# Convex combinations: route blocks of [q] to the component embeddings


def embed_convex(g: FiniteGroupoid, stage_maps=None) -> SemigroupMap:
    """Isometric embedding of a weighted multi-component groupoid.

    With q the lcm of the weight denominators, component i owns t_i*q of the
    q index blocks; on its blocks the map applies the component's stage
    embedding on that coordinate and the identity on the others. Stage maps
    default to embed_connected of each component on its own.
    """
    corners = [
        corner(g, [(i, y) for y in range(c.base_size)])
        for i, c in enumerate(g.components)
    ]
    if stage_maps is None:
        stage_maps = [embed_connected(cr.groupoid) for cr in corners]
    if len(stage_maps) != len(g.components):
        raise ValueError("one stage map per component required")
    sizes = []
    for cr, stage in zip(corners, stage_maps):
        if stage.domain != cr.groupoid:
            raise ValueError("stage map domain is not the standalone component")
        cod = stage.codomain
        if len(cod.components) != 1 or cod.components[0].group_order != 1:
            raise ValueError("stage codomain must be a full relation")
        sizes.append(cod.components[0].base_size)

    weights = [c.weight for c in g.components]
    q = lcm(*(w.denominator for w in weights))
    counts = [int(w * q) for w in weights]
    starts = []
    acc = 0
    for cnt in counts:
        starts.append(acc)
        acc += cnt
    block_owner = {}
    for i, (start, cnt) in enumerate(zip(starts, counts)):
        for j in range(start, start + cnt):
            block_owner[j] = i

    stride = 1
    for s in sizes:
        stride *= s
    codomain = full_relation(q * stride)

    def encode(j: int, xs) -> int:
        v = j
        for s, x in zip(sizes, xs):
            v = v * s + x
        return v

    def run(alpha: Bisection) -> Bisection:
        stage_images = []
        for i, (cr, stage) in enumerate(zip(corners, stage_maps)):
            part = [cr.to_corner(a) for a in alpha.arrows if a.comp == i]
            img = stage(Bisection(cr.groupoid, tuple(part)))
            stage_images.append({a.y_from: a.y_to for a in img.arrows})
        out = []
        for j in range(q):
            i = block_owner[j]
            img = stage_images[i]
            for xs in iproduct(*(range(s) for s in sizes)):
                x = xs[i]
                if x in img:
                    ys = list(xs)
                    ys[i] = img[x]
                    out.append(Arrow(0, 0, encode(j, ys), encode(j, xs)))
        return Bisection(codomain, tuple(out))

    return SemigroupMap(g, codomain, run, f"convex[q={q}]")


def _aligned_components(a: FiniteGroupoid, b: FiniteGroupoid):
    """Match components of two groupoids that differ only in weights."""
    key = lambda c: (c.group_order, c.base_size, c.table)
    ia = sorted(range(len(a.components)), key=lambda i: key(a.components[i]))
    ib = sorted(range(len(b.components)), key=lambda i: key(b.components[i]))
    if len(ia) != len(ib):
        raise ValueError("incompatible domains: different component counts")
    for x, y in zip(ia, ib):
        if key(a.components[x]) != key(b.components[y]):
            raise ValueError("incompatible domains: component shapes differ")
    return ia, ib


def embed_convex_pair(
    phi_nu: SemigroupMap, phi_rho: SemigroupMap, t: Fraction
) -> SemigroupMap:
    """Combine embeddings of one groupoid carried with two measures.

    The domains must agree up to component weights; the blended domain takes
    weights t*nu + (1-t)*rho, the codomain is the (t, 1-t) convex combination
    of the two codomains, and the image is the union of both images there.
    """
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise ValueError("t must lie in [0, 1]")
    if t == 1:
        return phi_nu
    if t == 0:
        return phi_rho
    gn, gr = phi_nu.domain, phi_rho.domain
    order_n, order_r = _aligned_components(gn, gr)

    from .groupoid import Component, make_groupoid, _canonical_order

    blended = []
    for x, y in zip(order_n, order_r):
        cn, crho = gn.components[x], gr.components[y]
        blended.append(
            Component(cn.table, cn.base_size, t * cn.weight + (1 - t) * crho.weight)
        )
    position = _canonical_order(blended)
    domain = make_groupoid(blended)
    to_nu = {position[k]: order_n[k] for k in range(len(blended))}
    to_rho = {position[k]: order_r[k] for k in range(len(blended))}

    codomain, (map_nu, map_rho) = convex_combination_with_maps(
        [(t, phi_nu.codomain), (1 - t, phi_rho.codomain)]
    )

    def run(alpha: Bisection) -> Bisection:
        a_nu = Bisection(gn, tuple(a._replace(comp=to_nu[a.comp]) for a in alpha))
        a_rho = Bisection(gr, tuple(a._replace(comp=to_rho[a.comp]) for a in alpha))
        img_nu = phi_nu(a_nu)
        img_rho = phi_rho(a_rho)
        out = [a._replace(comp=map_nu[a.comp]) for a in img_nu]
        out += [a._replace(comp=map_rho[a.comp]) for a in img_rho]
        return Bisection(codomain, tuple(out))

    return SemigroupMap(domain, codomain, run, f"pair[t={t}]")


# ---------------------------------------------------------------------------
# Corner restriction of a map


def restrict_almost_morphism(theta: SemigroupMap, units) -> SemigroupMap:
    """Restrict a semigroup map to the corner over a unit subset.

    The restricted map sends a corner bisection to e*theta(lift)*e with
    e = theta(1_corner), landing in the corner of the codomain over the
    units of e; both corners carry normalized measures.
    """
    h = corner(theta.domain, units)
    one_h = idempotent(theta.domain, h.units)
    e = theta(one_h)
    if not e.is_idempotent():
        raise ValueError("theta(1_H) is not idempotent; cannot restrict")
    if e.trace() == 0:
        raise ValueError("zero-trace corner: theta(1_H) is null")
    f = corner(theta.codomain, e.fix_units)

    def run(beta: Bisection) -> Bisection:
        lifted = Bisection(
            theta.domain, tuple(h.from_corner(a) for a in beta.arrows)
        )
        sandwiched = e * theta(lifted) * e
        out = [f.to_corner(a) for a in sandwiched.arrows]
        if any(a is None for a in out):
            raise AssertionError("sandwiched image escaped the codomain corner")
        return Bisection(f.groupoid, tuple(out))

    return SemigroupMap(h.groupoid, f.groupoid, run, f"corner.{theta.label}")


def corner_domain(theta: SemigroupMap, units):
    """The corner structure a restricted map acts through (for tests/tools)."""
    return corner(theta.domain, units)


# ---------------------------------------------------------------------------
# Finite index: transversals, block matrices and the lift


@dataclass(frozen=True)
class TransversalSystem:
    """Full-group elements whose translates of a unit-full subgroupoid
    partition the ambient groupoid."""

    groupoid: FiniteGroupoid
    sub_arrows: frozenset
    transversals: tuple

    @property
    def index(self) -> int:
        return len(self.transversals)

    def coset(self, psi: Bisection) -> frozenset:
        g = self.groupoid
        out = set()
        for p in psi.arrows:
            for h in self.sub_arrows:
                ph = g.mul(p, h)
                if ph is not None:
                    out.add(ph)
        return frozenset(out)

    def violations(self) -> list[str]:
        g = self.groupoid
        problems = subgroupoid_violations(g, self.sub_arrows)
        units_present = {a.source for a in self.sub_arrows if a.is_unit()}
        if units_present != set(g.units()):
            problems.append("subgroupoid is not unit-full")
        if problems:
            return problems
        for i, psi in enumerate(self.transversals):
            if not psi.is_full():
                problems.append(f"transversal {i} is not a full-group element")
        cover = []
        for psi in self.transversals:
            cover.append(self.coset(psi))
        seen = set()
        for i, block in enumerate(cover):
            if seen & block:
                problems.append(f"translate {i} overlaps an earlier one")
            seen |= block
        if seen != set(g.arrows()):
            problems.append("translates do not cover the groupoid")
        return problems


def unit_subgroupoid(g: FiniteGroupoid) -> frozenset:
    return frozenset(g.unit_arrow(u) for u in g.units())


def group_subgroupoid(g: FiniteGroupoid, elements) -> frozenset:
    """Arrow set of a subgroup of a one-unit group groupoid."""
    if len(g.components) != 1 or g.components[0].base_size != 1:
        raise ValueError("group_subgroupoid needs a one-unit group groupoid")
    return frozenset(Arrow(0, e, 0, 0) for e in elements)


def find_transversals(g: FiniteGroupoid, sub_arrows) -> TransversalSystem:
    """Backtracking search for left transversals of a unit-full subgroupoid.

    Arrows fall into left translate classes a*H, each class sitting over a
    single range unit; a system exists iff the classes can be arranged into
    rows picking one class per range unit with representative sources forming
    a bijection on units. Classes and sources are tried lowest-first, so the
    result is deterministic.
    """
    sub_arrows = frozenset(sub_arrows)
    problems = subgroupoid_violations(g, sub_arrows)
    if problems:
        raise ValueError(f"not a subgroupoid: {problems[0]}")
    units_present = {a.source for a in sub_arrows if a.is_unit()}
    units = sorted(g.units())
    if units_present != set(units):
        raise ValueError("subgroupoid must contain every unit")

    coset_of = {}
    cosets = []
    for a in sorted(g.arrows()):
        if a in coset_of:
            continue
        block = set()
        for h in sub_arrows:
            ah = g.mul(a, h)
            if ah is not None:
                block.add(ah)
        block = frozenset(block)
        idx = len(cosets)
        cosets.append(block)
        for b in block:
            coset_of[b] = idx

    pools = {u: [] for u in units}
    for idx, block in enumerate(cosets):
        pools[min(block).range].append(idx)
    sizes = {u: len(pool) for u, pool in pools.items()}
    n = sizes[units[0]]
    if any(s != n for s in sizes.values()):
        raise NoTransversalError(
            f"left translate counts per unit differ ({sizes}); no partition exists"
        )

    positions = [(i, u) for i in range(n) for u in units]
    used_cosets: set[int] = set()
    row_sources: list[set] = [set() for _ in range(n)]
    chosen: list[Arrow | None] = [None] * len(positions)

    def candidates(k: int):
        i, u = positions[k]
        for ci in pools[u]:
            if ci in used_cosets:
                continue
            by_source = {}
            for a in sorted(cosets[ci]):
                by_source.setdefault(a.source, a)
            for source, rep in sorted(by_source.items()):
                if source not in row_sources[i]:
                    yield ci, source, rep

    def search(k: int) -> bool:
        if k == len(positions):
            return True
        i, _ = positions[k]
        for ci, source, rep in candidates(k):
            used_cosets.add(ci)
            row_sources[i].add(source)
            chosen[k] = rep
            if search(k + 1):
                return True
            used_cosets.discard(ci)
            row_sources[i].discard(source)
            chosen[k] = None
        return False

    if not search(0):
        raise NoTransversalError(
            f"no partition into {n} full-group translates exists"
        )

    transversals = []
    per_row = len(units)
    for i in range(n):
        arrows = chosen[i * per_row : (i + 1) * per_row]
        transversals.append(Bisection(g, tuple(arrows)))
    system = TransversalSystem(g, sub_arrows, tuple(transversals))
    assert not system.violations()
    return system


def _blocks(alpha: Bisection, system: TransversalSystem):
    g = alpha.groupoid
    sub = system.sub_arrows
    out = []
    for psi_i in system.transversals:
        row = []
        inv_i = psi_i.inverse()
        for psi_j in system.transversals:
            full = inv_i * alpha * psi_j
            row.append(Bisection(g, tuple(a for a in full.arrows if a in sub)))
        out.append(row)
    return out


def block_components(alpha: Bisection, system: TransversalSystem):
    """The transversal block matrix alpha_{i,j} = psi_i^-1 alpha psi_j cap H.

    Checks the exchange law alpha_{i,j}^-1 = (alpha^-1)_{j,i} and the
    disjointness that makes the lift well-defined: within a column the block
    sources are pairwise disjoint, within a row the block ranges are.
    """
    blocks = _blocks(alpha, system)
    co_blocks = _blocks(alpha.inverse(), system)
    n = system.index
    for i in range(n):
        for j in range(n):
            if blocks[i][j].inverse() != co_blocks[j][i]:
                raise AssertionError(f"block exchange law fails at ({i},{j})")
    for j in range(n):
        for i in range(n):
            for k in range(i + 1, n):
                if blocks[i][j].source_units & blocks[k][j].source_units:
                    raise AssertionError(
                        f"column {j}: blocks {i} and {k} share a source"
                    )
    for i in range(n):
        for j in range(n):
            for l in range(j + 1, n):
                if blocks[i][j].range_units & blocks[i][l].range_units:
                    raise AssertionError(
                        f"row {i}: blocks {j} and {l} share a range"
                    )
    return blocks


@dataclass(eq=False)
class FiniteIndexData:
    """Everything needed to evaluate the finite-index lift."""

    system: TransversalSystem
    sub_groupoid: FiniteGroupoid
    to_sub: Callable[[Bisection], Bisection]
    phi: SemigroupMap
    product: ProductStructure
    relation: FiniteGroupoid


def finite_index_data(system: TransversalSystem, phi: SemigroupMap | None = None) -> FiniteIndexData:
    g = system.groupoid
    dec, raw_ids = subgroupoid_as_groupoid(g, system.sub_arrows)
    sub_g = dec.groupoid

    def to_sub(beta: Bisection) -> Bisection:
        return Bisection(sub_g, tuple(dec.iso[raw_ids[a]] for a in beta.arrows))

    if phi is None:
        phi = identity_map(sub_g)
    if phi.domain != sub_g:
        raise ValueError("phi must be defined on the subgroupoid's semigroup")
    relation = full_relation(system.index)
    ps = product_groupoid(phi.codomain, relation)
    return FiniteIndexData(system, sub_g, to_sub, phi, ps, relation)


def finite_index_lift(
    alpha: Bisection,
    system: TransversalSystem,
    phi: SemigroupMap | None = None,
    data: FiniteIndexData | None = None,
) -> Bisection:
    """Xi(alpha) = union over (i,j) of phi(alpha_{i,j}) x E_{i,j}.

    A source or range collision in the union means the transversal system is
    invalid; that is surfaced as NoTransversalError.
    """
    if data is None:
        data = finite_index_data(system, phi)
    blocks = _blocks(alpha, system)
    arrows = []
    for i in range(system.index):
        for j in range(system.index):
            img = data.phi(data.to_sub(blocks[i][j]))
            e_ij = Arrow(0, 0, i, j)
            for a in img.arrows:
                arrows.append(data.product.pair_arrow(a, e_ij))
    try:
        return Bisection(data.product.groupoid, tuple(arrows))
    except ValueError as exc:
        raise NoTransversalError(f"lift not well-defined: {exc}") from exc


def finite_index_map(system: TransversalSystem, phi: SemigroupMap | None = None) -> SemigroupMap:
    data = finite_index_data(system, phi)
    return SemigroupMap(
        system.groupoid,
        data.product.groupoid,
        lambda a: finite_index_lift(a, system, data=data),
        f"index[{system.index}].{data.phi.label}",
    )


# ---------------------------------------------------------------------------
# Products: the rectangle monoid and the tensor of two maps


def rectangle(ps: ProductStructure, alpha: Bisection, beta: Bisection) -> Bisection:
    """The rectangle alpha x beta inside the product groupoid."""
    if alpha.groupoid != ps.left or beta.groupoid != ps.right:
        raise ValueError("rectangle factors must live on the product's factors")
    return Bisection(
        ps.groupoid,
        tuple(ps.pair_arrow(a, b) for a in alpha.arrows for b in beta.arrows),
    )


@dataclass(frozen=True)
class RectangleUnion:
    """Union of rectangles with pairwise source/range factor disjointness."""

    product: ProductStructure
    parts: tuple  # of (Bisection, Bisection) pairs

    def violations(self) -> list[str]:
        problems = []
        parts = self.parts
        for i in range(len(parts)):
            for j in range(i + 1, len(parts)):
                ai, bi = parts[i]
                aj, bj = parts[j]
                if (ai.source_units & aj.source_units) and (
                    bi.source_units & bj.source_units
                ):
                    problems.append(f"source rectangles {i} and {j} overlap")
                if (ai.range_units & aj.range_units) and (
                    bi.range_units & bj.range_units
                ):
                    problems.append(f"range rectangles {i} and {j} overlap")
        return problems

    def as_bisection(self) -> Bisection:
        arrows = []
        for a, b in self.parts:
            arrows.extend(rectangle(self.product, a, b).arrows)
        return Bisection(self.product.groupoid, tuple(arrows))


def rectangle_decompose(
    ps: ProductStructure, phi: Bisection, reverse: bool = False
) -> RectangleUnion:
    """Write a product bisection as a rectangle union in the monoid M.

    Singleton rectangles always qualify; shared-factor pairs are then merged
    greedily while the union stays a rectangle list with the disjointness
    invariants. reverse flips the scan order, giving an independent
    decomposition of the same element for invariance checks.
    """
    if phi.groupoid != ps.groupoid:
        raise ValueError("bisection does not live on this product")
    arrows = sorted(phi.arrows, reverse=reverse)
    parts = []
    for c in arrows:
        a, b = ps.split_arrow(c)
        parts.append((Bisection(ps.left, (a,)), Bisection(ps.right, (b,))))

    def try_union(x: Bisection, y: Bisection) -> Bisection | None:
        try:
            return Bisection(x.groupoid, tuple(set(x.arrows) | set(y.arrows)))
        except ValueError:
            return None

    changed = True
    while changed:
        changed = False
        for i in range(len(parts)):
            for j in range(i + 1, len(parts)):
                ai, bi = parts[i]
                aj, bj = parts[j]
                merged = None
                if ai == aj:
                    wide = try_union(bi, bj)
                    if wide is not None:
                        merged = (ai, wide)
                elif bi == bj:
                    tall = try_union(ai, aj)
                    if tall is not None:
                        merged = (tall, bi)
                if merged is None:
                    continue
                candidate = parts[:i] + [merged] + parts[i + 1 : j] + parts[j + 1 :]
                trial = RectangleUnion(ps, tuple(candidate))
                if not trial.violations():
                    parts = candidate
                    changed = True
                    break
            if changed:
                break

    union = RectangleUnion(ps, tuple(parts))
    assert not union.violations()
    assert union.as_bisection() == phi
    return union


def product_embedding(
    phi: SemigroupMap, psi: SemigroupMap, u: RectangleUnion
) -> Bisection:
    """Apply phi x psi to a rectangle union: map each factor and reassemble.

    Trace preservation is asserted on the factors actually used; the result
    does not depend on which decomposition of the same bisection is given.
    """
    if u.product.left != phi.domain or u.product.right != psi.domain:
        raise ValueError("rectangle union does not match the map domains")
    problems = u.violations()
    if problems:
        raise ValueError(f"not in the rectangle monoid: {problems[0]}")
    out_ps = product_groupoid(phi.codomain, psi.codomain)
    arrows = []
    for a, b in u.parts:
        fa, fb = phi(a), psi(b)
        assert fa.trace() == a.trace() and fb.trace() == b.trace()
        arrows.extend(rectangle(out_ps, fa, fb).arrows)
    return Bisection(out_ps.groupoid, tuple(arrows))


# ---------------------------------------------------------------------------
# Ladder embeddings as semigroup maps


def _pin_map(n: int, p: int, f, label: str) -> SemigroupMap:
    dom, cod = full_relation(n), full_relation(p)

    def run(alpha: Bisection) -> Bisection:
        return symmetric.to_bisection(f(symmetric.from_bisection(alpha)), cod)

    return SemigroupMap(dom, cod, run, label)


def step_map(n: int) -> SemigroupMap:
    return _pin_map(n, n + 1, symmetric.embed_step, f"step[{n}->{n + 1}]")


def multiple_map(n: int, k: int) -> SemigroupMap:
    return _pin_map(
        n, n * k, lambda a: symmetric.embed_multiple(a, k), f"multiple[{n}x{k}]"
    )


def general_map(n: int, p: int) -> SemigroupMap:
    return _pin_map(
        n, p, lambda a: symmetric.embed_general(a, p), f"ladder[{n}->{p}]"
    )
