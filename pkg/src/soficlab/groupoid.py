"""Finite pmp groupoids.

The canonical in-memory form is a weighted disjoint union of connected pieces,
each a finite group crossed with the full equivalence relation on a finite
base set. Raw composition tables exist only at the ingestion boundary: they
are validated against the groupoid axioms by exhaustion and decomposed into
the normal form together with an explicit isomorphism.

All measures are exact rationals. Every value here is immutable after
construction and every operation is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, NamedTuple

from . import cayley


class MalformedInputError(ValueError):
    """Structurally broken input (dangling ids, bad shapes), as opposed to
    a well-formed table that violates the groupoid axioms."""


class PmpViolationError(ValueError):
    """Unit masses incompatible with measure preservation."""


class Arrow(NamedTuple):
    comp: int
    g: int
    y_to: int
    y_from: int

    @property
    def source(self) -> tuple[int, int]:
        return (self.comp, self.y_from)

    @property
    def range(self) -> tuple[int, int]:
        return (self.comp, self.y_to)

    def is_unit(self) -> bool:
        return self.g == 0 and self.y_to == self.y_from


Unit = tuple[int, int]


@lru_cache(maxsize=None)
def _inverses(table: cayley.Table) -> tuple[int, ...]:
    return cayley.inverses(table)


@dataclass(frozen=True)
class Component:
    """One connected piece: group Cayley table, base size, exact weight."""

    table: cayley.Table
    base_size: int
    weight: Fraction

    def __post_init__(self):
        object.__setattr__(self, "table", cayley.normalize_table(self.table))
        object.__setattr__(self, "weight", Fraction(self.weight))
        problems = cayley.table_violations(self.table)
        if problems:
            raise ValueError(f"not a group table: {problems[0]}")
        if self.base_size < 1:
            raise ValueError("base_size must be positive")
        if self.weight <= 0:
            raise ValueError("component weight must be positive")

    @property
    def group_order(self) -> int:
        return len(self.table)

    def sort_key(self):
        return (len(self.table), self.base_size, self.weight)


@dataclass(frozen=True)
class FiniteGroupoid:
    """Normal form groupoid: components in canonical order, weights summing to 1."""

    components: tuple[Component, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise ValueError("a groupoid needs at least one component")
        if sum(c.weight for c in self.components) != 1:
            raise ValueError("component weights must sum to 1 exactly")
        keys = [c.sort_key() for c in self.components]
        if keys != sorted(keys):
            raise ValueError("components not in canonical order; use make_groupoid")

    def unit_mass(self, comp: int) -> Fraction:
        c = self.components[comp]
        return c.weight / c.base_size

    def units(self) -> Iterator[Unit]:
        for i, c in enumerate(self.components):
            for y in range(c.base_size):
                yield (i, y)

    @property
    def n_units(self) -> int:
        return sum(c.base_size for c in self.components)

    @property
    def n_arrows(self) -> int:
        return sum(len(c.table) * c.base_size**2 for c in self.components)

    def arrows(self) -> Iterator[Arrow]:
        for i, c in enumerate(self.components):
            for g in range(len(c.table)):
                for y_to in range(c.base_size):
                    for y_from in range(c.base_size):
                        yield Arrow(i, g, y_to, y_from)

    def unit_arrow(self, unit: Unit) -> Arrow:
        return Arrow(unit[0], 0, unit[1], unit[1])

    def mass(self, units) -> Fraction:
        return sum((self.unit_mass(c) for c, _ in units), Fraction(0))

    def mul(self, a: Arrow, b: Arrow) -> Arrow | None:
        """Product ab when defined (s(a) = r(b)), else None."""
        if a.comp != b.comp or a.y_from != b.y_to:
            return None
        table = self.components[a.comp].table
        return Arrow(a.comp, table[a.g][b.g], a.y_to, b.y_from)

    def inv(self, a: Arrow) -> Arrow:
        inv_g = _inverses(self.components[a.comp].table)[a.g]
        return Arrow(a.comp, inv_g, a.y_from, a.y_to)


def make_groupoid(components) -> FiniteGroupoid:
    """Canonically ordered groupoid from components in any order."""
    comps = [c if isinstance(c, Component) else Component(*c) for c in components]
    return FiniteGroupoid(tuple(sorted(comps, key=Component.sort_key)))


def _canonical_order(components: list[Component]) -> list[int]:
    """Positions of the input components after the canonical stable sort."""
    order = sorted(range(len(components)), key=lambda i: components[i].sort_key())
    position = [0] * len(components)
    for new, old in enumerate(order):
        position[old] = new
    return position


def full_relation(n: int) -> FiniteGroupoid:
    """The groupoid of the full equivalence relation on n points."""
    return make_groupoid([Component(cayley.trivial(), n, Fraction(1))])


def group_groupoid(table) -> FiniteGroupoid:
    return make_groupoid([Component(cayley.normalize_table(table), 1, Fraction(1))])


def connected_groupoid(table, base_size: int) -> FiniteGroupoid:
    return make_groupoid([Component(cayley.normalize_table(table), base_size, Fraction(1))])


def point_groupoid() -> FiniteGroupoid:
    return full_relation(1)


# ---------------------------------------------------------------------------
# Raw composition tables


def _id_key(x):
    return (0, x, "") if isinstance(x, int) else (1, 0, str(x))


@dataclass
class RawGroupoid:
    """Groupoid as an explicit table: arrow list plus a partial product.

    Unit arrows are marked by carrying the id of their unit. masses, when
    present, give the measure of each unit.
    """

    units: tuple
    arrows: tuple  # (arrow id, source unit, range unit)
    compose: dict  # (a, b) -> ab, defined exactly on composable pairs
    masses: dict | None = None


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...]


def _raw_structure(raw: RawGroupoid):
    """Index a raw table, raising MalformedInputError on structural problems."""
    units = list(raw.units)
    if not units:
        raise MalformedInputError("no units")
    if len(set(units)) != len(units):
        raise MalformedInputError("duplicate unit ids")
    unit_set = set(units)

    src, rng = {}, {}
    for entry in raw.arrows:
        aid, s, r = entry
        if aid in src:
            raise MalformedInputError(f"duplicate arrow id {aid!r}")
        if s not in unit_set or r not in unit_set:
            raise MalformedInputError(f"arrow {aid!r} has dangling endpoint")
        src[aid], rng[aid] = s, r
    for u in units:
        if u not in src or src[u] != u or rng[u] != u:
            raise MalformedInputError(f"unit {u!r} lacks its marked unit arrow")

    for (a, b), c in raw.compose.items():
        for x in (a, b, c):
            if x not in src:
                raise MalformedInputError(f"compose entry references unknown arrow {x!r}")
        if src[a] != rng[b]:
            raise MalformedInputError(f"compose defined on non-composable pair ({a!r},{b!r})")
    for a in src:
        for b in src:
            if src[a] == rng[b] and (a, b) not in raw.compose:
                raise MalformedInputError(f"compose missing on composable pair ({a!r},{b!r})")
    return src, rng


def validate_raw(raw: RawGroupoid) -> ValidationReport:
    """Check the groupoid axioms on a structurally well-formed raw table."""
    src, rng = _raw_structure(raw)
    comp = raw.compose
    violations = []

    for (a, b), c in comp.items():
        if src[c] != src[b] or rng[c] != rng[a]:
            violations.append(f"composition endpoints at ({a!r},{b!r})")

    for a in src:
        if comp.get((a, src[a])) != a or comp.get((rng[a], a)) != a:
            violations.append(f"unit law at {a!r}")

    arrows_by_rng = {}
    for a in src:
        arrows_by_rng.setdefault(rng[a], []).append(a)
    for a in src:
        for b in arrows_by_rng.get(src[a], ()):
            ab = comp[(a, b)]
            for c in arrows_by_rng.get(src[b], ()):
                left = comp.get((ab, c))
                right = comp.get((a, comp[(b, c)]))
                if left is None or right is None:
                    continue  # endpoint violation already reported above
                if left != right:
                    violations.append(f"associativity at ({a!r},{b!r},{c!r})")

    for a in src:
        candidates = [
            b
            for b in src
            if src[b] == rng[a]
            and rng[b] == src[a]
            and comp[(a, b)] == rng[a]
            and comp[(b, a)] == src[a]
        ]
        if not candidates:
            violations.append(f"inverse law at {a!r}")
        elif len(candidates) > 1:
            violations.append(f"inverse uniqueness at {a!r}")

    return ValidationReport(not violations, tuple(violations))


@dataclass(frozen=True)
class Decomposition:
    groupoid: FiniteGroupoid
    iso: dict  # raw arrow id -> Arrow

    def map_arrows(self, arrow_ids) -> frozenset:
        return frozenset(self.iso[a] for a in arrow_ids)


def decompose(raw: RawGroupoid, weights: dict | None = None) -> Decomposition:
    """Normal form of a validated raw groupoid plus the witnessing isomorphism.

    The base point of each connected piece is its lowest unit, the transversal
    to another unit is the lowest arrow from the base, and the transversal at
    the base itself is the unit arrow, so re-decomposing a rendered normal
    form is the identity.
    """
    report = validate_raw(raw)
    if not report.ok:
        raise ValueError(f"groupoid axioms violated: {report.violations[0]}")
    src, rng = _raw_structure(raw)

    if weights is None:
        weights = raw.masses
    if weights is None:
        raise MalformedInputError("no unit masses given")
    weights = {u: Fraction(w) for u, w in weights.items()}
    if set(weights) != set(raw.units):
        raise MalformedInputError("masses must cover exactly the units")
    if any(w <= 0 for w in weights.values()):
        raise PmpViolationError("unit masses must be positive")
    if sum(weights.values()) != 1:
        raise PmpViolationError("unit masses must sum to 1 exactly")

    parent = {u: u for u in raw.units}

    def find(u):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    for a in src:
        ra, rb = find(src[a]), find(rng[a])
        if ra != rb:
            parent[ra] = rb

    blocks = {}
    for u in raw.units:
        blocks.setdefault(find(u), []).append(u)
    pieces = sorted(blocks.values(), key=lambda us: min(_id_key(u) for u in us))

    inverse_id = {}
    for a in src:
        for b in src:
            if (
                src[b] == rng[a]
                and rng[b] == src[a]
                and raw.compose[(a, b)] == rng[a]
                and raw.compose[(b, a)] == src[a]
            ):
                inverse_id[a] = b

    components: list[Component] = []
    arrow_map: dict = {}
    for piece in pieces:
        piece_units = sorted(piece, key=_id_key)
        w0 = weights[piece_units[0]]
        for u in piece_units:
            if weights[u] != w0:
                raise PmpViolationError(
                    f"unit masses differ within one connected component ({piece_units[0]!r}: {w0}, {u!r}: {weights[u]})"
                )
        base = piece_units[0]
        unit_pos = {u: i for i, u in enumerate(piece_units)}

        isotropy = [a for a in src if src[a] == base and rng[a] == base]
        iso_ids = [base] + sorted((a for a in isotropy if a != base), key=_id_key)
        elem_index = {a: i for i, a in enumerate(iso_ids)}
        m = len(iso_ids)
        table = tuple(
            tuple(elem_index[raw.compose[(iso_ids[i], iso_ids[j])]] for j in range(m))
            for i in range(m)
        )

        tau = {base: base}
        for u in piece_units[1:]:
            tau[u] = min(
                (a for a in src if src[a] == base and rng[a] == u), key=_id_key
            )

        comp_index = len(components)
        components.append(Component(table, len(piece_units), w0 * len(piece_units)))
        for a in src:
            if find(src[a]) != find(base):
                continue
            y_from, y_to = src[a], rng[a]
            g = raw.compose[(inverse_id[tau[y_to]], raw.compose[(a, tau[y_from])])]
            arrow_map[a] = Arrow(
                comp_index, elem_index[g], unit_pos[y_to], unit_pos[y_from]
            )

    position = _canonical_order(components)
    groupoid = make_groupoid(components)
    iso = {a: arr._replace(comp=position[arr.comp]) for a, arr in arrow_map.items()}
    return Decomposition(groupoid, iso)


def render_raw(g: FiniteGroupoid) -> RawGroupoid:
    """The normal form written back out as an explicit table with integer ids.

    Unit ids enumerate units in (component, point) order; the remaining
    arrows get consecutive ids ordered by (component, group element, target,
    source), which makes decompose(render_raw(g)) the identity.
    """
    offsets = []
    total = 0
    for c in g.components:
        offsets.append(total)
        total += c.base_size

    def unit_id(unit: Unit) -> int:
        return offsets[unit[0]] + unit[1]

    ids: dict[Arrow, int] = {}
    entries = []
    for i, c in enumerate(g.components):
        for y in range(c.base_size):
            a = Arrow(i, 0, y, y)
            ids[a] = unit_id((i, y))
    next_id = total
    for a in sorted(g.arrows()):
        if a.is_unit():
            continue
        ids[a] = next_id
        next_id += 1
    for a, aid in sorted(ids.items(), key=lambda kv: kv[1]):
        entries.append((aid, unit_id(a.source), unit_id(a.range)))

    compose = {}
    for a in g.arrows():
        for b in g.arrows():
            ab = g.mul(a, b)
            if ab is not None:
                compose[(ids[a], ids[b])] = ids[ab]

    masses = {unit_id(u): g.unit_mass(u[0]) for u in g.units()}
    return RawGroupoid(
        units=tuple(range(total)), arrows=tuple(entries), compose=compose, masses=masses
    )


def from_group_action(table, action, point_masses) -> RawGroupoid:
    """Transformation groupoid of a finite group action on weighted points.

    Arrows are (g, x) pairs with source x and range g.x, and the product is
    (h, g.x)(g, x) = (hg, x). Arrow ids are g*n + x, so unit arrows carry
    their unit's id.
    """
    table = cayley.normalize_table(table)
    problems = cayley.table_violations(table)
    if problems:
        raise MalformedInputError(f"not a group table: {problems[0]}")
    m = len(table)
    action = tuple(tuple(int(p) for p in row) for row in action)
    if len(action) != m or any(len(row) != len(action[0]) for row in action):
        raise MalformedInputError("action table must be |group| x |points|")
    n = len(action[0])
    if any(not 0 <= p < n for row in action for p in row):
        raise MalformedInputError("action table entry out of range")
    if any(action[0][x] != x for x in range(n)):
        raise MalformedInputError("identity must act trivially")
    for gi in range(m):
        for hi in range(m):
            for x in range(n):
                if action[table[gi][hi]][x] != action[gi][action[hi][x]]:
                    raise MalformedInputError(
                        f"not a group action at (g={gi}, h={hi}, x={x})"
                    )

    masses = [Fraction(w) for w in point_masses]
    if len(masses) != n:
        raise MalformedInputError("need one mass per point")
    if any(w <= 0 for w in masses):
        raise PmpViolationError("point masses must be positive")
    if sum(masses) != 1:
        raise PmpViolationError("point masses must sum to 1 exactly")
    for gi in range(m):
        for x in range(n):
            if masses[action[gi][x]] != masses[x]:
                raise PmpViolationError(
                    f"masses not action-invariant at (g={gi}, x={x})"
                )

    def aid(gi, x):
        return gi * n + x

    arrows = tuple((aid(gi, x), x, action[gi][x]) for gi in range(m) for x in range(n))
    compose = {}
    for gi in range(m):
        for hi in range(m):
            for x in range(n):
                compose[(aid(hi, action[gi][x]), aid(gi, x))] = aid(table[hi][gi], x)
    return RawGroupoid(
        units=tuple(range(n)),
        arrows=arrows,
        compose=compose,
        masses={x: masses[x] for x in range(n)},
    )


# ---------------------------------------------------------------------------
# Assembling groupoids


def convex_combination_with_maps(parts):
    """Weighted disjoint union plus, per part, old-to-new component positions."""
    parts = [(Fraction(t), g) for t, g in parts]
    if any(t <= 0 for t, _ in parts):
        raise ValueError("convex weights must be positive")
    if sum(t for t, _ in parts) != 1:
        raise ValueError("convex weights must sum to 1 exactly")
    components = []
    owners = []
    for pi, (t, g) in enumerate(parts):
        for ci, c in enumerate(g.components):
            owners.append((pi, ci))
            components.append(Component(c.table, c.base_size, c.weight * t))
    position = _canonical_order(components)
    maps = [dict() for _ in parts]
    for k, (pi, ci) in enumerate(owners):
        maps[pi][ci] = position[k]
    return make_groupoid(components), maps


def convex_combination(parts) -> FiniteGroupoid:
    return convex_combination_with_maps(parts)[0]


@dataclass(frozen=True)
class ProductStructure:
    """A product groupoid with the pairing of arrows recorded."""

    left: FiniteGroupoid
    right: FiniteGroupoid
    groupoid: FiniteGroupoid
    comp_of_pair: dict
    pair_of_comp: tuple

    def pair_arrow(self, a: Arrow, b: Arrow) -> Arrow:
        cb = self.right.components[b.comp]
        return Arrow(
            self.comp_of_pair[(a.comp, b.comp)],
            a.g * cb.group_order + b.g,
            a.y_to * cb.base_size + b.y_to,
            a.y_from * cb.base_size + b.y_from,
        )

    def split_arrow(self, c: Arrow) -> tuple[Arrow, Arrow]:
        i, j = self.pair_of_comp[c.comp]
        cb = self.right.components[j]
        ga, gb = divmod(c.g, cb.group_order)
        ta, tb = divmod(c.y_to, cb.base_size)
        fa, fb = divmod(c.y_from, cb.base_size)
        return Arrow(i, ga, ta, fa), Arrow(j, gb, tb, fb)


def product_groupoid(left: FiniteGroupoid, right: FiniteGroupoid) -> ProductStructure:
    pairs = []
    components = []
    for i, a in enumerate(left.components):
        for j, b in enumerate(right.components):
            pairs.append((i, j))
            components.append(
                Component(
                    cayley.direct_product(a.table, b.table),
                    a.base_size * b.base_size,
                    a.weight * b.weight,
                )
            )
    position = _canonical_order(components)
    comp_of_pair = {pair: position[k] for k, pair in enumerate(pairs)}
    pair_of_comp = [None] * len(pairs)
    for pair, pos in comp_of_pair.items():
        pair_of_comp[pos] = pair
    return ProductStructure(
        left, right, make_groupoid(components), comp_of_pair, tuple(pair_of_comp)
    )


@dataclass(frozen=True)
class CornerStructure:
    """Restriction of a groupoid to a unit subset, measure renormalized."""

    ambient: FiniteGroupoid
    units: frozenset
    groupoid: FiniteGroupoid
    comp_map: dict  # ambient component -> corner component
    point_map: dict  # (ambient comp, y) -> corner y
    back_map: dict  # (corner comp, corner y) -> (ambient comp, y)

    def to_corner(self, a: Arrow) -> Arrow | None:
        if (a.comp, a.y_to) not in self.point_map or (a.comp, a.y_from) not in self.point_map:
            return None
        return Arrow(
            self.comp_map[a.comp],
            a.g,
            self.point_map[(a.comp, a.y_to)],
            self.point_map[(a.comp, a.y_from)],
        )

    def from_corner(self, a: Arrow) -> Arrow:
        comp, y_to = self.back_map[(a.comp, a.y_to)]
        _, y_from = self.back_map[(a.comp, a.y_from)]
        return Arrow(comp, a.g, y_to, y_from)


def corner(g: FiniteGroupoid, units) -> CornerStructure:
    units = frozenset(units)
    if not units:
        raise ValueError("corner on the empty unit set")
    for c, y in units:
        if not (0 <= c < len(g.components) and 0 <= y < g.components[c].base_size):
            raise ValueError(f"unknown unit {(c, y)!r}")
    total = g.mass(units)
    kept: dict[int, list[int]] = {}
    for c, y in sorted(units):
        kept.setdefault(c, []).append(y)
    components = []
    owners = []
    point_map = {}
    for c in sorted(kept):
        ys = sorted(kept[c])
        for new_y, y in enumerate(ys):
            point_map[(c, y)] = new_y
        comp = g.components[c]
        owners.append(c)
        components.append(
            Component(comp.table, len(ys), comp.weight * len(ys) / comp.base_size / total)
        )
    position = _canonical_order(components)
    comp_map = {c: position[k] for k, c in enumerate(owners)}
    back_map = {
        (comp_map[c], new_y): (c, y) for (c, y), new_y in point_map.items()
    }
    return CornerStructure(g, units, make_groupoid(components), comp_map, point_map, back_map)


def corner_restriction(g: FiniteGroupoid, units) -> FiniteGroupoid:
    return corner(g, units).groupoid


def fiber_sizes(g: FiniteGroupoid) -> tuple[int, ...]:
    """|s^-1(x)| per component: group order times base size."""
    return tuple(c.group_order * c.base_size for c in g.components)


def fiber_decomposition(g: FiniteGroupoid) -> dict[int, FiniteGroupoid]:
    """Partition into the subgroupoids of constant fiber size, renormalized."""
    classes: dict[int, list[Component]] = {}
    for c in g.components:
        classes.setdefault(c.group_order * c.base_size, []).append(c)
    out = {}
    for n, comps in sorted(classes.items()):
        total = sum(c.weight for c in comps)
        out[n] = make_groupoid(
            [Component(c.table, c.base_size, c.weight / total) for c in comps]
        )
    return out


# ---------------------------------------------------------------------------
# Subgroupoids given as arrow subsets


def subgroupoid_violations(g: FiniteGroupoid, arrows) -> list[str]:
    """Why an arrow subset fails to be a subgroupoid (empty list if it is one)."""
    arrows = frozenset(arrows)
    problems = []
    units_present = {a.source for a in arrows if a.is_unit()}
    for a in arrows:
        if a.source not in units_present or a.range not in units_present:
            problems.append(f"missing unit arrow for endpoint of {a}")
        if g.inv(a) not in arrows:
            problems.append(f"not closed under inverse at {a}")
    for a in arrows:
        for b in arrows:
            ab = g.mul(a, b)
            if ab is not None and ab not in arrows:
                problems.append(f"not closed under product at ({a},{b})")
    return problems


def subgroupoid_as_groupoid(g: FiniteGroupoid, arrows):
    """Materialize an arrow subset as a pmp groupoid of its own.

    Returns (decomposition over a fresh raw table, arrow-to-raw-id map); the
    measure is the ambient one renormalized to the units present.
    """
    arrows = frozenset(arrows)
    problems = subgroupoid_violations(g, arrows)
    if problems:
        raise ValueError(f"not a subgroupoid: {problems[0]}")
    units = sorted({a.source for a in arrows if a.is_unit()})
    unit_ids = {u: i for i, u in enumerate(units)}
    ids = {}
    for u in units:
        ids[g.unit_arrow(u)] = unit_ids[u]
    next_id = len(units)
    for a in sorted(arrows):
        if a not in ids:
            ids[a] = next_id
            next_id += 1
    entries = tuple(
        (aid, unit_ids[a.source], unit_ids[a.range])
        for a, aid in sorted(ids.items(), key=lambda kv: kv[1])
    )
    compose = {}
    for a in arrows:
        for b in arrows:
            ab = g.mul(a, b)
            if ab is not None:
                compose[(ids[a], ids[b])] = ids[ab]
    total = g.mass(units)
    masses = {unit_ids[u]: g.unit_mass(u[0]) / total for u in units}
    raw = RawGroupoid(tuple(range(len(units))), entries, compose, masses)
    return decompose(raw), ids
