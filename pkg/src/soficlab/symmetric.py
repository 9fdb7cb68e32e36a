"""Partial injections on n points and the block/step embedding ladder.

These are the concrete finite models: the monoid of partial injections on
{0..n-1} is canonically the bisection monoid of the full relation on n
points. Growing n along p = qn + r uses an exactly isometric q-fold block
copy followed by r one-point inclusions, each of which moves the metric by
at most 1/(stage size); the composite stays within n/(p-n), and distortion
reports account for the deviation exactly in rationals.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

from .groupoid import Arrow, FiniteGroupoid, full_relation
from .semigroup import Bisection, CapExceededError


@dataclass(frozen=True)
class PartialInjection:
    """Injective partial map on {0..n-1}; images[x] is -1 where undefined."""

    n: int
    images: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if len(self.images) != self.n:
            raise ValueError("images must have length n")
        defined = [y for y in self.images if y != -1]
        if any(not 0 <= y < self.n for y in defined):
            raise ValueError("image out of range")
        if len(set(defined)) != len(defined):
            raise ValueError("not injective")

    @classmethod
    def from_dict(cls, n: int, mapping: dict) -> "PartialInjection":
        images = [-1] * n
        for x, y in mapping.items():
            x = int(x)
            if not 0 <= x < n:
                raise ValueError(f"source {x} out of range")
            images[x] = int(y)
        return cls(n, tuple(images))

    @classmethod
    def identity(cls, n: int) -> "PartialInjection":
        return cls(n, tuple(range(n)))

    @classmethod
    def empty(cls, n: int) -> "PartialInjection":
        return cls(n, (-1,) * n)

    def as_dict(self) -> dict[int, int]:
        return {x: y for x, y in enumerate(self.images) if y != -1}

    def __call__(self, x: int) -> int | None:
        y = self.images[x]
        return None if y == -1 else y

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(x for x, y in enumerate(self.images) if y != -1)

    @property
    def image(self) -> frozenset[int]:
        return frozenset(y for y in self.images if y != -1)

    def compose(self, other: "PartialInjection") -> "PartialInjection":
        """self*other applies other first."""
        if self.n != other.n:
            raise ValueError("sizes differ")
        out = [-1] * self.n
        for x, y in enumerate(other.images):
            if y != -1 and self.images[y] != -1:
                out[x] = self.images[y]
        return PartialInjection(self.n, tuple(out))

    def __mul__(self, other):
        return self.compose(other)

    def inverse(self) -> "PartialInjection":
        out = [-1] * self.n
        for x, y in enumerate(self.images):
            if y != -1:
                out[y] = x
        return PartialInjection(self.n, tuple(out))

    def trace(self) -> Fraction:
        return Fraction(sum(1 for x, y in enumerate(self.images) if x == y), self.n)

    def distance_count(self, other: "PartialInjection") -> int:
        if self.n != other.n:
            raise ValueError("sizes differ")
        return sum(1 for a, b in zip(self.images, other.images) if a != b)

    def distance(self, other: "PartialInjection") -> Fraction:
        return Fraction(self.distance_count(other), self.n)

    def fixed_points(self) -> frozenset[int]:
        return frozenset(x for x, y in enumerate(self.images) if x == y)


def pin_count(n: int) -> int:
    """|[[n]]| by the closed form sum_k C(n,k)^2 k!."""
    from math import comb, factorial

    return sum(comb(n, k) ** 2 * factorial(k) for k in range(n + 1))


def enumerate_pins(n: int, cap: int = 10**6):
    predicted = pin_count(n)
    if predicted > cap:
        raise CapExceededError(predicted, cap, "partial injection enumeration")
    for k in range(n + 1):
        for dom in combinations(range(n), k):
            for img in permutations(range(n), k):
                images = [-1] * n
                for x, y in zip(dom, img):
                    images[x] = y
                yield PartialInjection(n, tuple(images))


def sample_pin(n: int, rng: random.Random) -> PartialInjection:
    dom = [x for x in range(n) if rng.random() < 0.5]
    img = rng.sample(range(n), len(dom))
    images = [-1] * n
    for x, y in zip(dom, img):
        images[x] = y
    return PartialInjection(n, tuple(images))


# ---------------------------------------------------------------------------
# The canonical identification [[n]] = bisections of the n-point full relation


def to_bisection(pin: PartialInjection, g: FiniteGroupoid | None = None) -> Bisection:
    g = g if g is not None else full_relation(pin.n)
    if len(g.components) != 1 or g.components[0].base_size != pin.n:
        raise ValueError("groupoid is not the matching full relation")
    return Bisection(
        g,
        tuple(
            Arrow(0, 0, y, x) for x, y in enumerate(pin.images) if y != -1
        ),
    )


def from_bisection(alpha: Bisection) -> PartialInjection:
    g = alpha.groupoid
    if len(g.components) != 1 or g.components[0].group_order != 1:
        raise ValueError("bisection does not live on a full relation")
    images = [-1] * g.components[0].base_size
    for a in alpha.arrows:
        images[a.y_from] = a.y_to
    return PartialInjection(len(images), tuple(images))


# ---------------------------------------------------------------------------
# Ladder embeddings


def embed_step(pin: PartialInjection) -> PartialInjection:
    """Literal inclusion [[n]] -> [[n+1]]: same map, undefined at the new point."""
    return PartialInjection(pin.n + 1, pin.images + (-1,))


def embed_multiple(pin: PartialInjection, k: int) -> PartialInjection:
    """k block copies, (q*n + j) -> q*n + pin(j); exactly isometric."""
    if k < 1:
        raise ValueError("k must be >= 1")
    n = pin.n
    out = [-1] * (k * n)
    for q in range(k):
        for j, y in enumerate(pin.images):
            if y != -1:
                out[q * n + j] = q * n + y
    return PartialInjection(k * n, tuple(out))


def embed_general(pin: PartialInjection, p: int) -> PartialInjection:
    """[[n]] -> [[p]] for p >= n: floor(p/n) block copies then p mod n inclusions."""
    n = pin.n
    if p < n:
        raise ValueError(f"target size {p} below {n}")
    out = embed_multiple(pin, p // n)
    for _ in range(p % n):
        out = embed_step(out)
    return out


@dataclass(frozen=True)
class DistortionReport:
    """Exact worst-case metric deviation of an embedding stage [[n]] -> [[p]]."""

    n: int
    p: int
    bound: Fraction | None  # n/(p-n); None when p == n
    observed_sup: Fraction
    trace_sup: Fraction
    pairs_tested: int
    exhaustive: bool
    seed: int | None

    def __post_init__(self):
        if self.bound is not None and self.observed_sup > self.bound:
            raise AssertionError("distortion exceeds the guaranteed bound")


def distortion_report(
    n: int,
    p: int,
    pair_cap: int = 10**4,
    sample_count: int = 400,
    seed: int = 1729,
) -> DistortionReport:
    """Measure sup |d_p(images) - d_n| over element pairs, exactly.

    Exhaustive when |[[n]]|^2 fits the cap, otherwise seeded sampling; the
    trace deviation sup is tracked alongside.
    """
    if p < n:
        raise ValueError(f"target size {p} below {n}")
    count = pin_count(n)
    exhaustive = count * count <= pair_cap
    if exhaustive:
        elements = list(enumerate_pins(n))
        pairs = [(a, b) for a in elements for b in elements]
        used_seed = None
    else:
        rng = random.Random(seed)
        pairs = [(sample_pin(n, rng), sample_pin(n, rng)) for _ in range(sample_count)]
        used_seed = seed

    images = {}

    def img(a):
        if a not in images:
            images[a] = embed_general(a, p)
        return images[a]

    d_sup = Fraction(0)
    t_sup = Fraction(0)
    for a, b in pairs:
        dev = abs(img(a).distance(img(b)) - a.distance(b))
        if dev > d_sup:
            d_sup = dev
    for a in {x for pair in pairs for x in pair}:
        dev = abs(img(a).trace() - a.trace())
        if dev > t_sup:
            t_sup = dev

    bound = None if p == n else Fraction(n, p - n)
    return DistortionReport(
        n=n,
        p=p,
        bound=bound,
        observed_sup=d_sup,
        trace_sup=t_sup,
        pairs_tested=len(pairs),
        exhaustive=exhaustive,
        seed=used_seed,
    )


def ladder_profile(
    n: int,
    p_list,
    pair_cap: int = 10**4,
    sample_count: int = 400,
    seed: int = 1729,
) -> list[DistortionReport]:
    return [
        distortion_report(n, p, pair_cap=pair_cap, sample_count=sample_count, seed=seed)
        for p in p_list
    ]
