"""Finite abelian groups given as products of cyclic factors.

Elements are tuples of residues.  Morphisms are stored by the images of the
standard generators ``e_k`` and compose left to right: ``a * b`` applies
``a`` first, matching the postfix notation ``u a b``.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

Element = tuple[int, ...]
Subgroup = tuple[Element, ...]


def _factorint(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class AbelianGroup:
    """``Z_{n_0} x Z_{n_1} x ...`` with the factor order kept as given."""

    moduli: tuple[int, ...]

    def __post_init__(self):
        moduli = tuple(int(n) for n in self.moduli)
        for n in moduli:
            if n < 1:
                raise ValueError(f"cyclic factor orders must be >= 1, got {n}")
        object.__setattr__(self, "moduli", moduli)

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @cached_property
    def order(self) -> int:
        return math.prod(self.moduli)

    @cached_property
    def canonical_divisors(self) -> tuple[int, ...]:
        """Elementary divisors as a sorted tuple of prime powers."""
        divs = []
        for n in self.moduli:
            divs.extend(p**e for p, e in _factorint(n).items())
        return tuple(sorted(divs))

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*self.moduli) if self.moduli else 1

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        # lexicographic order == mixed-radix order of `index`
        return tuple(itertools.product(*(range(n) for n in self.moduli)))

    @cached_property
    def _strides(self) -> tuple[int, ...]:
        strides = []
        s = 1
        for n in reversed(self.moduli):
            strides.append(s)
            s *= n
        return tuple(reversed(strides))

    def index(self, u: Element) -> int:
        return sum(x * s for x, s in zip(u, self._strides))

    @property
    def zero(self) -> Element:
        return (0,) * self.rank

    def generators(self) -> tuple[Element, ...]:
        return tuple(
            tuple(1 % n if k == j else 0 for k, n in enumerate(self.moduli)) for j in range(self.rank)
        )

    def normalize(self, u: Iterable[int]) -> Element:
        u = tuple(u)
        if len(u) != self.rank:
            raise ValueError(f"element {u} has wrong length for {self}")
        return tuple(x % n for x, n in zip(u, self.moduli))

    def add(self, u: Element, v: Element) -> Element:
        return tuple((a + b) % n for a, b, n in zip(u, v, self.moduli))

    def neg(self, u: Element) -> Element:
        return tuple(-a % n for a, n in zip(u, self.moduli))

    def sub(self, u: Element, v: Element) -> Element:
        return tuple((a - b) % n for a, b, n in zip(u, v, self.moduli))

    def scale(self, k: int, u: Element) -> Element:
        return tuple(k * a % n for a, n in zip(u, self.moduli))

    def element_order(self, u: Element) -> int:
        return math.lcm(*(n // math.gcd(a, n) for a, n in zip(u, self.moduli))) if u else 1

    @cached_property
    def add_table(self) -> tuple[tuple[int, ...], ...]:
        els, idx = self.elements, self.index
        return tuple(tuple(idx(self.add(u, v)) for v in els) for u in els)

    @cached_property
    def neg_table(self) -> tuple[int, ...]:
        return tuple(self.index(self.neg(u)) for u in self.elements)

    def span(self, gens: Iterable[Element]) -> Subgroup:
        """Subgroup generated by ``gens`` as a sorted element tuple."""
        span = {self.zero}
        for g in gens:
            step = {self.scale(t, g) for t in range(self.element_order(g))}
            span = {self.add(s, t) for s in span for t in step}
        return tuple(sorted(span))

    def is_isomorphic_to(self, other: AbelianGroup) -> bool:
        return self.canonical_divisors == other.canonical_divisors

    def __str__(self) -> str:
        if not self.moduli:
            return "Z1"
        return "x".join(f"Z{n}" for n in self.moduli)


def make_group(moduli: Sequence[int]) -> AbelianGroup:
    return AbelianGroup(tuple(moduli))


def parse_group(text: str) -> AbelianGroup:
    """Parse ``Z4`` or ``Z2xZ4`` (factors joined by ``x``)."""
    parts = text.strip().split("x")
    moduli = []
    for part in parts:
        part = part.strip()
        if not re.fullmatch(r"Z\d+", part):
            raise ValueError(f"cannot parse group {text!r}: bad factor {part!r}")
        moduli.append(int(part[1:]))
    return make_group(moduli)


def abelian_groups_of_order(n: int) -> list[AbelianGroup]:
    """One group per isomorphism type, presented by its elementary divisors."""
    if n < 1:
        raise ValueError("order must be positive")
    per_prime = []
    for p, e in sorted(_factorint(n).items()):
        per_prime.append([[p**k for k in part] for part in _partitions(e)])
    out = []
    for combo in itertools.product(*per_prime):
        moduli = sorted(d for part in combo for d in part)
        out.append(make_group(moduli or [1]))
    return sorted(out, key=lambda g: (len(g.moduli), g.moduli))


def _partitions(n: int, largest: int | None = None) -> Iterator[list[int]]:
    largest = n if largest is None else largest
    if n == 0:
        yield []
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield [k] + rest


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("euler_phi needs n >= 1")
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


# ---------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True)
class GroupMorphism:
    domain: AbelianGroup
    codomain: AbelianGroup
    images: tuple[Element, ...]

    def __post_init__(self):
        if len(self.images) != self.domain.rank:
            raise ValueError(
                f"need {self.domain.rank} generator images, got {len(self.images)}"
            )
        images = tuple(self.codomain.normalize(v) for v in self.images)
        for n, v in zip(self.domain.moduli, images):
            if self.codomain.scale(n, v) != self.codomain.zero:
                raise ValueError(
                    f"image {v} is not annihilated by {n}; map is not well defined"
                )
        object.__setattr__(self, "images", images)

    @cached_property
    def table(self) -> tuple[int, ...]:
        """Codomain index of the image of each domain element, by domain index."""
        H = self.codomain
        add = H.add_table
        out = [H.index(H.zero)]
        for n, v in zip(self.domain.moduli, self.images):
            steps = [H.index(H.scale(a, v)) for a in range(n)]
            out = [add[t][s] for t in out for s in steps]
        return tuple(out)

    def __call__(self, u: Element) -> Element:
        return self.codomain.elements[self.table[self.domain.index(u)]]

    def __mul__(self, other: GroupMorphism) -> GroupMorphism:
        """``self * other``: apply ``self`` first."""
        if self.codomain != other.domain:
            raise ValueError("morphisms do not compose")
        return GroupMorphism(self.domain, other.codomain, tuple(other(v) for v in self.images))

    def __add__(self, other: GroupMorphism) -> GroupMorphism:
        if (self.domain, self.codomain) != (other.domain, other.codomain):
            raise ValueError("pointwise sum needs equal domain and codomain")
        H = self.codomain
        return GroupMorphism(
            self.domain, H, tuple(H.add(a, b) for a, b in zip(self.images, other.images))
        )

    def __neg__(self) -> GroupMorphism:
        H = self.codomain
        return GroupMorphism(self.domain, H, tuple(H.neg(v) for v in self.images))

    def __sub__(self, other: GroupMorphism) -> GroupMorphism:
        return self + (-other)

    @property
    def is_endomorphism(self) -> bool:
        return self.domain == self.codomain

    @cached_property
    def is_bijective(self) -> bool:
        return (
            self.domain.order == self.codomain.order
            and len(set(self.table)) == self.domain.order
        )

    @cached_property
    def is_identity(self) -> bool:
        return self.is_endomorphism and self.images == self.domain.generators()

    @cached_property
    def inverse(self) -> GroupMorphism:
        if not self.is_bijective:
            raise ValueError("morphism is not invertible")
        back = {t: i for i, t in enumerate(self.table)}
        H, G = self.codomain, self.domain
        return GroupMorphism(H, G, tuple(G.elements[back[H.index(g)]] for g in H.generators()))

    @cached_property
    def order(self) -> int:
        """Multiplicative order of an automorphism."""
        ident = tuple(range(self.domain.order))
        t, k = self.table, 1
        while t != ident:
            t = tuple(self.table[i] for i in t)
            k += 1
        return k

    def power(self, e: int) -> GroupMorphism:
        """``self`` raised to the integer ``e`` (negative uses the inverse)."""
        e %= self.order
        out = identity(self.domain)
        for _ in range(e):
            out = out * self
        return out

    @cached_property
    def fixed_count(self) -> int:
        return sum(1 for i, t in enumerate(self.table) if i == t)

    def kernel(self) -> Subgroup:
        z = self.codomain.index(self.codomain.zero)
        return tuple(u for u, t in zip(self.domain.elements, self.table) if t == z)

    def image(self) -> Subgroup:
        return tuple(sorted({self.codomain.elements[t] for t in self.table}))

    def __str__(self) -> str:
        return ";".join("(" + ",".join(map(str, v)) + ")" for v in self.images)


def identity(G: AbelianGroup) -> GroupMorphism:
    return GroupMorphism(G, G, G.generators())


def negation(G: AbelianGroup) -> GroupMorphism:
    return GroupMorphism(G, G, tuple(G.neg(g) for g in G.generators()))


def scalar(G: AbelianGroup, k: int) -> GroupMorphism:
    return GroupMorphism(G, G, tuple(G.scale(k, g) for g in G.generators()))


def parse_morphism(text: str, G: AbelianGroup, H: AbelianGroup | None = None) -> GroupMorphism:
    """Parse ``(1,2);(0,3)`` (generator images) or the shorthands ``id``/``neg``."""
    H = G if H is None else H
    text = text.strip()
    if text == "id":
        return identity(G)
    if text == "neg":
        return negation(G)
    chunks = [c.strip() for c in text.split(";") if c.strip()]
    images = []
    for c in chunks:
        if not (c.startswith("(") and c.endswith(")")):
            raise ValueError(f"cannot parse generator image {c!r}")
        images.append(tuple(int(x) for x in c[1:-1].split(",")))
    return GroupMorphism(G, H, tuple(images))


def enumerate_homs(G: AbelianGroup, H: AbelianGroup) -> list[GroupMorphism]:
    choices = [
        [h for h in H.elements if H.scale(n, h) == H.zero] for n in G.moduli
    ]
    return [GroupMorphism(G, H, imgs) for imgs in itertools.product(*choices)]


def iter_isomorphisms(G: AbelianGroup, H: AbelianGroup) -> Iterator[GroupMorphism]:
    """Backtrack over generator images; prune on element order and on span growth."""
    if G.order != H.order:
        return
    add = H.add_table
    by_order: dict[int, list[int]] = {}
    for k, h in enumerate(H.elements):
        by_order.setdefault(H.element_order(h), []).append(k)
    multiples = [[H.index(H.scale(t, h)) for t in range(H.element_order(h))] for h in H.elements]
    moduli = G.moduli

    def extend(k: int, chosen: list[int], span: list[int]):
        if k == len(moduli):
            # span pruning makes the images generate all of H: bijective
            if len(span) == H.order:
                yield GroupMorphism(G, H, tuple(H.elements[c] for c in chosen))
            return
        n = moduli[k]
        for h in by_order.get(n, ()):
            new = {add[s][t] for s in span for t in multiples[h]}
            if len(new) != len(span) * n:
                continue
            chosen.append(h)
            yield from extend(k + 1, chosen, list(new))
            chosen.pop()

    yield from extend(0, [], [H.index(H.zero)])


@lru_cache(maxsize=None)
def enumerate_automorphisms(G: AbelianGroup) -> tuple[GroupMorphism, ...]:
    return tuple(iter_isomorphisms(G, G))


def _check_auts(*maps: GroupMorphism) -> AbelianGroup:
    G = maps[0].domain
    for a in maps:
        if a.domain != G or a.codomain != G:
            raise ValueError("automorphisms of different groups")
    return G


def _intertwines(a: GroupMorphism, g: GroupMorphism, b: GroupMorphism) -> bool:
    # a*g == g*b, checked on generator images
    gt, bt = g.table, b.table
    G = a.domain
    for v, gen in zip(a.images, G.generators()):
        if gt[G.index(v)] != bt[gt[G.index(gen)]]:
            return False
    return True


def conjugators(alpha: GroupMorphism, beta: GroupMorphism) -> list[GroupMorphism]:
    """All ``g`` in Aut(G) with ``alpha * g == g * beta``."""
    G = _check_auts(alpha, beta)
    if alpha.order != beta.order or alpha.fixed_count != beta.fixed_count:
        return []
    return [g for g in enumerate_automorphisms(G) if _intertwines(alpha, g, beta)]


def are_conjugate(alpha: GroupMorphism, beta: GroupMorphism) -> GroupMorphism | None:
    G = _check_auts(alpha, beta)
    if alpha.order != beta.order or alpha.fixed_count != beta.fixed_count:
        return None
    for g in enumerate_automorphisms(G):
        if _intertwines(alpha, g, beta):
            return g
    return None


def centralizer(alpha: GroupMorphism) -> list[GroupMorphism]:
    return conjugators(alpha, alpha)


def conjugacy_classes(
    G: AbelianGroup, candidates: Iterable[GroupMorphism] | None = None
) -> list[list[GroupMorphism]]:
    """Partition ``candidates`` (default: all of Aut(G)) into Aut(G)-classes.

    ``candidates`` must be a union of classes.  Each class is sorted by
    generator images; classes are sorted by their least member.
    """
    auts = enumerate_automorphisms(G)
    pool = list(auts if candidates is None else candidates)
    remaining = {a.images: a for a in pool}
    classes = []
    for a in sorted(pool, key=lambda f: f.images):
        if a.images not in remaining:
            continue
        orbit = {}
        for g in auts:
            c = g.inverse * a * g
            orbit[c.images] = c
        for key in orbit:
            if key not in remaining:
                raise ValueError("candidate set is not closed under conjugation")
            del remaining[key]
        classes.append([orbit[k] for k in sorted(orbit)])
    return classes


def involutions(G: AbelianGroup) -> list[GroupMorphism]:
    """Automorphisms with square equal to the identity (identity included)."""
    return [a for a in enumerate_automorphisms(G) if (a * a).is_identity]


# ---------------------------------------------------------------------------
# subgroups attached to an automorphism


def _assert_subgroup(G: AbelianGroup, elems: Iterable[Element]) -> Subgroup:
    s = set(elems)
    if G.zero not in s:
        raise AssertionError("subset misses the identity")
    for u in s:
        if G.neg(u) not in s:
            raise AssertionError(f"subset not closed under negation at {u}")
        for v in s:
            if G.add(u, v) not in s:
                raise AssertionError(f"subset not closed under addition at {u}+{v}")
    return tuple(sorted(s))


def invariant_index2_subgroups(G: AbelianGroup, alpha: GroupMorphism) -> list[Subgroup]:
    """Subgroups K with [G:K] <= 2 and K alpha = K, via kernels of invariant maps to Z2."""
    Z2 = make_group([2])
    kernels = {
        h.kernel()
        for h in enumerate_homs(G, Z2)
        if (alpha * h).images == h.images
    }
    return sorted(kernels, key=lambda k: (-len(k), k))


def characteristic_images(
    G: AbelianGroup, alpha: GroupMorphism
) -> tuple[Subgroup, Subgroup, Subgroup, Subgroup]:
    """Return ``(G_2, 2G, G(1-alpha), 2G + G(1-alpha))``."""
    els = G.elements
    g2 = [u for u in els if G.scale(2, u) == G.zero]
    twice = {G.scale(2, u) for u in els}
    moved = {G.sub(u, alpha(u)) for u in els}
    both = {G.add(a, b) for a in twice for b in moved}
    return tuple(_assert_subgroup(G, s) for s in (g2, twice, moved, both))  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# holomorph


@dataclass(frozen=True)
class HolElement:
    aut: GroupMorphism
    translation: Element

    def __mul__(self, other: HolElement) -> HolElement:
        G = self.aut.domain
        return HolElement(
            self.aut * other.aut, G.add(other.aut(self.translation), other.translation)
        )

    @property
    def key(self) -> tuple:
        return (self.aut.images, self.translation)


def hol_identity(G: AbelianGroup) -> HolElement:
    return HolElement(identity(G), G.zero)


def holomorph(G: AbelianGroup, auts: Iterable[GroupMorphism] | None = None) -> list[HolElement]:
    """Elements of ``Aut(G) x G`` (or of ``auts x G``) in deterministic order."""
    auts = enumerate_automorphisms(G) if auts is None else auts
    out = [HolElement(a, u) for a in auts for u in G.elements]
    return sorted(out, key=lambda x: x.key)


def is_closed(elements: Sequence[HolElement]) -> bool:
    keys = {x.key for x in elements}
    return all((x * y).key in keys for x in elements for y in elements)


def divisor_multiset_difference(a: Iterable[int], b: Iterable[int]) -> tuple[int, ...]:
    """Multiset ``a - b``; raises if ``b`` is not contained in ``a``."""
    ca, cb = Counter(a), Counter(b)
    if cb - ca:
        raise ValueError(f"{sorted(cb.elements())} is not a sub-multiset of {sorted(ca.elements())}")
    return tuple(sorted((ca - cb).elements()))


def divisors_of_cyclic(n: int) -> tuple[int, ...]:
    return make_group([n]).canonical_divisors
