"""Dihedral-like loops ``Dih(m, G, alpha)`` on ``Z_m x G``.

Product: ``(i,u)(j,v) = (i+j mod m, (s_j u + v) alpha^(i*j))`` with
``s_j = (-1)^j``, where ``i, j`` are the representatives in ``[0, m)`` and
the exponent ``i*j`` is an ordinary integer product (never reduced mod m).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .abelian import (
    AbelianGroup,
    Element,
    GroupMorphism,
    abelian_groups_of_order,
    enumerate_automorphisms,
    identity,
    involutions,
)
from .loopcore import FiniteLoop, Perm, is_associative, validate_loop

DihElement = tuple[int, Element]


class NotDihedralLike(ValueError):
    pass


@dataclass(frozen=True)
class DihParams:
    m: int
    G: AbelianGroup
    alpha: GroupMorphism
    strict: bool = True

    def __post_init__(self):
        if self.m < 2:
            raise NotDihedralLike(f"m must be at least 2, got {self.m}")
        if self.alpha.domain != self.G or self.alpha.codomain != self.G or not self.alpha.is_bijective:
            raise NotDihedralLike("alpha must be an automorphism of G")
        if self.strict:
            if self.m % 2:
                raise NotDihedralLike(f"m must be even, got {self.m}")
            if self.m > 2 and not (self.alpha * self.alpha).is_identity:
                raise NotDihedralLike("alpha^2 must be the identity when m > 2")

    @property
    def order(self) -> int:
        return self.m * self.G.order

    @cached_property
    def E(self) -> tuple[int, ...]:
        return tuple(range(0, self.m, 2))

    @cached_property
    def _alpha_powers(self) -> tuple[tuple[int, ...], ...]:
        out = [identity(self.G).table]
        for _ in range(1, self.alpha.order):
            out.append(tuple(self.alpha.table[i] for i in out[-1]))
        return tuple(out)

    def alpha_power_table(self, e: int) -> tuple[int, ...]:
        """Index map of ``alpha^e`` for any integer ``e``."""
        return self._alpha_powers[e % self.alpha.order]

    def alpha_pow(self, e: int, u: Element) -> Element:
        G = self.G
        return G.elements[self.alpha_power_table(e)[G.index(u)]]

    def elements(self) -> list[DihElement]:
        return [(i, u) for i in range(self.m) for u in self.G.elements]

    def index(self, x: DihElement) -> int:
        i, u = x
        return (i % self.m) * self.G.order + self.G.index(u)

    def element(self, k: int) -> DihElement:
        i, r = divmod(k, self.G.order)
        return (i, self.G.elements[r])

    def __str__(self) -> str:
        return f"Dih({self.m},{self.G},{self.alpha})"


def dih_params(m: int, G: AbelianGroup, alpha: GroupMorphism | None = None) -> DihParams:
    return DihParams(m, G, identity(G) if alpha is None else alpha)


def raw_params(m: int, G: AbelianGroup, alpha: GroupMorphism | None = None) -> DihParams:
    """Parameters without the dihedral-like restriction (odd m, alpha^2 != 1)."""
    return DihParams(m, G, identity(G) if alpha is None else alpha, strict=False)


def sign(j: int) -> int:
    return -1 if j % 2 else 1


def dih_mult(P: DihParams, x: DihElement, y: DihElement) -> DihElement:
    i, u = x
    j, v = y
    G = P.G
    w = G.add(G.scale(sign(j), u), v)
    return ((i + j) % P.m, P.alpha_pow(i * j, w))


def dih_construct(P: DihParams) -> FiniteLoop:
    """Full table, elements ordered by ``i`` and then by the coordinates of ``u``."""
    G, m, n = P.G, P.m, P.G.order
    add = np.array(G.add_table, dtype=np.int64)
    neg = np.array(G.neg_table, dtype=np.int64)
    signed = (add, add[neg, :])  # [u, v] -> s_j u + v for even / odd j
    t = np.empty((m * n, m * n), dtype=np.int64)
    for i in range(m):
        for j in range(m):
            a = np.array(P.alpha_power_table(i * j), dtype=np.int64)
            t[i * n : (i + 1) * n, j * n : (j + 1) * n] = ((i + j) % m) * n + a[signed[j % 2]]
    labels = [f"({i},{''.join(map(str, u))})" for i, u in P.elements()]
    Q = validate_loop(t, labels)
    return Q


def is_automorphic_params(m: int, G: AbelianGroup, alpha: GroupMorphism) -> bool:
    if m == 2:
        return True
    if m % 2 == 0:
        return (alpha * alpha).is_identity
    return alpha.is_identity and G.exponent <= 2


class Predicates(NamedTuple):
    is_group: bool
    is_commutative_group: bool


def predicates(P: DihParams) -> Predicates:
    is_group = P.alpha.is_identity
    return Predicates(is_group, is_group and P.G.exponent <= 2)


# ---------------------------------------------------------------------------
# squaring census


def chi_counts(P: DihParams) -> dict[DihElement, int]:
    counts = {x: 0 for x in P.elements()}
    for x in P.elements():
        counts[dih_mult(P, x, x)] += 1
    return counts


def chi_count(P: DihParams, x: DihElement) -> int:
    return sum(1 for y in P.elements() if dih_mult(P, y, y) == x)


def squaring_violations(P: DihParams, counts: dict[DihElement, int] | None = None) -> list[str]:
    """Check the five square-root census bounds; return a message per failure."""
    counts = chi_counts(P) if counts is None else counts
    G, m = P.G, P.m
    g, g2 = G.order, sum(1 for u in G.elements if G.scale(2, u) == G.zero)
    bad = []
    for (i, u), c in counts.items():
        if c > 2 * g:
            bad.append(f"({i},{u}) has {c} > 2|G| square roots")
        if i % 2 and c:
            bad.append(f"odd ({i},{u}) has {c} square roots")
        if u != G.zero and c > g:
            bad.append(f"({i},{u}) with u != 0 has {c} > |G| square roots")
        if i % 2 == 0 and u == G.zero and (m // 2) % 2 and c != g + g2:
            bad.append(f"({i},0) has {c} != |G|+|G_2| = {g + g2} square roots")
    if (m // 2) % 2 == 0:
        c = counts[(2 % m, G.zero)]
        if c != 2 * g:
            bad.append(f"(2,0) has {c} != 2|G| square roots")
    return bad


# ---------------------------------------------------------------------------
# closed-form inner mappings


def _perm_from(P: DihParams, fn) -> Perm:
    return tuple(P.index(fn(x)) for x in P.elements())


def inner_T(P: DihParams, a: DihElement) -> Perm:
    """``(k,w) T_(i,u) = (k, (1 - s_k) u + s_i w)``."""
    i, u = a
    G = P.G

    def img(x):
        k, w = x
        return (k, G.add(G.scale(1 - sign(k), u), G.scale(sign(i), w)))

    return _perm_from(P, img)


def inner_R(P: DihParams, b: DihElement, a: DihElement) -> Perm:
    """``R_{b,a}`` for ``b = (j,v)``, ``a = (i,u)``:
    ``(k,w) -> (k, w a^{ij} - s_i u a^{ij} (a^{-jk} - 1))``."""
    j, _ = b
    i, u = a
    G = P.G
    ua = P.alpha_pow(i * j, u)

    def img(x):
        k, w = x
        corr = G.sub(P.alpha_pow(-j * k, ua), ua)
        return (k, G.sub(P.alpha_pow(i * j, w), G.scale(sign(i), corr)))

    return _perm_from(P, img)


def inner_L(P: DihParams, b: DihElement, a: DihElement) -> Perm:
    """``L_{b,a}`` for ``b = (j,v)``, ``a = (i,u)``:
    ``(k,w) -> (k, w a^{ij} + u a^{ij} (a^{-jk} - 1))``."""
    j, _ = b
    i, u = a
    G = P.G
    ua = P.alpha_pow(i * j, u)

    def img(x):
        k, w = x
        corr = G.sub(P.alpha_pow(-j * k, ua), ua)
        return (k, G.add(P.alpha_pow(i * j, w), corr))

    return _perm_from(P, img)


# ---------------------------------------------------------------------------
# generalized dicyclic groups


def dicyclic_construct(A: AbelianGroup, y: Element) -> FiniteLoop:
    """``Dic(A, y)`` on pairs ``(e, a)``, ``e`` in {0, 1}.

    ``(e1,a)(e2,b) = (e1 xor e2, (-1)^e2 a + b + e1*e2*y)``.
    """
    y = A.normalize(y)
    if A.element_order(y) != 2:
        raise ValueError(f"{y} does not have order 2 in {A}")
    n = A.order
    els = [(e, a) for e in (0, 1) for a in A.elements]

    def idx(x):
        return x[0] * n + A.index(x[1])

    t = np.empty((2 * n, 2 * n), dtype=np.int64)
    for p, (e1, a) in enumerate(els):
        for q, (e2, b) in enumerate(els):
            s = A.neg(a) if e2 else a
            w = A.add(s, b)
            if e1 and e2:
                w = A.add(w, y)
            t[p, q] = idx((e1 ^ e2, w))
    Q = validate_loop(t)
    if not is_associative(Q):
        raise AssertionError("dicyclic construction is not associative")
    return Q


def dicyclic_group(order: int) -> FiniteLoop:
    """``Dic_{4n}``: ``A = Z_{2n}`` with its unique involution."""
    if order % 4:
        raise ValueError("dicyclic groups have order divisible by 4")
    n = order // 4
    return dicyclic_construct(AbelianGroup((2 * n,)), (n,))


# ---------------------------------------------------------------------------
# enumeration


def alpha_candidates(m: int, G: AbelianGroup) -> list[GroupMorphism]:
    return list(enumerate_automorphisms(G)) if m == 2 else involutions(G)


def dihedral_like_params(order: int) -> list[DihParams]:
    """Every parameter triple (one G per isomorphism type) giving a loop of ``order``."""
    out = []
    for m in range(2, order + 1, 2):
        if order % m:
            continue
        for G in abelian_groups_of_order(order // m):
            for a in alpha_candidates(m, G):
                out.append(DihParams(m, G, a))
    return out
