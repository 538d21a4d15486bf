"""Closed forms for isomorphisms and automorphisms of ``Dih(m, G, alpha)``.

An isomorphism ``Dih(m,G,alpha) -> Dih(m,G,beta)`` (outside the case
``alpha = 1`` with ``exp(G) <= 2``) is determined by a quadruple
``(gamma, z, c, h)``: ``gamma`` an automorphism with ``alpha gamma = gamma beta``,
``z`` in G, ``c`` an odd unit-like residue mod m, and ``h: G -> <m/2>``.
It acts by ``(i,u) -> (i c + u h, (i mod 2) z + u gamma)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple

from .abelian import (
    AbelianGroup,
    Element,
    GroupMorphism,
    HolElement,
    are_conjugate,
    centralizer,
    conjugacy_classes,
    conjugators,
    divisor_multiset_difference,
    divisors_of_cyclic,
    enumerate_homs,
    euler_phi,
    holomorph,
    identity,
    invariant_index2_subgroups,
    characteristic_images,
    iter_isomorphisms,
    is_closed,
    make_group,
    negation,
)
from .dihloop import (
    DihParams,
    abelian_groups_of_order,
    alpha_candidates,
    dih_construct,
    predicates,
)
from .loopcore import (
    FiniteLoop,
    Perm,
    brute_automorphisms,
    brute_isomorphisms,
    direct_product,
    group_isomorphic,
    inn_group,
    inner_arrays,
    inverses_and_powers,
    is_associative,
    is_commutative,
    is_isomorphism,
    loop_from_operation,
    middle_nucleus,
    square_root_counts,
    subloop,
    unit_group,
)


class FormulaNotApplicable(ValueError):
    """The closed forms exclude ``alpha = 1`` with ``exp(G) <= 2``."""


class RecoveryError(ValueError):
    pass


def formula_applies(G: AbelianGroup, alpha: GroupMorphism) -> bool:
    return not (alpha.is_identity and G.exponent <= 2)


def _require_formula(G: AbelianGroup, alpha: GroupMorphism) -> None:
    if not formula_applies(G, alpha):
        raise FormulaNotApplicable(
            "alpha = 1 and exp(G) <= 2: the loop is an abelian group; use brute force"
        )


# ---------------------------------------------------------------------------
# recovering m and G from a table


class RecoveredShape(NamedTuple):
    m: int
    g_divisors: tuple[int, ...]


def abelian_divisors_of(Q: FiniteLoop, elems: Iterable[int]) -> tuple[int, ...]:
    """Elementary divisors of the abelian subgroup ``elems`` of ``Q``."""
    elems = list(elems)
    n = len(elems)
    for a in elems:
        for b in elems:
            if Q.mult(a, b) != Q.mult(b, a):
                raise RecoveryError("subgroup is not abelian")

    def power(x: int, k: int) -> int:
        y = 0
        for _ in range(k):
            y = Q.mult(y, x)
        return y

    divisors = []
    for p in sorted(_prime_factors(n)):
        # counts[k] = #{x : x^(p^k) = 1}; the ratio counts[k]/counts[k-1] is
        # p^(number of cyclic factors of order >= p^k)
        counts = [1]
        while True:
            c = sum(1 for x in elems if power(x, p ** len(counts)) == 0)
            if c == counts[-1]:
                break
            counts.append(c)
        at_least = [_ilog(counts[k] // counts[k - 1], p) for k in range(1, len(counts))]
        at_least.append(0)
        for k in range(len(at_least) - 1):
            divisors.extend([p ** (k + 1)] * (at_least[k] - at_least[k + 1]))
    return tuple(sorted(divisors))


def _prime_factors(n: int) -> set[int]:
    out, p = set(), 2
    while p * p <= n:
        while n % p == 0:
            out.add(p)
            n //= p
        p += 1
    if n > 1:
        out.add(n)
    return out


def _ilog(x: int, p: int) -> int:
    k = 0
    while x > 1:
        if x % p:
            raise RecoveryError("element counts are not prime powers")
        x //= p
        k += 1
    return k


def recover_m_G(Q: FiniteLoop) -> RecoveredShape:
    _, squares = inverses_and_powers(Q)
    chi = square_root_counts(Q)
    s = max(chi)
    S = [x for x in range(Q.size) if chi[x] == s]
    ES = subloop(Q, S)
    m = 2 * len(ES)
    if Q.size % m:
        raise RecoveryError(f"<S> has order {len(ES)}, which is not |Q|/(2|G|) for any G")
    g_order = Q.size // m
    half = divisors_of_cyclic(m // 2)
    if is_associative(Q):
        if is_commutative(Q):
            t = round(math.log2(g_order)) if g_order > 1 else 0
            if 2**t != g_order:
                raise RecoveryError("commutative case needs |Q|/m to be a power of 2")
            return RecoveredShape(m, (2,) * t)
        arr = inner_arrays(Q)
        J, _ = inverses_and_powers(Q)
        inv_set = [
            x for x in range(Q.size) if all(int(arr.T[y, x]) in (x, J[x]) for y in range(Q.size))
        ]
        EG = subloop(Q, S + inv_set)
    else:
        EG = middle_nucleus(Q)
    if len(EG) != Q.size // 2:
        raise RecoveryError(f"expected an index-2 subgroup, found order {len(EG)}")
    try:
        g_div = divisor_multiset_difference(abelian_divisors_of(Q, EG), half)
    except ValueError as exc:
        raise RecoveryError(str(exc)) from exc
    if math.prod(g_div) != g_order:
        raise RecoveryError("recovered divisors do not multiply to |Q|/m")
    return RecoveredShape(m, g_div)


# ---------------------------------------------------------------------------
# parameter quadruples


@dataclass(frozen=True)
class ParQuadruple:
    gamma: GroupMorphism
    z: Element
    c: int
    h: GroupMorphism  # G -> Z_m with image in {0, m/2}

    @property
    def key(self) -> tuple:
        return (self.gamma.images, self.z, self.c, self.h.images)


def valid_c(m: int) -> list[int]:
    return [c for c in range(m) if c % 2 and math.gcd(c, m // 2) == 1]


def valid_h(m: int, G: AbelianGroup, alpha: GroupMorphism) -> list[GroupMorphism]:
    Zm = make_group([m])
    half = m // 2
    homs = [
        h for h in enumerate_homs(G, Zm) if all(v[0] in (0, half) for v in h.images)
    ]
    if half % 2:
        return [h for h in homs if all(v[0] == 0 for v in h.images)]
    return [h for h in homs if (alpha * h).images == h.images]


def check_par(q: ParQuadruple, m: int, G: AbelianGroup, alpha: GroupMorphism, beta: GroupMorphism) -> None:
    if q.gamma.domain != G or not q.gamma.is_bijective:
        raise ValueError("gamma must be an automorphism of G")
    if (alpha * q.gamma).images != (q.gamma * beta).images:
        raise ValueError("gamma does not conjugate alpha to beta")
    if G.normalize(q.z) != q.z:
        raise ValueError("z is not a normalized element of G")
    if not (0 <= q.c < m and q.c % 2 and math.gcd(q.c, m // 2) == 1):
        raise ValueError(f"c = {q.c} must be odd and coprime to m/2")
    if q.h.domain != G or q.h.codomain != make_group([m]):
        raise ValueError("h must map G into Z_m")
    if any(v[0] not in (0, m // 2) for v in q.h.images):
        raise ValueError("h must take values in <m/2>")
    if (m // 2) % 2 and any(v[0] for v in q.h.images):
        raise ValueError("h must be trivial when m/2 is odd")
    if (m // 2) % 2 == 0 and (alpha * q.h).images != q.h.images:
        raise ValueError("h must satisfy alpha h = h")


def enumerate_par(m: int, G: AbelianGroup, alpha: GroupMorphism, beta: GroupMorphism) -> list[ParQuadruple]:
    gammas = conjugators(alpha, beta)
    if not gammas:
        return []
    cs, hs = valid_c(m), valid_h(m, G, alpha)
    return [ParQuadruple(g, z, c, h) for g in gammas for z in G.elements for c in cs for h in hs]


def par_identity(m: int, G: AbelianGroup) -> ParQuadruple:
    Zm = make_group([m])
    return ParQuadruple(identity(G), G.zero, 1, GroupMorphism(G, Zm, ((0,),) * G.rank))


def phi_map(q: ParQuadruple, m: int, G: AbelianGroup, alpha: GroupMorphism, beta: GroupMorphism) -> Perm:
    check_par(q, m, G, alpha, beta)
    n = G.order
    gt, ht = q.gamma.table, q.h.table
    zi = G.index(q.z)
    add = G.add_table
    out = []
    for i in range(m):
        for ui in range(n):
            first = (i * q.c + ht[ui]) % m
            second = add[zi][gt[ui]] if i % 2 else gt[ui]
            out.append(first * n + second)
    return tuple(out)


@lru_cache(maxsize=64)
def _loop(P: DihParams) -> FiniteLoop:
    return dih_construct(P)


def psi_map(iso: Perm, m: int, G: AbelianGroup, alpha: GroupMorphism, beta: GroupMorphism) -> ParQuadruple:
    _require_formula(G, alpha)
    Q1 = _loop(DihParams(m, G, alpha))
    Q2 = _loop(DihParams(m, G, beta))
    if not is_isomorphism(Q1, Q2, iso):
        raise ValueError("map is not an isomorphism between the two loops")
    n = G.order

    def image(i: int, u: Element) -> tuple[int, Element]:
        k = iso[i * n + G.index(u)]
        return k // n, G.elements[k % n]

    gamma = GroupMorphism(G, G, tuple(image(0, g)[1] for g in G.generators()))
    h = GroupMorphism(G, make_group([m]), tuple((image(0, g)[0],) for g in G.generators()))
    for u in G.elements:
        if image(0, u) != (h(u)[0], gamma(u)):
            raise AssertionError("images of (0,u) are not given by a homomorphism")
    c, z = image(1, G.zero)
    q = ParQuadruple(gamma, z, c, h)
    check_par(q, m, G, alpha, beta)
    return q


def par_mult(q0: ParQuadruple, q1: ParQuadruple) -> ParQuadruple:
    """``(g0 g1, z0 g1 + z1, c0 c1 + z0 h1, h0 + g0 h1)``."""
    if q0.gamma.domain != q1.gamma.domain or q0.h.codomain != q1.h.codomain:
        raise ValueError("quadruples belong to different parameter sets")
    G = q0.gamma.domain
    m = q0.h.codomain.moduli[0]
    return ParQuadruple(
        q0.gamma * q1.gamma,
        G.add(q1.gamma(q0.z), q1.z),
        (q0.c * q1.c + q1.h(q0.z)[0]) % m,
        q0.h + q0.gamma * q1.h,
    )


def par_inverse(q: ParQuadruple, elements: Iterable[ParQuadruple]) -> ParQuadruple:
    m, G = q.h.codomain.moduli[0], q.gamma.domain
    e = par_identity(m, G).key
    for r in elements:
        if par_mult(q, r).key == e and par_mult(r, q).key == e:
            return r
    raise ValueError("no inverse in the given set")


# ---------------------------------------------------------------------------
# counting and deciding isomorphism


def aut_order(m: int, G: AbelianGroup, alpha: GroupMorphism) -> int:
    _require_formula(G, alpha)
    base = len(centralizer(alpha)) * G.order * euler_phi(m // 2)
    if (m // 2) % 2:
        return base
    return base * 2 * len(invariant_index2_subgroups(G, alpha))


def _transport(theta: GroupMorphism, a: GroupMorphism) -> GroupMorphism:
    """``theta a theta^{-1}``: an automorphism of theta's domain."""
    return theta * a * theta.inverse


def is_isomorphic(P1: DihParams, P2: DihParams) -> tuple[bool, Perm | None]:
    """Decide ``Dih(P1) ~ Dih(P2)``; on success also return an explicit isomorphism."""
    if P1.m != P2.m or P1.G.canonical_divisors != P2.G.canonical_divisors:
        return False, None
    G, H = P1.G, P2.G
    theta = identity(G) if G == H else next(iter_isomorphisms(G, H))
    beta = _transport(theta, P2.alpha)
    gamma = are_conjugate(P1.alpha, beta)
    if gamma is None:
        return False, None
    psi = gamma * theta  # (i,u) -> (i, u gamma theta)
    n = G.order
    witness = tuple(i * n + psi.table[ui] for i in range(P1.m) for ui in range(n))
    return True, witness


# ---------------------------------------------------------------------------
# inner mapping groups as subgroups of the holomorph


class InnStructure(NamedTuple):
    left_inner: list[HolElement]
    full_inner: list[HolElement]


def _sorted_unique(elems: Iterable[HolElement]) -> list[HolElement]:
    seen = {}
    for x in elems:
        seen.setdefault(x.key, x)
    return [seen[k] for k in sorted(seen)]


def inn_structure(m: int, G: AbelianGroup, alpha: GroupMorphism) -> InnStructure:
    """``<alpha> x| G(1-alpha)`` and ``(+-<alpha>) x| (2G + G(1-alpha))`` inside Hol(G)."""
    _require_formula(G, alpha)
    _, _, moved, both = characteristic_images(G, alpha)
    powers = [alpha.power(k) for k in range(alpha.order)]
    signed = powers + [negation(G) * a for a in powers]
    left = _sorted_unique(HolElement(a, t) for a in powers for t in moved)
    full = _sorted_unique(HolElement(a, t) for a in signed for t in both)
    for S in (left, full):
        if not is_closed(S):
            raise AssertionError("holomorph subset is not closed")
    return InnStructure(left, full)


def hol_table(elements: list[HolElement]) -> FiniteLoop:
    return loop_from_operation(elements, lambda x, y: x * y, key=lambda x: x.key)


def inner_to_hol(P: DihParams, perms: Iterable[Perm]) -> list[HolElement]:
    """Read inner mappings (automorphisms fixing the cosets) as ``(gamma, z)`` pairs."""
    out = []
    for p in perms:
        q = psi_map(p, P.m, P.G, P.alpha, P.alpha)
        out.append(HolElement(q.gamma, q.z))
    return _sorted_unique(out)


# ---------------------------------------------------------------------------
# structure of Aut


def par_group_table(elements: list[ParQuadruple]) -> FiniteLoop:
    return loop_from_operation(elements, par_mult, key=lambda q: q.key)


@dataclass
class AutStructure:
    case: str
    description: str
    claimed_order: int | None
    par_order: int
    verified: bool | None  # None: claimed group not constructed or beyond search bounds


def aut_structure_report(m: int, G: AbelianGroup, alpha: GroupMorphism, bound: int = 128) -> AutStructure:
    _require_formula(G, alpha)
    par = enumerate_par(m, G, alpha, alpha)
    C = centralizer(alpha)
    claimed = None
    if m == 2 and alpha.is_identity:
        case, desc = "hol", "Aut(Q) ~ Hol(G)"
        claimed = hol_table(holomorph(G))
    elif m == 2:
        case, desc = "centralizer-semidirect", "Aut(Q) ~ C(alpha) x| G <= Hol(G)"
        claimed = hol_table(holomorph(G, C))
    elif (m // 2) % 2:
        case, desc = "odd-half", "Aut(Q) ~ (C(alpha) x| G) x Z_{m/2}^*"
        claimed = direct_product(hol_table(holomorph(G, C)), unit_group(m // 2))
    elif alpha.is_identity:
        case, desc = "projection-hol", "projection of Aut(Q) to (gamma, z) is Hol(G)"
        proj = _sorted_unique(HolElement(q.gamma, q.z) for q in par)
        hol = holomorph(G)
        ok = [x.key for x in proj] == [x.key for x in hol]
        for a in par:
            for b in par:
                r = par_mult(a, b)
                if (HolElement(a.gamma, a.z) * HolElement(b.gamma, b.z)).key != (r.gamma.images, r.z):
                    ok = False
        return AutStructure(case, desc, len(hol), len(par), ok)
    else:
        return AutStructure("none", "no closed structure; Par group returned as-is", None, len(par), None)
    verified: bool | None
    if claimed.size != len(par):
        verified = False
    elif claimed.size > bound:
        verified = None
    else:
        verified = group_isomorphic(claimed, par_group_table(par), bound)
    return AutStructure(case, desc, claimed.size, len(par), verified)


# ---------------------------------------------------------------------------
# reports and catalog


def aut_report(P: DihParams, mode: str = "both", cap: int = 2_000_000) -> dict:
    m, G, alpha = P.m, P.G, P.alpha
    Q = dih_construct(P)
    report: dict = {
        "m": m,
        "group": str(G),
        "alpha": str(alpha),
        "aut_order_formula": None,
        "aut_order_brute": None,
        "par_count": None,
        "inn_order": inn_group(Q, cap).order,
        "structure_case": None,
        "witnesses_verified": None,
    }
    applies = formula_applies(G, alpha)
    if not applies:
        report["structure_case"] = "formula-not-applicable"
    brute = None
    if mode in ("brute", "both") or not applies:
        brute = brute_automorphisms(Q)
        report["aut_order_brute"] = len(brute)
    if applies and mode in ("formula", "both"):
        par = enumerate_par(m, G, alpha, alpha)
        report["aut_order_formula"] = aut_order(m, G, alpha)
        report["par_count"] = len(par)
        images = [phi_map(q, m, G, alpha, alpha) for q in par]
        ok = all(is_isomorphism(Q, Q, p) for p in images)
        if brute is not None:
            ok = ok and sorted(images) == brute
        report["witnesses_verified"] = ok
        report["structure_case"] = aut_structure_report(m, G, alpha).case
    return report


def iso_report(P1: DihParams, P2: DihParams, mode: str = "both") -> dict:
    iso, witness = is_isomorphic(P1, P2)
    Q1, Q2 = dih_construct(P1), dih_construct(P2)
    report: dict = {
        "m": P1.m,
        "group": str(P1.G),
        "alpha": str(P1.alpha),
        "beta": str(P2.alpha),
        "isomorphic": iso,
        "par_count": None,
        "iso_count_brute": None,
        "witnesses_verified": None,
    }
    ok = witness is None or is_isomorphism(Q1, Q2, witness)
    same = P1.G == P2.G and P1.m == P2.m
    if same and formula_applies(P1.G, P1.alpha) and mode in ("formula", "both"):
        par = enumerate_par(P1.m, P1.G, P1.alpha, P2.alpha)
        report["par_count"] = len(par)
        images = [phi_map(q, P1.m, P1.G, P1.alpha, P2.alpha) for q in par]
        ok = ok and all(is_isomorphism(Q1, Q2, p) for p in images)
    if mode in ("brute", "both"):
        brute = brute_isomorphisms(Q1, Q2)
        report["iso_count_brute"] = len(brute)
        ok = ok and (len(brute) > 0) == iso
        if report["par_count"] is not None:
            ok = ok and sorted(images) == brute
    report["witnesses_verified"] = ok
    return report


class CatalogEntry(NamedTuple):
    order: int
    m: int
    group: AbelianGroup
    alpha: GroupMorphism
    class_size: int
    is_group: bool
    is_commutative: bool

    @property
    def params(self) -> DihParams:
        return DihParams(self.m, self.group, self.alpha)


def catalog(max_order: int) -> list[CatalogEntry]:
    """One representative per isomorphism class of dihedral-like loops of order <= max_order."""
    out = []
    for order in range(2, max_order + 1, 2):
        for m in range(2, order + 1, 2):
            if order % m:
                continue
            for G in abelian_groups_of_order(order // m):
                for cls in conjugacy_classes(G, alpha_candidates(m, G)):
                    rep = cls[0]
                    pr = predicates(DihParams(m, G, rep))
                    out.append(CatalogEntry(order, m, G, rep, len(cls), pr.is_group, pr.is_commutative_group))
    return out
