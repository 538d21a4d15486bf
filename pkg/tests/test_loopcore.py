import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import params
from dihlike.dihloop import dih_construct
from dihlike.loopcore import (
    CapExceeded,
    LoopValidationError,
    NotAssociative,
    NotPowerAssociative,
    brute_automorphisms,
    brute_isomorphisms,
    close,
    compose,
    cyclic_group,
    direct_product,
    format_table,
    group_isomorphic,
    identity_perm,
    inn_group,
    inner_generators,
    invert,
    inverses_and_powers,
    is_associative,
    is_automorphic_loop,
    is_automorphism,
    is_commutative,
    left_inn_group,
    loop_from_operation,
    lr_inn_group,
    middle_nucleus,
    mult_group,
    read_table,
    right_inn_group,
    square_root_counts,
    subloop,
    translations,
    unit_group,
    validate_loop,
    write_table,
)


def relabel(Q, perm):
    """Table of Q transported along ``perm`` (which must fix 0)."""
    p = np.array(perm)
    inv = np.argsort(p)
    return validate_loop(p[Q.table[np.ix_(inv, inv)]])


def small_loops():
    return [
        cyclic_group(4),
        dih_construct(params(2, "Z3")),
        dih_construct(params(2, "Z3", "(2)")),
        dih_construct(params(2, "Z5", "(4)")),
        dih_construct(params(4, "Z3")),
        dih_construct(params(2, "Z2xZ2", "(0,1);(1,0)")),
    ]


# validation and file format


def test_validate_accepts_group_and_loop():
    Q = validate_loop([[(a + b) % 4 for b in range(4)] for a in range(4)])
    assert Q.size == 4 and Q.identity_index == 0
    assert dih_construct(params(2, "Z3", "(2)")).size == 6


def test_validate_reports_row():
    t = [[0, 1, 2], [1, 1, 0], [2, 0, 1]]
    with pytest.raises(LoopValidationError, match="row 1"):
        validate_loop(t)


def test_validate_reports_column():
    t = [[0, 1, 2], [1, 2, 0], [1, 0, 2]]
    with pytest.raises(LoopValidationError, match="row 2|column"):
        validate_loop(t)


def test_validate_requires_identity():
    # x*y = -x-y mod 3 is Latin but has no identity
    t = [[(-a - b) % 3 for b in range(3)] for a in range(3)]
    with pytest.raises(LoopValidationError, match="identity"):
        validate_loop(t)


def test_validate_moves_identity_to_zero():
    # Z3 with elements listed as (1, 0, 2): the identity sits at index 1
    els = [1, 0, 2]
    t = [[els.index((els[a] + els[b]) % 3) for b in range(3)] for a in range(3)]
    Q = validate_loop(t, labels=["1", "0", "2"])
    assert Q.label(0) == "0"
    assert (Q.table[0] == np.arange(3)).all()


def test_table_roundtrip(tmp_path):
    Q = dih_construct(params(2, "Z3", "(2)"))
    path = tmp_path / "q.txt"
    write_table(Q, path)
    assert read_table(path) == Q
    assert format_table(read_table(path)) == path.read_text()


def test_read_table_rejects_bad_files(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("2\n1 0\n0 1\n")
    with pytest.raises(LoopValidationError, match="identity"):
        read_table(bad)
    bad.write_text("3\n0 1 2\n")
    with pytest.raises(LoopValidationError, match="expected 9"):
        read_table(bad)


# translations and inner mappings


@pytest.mark.parametrize("Q", small_loops(), ids=str)
def test_translations_are_permutations(Q):
    for x in range(Q.size):
        L, R = translations(Q, x)
        assert sorted(L) == sorted(R) == list(range(Q.size))
    L, R = translations(Q, 0)
    assert L == R == identity_perm(Q.size)


def test_translations_commutative_vs_not():
    Q = cyclic_group(5)
    assert all(translations(Q, x)[0] == translations(Q, x)[1] for x in range(5))
    D = dih_construct(params(2, "Z3"))
    assert any(translations(D, x)[0] != translations(D, x)[1] for x in range(6))


def test_inner_generators_count_and_fixed_identity():
    Q = dih_construct(params(2, "Z3", "(2)"))
    gens = inner_generators(Q)
    assert len(gens) == Q.size + 2 * Q.size**2
    assert all(g.perm[0] == 0 for g in gens)
    assert any(g.kind == "L" and g.perm != identity_perm(6) for g in gens)


def test_inner_generators_of_groups():
    ident = identity_perm(6)
    for g in inner_generators(dih_construct(params(2, "Z3"))):
        if g.kind in ("L", "R"):
            assert g.perm == ident
    for g in inner_generators(cyclic_group(6)):
        assert g.perm == ident


def test_close_examples():
    assert close([identity_perm(4)]).order == 1
    assert close([(1, 2, 0, 3)]).order == 3
    assert close([(1, 0, 2), (0, 2, 1)]).order == 6
    with pytest.raises(CapExceeded):
        close([(1, 2, 3, 4, 0), (1, 0, 2, 3, 4)], cap=50)


def test_close_is_a_group():
    H = close([(1, 2, 3, 0), (0, 3, 2, 1)])
    assert H.order == 8
    for p, q in itertools.product(H.elements, repeat=2):
        assert compose(p, q) in H
    for p in H.elements:
        assert invert(p) in H
    assert 24 % H.order == 0


def test_compose_left_to_right():
    p, q = (1, 2, 0), (0, 2, 1)
    r = compose(p, q)
    assert all(r[x] == q[p[x]] for x in range(3))


@pytest.mark.parametrize("Q", small_loops(), ids=str)
def test_mlt_transitive_with_inn_stabilizer(Q):
    M = mult_group(Q)
    inn = inn_group(Q)
    assert M.order == Q.size * inn.order
    assert set(M.stabilizer(0)) == set(inn.elements)


@pytest.mark.parametrize(
    "Q, order",
    # S3 has trivial centre, so its inner automorphism group has order 6
    [(cyclic_group(6), 1), (dih_construct(params(2, "Z3")), 6), (dih_construct(params(2, "Z5", "(4)")), 10)],
    ids=["Z6", "D6", "Dih(2,Z5,-1)"],
)
def test_inn_orders(Q, order):
    assert inn_group(Q).order == order


def test_inner_mapping_subgroups_nested():
    Q = dih_construct(params(2, "Z5", "(4)"))
    full = set(inn_group(Q).elements)
    lr = lr_inn_group(Q)
    assert set(lr.elements) <= full
    assert set(left_inn_group(Q).elements) == set(right_inn_group(Q).elements) == set(lr.elements)


def test_is_automorphism_examples(dih12):
    Z4 = cyclic_group(4)
    assert is_automorphism(Z4, identity_perm(4))
    assert not is_automorphism(Z4, (0, 2, 1, 3))
    assert is_automorphism(Z4, (0, 3, 2, 1))
    Q = dih_construct(dih12)
    arr = {g.perm for g in inner_generators(Q)}
    assert all(is_automorphism(Q, p) for p in arr)


def test_is_automorphic_loop_examples():
    assert is_automorphic_loop(cyclic_group(7))
    assert is_automorphic_loop(dih_construct(params(2, "Z5", "(4)")))
    G = params(2, "Z5", "(2)").G
    from dihlike.abelian import parse_morphism
    from dihlike.dihloop import raw_params

    assert not is_automorphic_loop(dih_construct(raw_params(4, G, parse_morphism("(2)", G))))


def test_lx_y_equals_r_inverse(dih12, dih2z5neg):
    for P in (dih2z5neg, dih12):
        Q = dih_construct(P)
        J, _ = inverses_and_powers(Q)
        gens = inner_generators(Q)
        L = {g.args: g.perm for g in gens if g.kind == "L"}
        R = {g.args: g.perm for g in gens if g.kind == "R"}
        for (x, y), p in L.items():
            assert p == R[(J[x], J[y])]


def test_antiautomorphic_inverse(dih12, dih2z5neg):
    for P in (dih2z5neg, dih12):
        Q = dih_construct(P)
        J, _ = inverses_and_powers(Q)
        t = Q.table
        for x in range(Q.size):
            for y in range(Q.size):
                assert J[t[x, y]] == t[J[y], J[x]]


# nuclei and powers


def test_middle_nucleus_examples(dih12):
    assert middle_nucleus(cyclic_group(5)) == tuple(range(5))
    assert len(middle_nucleus(dih_construct(dih12))) == 24
    assert len(middle_nucleus(dih_construct(params(2, "Z3", "(2)")))) == 3


def test_inverses_examples():
    J, sq = inverses_and_powers(cyclic_group(5))
    assert J[0] == 0 and J[2] == 3
    assert sq[2] == 4
    P = params(4, "Z3")
    Q = dih_construct(P)
    J, _ = inverses_and_powers(Q)
    G = P.G
    for k in range(Q.size):
        i, u = P.element(k)
        s = -1 if i % 2 else 1
        assert P.element(J[k]) == ((-i) % P.m, G.scale(-s, u))


def test_inverses_reject_non_power_associative():
    # a loop of order 5 in which x has distinct left and right inverses
    t = [
        [0, 1, 2, 3, 4],
        [1, 2, 4, 0, 3],
        [2, 3, 1, 4, 0],
        [3, 4, 0, 2, 1],
        [4, 0, 3, 1, 2],
    ]
    Q = validate_loop(t)
    with pytest.raises(NotPowerAssociative):
        inverses_and_powers(Q)


def test_square_root_counts_sum():
    for Q in small_loops():
        assert sum(square_root_counts(Q)) == Q.size


def test_subloop():
    Q = cyclic_group(6)
    assert subloop(Q, [2]) == (0, 2, 4)
    assert subloop(Q, []) == (0,)
    assert subloop(Q, [2, 3]) == tuple(range(6))


# brute force search


def test_brute_automorphisms_examples(dih12, dih2z5neg):
    assert len(brute_automorphisms(cyclic_group(3))) == 2
    assert len(brute_automorphisms(dih_construct(dih2z5neg))) == 20
    assert len(brute_automorphisms(dih_construct(dih12))) == 64


def test_brute_automorphisms_form_a_group():
    Q = dih_construct(params(2, "Z5", "(4)"))
    auts = set(brute_automorphisms(Q))
    for p, q in itertools.product(auts, repeat=2):
        assert compose(p, q) in auts
    assert all(invert(p) in auts for p in auts)
    assert all(is_automorphism(Q, p) for p in auts)


def test_brute_isomorphisms_self_is_aut():
    Q = dih_construct(params(2, "Z5", "(4)"))
    assert brute_isomorphisms(Q, Q) == brute_automorphisms(Q)


def test_brute_isomorphisms_distinct_alphas():
    Q1 = dih_construct(params(2, "Z5", "(2)"))
    Q2 = dih_construct(params(2, "Z5", "(3)"))
    assert brute_isomorphisms(Q1, Q2) == []
    assert brute_isomorphisms(Q1, cyclic_group(7)) == []


def test_brute_bound():
    with pytest.raises(CapExceeded):
        brute_automorphisms(cyclic_group(10), bound=8)


@given(st.permutations(range(1, 12)))
def test_brute_finds_relabelings(rest):
    Q = dih_construct(params(2, "Z6", "(5)"))
    perm = (0, *rest)
    Q2 = relabel(Q, perm)
    isos = brute_isomorphisms(Q, Q2)
    assert perm in isos
    assert len(isos) == len(brute_automorphisms(Q))


@given(st.permutations(range(1, 8)))
def test_loop_properties_invariant_under_relabeling(rest):
    Q = dih_construct(params(2, "Z4", "(3)"))
    Q2 = relabel(Q, (0, *rest))
    assert is_associative(Q2) == is_associative(Q)
    assert is_commutative(Q2) == is_commutative(Q)
    assert sorted(square_root_counts(Q2)) == sorted(square_root_counts(Q))
    assert len(middle_nucleus(Q2)) == len(middle_nucleus(Q))
    assert inn_group(Q2).order == inn_group(Q).order


def test_group_isomorphic_examples():
    from dihlike.dihloop import dicyclic_group

    assert group_isomorphic(dih_construct(params(4, "Z3")), dicyclic_group(12))
    assert not group_isomorphic(dih_construct(params(6, "Z5")), dih_construct(params(2, "Z15")))
    D = dih_construct(params(2, "Z4"))
    assert group_isomorphic(D, D)
    with pytest.raises(NotAssociative):
        group_isomorphic(dih_construct(params(2, "Z3", "(2)")), D)


def test_group_isomorphic_on_perm_groups():
    Q = dih_construct(params(2, "Z5", "(4)"))
    assert group_isomorphic(inn_group(Q), dih_construct(params(2, "Z5")))


def test_products_and_units():
    Q = direct_product(cyclic_group(2), cyclic_group(3))
    assert group_isomorphic(Q, cyclic_group(6))
    assert unit_group(8).size == 4
    assert not group_isomorphic(unit_group(8), cyclic_group(4))
    assert unit_group(1).size == unit_group(2).size == 1


def test_loop_from_operation():
    Q = loop_from_operation([0, 1, 2], lambda a, b: (a + b) % 3)
    assert Q == cyclic_group(3)
