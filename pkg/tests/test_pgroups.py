import math

import pytest
from hypothesis import assume, given, settings, strategies as st

from zjkit.builders import abelian
from zjkit.errors import NotAbelian, NotAPGroup
from zjkit.pgroups import (EQ, GT, LT, AbelianShape, abelian_shape, all_abelian_subgroups,
                           maximal_abelian_subgroups, lex_compare, omega_i, rank_of_pgroup)
from zjkit.subgroups import centralizer, generated_subgroup, trivial, whole

from helpers import group
from oracles import Naive

P_SMALL = [("d8", {}, 2), ("q8", {}, 2), ("extraspecial", {"p": 3, "exponent": 3}, 3),
           ("extraspecial", {"p": 3, "exponent": 9}, 3), ("semidirect_p4", {"p": 3}, 3),
           ("heisenberg_mod_p2", {"p": 2}, 2), ("elementary_abelian", {"p": 3, "k": 3}, 3)]


def frozen(H):
    return frozenset(int(x) for x in H.elems)


def test_omega_examples():
    G = group("semidirect_p4", p=3)
    N = Naive.of(G)
    S = whole(G)
    assert frozen(omega_i(G, S, 3, 1)) == N.omega(range(G.n), 3, 1)
    assert omega_i(G, S, 3, 2) == S
    assert omega_i(G, S, 3, 0).order == 1
    E = group("elementary_abelian", p=3, k=2)
    assert omega_i(E, whole(E), 3) == whole(E)
    with pytest.raises(NotAPGroup):
        omega_i(group("s3"), whole(group("s3")), 2)


def test_shape_small_cases():
    E = group("elementary_abelian", p=5, k=2)
    sh = abelian_shape(E, whole(E), 5)
    assert (sh.order, sh.exponent, sh.rank, sh.omega) == (25, 5, 2, (25,))
    C = group("cyclic", n=25)
    sh = abelian_shape(C, whole(C), 5)
    assert (sh.order, sh.exponent, sh.rank, sh.omega) == (25, 25, 1, (5, 25))
    assert sh.invariants() == (25,)


def test_shape_in_heisenberg():
    G = group("heisenberg_mod_p2", p=3)
    a, b, c = (G.names[k] for k in "abc")
    A = generated_subgroup(G, [G.power(a, 3), G.power(b, 3), c])
    sh = abelian_shape(G, A, 3)
    assert sh.order == 81 and sh.omega == (27, 81) and sh.invariants() == (9, 3, 3)
    assert rank_of_pgroup(G, whole(G), 3) == 3


def test_shape_errors():
    with pytest.raises(NotAbelian):
        abelian_shape(group("q8"), whole(group("q8")), 2)
    with pytest.raises(NotAPGroup):
        C = group("cyclic", n=6)
        abelian_shape(C, whole(C), 2)


def test_lex_compare_examples():
    E = group("elementary_abelian", p=3, k=2)
    C = group("cyclic", n=9)
    e = abelian_shape(E, whole(E), 3)
    c = abelian_shape(C, whole(C), 3)
    assert lex_compare(e, e) == EQ
    assert lex_compare(e, c) == GT and lex_compare(c, e) == LT
    assert lex_compare(AbelianShape(3, 81, 9, 3, (27, 81)), AbelianShape(3, 81, 9, 2, (9, 81))) == GT
    assert lex_compare([9, 81], [9, 81, 81, 81]) == EQ
    assert lex_compare(c, [3]) == GT
    assert lex_compare(c, [3, 9]) == EQ


def test_lex_total_preorder_on_corpus():
    G = group("heisenberg_mod_p2", p=2)
    shapes = [abelian_shape(G, A, 2) for A in all_abelian_subgroups(G, whole(G))]
    for x in shapes[::5]:
        for y in shapes[::7]:
            assert lex_compare(x, y) == -lex_compare(y, x)
            assert (lex_compare(x, y) == EQ) == (x.omega == y.omega)


def test_rank_examples():
    assert rank_of_pgroup(group("elementary_abelian", p=3, k=3), whole(group("elementary_abelian", p=3, k=3)), 3) == 3
    G = group("semidirect_p4", p=3)
    assert rank_of_pgroup(G, whole(G), 3) == 2


def test_maximal_abelian_examples():
    E = group("elementary_abelian", p=2, k=3)
    assert maximal_abelian_subgroups(E, whole(E)) == [whole(E)]
    G = group("semidirect_p4", p=3)
    x, y = G.names["x"], G.names["y"]
    assert generated_subgroup(G, [x, y]) in maximal_abelian_subgroups(G, whole(G))
    H = group("heisenberg_mod_p2", p=3)
    mx = maximal_abelian_subgroups(H, whole(H))
    assert len(mx) == 13 and all(M.order == 81 for M in mx)


def test_all_abelian_small():
    G = group("elementary_abelian", p=2, k=2)
    assert len(all_abelian_subgroups(G, whole(G))) == 5
    assert all_abelian_subgroups(G, trivial(G)) == [trivial(G)]
    Q = group("q8")
    # 1, the centre, and three cyclic subgroups of order 4
    assert len(all_abelian_subgroups(Q, whole(Q))) == 5


@pytest.mark.parametrize("name,params,p", P_SMALL)
def test_abelian_enumeration_against_oracle(name, params, p):
    G = group(name, **params)
    N = Naive.of(G)
    got = {frozen(A) for A in all_abelian_subgroups(G, whole(G))}
    assert got == N.abelian_subgroups()
    maxes = maximal_abelian_subgroups(G, whole(G))
    assert {frozen(M) for M in maxes} == {A for A in got if not any(A < B for B in got)}
    for A in all_abelian_subgroups(G, whole(G)):
        assert any(A <= M for M in maxes)
    for M in maxes:
        assert centralizer(G, M) == M


def test_abelian_enumeration_inside_subgroup():
    G = group("semidirect_p4", p=3)
    D = omega_i(G, whole(G), 3)
    N = Naive.of(G)
    got = {frozen(A) for A in all_abelian_subgroups(G, D)}
    assert got == N.abelian_subgroups(frozen(D))


@pytest.mark.parametrize("name,params,p", P_SMALL)
def test_omega_monotone_under_inclusion(name, params, p):
    G = group(name, **params)
    abel = all_abelian_subgroups(G, whole(G))
    shapes = {A.mask: abelian_shape(G, A, p) for A in abel}
    for A in abel:
        sh = shapes[A.mask]
        assert list(sh.omega) == sorted(sh.omega)
        assert sh.omega[-1] == sh.order if sh.omega else sh.order == 1
        assert len(sh.omega) == _log(sh.exponent, p)
        for B in abel:
            if A <= B:
                big = shapes[B.mask]
                assert all(big.omega_at(i) >= sh.omega_at(i) for i in range(1, 5))


def _log(n, p):
    k = 0
    while n > 1:
        n //= p
        k += 1
    return k


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from([2, 4, 8, 3, 9, 27, 5, 25]), min_size=1, max_size=3))
def test_shape_recovers_invariants(factors):
    p = 2 if factors[0] in (2, 4, 8) else 3 if factors[0] in (3, 9, 27) else 5
    inv = [f for f in factors if f % p == 0]
    assume(math.prod(inv) <= 1000)
    G = abelian(inv)
    sh = abelian_shape(G, whole(G), p)
    assert sh.invariants() == tuple(sorted(inv, reverse=True))
    assert sh.rank == len(inv)
    assert sh.exponent == max(inv)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 30), min_size=1, max_size=4), st.lists(st.integers(1, 30), min_size=1, max_size=4))
def test_lex_antisymmetric_on_sequences(x, y):
    assert lex_compare(x, y) == -lex_compare(y, x)
    assert lex_compare(x, x) == EQ
