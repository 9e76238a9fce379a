import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zjkit.errors import NotNilpotent, NotNormal
from zjkit.pgroups import abelian_shape
from zjkit.subgroups import (Subgroup, all_normal_subgroups, center, centralizer, commutator_subgroup,
                             conjugacy_classes, generated_subgroup, is_closed, is_normal, lower_central_series,
                             nilpotency_class, normal_closure, normalizer, op_of_action, p_core,
                             p_core_via_normals, quotient, sylow_p, trivial, whole)

from helpers import group
from oracles import Naive

SMALL = [("s3", {}), ("s4", {}), ("d8", {}), ("q8", {}), ("extraspecial", {"p": 3, "exponent": 3}),
         ("extraspecial", {"p": 3, "exponent": 9}), ("elementary_by_cyclic", {"p": 5, "q": 3}),
         ("elementary_abelian", {"p": 2, "k": 3})]


def frozen(H: Subgroup) -> frozenset:
    return frozenset(int(x) for x in H.elems)


def test_generated_basics():
    G = group("heisenberg_mod_p2", p=3)
    assert generated_subgroup(G, []).order == 1
    for x in (1, 5, 77):
        assert generated_subgroup(G, [x]).order == G.order_of[x]
    assert generated_subgroup(G, [G.names["a"], G.names["b"]]).order == 729


@pytest.mark.parametrize("name,params", SMALL)
def test_centralizer_normalizer_against_oracle(name, params):
    G = group(name, **params)
    N = Naive.of(G)
    subs = N.all_subgroups()
    for H in sorted(subs, key=sorted)[:60]:
        sub = Subgroup.from_elements(G, H)
        assert frozen(centralizer(G, sub)) == N.centralizer(H)
        assert frozen(normalizer(G, sub)) == N.normalizer(H)
        assert is_normal(G, sub) == N.is_normal(H)
        assert centralizer(G, sub) <= normalizer(G, sub)


@pytest.mark.parametrize("name,params", SMALL)
def test_normal_subgroups_against_oracle(name, params):
    G = group(name, **params)
    N = Naive.of(G)
    got = {frozen(H) for H in all_normal_subgroups(G)}
    assert got == N.normal_subgroups()


def test_normal_subgroups_examples():
    G = group("elementary_abelian", p=2, k=3)
    assert len(all_normal_subgroups(G)) == 16
    orders = [H.order for H in all_normal_subgroups(group("s4"))]
    assert orders == [1, 4, 12, 24]


def test_center_and_commutators_heisenberg():
    G = group("heisenberg_mod_p2", p=3)
    S = whole(G)
    c = G.names["c"]
    cyc_c = generated_subgroup(G, [c])
    assert center(G) == cyc_c and cyc_c.order == 9
    assert commutator_subgroup(G, S, S) == cyc_c
    assert nilpotency_class(G, S) == 2


def test_commutator_subgroup_trivial_cases():
    G = group("s4")
    S = whole(G)
    assert commutator_subgroup(G, S, trivial(G)).order == 1
    A = generated_subgroup(G, [1])
    assert commutator_subgroup(G, A, A).order == 1
    N = Naive.of(G)
    assert frozen(commutator_subgroup(G, S, S)) == N.commutator_subgroup(range(24), range(24))


def test_centralizer_of_element_semidirect_p4():
    G = group("semidirect_p4", p=3)
    x, y = G.names["x"], G.names["y"]
    A = generated_subgroup(G, [x, y])
    Zx = generated_subgroup(G, [G.power(x, 3)])
    assert A.order == 27
    for a in A.elems:
        if int(a) not in Zx:
            assert centralizer(G, [int(a)], within=whole(G)) == A


def test_nilpotency():
    assert nilpotency_class(group("q8"), whole(group("q8"))) == 2
    G = group("cyclic", n=9)
    assert nilpotency_class(G, whole(G)) == 1
    assert nilpotency_class(G, trivial(G)) == 0
    with pytest.raises(NotNilpotent):
        nilpotency_class(group("s3"), whole(group("s3")))
    series = lower_central_series(group("s3"), whole(group("s3")))
    assert series[-1].order == 3


def test_sylow():
    G = group("s4")
    S = sylow_p(G, 2)
    assert S.order == 8 and normalizer(G, S) == S
    conjugates = {frozenset(int(x) for x in G.conj[g][S.elems]) for g in range(G.n)}
    assert len(conjugates) == 3
    assert sylow_p(G, 3).order == 3
    P = group("extraspecial", p=3, exponent=3)
    assert sylow_p(P, 3) == whole(P)
    T = group("elementary_by_cyclic", p=5, q=3)
    assert sylow_p(T, 5).order == 25 and is_normal(T, sylow_p(T, 5))
    assert sylow_p(T, 2).order == 1


def test_p_core():
    G = group("s4")
    assert p_core(G, 2).order == 4 and p_core(G, 3).order == 1
    for name, params in SMALL:
        H = group(name, **params)
        for p in (2, 3, 5):
            assert p_core(H, p) == p_core_via_normals(H, p)
    P = group("q8")
    assert p_core(P, 2) == whole(P)


def test_op_of_action():
    G = group("s4")
    V = p_core(G, 2)
    assert op_of_action(G, V, 2) == V
    P = group("extraspecial", p=3, exponent=9)
    for N in all_normal_subgroups(P):
        assert op_of_action(P, N, 3) == whole(P)
    Z = center(group("q8"))
    assert op_of_action(group("q8"), Z, 2) == whole(group("q8"))
    with pytest.raises(NotNormal):
        op_of_action(G, generated_subgroup(G, [1]), 2)


@pytest.mark.parametrize("name,params", SMALL)
def test_op_of_action_properties(name, params):
    G = group(name, **params)
    for P in all_normal_subgroups(G):
        for p in (2, 3):
            O = op_of_action(G, P, p)
            assert centralizer(G, P) <= O and is_normal(G, O)


def test_quotient_examples():
    G = group("heisenberg_mod_p2", p=3)
    Q = quotient(G, center(G))
    assert Q.quotient.n == 81 and Q.quotient.is_abelian()
    assert abelian_shape(Q.quotient, whole(Q.quotient), 3).invariants() == (9, 9)
    Q1 = quotient(G, trivial(G))
    assert Q1.quotient.n == G.n
    assert quotient(G, whole(G)).quotient.n == 1
    with pytest.raises(NotNormal):
        quotient(group("s4"), generated_subgroup(group("s4"), [1]))


@pytest.mark.parametrize("name,params", SMALL)
def test_quotient_is_homomorphism(name, params):
    G = group(name, **params)
    for N in all_normal_subgroups(G):
        Q = quotient(G, N)
        proj = Q.proj
        assert (Q.quotient.mul[proj[:, None], proj[None, :]] == proj[G.mul]).all()
        assert set(np.flatnonzero(proj == Q.quotient.id)) == set(N.elems.tolist())
        assert (np.bincount(proj) == N.order).all()


def test_conjugacy_classes_partition():
    G = group("s4")
    classes = conjugacy_classes(G)
    sizes = sorted(len(c) for c in classes)
    assert sizes == [1, 3, 6, 6, 8]


def test_normal_closure():
    G = group("s4")
    assert normal_closure(G, [2]).order == 24
    V = p_core(G, 2)
    assert normal_closure(G, [int(V.elems[1])]) == V


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(SMALL), st.lists(st.integers(0, 10**6), max_size=3))
def test_generated_subgroup_is_closed(case, raw):
    name, params = case
    G = group(name, **params)
    seed = [r % G.n for r in raw]
    H = generated_subgroup(G, seed)
    assert is_closed(G, H.elems)
    assert G.n % H.order == 0
    assert frozenset(int(x) for x in H.elems) == Naive.of(G).closure(seed)
    assert centralizer(G, H) <= normalizer(G, H)
