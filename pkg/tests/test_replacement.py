import random

import pytest
from hypothesis import given, settings, strategies as st

from zjkit import bitset
from zjkit.errors import PreconditionViolated
from zjkit.families import STANDARD, compute_family
from zjkit.pgroups import all_abelian_subgroups
from zjkit.replacement import (check_commutator_lemma, check_theorem_dstar, compute_d_star,
                               find_replacement_b, fuzz_replacement, iterate_replacement, replace,
                               replacement_candidates, valid_pairs)
from zjkit.report import PASS
from zjkit.subgroups import (all_normal_subgroups, center, commutator_subgroup, normalizer, normalizes,
                             whole)

from helpers import group
from oracles import Naive

ODD = [("extraspecial", {"p": 3, "exponent": 3}, 3), ("extraspecial", {"p": 3, "exponent": 9}, 3),
       ("semidirect_p4", {"p": 3}, 3), ("extraspecial", {"p": 5, "exponent": 5}, 5)]


def fs(H):
    return frozenset(int(x) for x in H.elems)


def naive_certificate(N: Naive, S, B, A, b, p):
    """Every conclusion of one replacement step, recomputed from element sets."""
    A, B, S = set(A), set(B), set(S)
    Ab = {N.conj(a, b) for a in A}
    meet = A & Ab
    comm = {N.comm(a, b) for a in A}
    A_star = N.closure(meet | comm)
    BB = N.commutator_subgroup(B, B)
    NSA, NSA_star = N.normalizer(A, S), N.normalizer(A_star, S)
    H = N.closure(A | Ab)
    out = {
        1: len(A_star) == len(A),
        2: N.is_abelian(A_star) and BB <= A_star,
        3: (A & B) < (A_star & B) < B,
        4: all(N.conj(a, s) in A for a in A for s in A_star) and all(N.conj(s, a) in A_star for s in A_star for a in A),
        5: b in NSA_star and NSA < NSA_star,
    }
    if p > 2:
        out[6] = all(len(N.omega(A_star, p, i)) >= len(N.omega(A, p, i)) for i in range(1, 5))
    HH = N.commutator_subgroup(H, H)
    out["facts"] = (A_star <= H and HH <= meet and meet <= N.center(H)
                    and H == N.closure(A | comm))
    return out, A_star


def test_none_needed_when_normalized():
    G = group("heisenberg_mod_p2", p=3)
    S = whole(G)
    M = all_abelian_subgroups(G, S)[-1]
    Z = center(G)
    assert find_replacement_b(G, S, Z, M, 3) is None


def test_heisenberg_has_replacement_triples():
    G = group("heisenberg_mod_p2", p=3)
    S = whole(G)
    N = Naive.of(G)
    pairs = valid_pairs(G, S, 3)
    assert pairs
    B, A = pairs[0]
    b = find_replacement_b(G, S, B, A, 3)
    assert b is not None
    NSA = N.normalizer(fs(A))
    brute = {x for x in fs(B) if {N.conj(s, x) for s in NSA} == set(NSA)
             and {N.conj(a, x) for a in fs(A)} != set(fs(A))}
    assert brute and b == min(brute)
    assert set(bitset.to_indices(replacement_candidates(G, S, B, A), G.n).tolist()) == brute


def test_precondition_violations():
    G = group("extraspecial", p=3, exponent=3)
    S = whole(G)
    cyc = [A for A in all_abelian_subgroups(G, S) if A.order == 3 and not A <= center(G)][0]
    with pytest.raises(PreconditionViolated):
        find_replacement_b(G, S, S, cyc, 3)  # [S,S] = Z(S) is not inside cyc
    Q = group("q8")
    with pytest.raises(PreconditionViolated):
        find_replacement_b(Q, whole(Q), whole(Q), center(Q), 2)  # p = 2 needs abelian B
    B, A = valid_pairs(G, S, 3)[0]
    good = set(bitset.to_indices(replacement_candidates(G, S, B, A), G.n).tolist())
    bad = next(x for x in range(G.n) if x not in good)
    with pytest.raises(PreconditionViolated):
        replace(G, S, B, A, bad, 3)


@pytest.mark.parametrize("name,params,p", ODD)
def test_certificates_match_oracle(name, params, p):
    G = group(name, **params)
    S = whole(G)
    N = Naive.of(G)
    rng = random.Random(7)
    pairs = valid_pairs(G, S, p)
    for B, A in rng.sample(pairs, min(15, len(pairs))):
        for b in bitset.to_indices(replacement_candidates(G, S, B, A), G.n)[:2]:
            cert = replace(G, S, B, A, int(b), p)
            expect, A_star = naive_certificate(N, fs(S), fs(B), fs(A), int(b), p)
            assert fs(cert.A_star) == A_star
            for k in range(1, 7 if p > 2 else 6):
                assert cert.conclusions[k] is True and expect[k] is True
            assert all(cert.facts.values()) and expect["facts"]


def test_p2_skips_last_conclusion():
    G = group("heisenberg_mod_p2", p=2)
    S = whole(G)
    B, A = valid_pairs(G, S, 2)[0]
    cert = replace(G, S, B, A, find_replacement_b(G, S, B, A, 2), 2)
    assert cert.conclusions[6] is None and cert.ok


def test_fuzz_zero_failures():
    targets = []
    for name, params, p in ODD:
        G = group(name, **params)
        targets.append((G, whole(G), p))
    certs, failures = fuzz_replacement(targets, 60, seed=3)
    assert len(certs) == 60 and not failures
    again, _ = fuzz_replacement(targets, 60, seed=3)
    assert [c.to_dict() for c in again] == [c.to_dict() for c in certs]


@pytest.mark.parametrize("name,params,p", ODD)
@pytest.mark.parametrize("kind", [s.kind for s in STANDARD])
def test_iteration_per_family(name, params, p, kind):
    G = group(name, **params)
    S = whole(G)
    F = compute_family(G, S, p, next(s for s in STANDARD if s.kind == kind))
    for B in all_normal_subgroups(G, within=S):
        BB = commutator_subgroup(G, B, B)
        for U in F.members:
            if not BB <= U or B <= U:
                continue
            for strategy in ("max", "walk"):
                trail = []
                A = iterate_replacement(G, S, B, F, U, strategy=strategy, trail=trail)
                assert A in F and BB <= A and not B <= A
                assert normalizes(G, B.gens, A)
                sizes = [(c.A & B).order for c in trail] + [(A & B).order]
                assert sizes == sorted(set(sizes))


def test_iteration_keeps_normalized_start():
    G = group("semidirect_p4", p=3)
    S = whole(G)
    F = compute_family(G, S, 3, STANDARD[0])
    found = 0
    for B in all_normal_subgroups(G, within=S):
        BB = commutator_subgroup(G, B, B)
        for U in F.members:
            if BB <= U and not B <= U and normalizes(G, B.gens, U):
                assert iterate_replacement(G, S, B, F, U, strategy="walk") == U
                found += 1
    assert found


def test_commutator_lemma_sweep():
    for name, params in [("d8", {}), ("q8", {}), ("extraspecial", {"p": 3, "exponent": 3}),
                         ("extraspecial", {"p": 3, "exponent": 9}), ("s4", {})]:
        G = group(name, **params)
        subs = all_abelian_subgroups(G, whole(G))
        normals = all_normal_subgroups(G)
        for A in subs:
            for B in normals:
                if not normalizes(G, A.gens, B):
                    continue
                BB = commutator_subgroup(G, B, B)
                if not all(G.commutes[a, x] for a in A.gens for x in BB.gens):
                    continue
                assert check_commutator_lemma(G, A, B).verdict == PASS


def test_commutator_lemma_trivial_cases():
    G = group("extraspecial", p=3, exponent=3)
    A = all_abelian_subgroups(G, whole(G))[0]
    assert check_commutator_lemma(G, A, whole(G)).verdict == PASS
    E = group("elementary_abelian", p=3, k=2)
    assert check_commutator_lemma(E, whole(E), whole(E)).verdict == PASS


def test_d_star_examples():
    E = group("abelian", invariants=(9, 3))
    assert compute_d_star(E, whole(E), 3).D_star == whole(E)
    G = group("heisenberg_mod_p2", p=3)
    res = compute_d_star(G, whole(G), 3)
    assert center(G) <= res.D_star and res.unique and res.abelian and res.contains_all
    assert check_theorem_dstar(G, whole(G), 3).verdict == PASS


def test_d_star_against_definition():
    G = group("semidirect_p4", p=3)
    N = Naive.of(G)
    abel = [fs(A) for A in all_abelian_subgroups(G, whole(G))]

    def holds(K):
        return all(not {N.conj(a, k) for a in A for k in K} <= A or
                   all(N.commute(a, k) for a in A for k in K) for A in abel)

    holders = [fs(K) for K in all_normal_subgroups(G) if holds(fs(K))]
    best = max(holders, key=len)
    assert fs(compute_d_star(G, whole(G), 3).D_star) == best
    assert all(h <= best for h in holders)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_normalizer_strictly_grows(seed):
    G = group("extraspecial", p=5, exponent=5)
    S = whole(G)
    pairs = valid_pairs(G, S, 5)
    B, A = pairs[seed % len(pairs)]
    b = find_replacement_b(G, S, B, A, 5)
    cert = replace(G, S, B, A, b, 5)
    assert normalizer(G, A, within=S) < normalizer(G, cert.A_star, within=S)
