"""Thompson-Glauberman replacement, its iteration, and the D*(S) checks."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from . import bitset
from .errors import FamilyNotClosed, InternalError, PreconditionViolated, TheoremViolation
from .families import FamilyInstance
from .group import GroupTable
from .pgroups import abelian_shape, all_abelian_subgroups, log_p, omega_i
from .report import Check, verdict
from .subgroups import (Subgroup, all_normal_subgroups, center, centralizer, commutator_elements,
                        commutator_subgroup, conjugate_subgroup, generated_subgroup, is_normal, join,
                        normal_closure, normalizer, normalizes)


@dataclass
class ReplacementCertificate:
    """One replacement step ``A -> A* = (A ∩ A^b)[A, b]`` with its verified conclusions.

    ``conclusions`` maps 1..6 to a bool (6 is ``None`` when p = 2);
    ``facts`` records the intermediate claims used to reach them.
    """

    A: Subgroup
    B: Subgroup
    b: int
    A_star: Subgroup
    H: Subgroup
    p: int
    conclusions: dict[int, bool | None]
    facts: dict[str, bool]
    diagnostics: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v is not False for v in self.conclusions.values()) and all(self.facts.values())

    def to_dict(self) -> dict:
        return {
            "A": list(map(int, self.A.elems)),
            "B": list(map(int, self.B.elems)),
            "b": int(self.b),
            "A_star": list(map(int, self.A_star.elems)),
            "H_order": self.H.order,
            "conclusions": {str(k): v for k, v in self.conclusions.items()},
            "facts": dict(self.facts),
            "diagnostics": self.diagnostics,
        }


def _check_preconditions(G: GroupTable, S: Subgroup, B: Subgroup, A: Subgroup, p: int) -> Subgroup:
    if not (B <= S and A <= S):
        raise PreconditionViolated("containment", "A and B must lie in S")
    if not is_normal(G, B, within=S):
        raise PreconditionViolated("B normal in S")
    if not A.is_abelian():
        raise PreconditionViolated("A abelian")
    BB = commutator_subgroup(G, B, B)
    if not BB <= A:
        raise PreconditionViolated("[B,B] <= A")
    if p == 2 and not B.is_abelian():
        raise PreconditionViolated("B abelian when p = 2")
    return BB


def replacement_candidates(G: GroupTable, S: Subgroup, B: Subgroup, A: Subgroup) -> int:
    """Bitset of ``N_B(N_S(A)) - N_B(A)``."""
    NSA = normalizer(G, A, within=S)
    return normalizer(G, NSA, within=B).mask & ~normalizer(G, A, within=B).mask


def find_replacement_b(G: GroupTable, S: Subgroup, B: Subgroup, A: Subgroup, p: int) -> int | None:
    """Smallest ``b`` in ``N_B(N_S(A)) - N_B(A)``, or None when B already normalizes A."""
    _check_preconditions(G, S, B, A, p)
    if normalizes(G, B.gens, A):
        return None
    cand = replacement_candidates(G, S, B, A)
    if not cand:
        raise TheoremViolation("B does not normalize A but no replacement element exists")
    return bitset.lowest(cand)


def _omega_dominates(new, old) -> bool:
    length = max(len(new.omega), len(old.omega))
    return all(new.omega_at(i) >= old.omega_at(i) for i in range(1, length + 1))


def replace(G: GroupTable, S: Subgroup, B: Subgroup, A: Subgroup, b: int, p: int,
            strict: bool = True) -> ReplacementCertificate:
    """Build ``A*`` for the given b and verify the six conclusions from the element sets."""
    BB = _check_preconditions(G, S, B, A, p)
    b = int(b)
    if not (replacement_candidates(G, S, B, A) >> b) & 1:
        raise PreconditionViolated("b in N_B(N_S(A)) - N_B(A)")

    Ab = conjugate_subgroup(G, A, b)
    meet = A & Ab
    comm_Ab = generated_subgroup(G, commutator_elements(G, A, [b]))
    A_star = join(G, meet, comm_Ab)
    H = join(G, A, Ab)

    NSA = normalizer(G, A, within=S)
    NSA_star = normalizer(G, A_star, within=S)
    AnB, AsnB = A & B, A_star & B
    shape_A = abelian_shape(G, A, p)
    star_abelian = A_star.is_abelian()

    conclusions: dict[int, bool | None] = {
        1: A_star.order == A.order,
        2: star_abelian and BB <= A_star,
        3: AnB < AsnB and AsnB < B,
        4: normalizes(G, A_star.gens, A) and normalizes(G, A.gens, A_star),
        5: b in NSA_star and NSA < NSA_star,
        6: None,
    }
    diagnostics = {"order_A": A.order, "order_A_star": A_star.order,
                   "A_cap_B": AnB.order, "A_star_cap_B": AsnB.order,
                   "N_S(A)": NSA.order, "N_S(A_star)": NSA_star.order,
                   "omega_A": list(shape_A.omega)}
    if p > 2:
        if star_abelian:
            shape_star = abelian_shape(G, A_star, p)
            conclusions[6] = _omega_dominates(shape_star, shape_A)
            diagnostics["omega_A_star"] = list(shape_star.omega)
        else:
            conclusions[6] = False

    HH = commutator_subgroup(G, H, H)
    facts = {
        "A_star <= H": A_star <= H,
        "[H,H] <= A cap A^b": HH <= meet,
        "A cap A^b <= Z(H)": meet <= center(G, H),
        "H = A[A,b]": H == join(G, A, comm_Ab),
    }
    if p > 2:
        ok = True
        for i in range(1, log_p(H.exponent(), p) + 1):
            Om = omega_i(G, H, p, i)
            if Om.exponent() > p**i:
                ok = False
                break
        facts["exp Omega_i(H) <= p^i"] = ok

    cert = ReplacementCertificate(A, B, b, A_star, H, p, conclusions, facts, diagnostics)
    if strict and not cert.ok:
        bad = [k for k, v in conclusions.items() if v is False] + [k for k, v in facts.items() if not v]
        raise TheoremViolation(f"replacement certificate fails {bad}: {diagnostics}")
    return cert


def iterate_replacement(G: GroupTable, S: Subgroup, B: Subgroup, family: FamilyInstance, U: Subgroup,
                        strategy: str = "max", trail: list | None = None) -> Subgroup:
    """A family member containing [B,B], not containing B, and normalized by B.

    ``strategy="max"`` starts, as in the existence argument, from a member of
    ``<U^S>`` with ``|A ∩ B|`` largest; ``"walk"`` starts from U itself. Any
    member reached that B fails to normalize is replaced, and every
    replacement must land back in the family with ``|A ∩ B|`` strictly larger.
    Certificates are appended to ``trail`` when given.
    """
    p = family.p
    if U.mask not in family.member_masks():
        raise PreconditionViolated("U is a family member")
    if not is_normal(G, B, within=S):
        raise PreconditionViolated("B normal in S")
    BB = commutator_subgroup(G, B, B)
    if not BB <= U or B <= U:
        raise PreconditionViolated("[B,B] <= U and B not <= U")
    W = normal_closure(G, U, within=S)
    pool = [A for A in family.members if BB <= A and not B <= A and A <= W]
    if strategy == "max":
        A = min(pool, key=lambda X: (-(X & B).order, X.key()))
    elif strategy == "walk":
        A = U
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    masks = family.member_masks()
    rounds = 0
    max_rounds = max(1, log_p(B.order, p))
    while not normalizes(G, B.gens, A):
        b = find_replacement_b(G, S, B, A, p)
        cert = replace(G, S, B, A, b, p)
        if trail is not None:
            trail.append(cert)
        A_star = cert.A_star
        if A_star.mask not in masks:
            raise FamilyNotClosed(f"A* of order {A_star.order} is not a member of {family.spec.name}")
        if not A_star <= W or B <= A_star or not BB <= A_star:
            raise TheoremViolation("A* left the admissible pool")
        if not (A_star & B).order > (A & B).order:
            raise TheoremViolation("|A ∩ B| did not grow")
        A = A_star
        rounds += 1
        if rounds > max_rounds:
            raise InternalError(f"replacement did not terminate in {max_rounds} rounds")
    return A


def check_commutator_lemma(G: GroupTable, A: Subgroup, B: Subgroup) -> Check:
    """``[[B,A],[B,A]] <= Z(B)``; for abelian A also the exponent-2 claim per b.

    Requires A to normalize B and to centralize [B,B]. The hypothesis
    ``[b,A,A,A] = 1`` is read elementwise with left-nested brackets.
    """
    if not normalizes(G, A.gens, B):
        raise PreconditionViolated("A normalizes B")
    BB = commutator_subgroup(G, B, B)
    if not BB <= centralizer(G, A):
        raise PreconditionViolated("[A,[B,B]] = 1")
    BA = commutator_subgroup(G, B, A)
    D = commutator_subgroup(G, BA, BA)
    part1 = D <= center(G, B)
    witnesses = [] if part1 else [["[[B,A],[B,A]]", list(map(int, D.elems))]]
    checked = 0
    part2 = True
    if A.is_abelian():
        CA = centralizer(G, A).bool
        a = A.elems
        for b in B.elems:
            c1 = commutator_elements(G, [b], a)
            # [b,x,y,z] = 1 for all z  <=>  [b,x,y] centralizes A
            c2 = G.mul[np.ix_(G.inv[c1], G.inv[a])]
            c2 = G.mul[c2, G.mul[np.ix_(c1, a)]]
            if not CA[c2].all():
                continue
            checked += 1
            bA = generated_subgroup(G, c1)
            Dp = commutator_subgroup(G, bA, bA)
            if Dp.exponent() > 2:
                part2 = False
                witnesses.append(["b", int(b), list(map(int, Dp.elems))])
    return Check("commutator_lemma", verdict(part1 and part2), witnesses=witnesses,
                 details={"A": A.order, "B": B.order, "part1": part1, "part2_elements": checked})


@dataclass
class DStarResult:
    D_star: Subgroup
    witnesses: dict[str, int]
    holders: list[Subgroup]
    contains_all: bool
    abelian: bool
    join_closed: bool
    unique: bool


def compute_d_star(G: GroupTable, S: Subgroup, p: int) -> DStarResult:
    """Largest normal subgroup of S centralizing every abelian subgroup it normalizes, by brute force."""
    key = ("d_star", S.mask)
    if key in G._cache:
        return G._cache[key]
    abelians = all_abelian_subgroups(G, S)
    norm_c = [(normalizer(G, A, within=S).mask, centralizer(G, A, within=S).mask) for A in abelians]

    def has_property(N: Subgroup) -> bool:
        m = N.mask
        return all(m & ~nm or not m & ~cm for nm, cm in norm_c)

    holders = [N for N in all_normal_subgroups(G, within=S) if has_property(N)]
    top = max(h.order for h in holders)
    biggest = [h for h in holders if h.order == top]
    D = biggest[0]
    contains_all = all(h <= D for h in holders)
    join_closed = all(has_property(join(G, X, Y)) for i, X in enumerate(holders) for Y in holders[i + 1:])
    res = DStarResult(D, {"holder_orders": sorted(h.order for h in holders)}, holders,
                      contains_all, D.is_abelian(), join_closed, len(biggest) == 1 and contains_all)
    G._cache[key] = res
    return res


def check_theorem_dstar(G: GroupTable, S: Subgroup, p: int) -> Check:
    """Abelian subgroups whose normalizer is inclusion-maximal in their order class centralize D*(S).

    For odd p the comparison class is also narrowed to same-order subgroups
    whose omega sequence dominates, which admits more subgroups to test.
    """
    res = compute_d_star(G, S, p)
    CD = centralizer(G, res.D_star, within=S)
    abelians = all_abelian_subgroups(G, S)
    norms = {A.mask: normalizer(G, A, within=S).mask for A in abelians}
    shapes = {A.mask: abelian_shape(G, A, p) for A in abelians}
    by_order: dict[int, list[Subgroup]] = {}
    for A in abelians:
        by_order.setdefault(A.order, []).append(A)

    def strictly_inside(m1, m2):
        return m1 != m2 and not m1 & ~m2

    failures, tested, tested_strong = [], 0, 0
    for order, group in by_order.items():
        for A in group:
            nA = norms[A.mask]
            if not any(strictly_inside(nA, norms[X.mask]) for X in group):
                tested += 1
                if not A <= CD:
                    failures.append(["maximal normalizer", list(map(int, A.elems))])
            if p > 2:
                rivals = [X for X in group if _omega_dominates(shapes[X.mask], shapes[A.mask])]
                if not any(strictly_inside(nA, norms[X.mask]) for X in rivals):
                    tested_strong += 1
                    if not A <= CD:
                        failures.append(["maximal among omega-dominating", list(map(int, A.elems))])
    structural = res.unique and res.abelian and res.contains_all
    ok = structural and not failures
    if not res.join_closed:
        failures.append(["holders not closed under join", res.witnesses["holder_orders"]])
    return Check("dstar", verdict(ok), witnesses=failures,
                 details={"D_star": res.D_star.order, "holders": len(res.holders), "unique": res.unique,
                          "abelian": res.abelian, "join_closed": res.join_closed,
                          "tested": tested, "tested_strong": tested_strong})


# -- fuzzing -----------------------------------------------------------------

def valid_pairs(G: GroupTable, S: Subgroup, p: int) -> list[tuple[Subgroup, Subgroup]]:
    """All (B, A) with B normal in S, A abelian containing [B,B], and B not normalizing A."""
    out = []
    abelians = all_abelian_subgroups(G, S)
    for B in all_normal_subgroups(G, within=S):
        if p == 2 and not B.is_abelian():
            continue
        BB = commutator_subgroup(G, B, B)
        for A in abelians:
            if BB <= A and not normalizes(G, B.gens, A):
                out.append((B, A))
    return out


def fuzz_replacement(targets: list[tuple[GroupTable, Subgroup, int]], count: int, seed: int = 0,
                     ) -> tuple[list[ReplacementCertificate], list[dict]]:
    """Sample ``count`` valid (S, B, A, b) instances across ``targets`` and certify each.

    Returns the certificates and a list of failures (each with its instance).
    """
    rng = random.Random(seed)
    pool = []
    for t, (G, S, p) in enumerate(targets):
        for B, A in valid_pairs(G, S, p):
            pool.append((t, B, A))
    if not pool:
        return [], []
    picks = [pool[rng.randrange(len(pool))] for _ in range(count)]
    certs, failures = [], []
    for t, B, A in picks:
        G, S, p = targets[t]
        cands = bitset.to_indices(replacement_candidates(G, S, B, A), G.n)
        b = int(cands[rng.randrange(len(cands))])
        try:
            cert = replace(G, S, B, A, b, p, strict=False)
        except Exception as exc:  # a crash is a failed instance, not an aborted sweep
            failures.append({"group": G.label, "b": b, "error": repr(exc)})
            continue
        certs.append(cert)
        if not cert.ok:
            failures.append({"group": G.label, **cert.to_dict()})
    return certs, failures

