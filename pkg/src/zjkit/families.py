"""Families of abelian subgroups and their intersection (I) and join (J) subgroups."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidParams, NotAPGroup
from .group import GroupTable
from .pgroups import (EQ, GT, AbelianShape, all_abelian_subgroups, lex_compare, omega_i,
                      rank_of_pgroup, shape_cached)
from .report import UNMET, Check, verdict
from .subgroups import Subgroup, center, centralizer, generated_subgroup, is_p_group, trivial

KINDS = ("ao", "ar", "ae", "alex", "aolex", "aoez")


@dataclass(frozen=True)
class FamilySpec:
    """Which family to take. ``O``, ``E`` and ``zeta`` are used by ``aoez`` only;
    ``zeta`` repeats its last entry indefinitely."""

    kind: str
    O: int | None = None
    E: int | None = None
    zeta: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParams(f"unknown family {self.kind!r}; expected one of {KINDS}")
        if self.kind == "aoez":
            if self.O is None or self.E is None or not self.zeta:
                raise InvalidParams("aoez needs O, E and a non-empty zeta")
            object.__setattr__(self, "zeta", tuple(int(z) for z in self.zeta))

    @property
    def name(self) -> str:
        if self.kind == "aoez":
            return f"aoez(O={self.O},E={self.E},zeta={list(self.zeta)})"
        return self.kind


STANDARD = tuple(FamilySpec(k) for k in KINDS[:5])


@dataclass
class FamilyInstance:
    spec: FamilySpec
    group: GroupTable
    ambient: Subgroup
    p: int
    members: list[Subgroup]
    I: Subgroup
    J: Subgroup
    shapes: dict[int, AbelianShape] = field(default_factory=dict, repr=False)

    def member_masks(self) -> set[int]:
        return {A.mask for A in self.members}

    def __contains__(self, A: Subgroup) -> bool:
        return A.mask in self.member_masks()


def intersection(G: GroupTable, subs: list[Subgroup]) -> Subgroup:
    if not subs:
        return trivial(G)
    mask = subs[0].mask
    for A in subs[1:]:
        mask &= A.mask
    return Subgroup(G, mask)


def join_all(G: GroupTable, subs: list[Subgroup]) -> Subgroup:
    gens = [g for A in subs for g in A.gens]
    return generated_subgroup(G, gens)


def _lex_max(shapes: list[AbelianShape]) -> AbelianShape | None:
    best = None
    for sh in shapes:
        if best is None or lex_compare(sh, best) == GT:
            best = sh
    return best


def _select(G: GroupTable, D: Subgroup, p: int, spec: FamilySpec, pool: list[Subgroup]) -> list[Subgroup]:
    shapes = [shape_cached(G, A, p) for A in pool]
    if not pool:
        return []
    kind = spec.kind
    if kind in ("ao", "aolex"):
        top = max(sh.order for sh in shapes)
        pool = [A for A, sh in zip(pool, shapes) if sh.order == top]
        if kind == "ao":
            return pool
        shapes = [shape_cached(G, A, p) for A in pool]
        best = _lex_max(shapes)
        return [A for A, sh in zip(pool, shapes) if lex_compare(sh, best) == EQ]
    if kind in ("ar", "ae"):
        r = rank_of_pgroup(G, D, p)
        keep = [A for A, sh in zip(pool, shapes) if sh.rank == r and (kind == "ar" or sh.is_elementary)]
        return keep
    if kind == "alex":
        best = _lex_max(shapes)
        return [A for A, sh in zip(pool, shapes) if lex_compare(sh, best) == EQ]
    # aoez
    return [A for A, sh in zip(pool, shapes)
            if sh.order == p**spec.O and sh.exponent <= p**spec.E and lex_compare(sh, spec.zeta) >= EQ]


def compute_family(G: GroupTable, D: Subgroup, p: int, spec: FamilySpec) -> FamilyInstance:
    """Members of the family inside D, with ``I = ∩ members`` and ``J = <members>``."""
    if not is_p_group(D, p):
        raise NotAPGroup(f"ambient of order {D.order} is not a {p}-group")
    key = ("family", spec, D.mask, p)
    if key in G._cache:
        return G._cache[key]
    members = _select(G, D, p, spec, all_abelian_subgroups(G, D))
    members.sort(key=Subgroup.key)
    F = FamilyInstance(spec, G, D, p, members, intersection(G, members), join_all(G, members),
                       {A.mask: shape_cached(G, A, p) for A in members})
    G._cache[key] = F
    return F


def restrict_family(F: FamilyInstance, P: Subgroup) -> FamilyInstance:
    """``F|_P``: the members lying in P, with I and J recomputed (I = 1 when none do)."""
    G = F.group
    members = [A for A in F.members if A <= P]
    return FamilyInstance(F.spec, G, F.ambient, F.p, members, intersection(G, members),
                          join_all(G, members), {A.mask: F.shapes[A.mask] for A in members})


def is_complete(F: FamilyInstance) -> tuple[bool, list]:
    """Every abelian subgroup of the ambient with a member's shape is a member.

    For abelian p-groups the omega sequence fixes the isomorphism type, so
    shape equality stands in for isomorphism.
    """
    G = F.group
    member_shapes = set(F.shapes.values())
    masks = F.member_masks()
    missing = [A for A in all_abelian_subgroups(G, F.ambient)
               if A.mask not in masks and shape_cached(G, A, F.p) in member_shapes]
    return not missing, [list(map(int, A.elems)) for A in missing[:5]]


def check_lemma_IZC(F: FamilyInstance) -> Check:
    """When every member is maximal abelian, ``I = Z(J) = C_ambient(J)``."""
    G, D = F.group, F.ambient
    not_max = [A for A in F.members if centralizer(G, A, within=D).mask != A.mask]
    details = {"family": F.spec.name, "members": len(F.members), "nonmaximal": len(not_max)}
    if not_max or not F.members:
        return Check(f"lemma_IZC[{F.spec.name}]", UNMET,
                     witnesses=[list(map(int, A.elems)) for A in not_max[:3]], details=details)
    ZJ = center(G, F.J)
    CJ = centralizer(G, F.J, within=D)
    details.update(I=F.I.order, ZJ=ZJ.order, CJ=CJ.order)
    ok = F.I.mask == ZJ.mask == CJ.mask
    return Check(f"lemma_IZC[{F.spec.name}]", verdict(ok), details=details,
                 witnesses=[] if ok else [list(map(int, F.I.elems)), list(map(int, CJ.elems))])


def check_theorem_omega_chain(G: GroupTable, S: Subgroup, p: int) -> Check:
    """``I_e = I_r = ΩZJ_r = ΩZJ_e = ΩC_S(J_r) = ΩC_S(J_e)``, each computed separately."""
    Fr = compute_family(G, S, p, FamilySpec("ar"))
    Fe = compute_family(G, S, p, FamilySpec("ae"))
    sides = {
        "I_e": Fe.I,
        "I_r": Fr.I,
        "OmegaZJ_r": omega_i(G, center(G, Fr.J), p, 1),
        "OmegaZJ_e": omega_i(G, center(G, Fe.J), p, 1),
        "OmegaC_S(J_r)": omega_i(G, centralizer(G, Fr.J, within=S), p, 1),
        "OmegaC_S(J_e)": omega_i(G, centralizer(G, Fe.J, within=S), p, 1),
    }
    masks = {k: v.mask for k, v in sides.items()}
    ok = len(set(masks.values())) == 1
    witnesses = [] if ok else [[k, list(map(int, v.elems))] for k, v in sides.items()]
    return Check("omega_chain", verdict(ok), witnesses=witnesses,
                 details={k: v.order for k, v in sides.items()})


def check_containments_lex(G: GroupTable, S: Subgroup, p: int) -> Check:
    """``ZJ_lex ≥ ZJ_r`` and ``ZJ_olex ≥ ZJ_o``, recording whether each is strict."""
    zj = {k: center(G, compute_family(G, S, p, FamilySpec(k)).J) for k in ("ar", "alex", "ao", "aolex")}
    lex_ok = zj["ar"] <= zj["alex"]
    olex_ok = zj["ao"] <= zj["aolex"]
    details = {f"ZJ_{k}": v.order for k, v in zj.items()}
    details["lex_strict"] = lex_ok and zj["ar"] != zj["alex"]
    details["olex_strict"] = olex_ok and zj["ao"] != zj["aolex"]
    witnesses = []
    if not lex_ok:
        witnesses.append(["ZJ_r not in ZJ_lex", list(map(int, zj["ar"].elems))])
    if not olex_ok:
        witnesses.append(["ZJ_o not in ZJ_olex", list(map(int, zj["ao"].elems))])
    return Check("containments_lex", verdict(lex_ok and olex_ok), witnesses=witnesses, details=details)


def family_summary(F: FamilyInstance) -> dict:
    G = F.group
    return {
        "family": F.spec.name,
        "member_count": len(F.members),
        "I_order": F.I.order,
        "J_order": F.J.order,
        "ZJ_order": center(G, F.J).order,
        "shapes": sorted({tuple(sh.invariants()) for sh in F.shapes.values()}),
    }

