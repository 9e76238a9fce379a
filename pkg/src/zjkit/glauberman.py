"""Hypotheses, axioms and conclusion of the axiomatic ZJ theorem on concrete groups."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AutCapExceeded, NotNormalInS, PreconditionViolated, ZJError
from .families import FamilyInstance, is_complete, restrict_family
from .group import GroupTable
from .replacement import iterate_replacement
from .report import FAIL, PASS, SKIPPED, UNMET, Check, verdict
from .subgroups import (Subgroup, all_normal_subgroups, centralizer, commutator_subgroup, is_normal,
                        is_p_group, nilpotency_class, normalizer, normalizes, op_of_action, p_core,
                        p_part, whole)

DEFAULT_AUT_CAP = 256
DEFAULT_MAX_AUTOMORPHISMS = 50000

SL2_NOTE = ("sufficient condition, not checked: no subquotient isomorphic to SL(2,p); "
            "p-stability above is tested directly")


def _elems(H: Subgroup) -> list[int]:
    return [int(x) for x in H.elems]


@dataclass
class HypothesisReport:
    p: int
    sylow_ok: bool
    faithful_on_op_ok: bool
    p_stable_ok: bool
    stability_counterexamples: list = field(default_factory=list)
    op_order: int = 1
    axioms: dict[str, Check] = field(default_factory=dict)
    notes: list[str] = field(default_factory=lambda: [SL2_NOTE])

    @property
    def ok(self) -> bool:
        return self.sylow_ok and self.faithful_on_op_ok and self.p_stable_ok

    def checks(self) -> list[Check]:
        cx = self.stability_counterexamples
        return [
            Check("hypothesis_sylow", verdict(self.sylow_ok)),
            Check("hypothesis_faithful_on_Op", verdict(self.faithful_on_op_ok),
                  details={"O_p_order": self.op_order}),
            Check("hypothesis_p_stable", verdict(self.p_stable_ok), witnesses=cx[:10],
                  details={"counterexamples": len(cx), "note": SL2_NOTE}),
        ]


def quadratic_elements(G: GroupTable, P: Subgroup) -> np.ndarray:
    """Bool array over G: ``[[v, x], x] = 1`` for every v in P."""
    mul, inv = G.mul, G.inv
    v = P.elems[:, None]
    x = np.arange(G.n)[None, :]
    c1 = mul[mul[inv[v], inv[x]], mul[v, x]]
    c2 = mul[mul[inv[c1], inv[x]], mul[c1, x]]
    return (c2 == G.id).all(axis=0)


def check_hypotheses(G: GroupTable, S: Subgroup, p: int) -> HypothesisReport:
    sylow_ok = is_p_group(S, p) and S.order == p_part(G.n, p)
    O = p_core(G, p)
    faithful = centralizer(G, O) <= O
    counterexamples = []
    for P in all_normal_subgroups(G):
        if not is_p_group(P, p):
            continue
        allowed = op_of_action(G, P, p).bool
        bad = np.flatnonzero(quadratic_elements(G, P) & ~allowed)
        for x in bad:
            wit = {"P": _elems(P), "x": int(x)}
            if G.perm_images is not None:
                wit["x_cycles"] = G.cycles(int(x))
            counterexamples.append(wit)
    return HypothesisReport(p, sylow_ok, faithful, not counterexamples, counterexamples, O.order)


def check_invariance(G: GroupTable, S: Subgroup, F: FamilyInstance, p: int) -> Check:
    """For every P normal in S, ``I_{A|P}`` is invariant under every element of ``N_G(P)``."""
    witnesses, checked = [], 0
    for P in all_normal_subgroups(G, within=S):
        I = restrict_family(F, P).I
        NG = normalizer(G, P)
        checked += 1
        if I.order == 1:
            continue
        bad = ~I.bool[G.conj[np.ix_(NG.elems, list(I.gens))]].all(axis=1)
        if bad.any():
            witnesses.append({"P": _elems(P), "I": _elems(I), "x": int(NG.elems[np.argmax(bad)])})
    return Check(f"invariance[{F.spec.name}]", verdict(not witnesses), witnesses=witnesses,
                 details={"normal_subgroups": checked})


def check_replacement_axiom(G: GroupTable, S: Subgroup, F: FamilyInstance, p: int) -> Check:
    """Replacement for every normal B of class at most 2, by exhaustive scan.

    The form without the class bound is recorded as ``details["strong"]``;
    where it applies, ``iterate_replacement`` is run as a second route and
    must reach a B-normalized member too.
    """
    weak_fail, strong_fail, route_fail = [], [], []
    scanned = routed = 0
    for B in all_normal_subgroups(G, within=S):
        BB = commutator_subgroup(G, B, B)
        cands = [A for A in F.members if BB <= A and not B <= A]
        if not cands:
            continue
        scanned += 1
        good = [A for A in cands if normalizes(G, B.gens, A)]
        small_class = nilpotency_class(G, B) <= 2
        if not good:
            strong_fail.append({"B": _elems(B)})
            if small_class:
                weak_fail.append({"B": _elems(B)})
        if p == 2 and not B.is_abelian():
            continue
        for strategy in ("max", "walk"):
            try:
                A = iterate_replacement(G, S, B, F, cands[0], strategy=strategy)
            except ZJError as exc:  # recorded as a disagreement between routes
                route_fail.append({"B": _elems(B), "strategy": strategy, "error": repr(exc)})
                continue
            routed += 1
            if not (normalizes(G, B.gens, A) and BB <= A and not B <= A and A in F):
                route_fail.append({"B": _elems(B), "strategy": strategy, "A": _elems(A)})
    details = {"B_scanned": scanned, "routes_run": routed,
               "strong": PASS if not strong_fail else FAIL, "strong_witnesses": strong_fail[:5],
               "route_disagreements": route_fail[:5]}
    ok = not weak_fail and not route_fail
    return Check(f"replacement[{F.spec.name}]", verdict(ok), witnesses=weak_fail + route_fail,
                 details=details)


# -- automorphisms --------------------------------------------------------------

class _Spanning:
    """Breadth-first words for ``<gens[:k]>``, grouped in layers for vectorised evaluation."""

    def __init__(self, G: GroupTable, gens: list[int]):
        self.G = G
        seen = {G.id}
        frontier = [G.id]
        self.layers = []  # (elements, parents, generator positions)
        while frontier:
            els, pars, gis = [], [], []
            for x in frontier:
                for i, g in enumerate(gens):
                    y = int(G.mul[x, g])
                    if y not in seen:
                        seen.add(y)
                        els.append(y)
                        pars.append(x)
                        gis.append(i)
            if els:
                self.layers.append((np.array(els), np.array(pars), np.array(gis)))
            frontier = els
        self.elements = np.array(sorted(seen))
        self.gens = np.array(gens)

    def extend(self, images: list[int]) -> np.ndarray | None:
        """The homomorphism sending ``gens[i] -> images[i]``, as a length-n array, or None."""
        G = self.G
        phi = np.full(G.n, -1, dtype=np.int64)
        phi[G.id] = G.id
        h = np.array(images)
        for els, pars, gis in self.layers:
            phi[els] = G.mul[phi[pars], h[gis]]
        src = self.elements
        for i, g in enumerate(self.gens):
            if not np.array_equal(phi[G.mul[src, g]], G.mul[phi[src], h[i]]):
                return None
        if np.unique(phi[src]).size != src.size:
            return None
        return phi


def automorphisms(G: GroupTable, P: Subgroup, aut_cap: int = DEFAULT_AUT_CAP,
                  max_count: int = DEFAULT_MAX_AUTOMORPHISMS) -> np.ndarray:
    """All automorphisms of P as rows of images, aligned with ``P.elems``.

    Backtracks over images of a small generating set, keeping element order
    and centralizer size, and checks each partial assignment on the subgroup
    generated so far.
    """
    if P.order > aut_cap:
        raise AutCapExceeded(f"|P| = {P.order} exceeds aut cap {aut_cap}")
    key = ("automorphisms", P.mask, max_count)
    if key not in G._cache:
        try:
            G._cache[key] = _enumerate_automorphisms(G, P, max_count)
        except AutCapExceeded as exc:
            G._cache[key] = exc
    if isinstance(G._cache[key], AutCapExceeded):
        raise G._cache[key]
    return G._cache[key]


def _enumerate_automorphisms(G: GroupTable, P: Subgroup, max_count: int) -> np.ndarray:
    gens = list(P.gens)
    pe = P.elems
    if not gens:
        return pe[None, :].astype(np.int32)
    csize = G.commutes[np.ix_(pe, pe)].sum(axis=1)
    csize_of = dict(zip(pe.tolist(), csize.tolist()))
    options = []
    for g in gens:
        options.append([int(h) for h in pe
                        if G.order_of[h] == G.order_of[g] and csize_of[int(h)] == csize_of[g]])
    spans = [_Spanning(G, gens[:k + 1]) for k in range(len(gens))]
    out: list[np.ndarray] = []  # images of P.elems only, to bound memory in large G

    def descend(level: int, chosen: list[int]):
        for h in options[level]:
            trial = chosen + [h]
            phi = spans[level].extend(trial)
            if phi is None:
                continue
            if level + 1 == len(gens):
                out.append(phi[pe].astype(np.int32))
                if len(out) > max_count:
                    raise AutCapExceeded(f"more than {max_count} automorphisms")
            else:
                descend(level + 1, trial)

    descend(0, [])
    return np.array(out, dtype=np.int32)


def _invariant_under(I: Subgroup, P: Subgroup, autos: np.ndarray) -> int | None:
    """Index of the first automorphism of P moving I, or None."""
    if not I.gens:
        return None
    cols = np.searchsorted(P.elems, list(I.gens))
    moved = np.flatnonzero(~I.bool[autos[:, cols]].all(axis=1))
    return int(moved[0]) if moved.size else None


def check_full_invariance(G: GroupTable, F: FamilyInstance, p: int, aut_cap: int = DEFAULT_AUT_CAP,
                          S: Subgroup | None = None,
                          max_count: int = DEFAULT_MAX_AUTOMORPHISMS) -> Check:
    """For every P normal in S, ``I_{A|P}`` is Aut(P)-invariant; P beyond the caps is skipped."""
    S = F.ambient if S is None else S
    witnesses, skipped, checked = [], [], 0
    for P in all_normal_subgroups(G, within=S):
        I = restrict_family(F, P).I
        if I.order == 1 or I == P:
            checked += 1
            continue
        try:
            autos = automorphisms(G, P, aut_cap=aut_cap, max_count=max_count)
        except AutCapExceeded as exc:
            skipped.append({"P_order": P.order, "reason": str(exc)})
            continue
        checked += 1
        k = _invariant_under(I, P, autos)
        if k is not None:
            witnesses.append({"P": _elems(P), "I": _elems(I), "automorphism": autos[k].tolist()})
    if witnesses:
        status = FAIL
    elif skipped:
        status = SKIPPED
    else:
        status = PASS
    return Check(f"full_invariance[{F.spec.name}]", status, witnesses=witnesses,
                 details={"checked": checked, "skipped": skipped})


def check_completeness(F: FamilyInstance) -> Check:
    ok, missing = is_complete(F)
    return Check(f"completeness[{F.spec.name}]", verdict(ok), witnesses=missing)


def check_strong_closure(G: GroupTable, S: Subgroup, D: Subgroup) -> Check:
    """No element of S outside D has a G-conjugate inside D.

    Only full strong closure is tested; weaker fusion conditions that would
    also suffice are not recognised, so a FAIL here is not a counterexample.
    """
    if not (D <= S and is_normal(G, D, within=S)):
        raise NotNormalInS("D must be normal in S")
    outside = S.elems[~D.bool[S.elems]]
    witnesses = []
    if outside.size:
        hits = D.bool[G.conj[:, outside]]  # rows: conjugating g, cols: s
        for col in np.flatnonzero(hits.any(axis=0))[:10]:
            g = int(np.argmax(hits[:, col]))
            witnesses.append({"s": int(outside[col]), "g": g, "s^g": int(G.conj[g, outside[col]])})
    return Check("strong_closure", verdict(not witnesses), witnesses=witnesses,
                 details={"D_order": D.order, "S_order": S.order})


def check_conclusion(G: GroupTable, S: Subgroup, F: FamilyInstance, p: int,
                     aut_cap: int = DEFAULT_AUT_CAP, max_count: int = DEFAULT_MAX_AUTOMORPHISMS) -> Check:
    """``I_A`` is normal in G; within the caps, Aut(S)-invariance also forces Aut(G)-invariance."""
    I = F.I
    normal = is_normal(G, I)
    details: dict = {"I_order": I.order, "normal_in_G": normal}
    if G.n <= aut_cap:
        try:
            char_S = _invariant_under(I, S, automorphisms(G, S, aut_cap, max_count)) is None
            details["characteristic_in_S"] = char_S
            if char_S:
                details["characteristic_in_G"] = _invariant_under(
                    I, whole(G), automorphisms(G, whole(G), aut_cap, max_count)) is None
        except AutCapExceeded as exc:
            details["characteristic"] = f"{SKIPPED}: {exc}"
    ok = normal and details.get("characteristic_in_G", True)
    return Check(f"conclusion[{F.spec.name}]", verdict(ok), details=details,
                 witnesses=[] if ok else [_elems(I)])


def verify_axiomatic(G: GroupTable, S: Subgroup, p: int, families: list[FamilyInstance],
                     D: Subgroup | None = None, hyp: HypothesisReport | None = None,
                     aut_cap: int = DEFAULT_AUT_CAP) -> list[Check]:
    """Hypotheses, axioms and conclusion for each family; consistency is asserted per family.

    With ``D`` given, also verifies strong closure of D and completeness of
    each family in D, the premises of the strongly-closed variant.
    """
    hyp = check_hypotheses(G, S, p) if hyp is None else hyp
    checks = hyp.checks()
    closed = None
    if D is not None:
        closed = check_strong_closure(G, S, D)
        checks.append(closed)
    for F in families:
        inv = check_invariance(G, S, F, p)
        rep = check_replacement_axiom(G, S, F, p)
        concl = check_conclusion(G, S, F, p, aut_cap=aut_cap)
        checks += [inv, rep, concl]
        premises = hyp.ok and rep.verdict == PASS
        if D is None:
            premises = premises and inv.verdict == PASS
        else:
            comp = check_completeness(F)
            checks.append(comp)
            premises = premises and closed.verdict == PASS and comp.verdict == PASS
        if premises:
            checks.append(Check(f"consistency[{F.spec.name}]", verdict(concl.verdict == PASS)))
        else:
            checks.append(Check(f"consistency[{F.spec.name}]", UNMET))
    return checks


def require_hypotheses(report: HypothesisReport) -> None:
    if not report.ok:
        raise PreconditionViolated("sylow, faithful and p-stable hypotheses", str([c.name for c in report.checks() if not c.ok]))
