"""The built-in test corpus and a deterministic sweep over it."""

from __future__ import annotations

from dataclasses import dataclass, field

from .builders import builder_corpus
from .errors import NotNilpotent
from .families import STANDARD, FamilySpec, check_lemma_IZC, check_theorem_omega_chain, compute_family
from .glauberman import check_hypotheses, verify_axiomatic
from .group import GroupTable
from .pgroups import LT, all_abelian_subgroups, lex_compare, log_p, omega_i, rank_of_pgroup, shape_cached
from .replacement import check_theorem_dstar, fuzz_replacement
from .report import Check, timed, verdict
from .subgroups import Subgroup, center, nilpotency_class, sylow_p, whole

DEFAULT_SEED = 20240


@dataclass(frozen=True)
class CorpusEntry:
    builder: str
    params: dict = field(default_factory=dict, hash=False)
    p: int = 0

    @property
    def name(self) -> str:
        args = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.builder}({args})" if args else self.builder

    def build(self, **kw) -> GroupTable:
        return builder_corpus(self.builder, self.params, **kw)


P_GROUPS = [
    CorpusEntry("semidirect_p4", {"p": 3}, 3),
    CorpusEntry("semidirect_p4", {"p": 5}, 5),
    CorpusEntry("heisenberg_mod_p2", {"p": 2}, 2),
    CorpusEntry("heisenberg_mod_p2", {"p": 3}, 3),
    CorpusEntry("extraspecial", {"p": 3, "exponent": 3}, 3),
    CorpusEntry("extraspecial", {"p": 3, "exponent": 9}, 3),
    CorpusEntry("extraspecial", {"p": 5, "exponent": 5}, 5),
    CorpusEntry("extraspecial", {"p": 5, "exponent": 25}, 5),
    CorpusEntry("d8", {}, 2),
    CorpusEntry("q8", {}, 2),
    CorpusEntry("elementary_abelian", {"p": 3, "k": 3}, 3),
    CorpusEntry("cyclic", {"n": 27}, 3),
    CorpusEntry("direct_product", {"factors": [{"name": "extraspecial", "params": {"p": 3, "exponent": 3}},
                                               {"name": "cyclic", "params": {"n": 3}}]}, 3),
]

MIXED_GROUPS = [
    CorpusEntry("s3", {}, 3),
    CorpusEntry("s4", {}, 2),
    CorpusEntry("elementary_by_cyclic", {"p": 5, "q": 3}, 5),
    CorpusEntry("elementary_by_cyclic", {"p": 7, "q": 3}, 7),
    CorpusEntry("extraspecial_by_cyclic", {"p": 7, "q": 3}, 7),
    CorpusEntry("extraspecial_by_cyclic", {"p": 7, "q": 3, "exponent": 49}, 7),
]

# odd-order group whose Sylow subgroup has Omega_1 of exponent p, strictly inside S
CLOSURE_TARGET = CorpusEntry("extraspecial_by_cyclic", {"p": 7, "q": 3, "exponent": 49}, 7)

CORPUS = P_GROUPS + MIXED_GROUPS


def default_aoez(G: GroupTable, S: Subgroup, p: int) -> FamilySpec:
    """Parameters picking the largest abelian order at the smallest exponent that attains it.

    ``zeta`` is the least omega sequence among those subgroups, so the
    family is nonempty whenever S is nontrivial.
    """
    abelians = all_abelian_subgroups(G, S)
    top = max(A.order for A in abelians)
    shapes = [shape_cached(G, A, p) for A in abelians if A.order == top]
    E = min(log_p(sh.exponent, p) for sh in shapes)
    low = [sh for sh in shapes if log_p(sh.exponent, p) == E]
    least = low[0]
    for sh in low[1:]:
        if lex_compare(sh, least) == LT:
            least = sh
    return FamilySpec("aoez", O=log_p(top, p), E=E, zeta=least.omega or (1,))


def six_families(G: GroupTable, D: Subgroup, p: int) -> list[FamilySpec]:
    return list(STANDARD) + [default_aoez(G, D, p)]


def group_metadata(G: GroupTable, p: int | None = None) -> dict:
    meta = {"label": G.label, "order": G.n, "center_order": center(G).order}
    try:
        meta["class"] = nilpotency_class(G, whole(G))
    except NotNilpotent:
        meta["class"] = None
    if p:
        S = sylow_p(G, p)
        meta.update(p=p, sylow_order=S.order, rank=rank_of_pgroup(G, S, p) if S.order > 1 else 0)
    return meta


def sweep(seed: int = DEFAULT_SEED, fuzz_count: int = 200, aut_cap: int = 256) -> list[Check]:
    """Run every theorem suite over the corpus; deterministic for a given seed."""
    checks: list[Check] = []
    fuzz_targets = []
    for entry in P_GROUPS:
        G = entry.build()
        S, p = whole(G), entry.p
        with timed(checks):
            checks.append(_tag(check_theorem_omega_chain(G, S, p), entry))
            checks.append(_tag(check_theorem_dstar(G, S, p), entry))
            for kind in ("ao", "alex", "aolex"):
                checks.append(_tag(check_lemma_IZC(compute_family(G, S, p, FamilySpec(kind))), entry))
        if p in (3, 5):
            fuzz_targets.append((G, S, p))
    with timed(checks):
        certs, failures = fuzz_replacement(fuzz_targets, fuzz_count, seed=seed)
        checks.append(Check("replacement_fuzz", verdict(not failures and len(certs) == fuzz_count),
                            witnesses=failures[:5], details={"certificates": len(certs), "seed": seed}))
    for entry in MIXED_GROUPS + [e for e in P_GROUPS if e.p % 2]:
        G, p = entry.build(), entry.p
        S = sylow_p(G, p)
        with timed(checks):
            hyp = check_hypotheses(G, S, p)
            if not hyp.ok:
                checks += [_tag(c, entry) for c in hyp.checks()]
                continue
            fams = [compute_family(G, S, p, spec) for spec in six_families(G, S, p)]
            checks += [_tag(c, entry) for c in verify_axiomatic(G, S, p, fams, hyp=hyp, aut_cap=aut_cap)]
    G, p = CLOSURE_TARGET.build(), CLOSURE_TARGET.p
    S = sylow_p(G, p)
    D = omega_i(G, S, p, 1)
    with timed(checks):
        fams = [compute_family(G, D, p, spec) for spec in six_families(G, D, p)]
        closure = verify_axiomatic(G, S, p, fams, D=D, aut_cap=aut_cap)
        checks += [_tag(c, CLOSURE_TARGET, "closure") for c in closure]
    return checks


def _tag(check: Check, entry: CorpusEntry, extra: str = "") -> Check:
    check.name = f"{entry.name}{'/' + extra if extra else ''}:{check.name}"
    return check

