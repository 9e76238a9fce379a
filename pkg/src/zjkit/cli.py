"""Command-line interface: analyze, replace, verify and corpus."""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import bitset
from .builders import BUILDERS, builder_corpus, builder_names
from .corpus import DEFAULT_SEED, default_aoez, group_metadata, six_families, sweep
from .errors import ZJError
from .families import FamilySpec, check_lemma_IZC, check_theorem_omega_chain, compute_family, family_summary
from .glauberman import DEFAULT_AUT_CAP, check_full_invariance, check_hypotheses, verify_axiomatic
from .group import DEFAULT_CAP, Permutation, build_from_permutations
from .pgroups import omega_i
from .replacement import (check_theorem_dstar, fuzz_replacement, replace, replacement_candidates,
                          valid_pairs)
from .report import FAIL, Check, dumps, render_table, timed, verdict
from .subgroups import Subgroup, generated_subgroup, sylow_p

FAMILY_ALIASES = {"o": "ao", "r": "ar", "e": "ae", "lex": "alex", "olex": "aolex", "oez": "aoez"}
THEOREMS = ("zj", "omega-chain", "dstar", "replacement", "kizmaz")


class UsageError(Exception):
    pass


def _parse_params(items: list[str]) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--params expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k] = json.loads(v)
        except json.JSONDecodeError:
            out[k] = v
    return out


def load_group(args):
    kw = {"cap": args.cap, "check": "paranoid" if args.paranoid else "spot"}
    if args.group_file:
        try:
            with open(args.group_file) as fh:
                spec = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read group file: {exc}") from None
        return group_from_definition(spec, **kw)
    if not args.builder:
        raise UsageError("one of --builder or --group-file is required")
    params = _parse_params(args.params)
    takes_p = args.builder in BUILDERS and "p" in BUILDERS[args.builder][1]
    if args.p is not None and takes_p and "p" not in params:
        params["p"] = args.p
    return builder_corpus(args.builder, params, **kw)


def group_from_definition(spec: dict, cap: int = DEFAULT_CAP, check: str = "spot"):
    kind = spec.get("type") if isinstance(spec, dict) else None
    if kind == "builder":
        return builder_corpus(spec.get("name", ""), spec.get("params", {}), cap=cap, check=check)
    if kind == "permutation":
        degree = int(spec["degree"])
        gens = [Permutation.from_cycles(degree, cycles) for cycles in spec.get("generators", [])]
        return build_from_permutations(degree, gens, cap=cap, label=spec.get("label", "perm"), check=check)
    raise UsageError("group definition needs type 'permutation' or 'builder'")


def _prime(args, G) -> int:
    if args.p is None:
        raise UsageError("--p is required")
    if G.n % args.p:
        raise UsageError(f"p = {args.p} does not divide |G| = {G.n}")
    return args.p


def _family_specs(args, G, D, p) -> list[FamilySpec]:
    if not args.family:
        return six_families(G, D, p)
    kind = FAMILY_ALIASES.get(args.family, args.family)
    if kind == "aoez":
        if args.O is None and args.E is None and not args.zeta:
            return [default_aoez(G, D, p)]
        zeta = tuple(int(z) for z in args.zeta.split(",")) if args.zeta else ()
        return [FamilySpec("aoez", O=args.O, E=args.E, zeta=zeta)]
    return [FamilySpec(kind)]


def _subgroup_arg(G, text: str) -> Subgroup:
    try:
        gens = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated element indices, got {text!r}") from None
    if any(not 0 <= g < G.n for g in gens):
        raise UsageError("element index out of range")
    return generated_subgroup(G, gens)


def cmd_analyze(args, G) -> tuple[dict, int]:
    p = _prime(args, G)
    S = sylow_p(G, p)
    fams, checks = [], []
    for spec in _family_specs(args, G, S, p):
        F = compute_family(G, S, p, spec)
        fams.append(family_summary(F))
        with timed(checks):
            checks.append(check_lemma_IZC(F))
    return {"group": group_metadata(G, p), "families": fams, "checks": checks}, 0


def cmd_replace(args, G) -> tuple[dict, int]:
    p = _prime(args, G)
    S = sylow_p(G, p)
    rng = random.Random(args.seed)
    if args.A and args.B:
        A, B = _subgroup_arg(G, args.A), _subgroup_arg(G, args.B)
    else:
        pairs = valid_pairs(G, S, p)
        if not pairs:
            raise UsageError("no valid (B, A) pair in this group")
        B, A = pairs[rng.randrange(len(pairs))]
    if args.b is not None:
        b = args.b
    else:
        cands = bitset.to_indices(replacement_candidates(G, S, B, A), G.n)
        if not len(cands):
            raise UsageError("B normalizes A; no replacement needed")
        b = int(cands[rng.randrange(len(cands))])
    checks = []
    with timed(checks):
        cert = replace(G, S, B, A, b, p, strict=False)
        checks.append(Check("replacement", verdict(cert.ok), details=cert.to_dict()))
    return {"group": group_metadata(G, p), "checks": checks}, 0


def cmd_verify(args, G) -> tuple[dict, int]:
    p = _prime(args, G)
    S = sylow_p(G, p)
    checks: list[Check] = []
    with timed(checks):
        if args.theorem == "zj":
            hyp = check_hypotheses(G, S, p)
            if not hyp.ok:
                checks += hyp.checks()
            else:
                fams = [compute_family(G, S, p, spec) for spec in _family_specs(args, G, S, p)]
                checks += verify_axiomatic(G, S, p, fams, hyp=hyp)
                for F in fams:
                    checks.append(check_full_invariance(G, F, p, aut_cap=args.aut_cap))
        elif args.theorem == "omega-chain":
            checks.append(check_theorem_omega_chain(G, S, p))
        elif args.theorem == "dstar":
            checks.append(check_theorem_dstar(G, S, p))
        elif args.theorem == "replacement":
            certs, failures = fuzz_replacement([(G, S, p)], args.count, seed=args.seed)
            checks.append(Check("replacement_fuzz", verdict(not failures), witnesses=failures[:5],
                                details={"certificates": len(certs)}))
        elif args.theorem == "kizmaz":
            D = omega_i(G, S, p, args.i)
            exp_ok = D.exponent() <= p**args.i
            checks.append(Check("omega_exponent", verdict(exp_ok),
                                details={"D_order": D.order, "exponent": D.exponent()}))
            if exp_ok:
                fams = [compute_family(G, D, p, spec) for spec in _family_specs(args, G, D, p)]
                checks += verify_axiomatic(G, S, p, fams, D=D)
    return {"group": group_metadata(G, p), "checks": checks}, 0


def cmd_corpus(args) -> tuple[dict, int]:
    checks = sweep(seed=args.seed, fuzz_count=args.count, aut_cap=args.aut_cap)
    return {"group": {"label": "corpus"}, "checks": checks}, 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zjkit", description="ZJ-type subgroup analysis of finite groups")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a canonical JSON report")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest group order to build")
    common.add_argument("--aut-cap", type=int, default=DEFAULT_AUT_CAP)
    common.add_argument("--paranoid", action="store_true", help="exhaustive associativity check")
    grp = argparse.ArgumentParser(add_help=False)
    grp.add_argument("--builder", help=f"one of: {', '.join(builder_names())}")
    grp.add_argument("--params", nargs="*", default=[], metavar="KEY=VALUE")
    grp.add_argument("--group-file")
    grp.add_argument("--p", type=int)
    grp.add_argument("--family")
    grp.add_argument("--O", type=int)
    grp.add_argument("--E", type=int)
    grp.add_argument("--zeta", help="comma-separated omega sequence")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common, grp], help="families and ZJ subgroups")
    rep = sub.add_parser("replace", parents=[common, grp], help="one replacement step with certificate")
    rep.add_argument("--A", help="generators of A, comma-separated element indices")
    rep.add_argument("--B", help="generators of B")
    rep.add_argument("--b", type=int)
    ver = sub.add_parser("verify", parents=[common, grp], help="theorem suites")
    ver.add_argument("--theorem", choices=THEOREMS, required=True)
    ver.add_argument("--count", type=int, default=50, help="fuzz instances for --theorem replacement")
    ver.add_argument("--i", type=int, default=1, help="omega index for --theorem kizmaz")
    cor = sub.add_parser("corpus", parents=[common], help="run every suite over the corpus")
    cor.add_argument("--count", type=int, default=200)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "corpus":
            report, code = cmd_corpus(args)
        else:
            G = load_group(args)
            handler = {"analyze": cmd_analyze, "replace": cmd_replace, "verify": cmd_verify}[args.command]
            report, code = handler(args, G)
    except (UsageError, ZJError, KeyError, ValueError) as exc:
        print(f"zjkit: error: {exc}", file=sys.stderr)
        return 2
    report["checks"] = [c.to_dict() for c in report.get("checks", [])]
    report["seed"] = args.seed
    if any(c["verdict"] == FAIL for c in report["checks"]):
        code = 1
    sys.stdout.write(dumps(report) if args.json else render_table(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
