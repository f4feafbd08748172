"""Batch command line: pattern search, colouring evaluation, certificate
suites and benchmarks, all emitting canonical JSON.

Exit codes are part of the machine contract: 0 for found/verified, 1 for
exhausted/counterexample, 2 for inconclusive, 64 for usage errors.
stdout carries exactly one JSON document; stderr is for humans.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .colourings import BranchSet, delta_colouring, resolve_colouring
from .groups import GroupSpec, element_from_jsonable
from .patterns import SearchConfig, search
from .tokens import canonical_json
from .verify import (BranchSetDomain, GroupDomain, check_fs_matrix_identities,
                     find_monochromatic_ap, find_monochromatic_fs,
                     find_monochromatic_span, find_monochromatic_subgroup,
                     fs_support_growth_check, no_seven_norms)

EXIT_FOUND = 0
EXIT_NONE = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64

_STATUS_EXIT = {
    "found": EXIT_FOUND,
    "verified": EXIT_FOUND,
    "exhausted": EXIT_NONE,
    "counterexample": EXIT_NONE,
    "inconclusive": EXIT_INCONCLUSIVE,
}


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags, which collides with "inconclusive"
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_threads() -> int:
    env = os.environ.get("PATTERN_FORGE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def _emit(args, result: dict, nodes: int) -> None:
    text = canonical_json(result)
    print(text)
    if getattr(args, "out", None):
        manifest = {
            "command": args.command,
            "config": {k: v for k, v in vars(args).items()
                       if k not in ("command", "func") and v is not None},
            "version": __version__,
            "inputs": [],
            "outputs": [args.out],
            "nodes": nodes,
        }
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(canonical_json({"manifest": manifest, "result": result}))
            fh.write("\n")


def _parse_group(parser, text: str) -> GroupSpec:
    try:
        return GroupSpec.from_jsonable(json.loads(text))
    except (ValueError, KeyError) as exc:
        parser.error(f"bad --group JSON: {exc}")


# ---------------------------------------------------------------------------
# search


def cmd_search(parser, args) -> int:
    if args.m == 0 and args.entry_bound is None:
        parser.error("--entry-bound is required when --m 0")
    if args.m != 0 and args.entry_bound is not None:
        parser.error("--entry-bound only applies when --m 0")
    try:
        cfg = SearchConfig(n=args.n, m=args.m, l_max=args.l_max,
                           l_min=args.l_min, entry_bound=args.entry_bound,
                           deterministic=not args.nondeterministic,
                           threads=args.threads, node_cap=args.node_cap)
    except ValueError as exc:
        parser.error(str(exc))
    outcome = search(cfg)
    _emit(args, outcome.jsonable(), outcome.nodes)
    return _STATUS_EXIT[outcome.status]


# ---------------------------------------------------------------------------
# verify


def _require(parser, args, names):
    for name in names:
        if getattr(args, name.replace("-", "_")) is None:
            parser.error(f"--claim {args.claim} requires --{name}")


def cmd_verify(parser, args) -> int:
    claim = args.claim
    if claim == "lemma3.1":
        _require(parser, args, ["dim", "bound"])
        cert = no_seven_norms(args.dim, args.bound, budget=args.budget)
    elif claim == "thm3.2":
        _require(parser, args, ["dim", "bound", "n"])
        domain = GroupDomain(GroupSpec.integer_box(args.bound, args.dim))
        cert = find_monochromatic_fs("sum_squares", domain, args.n,
                                     budget=args.budget, claim="thm3.2")
    elif claim == "thm4.1":
        _require(parser, args, ["kappa", "max-set"])
        domain = BranchSetDomain(args.kappa, args.max_set)
        cert = find_monochromatic_fs("delta", domain, 2,
                                     budget=args.budget, claim="thm4.1")
    elif claim == "thm5.4":
        _require(parser, args, ["group"])
        cert = find_monochromatic_ap("product_sigma",
                                     _parse_group(parser, args.group))
    elif claim == "thm5.5":
        _require(parser, args, ["group"])
        cert = find_monochromatic_subgroup(
            "subgroup_parity", _parse_group(parser, args.group),
            full_lattice=args.full_lattice)
    elif claim == "thm5.6":
        _require(parser, args, ["a", "dim", "bound"])
        cert = find_monochromatic_span(args.a, args.dim, args.bound)
    elif claim == "thm2.3":
        _require(parser, args, ["group", "alphas", "beta", "gammas",
                                "colouring"])
        spec = _parse_group(parser, args.group)
        gens = spec.basis()
        alphas = [int(s) for s in args.alphas.split(",")]
        gammas = [int(s) for s in args.gammas.split(",")]
        cert = check_fs_matrix_identities(
            gens, alphas, args.beta, gammas, resolve_colouring(args.colouring))
    elif claim == "thm5.1-shadow":
        _require(parser, args, ["group", "elements"])
        spec = _parse_group(parser, args.group)
        xs = [element_from_jsonable(spec, e)
              for e in json.loads(args.elements)]
        cert = fs_support_growth_check(spec, xs)
    else:
        parser.error(f"unknown claim id {claim!r}")
    _emit(args, cert.jsonable(), cert.enumerated)
    return _STATUS_EXIT[cert.status]


# ---------------------------------------------------------------------------
# colour


def cmd_colour(parser, args) -> int:
    if args.id == "delta":
        if args.branches is None:
            parser.error("--id delta requires --branches")
        x = BranchSet.from_strings(json.loads(args.branches))
        token = delta_colouring(x)
    else:
        if args.element is None:
            parser.error(f"--id {args.id} requires --element")
        try:
            colour = resolve_colouring(args.id)
        except ValueError as exc:
            parser.error(str(exc))
        raw = json.loads(args.element)
        if args.group:
            spec = _parse_group(parser, args.group)
        else:
            if args.id not in ("sum_squares",) and not args.id.startswith(
                    "valuation:"):
                parser.error(f"--id {args.id} needs --group for its factors")
            if not raw or not all(isinstance(v, int) for v in raw):
                parser.error("--element must be a nonempty integer vector "
                             "when --group is omitted")
            bound = max(1, max(abs(v) for v in raw))
            spec = GroupSpec.integer_box(bound, len(raw))
        x = element_from_jsonable(spec, raw)
        token = colour(x)
    print(token.to_json())
    if args.out:
        _emit_token_file(args, token)
    return 0


def _emit_token_file(args, token) -> None:
    manifest = {"command": "colour",
                "config": {"id": args.id}, "version": __version__,
                "inputs": [], "outputs": [args.out], "nodes": 0}
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(canonical_json({"manifest": manifest,
                                 "result": token.jsonable()}))
        fh.write("\n")


# ---------------------------------------------------------------------------
# bench


def _bench_workloads():
    from .groups import PrimePower

    def s(n, m, l_max, bound=None):
        def run():
            out = search(SearchConfig(n=n, m=m, l_max=l_max, entry_bound=bound))
            return out.status, out.nodes
        return run

    def thm41(kappa):
        def run():
            cert = find_monochromatic_fs(
                "delta", BranchSetDomain(kappa, kappa), 2, claim="thm4.1")
            return cert.status, cert.enumerated
        return run

    def norms(d, b):
        def run():
            cert = no_seven_norms(d, b)
            return cert.status, cert.enumerated
        return run

    def ap():
        def run():
            spec = GroupSpec((PrimePower(3, 1),) * 3)
            cert = find_monochromatic_ap("product_sigma", spec)
            return cert.status, cert.enumerated
        return run

    return {
        "search-n2-m3": s(2, 3, 3),
        "search-n3-m2": s(3, 2, 8),
        "search-n4-m2": s(4, 2, 16),
        "search-n3-m0-b2": s(3, 0, 4, bound=2),
        "thm4.1-k3": thm41(3),
        "lemma3.1-d3-b3": norms(3, 3),
        "thm5.4-z3-cubed": ap(),
    }


def cmd_bench(parser, args) -> int:
    workloads = _bench_workloads()
    if args.workload not in workloads:
        parser.error(f"unknown workload {args.workload!r}; "
                     f"choices: {', '.join(sorted(workloads))}")
    t0 = time.perf_counter()
    status, nodes = workloads[args.workload]()
    wall = time.perf_counter() - t0
    report = {"workload": args.workload, "status": status, "nodes": nodes,
              "wall_seconds": round(wall, 6),
              "nodes_per_second": round(nodes / wall, 1) if wall > 0 else None}
    print(canonical_json(report))
    return 0


# ---------------------------------------------------------------------------
# wiring


def build_parser() -> _Parser:
    parser = _Parser(prog="pattern-forge",
                     description="finite-sum pattern search and "
                                 "colouring certificates")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("search", help="exhaustive adequate-pattern search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--l-max", type=int, required=True)
    p.add_argument("--l-min", type=int, default=1)
    p.add_argument("--entry-bound", type=int)
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--node-cap", type=int)
    p.add_argument("--nondeterministic", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("verify", help="run a certificate oracle")
    p.add_argument("--claim", required=True)
    p.add_argument("--dim", type=int)
    p.add_argument("--bound", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--kappa", type=int)
    p.add_argument("--max-set", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--group")
    p.add_argument("--elements")
    p.add_argument("--alphas")
    p.add_argument("--beta", type=int)
    p.add_argument("--gammas")
    p.add_argument("--colouring")
    p.add_argument("--full-lattice", action="store_true")
    p.add_argument("--budget", type=int)
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--out")

    p = sub.add_parser("colour", help="evaluate one colouring")
    p.add_argument("--id", required=True)
    p.add_argument("--element")
    p.add_argument("--branches")
    p.add_argument("--group")
    p.add_argument("--out")

    p = sub.add_parser("bench", help="run a named workload and time it")
    p.add_argument("--workload", required=True)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"search": cmd_search, "verify": cmd_verify,
                "colour": cmd_colour, "bench": cmd_bench}
    try:
        return handlers[args.command](parser, args)
    except SystemExit:
        raise
    except (ValueError, KeyError) as exc:
        print(f"pattern-forge: {exc}", file=sys.stderr)
        return EXIT_USAGE + 1


if __name__ == "__main__":
    sys.exit(main())
