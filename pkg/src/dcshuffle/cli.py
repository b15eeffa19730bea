"""Command-line front end.

Every subcommand writes one report.  JSON reports carry the library version
and the full configuration, use sorted keys and "p/q" rationals, and contain
no timings, so identical inputs give byte-identical output.

Exit status: 0 when the command completed (whatever the verdict), 2 for bad
input, 3 when an internal invariant is found violated.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .capacity_check import GAP, MATCH, check_capacity, verify_family
from .dc_model import DcInstance, computation_load, derive_shuffle_problem, gen_family, validate
from .errors import (BudgetExceeded, DcShuffleError, DimensionCapExceeded, InvalidInstance,
                     NonuniformCapacity)
from .icgraph import build_digraph, mais
from .inner_bound import inner_region
from .outer_bound import describe, acyclic_outer_region
from .polytope import vertices
from .rational import as_fraction, format_rational
from .shuffle_sim import build_scheme, rate_report, run

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 2, 3


class InputError(Exception):
    """Bad flags or unreadable input."""


class InvariantViolation(Exception):
    """The pipeline produced something it proves impossible."""


# ---------------------------------------------------------------- helpers

def _capacities(text, K):
    parts = [p for p in text.split(",") if p.strip()]
    try:
        caps = [as_fraction(p.strip()) for p in parts]
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad capacity {text!r}: {exc}") from exc
    if len(caps) == 1:
        return caps * K
    if len(caps) != K:
        raise InputError(f"expected 1 or {K} capacities, got {len(caps)}")
    return caps


def _load_instance(args) -> DcInstance:
    if args.instance:
        try:
            doc = json.loads(Path(args.instance).read_text())
        except OSError as exc:
            raise InputError(f"cannot read {args.instance}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise InputError(f"{args.instance} is not valid JSON: {exc}") from exc
        inst = DcInstance.from_json(doc)
    elif args.K is not None and args.r is not None:
        inst = gen_family(args.K, args.r, args.eta1, args.Q,
                          _capacities(args.capacity, args.K), args.iv_bits)
    else:
        raise InputError("give an instance file or both --K and --r")
    problems = validate(inst)
    if problems:
        raise InvalidInstance(problems)
    return inst


def _instance_config(args):
    if args.instance:
        return {"instance": DcInstance.from_json(json.loads(Path(args.instance).read_text())).to_json()}
    return {"family": {"K": args.K, "r": args.r, "eta1": args.eta1, "Q": args.Q,
                       "capacity": args.capacity, "iv_bits": args.iv_bits}}


def _vertex_list(region, max_dim):
    try:
        pts = vertices(region, max_dim=max_dim)
    except DimensionCapExceeded:
        return None
    return [{str(k): format_rational(v) for k, v in p.items()} for p in pts]


def _region_json(region, max_dim):
    return {"hrep": region.canonical().to_json(), "text": describe(region),
            "vertices": _vertex_list(region, max_dim)}


# ---------------------------------------------------------------- commands

def cmd_gen(args):
    if args.K is None or args.r is None:
        raise InputError("gen needs --K and --r")
    inst = gen_family(args.K, args.r, args.eta1, args.Q,
                      _capacities(args.capacity, args.K), args.iv_bits)
    # gen writes the bare instance so the file feeds straight back into the CLI
    return inst.to_json(), json.dumps(inst.to_json(), indent=2) + "\n", True


def cmd_analyze(args):
    inst = _load_instance(args)
    problem = derive_shuffle_problem(inst)
    graph = build_digraph(problem)
    result = {"K": inst.K, "N": inst.N, "Q": inst.Q, "F": inst.F,
              "r": format_rational(computation_load(inst)), "M": problem.M,
              "expected_M": format_rational(inst.F * (inst.K - computation_load(inst))),
              "arcs": graph.arc_count, "message_bits": format_rational(inst.message_bits)}
    try:
        size, witness = mais(graph, budget=args.budget)
        result["mais"], result["mais_witness"] = size, [str(m) for m in sorted(witness)]
    except BudgetExceeded as exc:
        result["mais"], result["mais_witness"], result["note"] = None, None, f"UNDECIDED: {exc}"
    if problem.M == 0:
        result["note"] = "nothing to shuffle: every node already maps every batch it needs"
    lines = [f"K={inst.K} N={inst.N} Q={inst.Q} F={inst.F}",
             f"computation load r = {result['r']}",
             f"messages M = {problem.M} (F(K-r) = {result['expected_M']})",
             f"side-information arcs = {result['arcs']}",
             f"MAIS = {result['mais']}  witness {{{', '.join(result['mais_witness'] or [])}}}"]
    if "note" in result:
        lines.append(result["note"])
    return result, "\n".join(lines) + "\n", False


def cmd_outer(args):
    problem = derive_shuffle_problem(_load_instance(args))
    try:
        region = acyclic_outer_region(problem, budget=args.budget)
    except BudgetExceeded as exc:
        result = {"status": "UNDECIDED", "reason": str(exc)}
        return result, f"UNDECIDED: {exc}\n", False
    result = {"status": "COMPLETE", "region": _region_json(region, args.max_dim)}
    return result, "outer region:\n" + describe(region), False


def cmd_inner(args):
    problem = derive_shuffle_problem(_load_instance(args))
    try:
        inner = inner_region(problem, args.strategy, max_rows=args.fme_max_rows)
    except BudgetExceeded as exc:
        return {"status": "UNDECIDED", "reason": str(exc)}, f"UNDECIDED: {exc}\n", False
    pieces = [{"choice": p.name, "decoding_sets": p.choice.to_json(),
               "region": _region_json(p.region, args.max_dim)} for p in inner]
    result = {"status": "COMPLETE", "pieces": pieces,
              "nonconvex_suspected": inner.nonconvex_suspected}
    text = "".join(f"inner piece {p.name}:\n{describe(p.region)}" for p in inner)
    if inner.nonconvex_suspected:
        text += "warning: no piece contains the others; the union may be nonconvex\n"
    return result, text, False


def cmd_check(args):
    problem = derive_shuffle_problem(_load_instance(args))
    verdict = check_capacity(problem, args.strategy, fme_max_rows=args.fme_max_rows,
                             subset_budget=args.budget, max_dim=args.max_dim)
    if verdict.bug:
        raise InvariantViolation(verdict.reason)
    result = verdict.to_json()
    text = [f"verdict: {verdict.status}"]
    if verdict.reason:
        text.append(f"reason: {verdict.reason}")
    if verdict.outer is not None:
        text.append("outer region:")
        text.append(describe(verdict.outer).rstrip("\n"))
    if verdict.status == MATCH:
        text.append("capacity region equals the outer region")
    if verdict.status == GAP and verdict.witness is not None:
        text.append("witness: " + ", ".join(f"{k}={format_rational(v)}"
                                            for k, v in sorted(verdict.witness.items())))
    return result, "\n".join(text) + "\n", False


def cmd_simulate(args):
    if args.K is None or args.r is None:
        raise InputError("simulate needs --K and --r")
    if args.seeds < 1:
        raise InputError("--seeds must be positive")
    scheme = build_scheme(args.K, args.r, args.L)
    seeds = list(range(args.seed, args.seed + args.seeds))
    transcripts = [run(scheme, s) for s in seeds]
    failures = [t.seed for t in transcripts if not t.all_exact]
    report = rate_report(scheme, _capacities(args.capacity, args.K))
    result = {"scheme": scheme.to_json(), "seeds": [seeds[0], seeds[-1]],
              "decode_exact": f"{len(seeds) - len(failures)}/{len(seeds)}",
              "failed_seeds": failures, "rate": report.to_json()}
    if args.transcripts:
        result["transcripts"] = [t.to_json() for t in transcripts]
    if failures:
        raise InvariantViolation(f"decoding failed for seeds {failures}")
    rates = ", ".join(format_rational(x) for x in report.rates)
    text = (f"K={args.K} r={args.r} g={scheme.g} L={args.L}\n"
            f"decode-exact: {result['decode_exact']}\n"
            f"rates: ({rates})\n"
            f"inside outer region: {report.in_outer_region}; "
            f"group bounds tight: {report.binds_group_bounds}\n")
    return result, text, False


def cmd_family(args):
    rows = verify_family(args.Kmax, as_fraction(args.capacity), args.strategy, K_min=args.Kmin,
                         threads=args.threads, fme_max_rows=args.fme_max_rows,
                         subset_budget=args.budget, max_dim=args.max_dim)
    if any(row.verdict.bug for row in rows):
        raise InvariantViolation("an inner region left the outer region")
    result = {"rows": [row.to_json() for row in rows], "all_ok": all(r.ok for r in rows)}
    head = f"{'K':>3} {'r':>3} {'g':>3} {'MAIS':>5} {'outer=closed':>13} {'binds':>6}  verdict"
    lines = [head] + [f"{row.K:>3} {row.r:>3} {row.g:>3} {row.mais_size:>5} "
                      f"{str(row.outer_closed_form):>13} {str(row.symmetric_binds):>6}  "
                      f"{row.verdict.status}" for row in rows]
    return result, "\n".join(lines) + "\n", False


COMMANDS = {"gen": cmd_gen, "analyze": cmd_analyze, "outer": cmd_outer, "inner": cmd_inner,
            "check": cmd_check, "simulate": cmd_simulate, "family": cmd_family}


# ---------------------------------------------------------------- parser

def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--budget", type=_positive, default=None,
                        help="cap on acyclic subsets explored (UNDECIDED when hit)")
    common.add_argument("--strategy", choices=("default", "maximal", "exhaustive"),
                        default="default")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=_positive, default=1)
    common.add_argument("--fme-max-rows", type=_positive, default=20000)
    common.add_argument("--max-dim", type=_positive, default=12,
                        help="largest dimension for vertex enumeration")

    family = argparse.ArgumentParser(add_help=False)
    family.add_argument("--K", type=_positive)
    family.add_argument("--r", type=_positive)
    family.add_argument("--eta1", type=_positive, default=1)
    family.add_argument("--Q", type=_positive, default=None)
    family.add_argument("--capacity", default="1",
                        help="one rational for every link, or a comma list of K")
    family.add_argument("--iv-bits", type=_positive, default=1)

    parser = argparse.ArgumentParser(prog="dcshuffle", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"dcshuffle {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("gen", parents=[common, family], help="write a cyclic family instance")
    for name, text in (("analyze", "instance statistics and MAIS"),
                       ("outer", "acyclic-subset outer region"),
                       ("inner", "composite coding inner region"),
                       ("check", "decide whether inner and outer bounds meet")):
        p = sub.add_parser(name, parents=[common, family], help=text)
        p.add_argument("instance", nargs="?", help="instance JSON file")
    p = sub.add_parser("simulate", parents=[common, family], help="run the XOR coded shuffle")
    p.add_argument("--L", type=_positive, default=8, help="bits per segment")
    p.add_argument("--seeds", type=int, default=1, help="number of consecutive seeds")
    p.add_argument("--transcripts", action="store_true", help="embed every transcript")
    p = sub.add_parser("family", parents=[common], help="sweep the cyclic family")
    p.add_argument("--Kmax", type=_positive, required=True)
    p.add_argument("--Kmin", type=_positive, default=2)
    p.add_argument("--capacity", default="1")
    return parser


def _config(args):
    skip = {"out", "format", "instance"}
    if getattr(args, "instance", None):
        skip |= {"K", "r", "eta1", "Q", "capacity", "iv_bits"}
    cfg = {k: v for k, v in vars(args).items() if k not in skip}
    if getattr(args, "instance", None):
        cfg.update(_instance_config(args))
    return cfg


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result, text, bare = COMMANDS[args.command](args)
        if args.format == "text":
            _emit(text, args.out)
        else:
            doc = result if bare else {"tool": "dcshuffle", "version": __version__,
                                       "command": args.command, "config": _config(args),
                                       "result": result}
            _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
        return EXIT_OK
    except (InputError, InvalidInstance, NonuniformCapacity, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InvariantViolation, AssertionError) as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except DcShuffleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
