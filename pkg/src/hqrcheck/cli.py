"""Command-line front end: ``hqrcheck {zoo-list, means, verify, probe}``.

Exit status: 0 when every strict check passes (or the command is informational),
1 when a strict check does not pass, 2 on a usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import means, probe, report, suite, verify, zoo
from .errors import HqrError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
PARAM_FLAGS = ("c", "k", "m", "alpha", "rho")


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_common(sp, params=True):
    sp.add_argument("--config", help="file of 'key = value' lines; flags override it")
    sp.add_argument("--output", "-o", help="write the report here instead of stdout")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    if params:
        sp.add_argument("--family", help="zoo family id (see zoo-list)")
        for name in PARAM_FLAGS:
            sp.add_argument(f"--{name}", type=float, help=f"family parameter {name}")
        sp.add_argument("--N", type=int, help="truncation degree override")
        sp.add_argument("--M", type=int, help="circle grid size override")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hqrcheck", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("zoo-list", help="list families, parameter domains and guarantees")
    _add_common(sp, params=False)

    sp = sub.add_parser("means", help="radial profile of a circle quantity")
    _add_common(sp)
    sp.add_argument("--quantity", choices=means.QUANTITIES, default="mean_of_f")
    sp.add_argument("--p", type=float, default=1.0)
    sp.add_argument("--radii", type=_floats, help="comma-separated radii; default 1 - 2^-j, j = 1..10")

    sp = sub.add_parser("verify", help="run inequality checks")
    _add_common(sp)
    sp.add_argument("--theorem", choices=verify.THEOREMS)
    sp.add_argument("--all", action="store_true", help="every theorem on the standard grid")
    sp.add_argument("--r", type=_floats, help="comma-separated radii")
    sp.add_argument("--p", type=_floats, help="comma-separated exponents")
    sp.add_argument("--experimental", action="store_true",
                    help="also check the main bound for u >= c with c < 1 (reported, never strict)")

    sp = sub.add_parser("probe", help="search for near-extremal ratios")
    _add_common(sp, params=False)
    sp.add_argument("--theorem", choices=verify.STRICT)
    sp.add_argument("--all", action="store_true", help="probe every strict theorem")
    sp.add_argument("--steps", type=int, default=probe.STEPS)
    sp.add_argument("--trace", action="store_true", help="include every evaluation in the output")
    return parser


def read_config(path: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.lstrip("-")] = value
    return out


def _config_argv(parser, command: str, config: dict) -> list[str]:
    """Turn config entries into flags placed before the real ones, so flags win."""
    sp = parser._subparsers._group_actions[0].choices[command]
    actions = {a.dest: a for a in sp._actions if a.option_strings}
    argv = []
    for key, value in config.items():
        dest = key.replace("-", "_")
        if dest not in actions or dest == "config":
            raise UsageError(f"unknown config key {key!r} for {command}")
        action = actions[dest]
        flag = action.option_strings[-1] if action.option_strings[-1].startswith("--") else action.option_strings[0]
        if action.nargs == 0:
            if value.lower() in ("1", "true", "yes", "on"):
                argv.append(flag)
            elif value.lower() not in ("0", "false", "no", "off"):
                raise UsageError(f"config key {key!r} expects true/false, got {value!r}")
        else:
            argv += [flag, value]
    return argv


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        extra = _config_argv(parser, args.command, read_config(args.config))
        i = argv.index(args.command) + 1
        args = parser.parse_args(argv[:i] + extra + argv[i:])
    return args


def _params(args) -> dict:
    return {k: getattr(args, k) for k in PARAM_FLAGS if getattr(args, k, None) is not None}


def _need_family(args):
    if not args.family:
        raise UsageError("--family is required (see zoo-list)")
    try:
        zoo.resolve_params(args.family, _params(args))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _check_sizes(args):
    if args.N is not None and args.N < 1:
        raise UsageError(f"--N must be >= 1, got {args.N}")
    if args.M is not None and args.M < 1:
        raise UsageError(f"--M must be >= 1, got {args.M}")


def _check_radii(flag, radii):
    for r in radii:
        if not 0 <= r < 1:
            raise UsageError(f"{flag} values must lie in [0, 1), got {r:g}")


def cmd_zoo_list(args) -> tuple[str, int]:
    rows = [(f.family_id, ", ".join(f"{k} in {v}" for k, v in f.domains.items()) or "-", f.guarantees)
            for f in zoo.FAMILIES.values()]
    if args.format == "json":
        data = [{"family_id": a, "domains": zoo.FAMILIES[a].domains, "guarantees": c} for a, _, c in rows]
        return json.dumps(data, indent=2) + "\n", EXIT_OK
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("family_id", "domains", "guarantees"))
    w.writerows(rows)
    return buf.getvalue(), EXIT_OK


def cmd_means(args) -> tuple[str, int]:
    _need_family(args)
    _check_sizes(args)
    if not (args.p > 0):
        raise UsageError(f"--p must be > 0 (domain (0, inf]), got {args.p:g}")
    radii = means.default_radii() if args.radii is None else sorted(args.radii)
    _check_radii("--radii", radii)
    member = zoo.build(args.family, _params(args), r_max=radii[-1], degree=args.N)
    prof = means.radial_profile(member.map, args.quantity, args.p, radii, args.M)
    if args.format == "json":
        data = {
            "family_id": args.family,
            "params": dict(sorted(member.spec.params.items())),
            "quantity": prof.quantity_tag,
            "radii": list(prof.radii),
            "values": list(prof.values),
            "doubling_delta": list(prof.doubling_delta),
            "monotone": means.monotone_flag(prof),
            "under_resolved": prof.under_resolved,
        }
        return json.dumps(data, indent=2) + "\n", EXIT_OK
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("r", prof.quantity_tag, "doubling_delta"))
    for row in zip(prof.radii, prof.values, prof.doubling_delta):
        w.writerow([repr(float(x)) for x in row])
    return buf.getvalue(), EXIT_OK


def cmd_verify(args) -> tuple[str, int]:
    _check_sizes(args)
    radii = suite.RADII if args.r is None else sorted(args.r)
    _check_radii("--r", radii)
    if args.all or (args.theorem and not args.family):
        if args.family:
            raise UsageError("--all runs the standard grid; drop --family")
        theorems = None if args.all else [args.theorem]
        reports = suite.run_suite(theorems, radii, degree=args.N, M=args.M, experimental=args.experimental)
    else:
        if not args.theorem:
            raise UsageError("give --theorem or --all")
        _need_family(args)
        reports = _verify_one(args, radii)
    reports = report.sort_reports(reports)
    text = report.to_json(reports) if args.format == "json" else report.to_csv(reports)
    return text, EXIT_FAIL if suite.strict_failures(reports) else EXIT_OK


def _verify_one(args, radii):
    tid = args.theorem
    ps = suite.exponents(tid) if args.p is None else args.p
    for p in ps:
        if p is not None and not p > 0:
            raise UsageError(f"--p must be > 0, got {p:g}")
    coefficient = args.family in ("harmonic-tail", "log-damped", "geometric")
    out = []
    if coefficient or tid == "lemma-f":
        member = zoo.build(args.family, _params(args), r_max=None if coefficient else radii[-1],
                           degree=args.N or (suite.COEFF_CUTOFF if coefficient else None))
        if not suite.applicable(tid, member):
            raise UsageError(f"family {args.family} does not meet the hypotheses of {tid}")
        for p in ps:
            out += suite.check_member(tid, member, None if coefficient else radii[-1], p,
                                      radii=radii, M=args.M)
        return out
    for r in radii:
        member = zoo.build(args.family, _params(args), r_max=r, degree=args.N)
        if not suite.applicable(tid, member, r) and not args.experimental:
            raise UsageError(f"family {args.family} does not meet the hypotheses of {tid} at r = {r:g}")
        for p in ps:
            out += suite.check_member(tid, member, r, p, experimental=args.experimental, M=args.M)
    return out


def cmd_probe(args) -> tuple[str, int]:
    if args.steps < 1:
        raise UsageError(f"--steps must be >= 1, got {args.steps}")
    if args.all == bool(args.theorem):
        raise UsageError("give exactly one of --theorem or --all")
    theorems = verify.STRICT if args.all else (args.theorem,)
    results = [probe.run_probe(t, steps=args.steps) for t in theorems]
    status = EXIT_OK if all(r.safe for r in results) else EXIT_FAIL
    if args.format == "json":
        return probe.to_json(results, trace=args.trace), status
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("theorem_id", "family_id", "best_ratio", "error_budget", "evaluations", "argmax", "safe"))
    for res in results:
        d = res.to_dict()
        argmax = ";".join(f"{k}={v!r}" for k, v in (d["argmax"] or {}).items())
        w.writerow((d["theorem_id"], d["family_id"], repr(res.best_ratio), repr(res.error_budget),
                    d["evaluations"], argmax, d["safe"]))
    return buf.getvalue(), status


COMMANDS = {"zoo-list": cmd_zoo_list, "means": cmd_means, "verify": cmd_verify, "probe": cmd_probe}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        text, status = COMMANDS[args.command](args)
    except SystemExit as exc:  # argparse already printed the message
        return EXIT_USAGE if exc.code else EXIT_OK
    except (UsageError, ValueError, OSError, HqrError) as exc:
        print(f"hqrcheck: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
