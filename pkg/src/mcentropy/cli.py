"""Command-line entry points.

Exit codes: 0 when every requested check passed, 1 when a monitor or verdict
failed, 2 on usage or configuration errors.
"""

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from .config import parse_admissibility, parse_cfl_bound, parse_config
from .entropy_pairs import (
    CandidateI,
    CandidateII,
    candidate1_report,
    candidate2_report,
    identity,
)
from .errors import ConfigError, MCEntropyError
from .output import OutputError, read_run, write_outputs
from .runner import run, summarize, verify_snapshots
from .thermo import conservative_from_primitive
from .verification import lax_cfl_bound

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def bundled_configs():
    return sorted(p.name for p in resources.files("mcentropy").joinpath("data").iterdir()
                  if p.name.endswith(".json"))


def read_config_text(name):
    """Read a config file, falling back to the bundled copy of the same name."""
    path = Path(name)
    if path.is_file():
        return path.read_text()
    bundled = resources.files("mcentropy").joinpath("data").joinpath(path.name)
    if path.parent == Path(".") and bundled.is_file():
        return bundled.read_text()
    raise ConfigError("config file not found", path=str(name))


def _print_json(doc):
    print(json.dumps(doc, indent=2))


def cmd_run(args):
    cfg = parse_config(read_config_text(args.config))
    out = args.output or cfg.output_dir or "mcentropy-output"
    try:
        result = run(cfg)
    except MCEntropyError as exc:
        print(f"run aborted: {exc}", file=sys.stderr)
        return EXIT_FAIL
    write_outputs(result, out)
    if not args.quiet:
        for item in summarize(result.rows).values():
            status = "pass" if item["passed"] else "FAIL"
            print(f"{status}  {item['monitor']:<18} {item['label']:<24} worst={item['worst']:.3e}")
        print(f"{len(result.steps)} steps to t={result.t_final:g}; outputs in {out}")
    return EXIT_OK if result.all_passed else EXIT_FAIL


def cmd_admissibility(args):
    mix, Z, family, tol = parse_admissibility(read_config_text(args.config))
    if isinstance(family, CandidateI):
        rep = candidate1_report(Z, mix, family) if tol is None else \
            candidate1_report(Z, mix, family, tol=tol)
    elif isinstance(family, CandidateII):
        rep = candidate2_report(Z, mix, family.f, tol=tol)
    else:
        # the baseline is candidate II with f(s) = s
        rep = candidate2_report(Z, mix, identity(), tol=tol)
    _print_json({"entropy": family.to_dict(), **rep.to_dict()})
    return EXIT_OK if rep.verdict == "admissible" else EXIT_FAIL


def cmd_cfl_bound(args):
    mix, ZL, ZR, family, grid_res = parse_cfl_bound(read_config_text(args.config))
    v = conservative_from_primitive(ZL, mix)
    w = conservative_from_primitive(ZR, mix)
    rep = lax_cfl_bound(v, w, family, mix, grid_res=grid_res)
    _print_json(rep.to_dict())
    return EXIT_OK if rep.lambda_bound > 0 else EXIT_FAIL


def cmd_verify(args):
    config, snaps = read_run(args.directory)
    if len(snaps) < 2:
        print("need at least two snapshots; set output.output_every", file=sys.stderr)
        return EXIT_USAGE
    rows = verify_snapshots(config, snaps)
    summary = summarize(rows)
    _print_json({"checked_pairs": len(snaps) - 1, "monitors": list(summary.values()),
                 "all_monitors_passed": all(r.passed for r in rows)})
    return EXIT_OK if all(r.passed for r in rows) else EXIT_FAIL


def build_parser():
    p = argparse.ArgumentParser(prog="mcentropy",
                                description="Multicomponent Euler entropy checks and solver.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="advance a configured case and monitor every step")
    r.add_argument("config", help="JSON run config (bundled names like sod2.json also work)")
    r.add_argument("-o", "--output", help="output directory (overrides output.dir)")
    r.add_argument("-q", "--quiet", action="store_true")
    r.set_defaults(func=cmd_run)

    a = sub.add_parser("admissibility", help="admissibility report for one state and family")
    a.add_argument("config")
    a.set_defaults(func=cmd_admissibility)

    c = sub.add_parser("cfl-bound", help="sufficient Lax-Friedrichs step for a state pair")
    c.add_argument("config")
    c.set_defaults(func=cmd_cfl_bound)

    v = sub.add_parser("verify", help="re-check monitors on stored snapshots")
    v.add_argument("directory")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OutputError as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MCEntropyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
