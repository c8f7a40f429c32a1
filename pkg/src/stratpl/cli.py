"""Command-line front end: ``stratpl {oracle,stabilize,verify,report}``.

Exit codes: 0 when everything requested passed, 1 when a check failed (the
manifest is still written), 2 for unusable input (nothing is written).
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import stabilize as st
from .graded import GradedSpace
from .oracle.model import OracleError
from .runner import (ScenarioError, load_scenario, render_report, run_checks, write_data,
                     write_manifest)
from .scalars import ScalarError
from .serialize import SchemaError, atomic_write, check_schema, parse_json
from .stabilize import StabilizeError

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _levels(text: str) -> list[int]:
    try:
        out = sorted({int(x) for x in text.split(",") if x.strip()})
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad level list {text!r}") from None
    if not out or out[0] < 1:
        raise argparse.ArgumentTypeError("levels must be a nonempty list of positive integers")
    return out


def _dims(s: GradedSpace) -> str:
    return " ".join(f"{d}:{s.dim(d)}" for d in s.degrees) or "0"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stratpl", description="Exact Picard-Lefschetz data: build, stabilize, verify.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, levels=True):
        p.add_argument("--scenario", required=True, help="scenario-v1 JSON file")
        p.add_argument("--out", default="out", help="output directory (default: out)")
        p.add_argument("--mode", help="scalar mode, cyclotomic:N or symbolic:NU; must agree with the scenario")
        if levels:
            p.add_argument("--levels", type=_levels, help="comma separated levels l, overriding the scenario")
            p.add_argument("--sign-convention", choices=st.SIGN_CONVENTIONS, help="override the scenario")

    common(sub.add_parser("oracle", help="compute the level-1 datum of a disc configuration"), levels=False)
    common(sub.add_parser("stabilize", help="write the stabilized data for each level"))
    common(sub.add_parser("verify", help="run the checks and write the manifest"))
    rp = sub.add_parser("report", help="render a manifest as text")
    rp.add_argument("--out", default="out", help="directory holding manifest.json")
    rp.add_argument("--manifest", help="explicit manifest path")
    return ap


def _load(args):
    return load_scenario(args.scenario, levels=getattr(args, "levels", None),
                         sign_convention=getattr(args, "sign_convention", None), mode=args.mode)


def cmd_oracle(args) -> int:
    sc = _load(args)
    if sc.config is None:
        raise ScenarioError("the oracle command needs a scenario with a disc_config")
    paths = write_data(sc, args.out)
    for name, s in sc.datum.side.spaces().items():
        print(f"{name:7} {_dims(s)}")
    print(f"aux {'trivial' if sc.aux.is_trivial else 'nontrivial'}")
    print(f"wrote {paths[0]}")
    return EXIT_OK


def cmd_stabilize(args) -> int:
    sc = _load(args)
    stabilized = {l: st.stabilize_closed(sc.datum, sc.aux, l, sc.sign_convention) for l in sc.levels}
    paths = write_data(sc, args.out, stabilized)
    for l, sd in stabilized.items():
        print(f"l={l} level={sd.result.level} H {_dims(sd.result.side.H)} chi {_dims(sd.result.side.chi)}")
    print(f"wrote {len(paths)} files under {os.path.join(args.out, sc.data_dir)}")
    return EXIT_OK


def cmd_verify(args) -> int:
    sc = _load(args)
    man, _ = run_checks(sc)
    path = os.path.join(args.out, sc.manifest_path)
    write_manifest(man, path)
    doc = man.to_dict()
    print(render_report(doc), end="")
    print(f"wrote {path}")
    return EXIT_OK if man.passed else EXIT_FAIL


def cmd_report(args) -> int:
    path = args.manifest or os.path.join(args.out, "manifest.json")
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioError(f"cannot read manifest {path}: {exc}") from exc
    doc = parse_json(text, path)
    check_schema(doc, "manifest-v1")
    out = render_report(doc)
    atomic_write(os.path.join(os.path.dirname(os.path.abspath(path)), "report.txt"), out)
    print(out, end="")
    return EXIT_OK if doc["summary"]["verdict"] == "pass" else EXIT_FAIL


COMMANDS = {"oracle": cmd_oracle, "stabilize": cmd_stabilize, "verify": cmd_verify, "report": cmd_report}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (SchemaError, ScenarioError, ScalarError, OracleError, StabilizeError, json.JSONDecodeError) as exc:
        print(f"stratpl: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
