"""
Command-line entry point:

    catpump <scenario> --params <file> --out <dir> [--set k=v]... [--seed n]

Scenarios: spectroscopy, bistability, cat-evolution, fock-evolution,
flowfield, tomography-roundtrip. Outputs are CSV only; the renderer
package turns them into figures. Exit code 0 on success; on failure a
one-line JSON error summary goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from .scenarios import SCENARIO_NAMES, Scenario, run


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catpump",
        description="Two-photon-loss cat-state confinement scenarios")
    parser.add_argument("scenario", choices=SCENARIO_NAMES)
    parser.add_argument("--params", default=None,
                        help="device parameter file (default: bundled set)")
    parser.add_argument("--out", default="out", help="output directory")
    parser.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="KEY=VALUE",
                        help="override a device parameter (file units) or "
                             "scenario knob; repeatable")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for all stochastic sampling")
    return parser


def parse_overrides(pairs) -> dict:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise ValueError(f"--set expects KEY=VALUE, got {pair!r}")
        key, value = pair.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        scenario = Scenario(name=args.scenario, params_path=args.params,
                            out_dir=args.out,
                            overrides=parse_overrides(args.overrides),
                            seed=args.seed)
        files = run(scenario)
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports all
        print(json.dumps({"error": type(exc).__name__, "message": str(exc),
                          "scenario": args.scenario}), file=sys.stderr)
        return 1
    for path in files:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
