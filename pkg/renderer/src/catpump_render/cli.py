"""CLI: `render <spec.json>` writes the PNG named by the spec."""

from __future__ import annotations

import argparse
import json
import sys

from .render import RenderSpec, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render", description="Render catpump CSV outputs to PNG")
    parser.add_argument("spec", help="render-spec JSON file")
    args = parser.parse_args(argv)
    try:
        out = render(RenderSpec.from_json(args.spec))
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
