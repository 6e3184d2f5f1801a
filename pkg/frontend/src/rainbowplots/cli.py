"""Command line: render a results table to an SVG chart."""

from __future__ import annotations

import argparse
import sys

from .charts import PlotSpec, Style, render_coupling_chart, render_threshold_curve


def _grouping(text: str | None) -> tuple[str, ...]:
    if text is None:
        return ()
    return tuple(part.strip() for part in text.split(",") if part.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rainbowplots",
        description="render experiment result tables (CSV or JSON) to SVG charts",
    )
    parser.add_argument("inputs", nargs="+", help="results CSV/JSON file(s)")
    parser.add_argument("--out", required=True, help="output SVG path")
    parser.add_argument("--kind", choices=("threshold", "coupling"), required=True)
    parser.add_argument("--group-by", default=None,
                        help="comma-separated series grouping columns")
    parser.add_argument("--style", default=None, help="JSON style config file")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        style = Style() if args.style is None else Style.from_json(args.style)
        spec = PlotSpec(tuple(args.inputs), args.out, args.kind,
                        _grouping(args.group_by))
        render = (render_threshold_curve if args.kind == "threshold"
                  else render_coupling_chart)
        render(spec, style)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
