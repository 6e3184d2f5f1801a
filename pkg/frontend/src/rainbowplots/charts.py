"""Threshold curves and coupling-chain charts over result tables.

Grouping rows into series is the only data transformation: points keep
their input order (x must already ascend within a series) and every plotted
value is embedded verbatim in data-* attributes, so the chart's backing
data can be checked against the input byte for byte.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields as dataclass_fields

from .svg import Element, document, fnum, write_svg
from .table import SCHEMA_COLUMNS, ResultRow, load_rows

X_COLUMN = {"threshold": "C", "coupling": "i"}
DEFAULT_GROUPING = {
    "threshold": ("n", "delta"),
    "coupling": ("n", "delta", "C"),
}
PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#17becf", "#e377c2", "#7f7f7f",
)

_MEASURED = frozenset({"proportion", "wilson_lo", "wilson_hi", "successes", "mean_ms"})
_DATA_COLUMNS = ("proportion", "wilson_lo", "wilson_hi", "trials", "successes")
_X_PAD = 12.0
_MAX_X_LABELS = 12
_Y_TICKS = (0.0, 0.25, 0.5, 0.75, 1.0)


@dataclass(frozen=True)
class Style:
    width: int = 640
    height: int = 420
    margin_left: int = 64
    margin_right: int = 16
    margin_top: int = 24
    margin_bottom: int = 48
    font_family: str = "sans-serif"
    font_size: int = 12
    background: str = "#ffffff"
    band_opacity: float = 0.18
    line_width: float = 1.5
    point_radius: float = 2.5
    palette: tuple[str, ...] = PALETTE

    @classmethod
    def from_json(cls, path) -> "Style":
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
        if not isinstance(obj, dict):
            raise ValueError(f"{path}: style config must be a JSON object")
        unknown = sorted(set(obj) - {f.name for f in dataclass_fields(cls)})
        if unknown:
            raise ValueError(f"unknown style keys: {unknown}")
        if "palette" in obj:
            obj["palette"] = tuple(obj["palette"])
        return cls(**obj)


@dataclass(frozen=True)
class PlotSpec:
    """What to render: inputs, output, chart kind, series grouping keys.

    An empty `grouping` means the kind's default: (n, delta) for threshold
    charts, (n, delta, C) for coupling charts.
    """

    inputs: tuple[str, ...]
    output: str
    kind: str
    grouping: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in X_COLUMN:
            raise ValueError(f"unknown chart kind: {self.kind!r}")
        if not self.inputs:
            raise ValueError("at least one input path is required")
        x = X_COLUMN[self.kind]
        for key in self.group_keys():
            if key not in SCHEMA_COLUMNS:
                raise ValueError(f"unknown grouping column: {key!r}")
            if key == x:
                raise ValueError(f"cannot group by the x axis column {x!r}")
            if key in _MEASURED:
                raise ValueError(f"cannot group by measured column {key!r}")

    def group_keys(self) -> tuple[str, ...]:
        return self.grouping if self.grouping else DEFAULT_GROUPING[self.kind]


def _x_value(kind: str, row: ResultRow) -> float:
    if kind == "coupling":
        if row.i is None:
            raise ValueError("coupling row has no chain index")
        return float(row.i)
    return row.C


def _series_label(keys: tuple[str, ...], row: ResultRow) -> str:
    return ", ".join(f"{k}={row.raw[k]}" for k in keys)


def _axes(root: Element, style: Style, xcol: str,
          xticks: list[tuple[float, str]], xpos, ypos) -> None:
    left = float(style.margin_left)
    right = float(style.width - style.margin_right)
    top = float(style.margin_top)
    bottom = float(style.height - style.margin_bottom)
    frame = root.child("g", {"class": "axes", "stroke": "#444444"})
    frame.child("line", {"x1": fnum(left), "y1": fnum(top),
                         "x2": fnum(left), "y2": fnum(bottom)})
    frame.child("line", {"x1": fnum(left), "y1": fnum(bottom),
                         "x2": fnum(right), "y2": fnum(bottom)})
    ticks = root.child("g", {"class": "ticks", "stroke": "#444444"})
    labels = root.child("g", {"class": "tick-labels", "fill": "#222222"})
    for p in _Y_TICKS:
        y = ypos(p)
        ticks.child("line", {"x1": fnum(left - 4), "y1": fnum(y),
                             "x2": fnum(left), "y2": fnum(y)})
        labels.child("text", {"x": fnum(left - 7), "y": fnum(y + 4),
                              "text-anchor": "end"}, text=f"{p:.2f}")
    step = max(1, math.ceil(len(xticks) / _MAX_X_LABELS))
    for idx, (x, raw) in enumerate(xticks):
        px = xpos(x)
        ticks.child("line", {"x1": fnum(px), "y1": fnum(bottom),
                             "x2": fnum(px), "y2": fnum(bottom + 4)})
        if idx % step == 0:
            labels.child("text", {"x": fnum(px), "y": fnum(bottom + 16),
                                  "text-anchor": "middle"}, text=raw)
    root.child("text", {"class": "x-label", "x": fnum((left + right) / 2.0),
                        "y": fnum(style.height - 8.0), "text-anchor": "middle",
                        "fill": "#222222"}, text=xcol)
    mid_y = fnum((top + bottom) / 2.0)
    root.child("text", {"class": "y-label", "x": "14", "y": mid_y,
                        "text-anchor": "middle", "fill": "#222222",
                        "transform": f"rotate(-90 14 {mid_y})"}, text="proportion")


def _render(spec: PlotSpec, style: Style) -> str:
    rows = load_rows(spec.inputs)
    for row in rows:
        if row.kind != spec.kind:
            raise ValueError(
                f"input kind {row.kind!r} does not match chart kind {spec.kind!r}")
    keys = spec.group_keys()
    xcol = X_COLUMN[spec.kind]

    series: dict[tuple, list[ResultRow]] = {}
    for row in rows:
        series.setdefault(tuple(getattr(row, k) for k in keys), []).append(row)
    for group in series.values():
        xs = [_x_value(spec.kind, r) for r in group]
        for a, b in zip(xs, xs[1:]):
            if b <= a:
                label = _series_label(keys, group[0])
                raise ValueError(
                    f"series ({label}): {xcol} must be strictly increasing in "
                    "input order; sort the grid or add grouping columns")

    all_x = [_x_value(spec.kind, r) for r in rows]
    xmin, xmax = min(all_x), max(all_x)
    x0 = style.margin_left + _X_PAD
    x1 = style.width - style.margin_right - _X_PAD
    y0 = float(style.margin_top)
    y1 = float(style.height - style.margin_bottom)

    def xpos(x: float) -> float:
        if xmax == xmin:
            return (x0 + x1) / 2.0
        return x0 + (x - xmin) / (xmax - xmin) * (x1 - x0)

    def ypos(p: float) -> float:
        return y1 - p * (y1 - y0)

    root = document(style.width, style.height, {
        "font-family": style.font_family,
        "font-size": str(style.font_size),
    })
    root.child("title", text=f"{spec.kind}: proportion vs {xcol}")
    root.child("rect", {"class": "bg", "x": "0", "y": "0",
                        "width": str(style.width), "height": str(style.height),
                        "fill": style.background})

    seen: dict[float, str] = {}
    for row in rows:
        x = _x_value(spec.kind, row)
        if x not in seen:
            seen[x] = row.raw[xcol]
    _axes(root, style, xcol, sorted(seen.items()), xpos, ypos)

    for idx, (key, group) in enumerate(series.items()):
        colour = style.palette[idx % len(style.palette)]
        head = group[0]
        attrs = {"class": "series", "data-series": _series_label(keys, head)}
        for k in keys:
            attrs[f"data-{k}"] = head.raw[k]
        g = root.child("g", attrs)
        pts = [(xpos(_x_value(spec.kind, r)), r) for r in group]
        upper = [f"{fnum(px)},{fnum(ypos(r.wilson_hi))}" for px, r in pts]
        lower = [f"{fnum(px)},{fnum(ypos(r.wilson_lo))}" for px, r in reversed(pts)]
        g.child("path", {"class": "band",
                         "d": "M " + " L ".join(upper + lower) + " Z",
                         "fill": colour, "fill-opacity": fnum(style.band_opacity),
                         "stroke": "none"})
        g.child("polyline", {
            "class": "line",
            "points": " ".join(f"{fnum(px)},{fnum(ypos(r.proportion))}"
                               for px, r in pts),
            "fill": "none", "stroke": colour,
            "stroke-width": fnum(style.line_width)})
        for px, r in pts:
            pt = {"class": "pt", "cx": fnum(px), "cy": fnum(ypos(r.proportion)),
                  "r": fnum(style.point_radius), "fill": colour,
                  f"data-{xcol}": r.raw[xcol]}
            for col in _DATA_COLUMNS:
                pt[f"data-{col}"] = r.raw[col]
            g.child("circle", pt)

    legend = root.child("g", {"class": "legend"})
    lx = x0 + 4.0
    for idx, (key, group) in enumerate(series.items()):
        colour = style.palette[idx % len(style.palette)]
        ly = float(style.margin_top + 6 + idx * 16)
        legend.child("rect", {"class": "legend-swatch", "x": fnum(lx),
                              "y": fnum(ly), "width": "10", "height": "10",
                              "fill": colour})
        legend.child("text", {"class": "legend-label", "x": fnum(lx + 14.0),
                              "y": fnum(ly + 9.0), "fill": "#222222"},
                     text=_series_label(keys, group[0]))

    write_svg(root, spec.output)
    return spec.output


def render_threshold_curve(spec: PlotSpec, style: Style | None = None) -> str:
    """Success proportion vs C, one line per series, Wilson bands shaded."""
    if spec.kind != "threshold":
        raise ValueError(f"spec kind {spec.kind!r} is not 'threshold'")
    return _render(spec, style or Style())


def render_coupling_chart(spec: PlotSpec, style: Style | None = None) -> str:
    """Success proportion vs chain index, one line per series, bands shaded."""
    if spec.kind != "coupling":
        raise ValueError(f"spec kind {spec.kind!r} is not 'coupling'")
    return _render(spec, style or Style())
