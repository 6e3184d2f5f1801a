"""Offline SVG report generation for experiment result tables."""

from .charts import (
    DEFAULT_GROUPING,
    PALETTE,
    X_COLUMN,
    PlotSpec,
    Style,
    render_coupling_chart,
    render_threshold_curve,
)
from .svg import Element, document, fnum, write_svg
from .table import (
    SCHEMA_COLUMNS,
    TABLE_KINDS,
    ResultRow,
    load_rows,
    read_csv,
    read_json,
)

__all__ = [
    "DEFAULT_GROUPING",
    "Element",
    "PALETTE",
    "PlotSpec",
    "ResultRow",
    "SCHEMA_COLUMNS",
    "Style",
    "TABLE_KINDS",
    "X_COLUMN",
    "document",
    "fnum",
    "load_rows",
    "read_csv",
    "read_json",
    "render_coupling_chart",
    "render_threshold_curve",
    "write_svg",
]
