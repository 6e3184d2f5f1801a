"""Read experiment result tables (CSV or results/v1 JSON) keyed by header name.

The reader is a pure consumer of the documented results schema: it never
imports the producing package. Raw field strings are kept alongside the
parsed values so a chart can embed exactly what it was given.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from typing import Iterable

SCHEMA_COLUMNS = (
    "kind", "n", "delta", "C", "q", "solver", "trials", "successes",
    "proportion", "wilson_lo", "wilson_hi", "mean_ms", "seed_kind", "i",
)

TABLE_KINDS = ("threshold", "coupling")


@dataclass(frozen=True)
class ResultRow:
    """One result cell; `raw` maps column name to the input field string."""

    kind: str
    n: int
    delta: float
    C: float
    q: float
    solver: str
    trials: int
    successes: int
    proportion: float
    wilson_lo: float
    wilson_hi: float
    mean_ms: float
    seed_kind: str
    i: int | None
    raw: dict[str, str]


def _parse_fields(fields: dict[str, str], where: str) -> ResultRow:
    try:
        row = ResultRow(
            kind=fields["kind"],
            n=int(fields["n"]),
            delta=float(fields["delta"]),
            C=float(fields["C"]),
            q=float(fields["q"]),
            solver=fields["solver"],
            trials=int(fields["trials"]),
            successes=int(fields["successes"]),
            proportion=float(fields["proportion"]),
            wilson_lo=float(fields["wilson_lo"]),
            wilson_hi=float(fields["wilson_hi"]),
            mean_ms=float(fields["mean_ms"]),
            seed_kind=fields["seed_kind"],
            i=None if fields["i"] == "" else int(fields["i"]),
            raw=dict(fields),
        )
    except ValueError as exc:
        raise ValueError(f"{where}: {exc}") from None
    if row.kind not in TABLE_KINDS:
        raise ValueError(f"{where}: unknown kind {row.kind!r}")
    return row


def read_csv(path) -> list[ResultRow]:
    """Columns are located by header name; extra columns are ignored."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"empty input: {path}") from None
        missing = [c for c in SCHEMA_COLUMNS if c not in header]
        if missing:
            raise ValueError(f"{path}: missing columns {missing}")
        index = {c: header.index(c) for c in SCHEMA_COLUMNS}
        rows = []
        for ln, record in enumerate(reader, start=2):
            if len(record) != len(header):
                raise ValueError(
                    f"{path}:{ln}: expected {len(header)} fields, got {len(record)}")
            fields = {c: record[index[c]] for c in SCHEMA_COLUMNS}
            rows.append(_parse_fields(fields, f"{path}:{ln}"))
    if not rows:
        raise ValueError(f"no data rows in {path}")
    return rows


def _json_field_str(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def read_json(path) -> list[ResultRow]:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    if not isinstance(payload, dict) or payload.get("schema") != "results/v1":
        raise ValueError(f"{path}: not a results/v1 document")
    rows = []
    for idx, obj in enumerate(payload.get("rows", [])):
        missing = sorted(set(SCHEMA_COLUMNS) - set(obj))
        if missing:
            raise ValueError(f"{path}: row {idx} missing keys {missing}")
        fields = {c: _json_field_str(obj[c]) for c in SCHEMA_COLUMNS}
        rows.append(_parse_fields(fields, f"{path}: row {idx}"))
    if not rows:
        raise ValueError(f"no data rows in {path}")
    return rows


def load_rows(paths: Iterable) -> list[ResultRow]:
    """Concatenate tables in input order; .json means results/v1, else CSV."""
    rows: list[ResultRow] = []
    for path in paths:
        reader = read_json if str(path).endswith(".json") else read_csv
        rows.extend(reader(path))
    return rows
