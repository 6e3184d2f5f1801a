"""Builders and SVG inspection helpers shared by the chart tests."""

from __future__ import annotations

import xml.etree.ElementTree as ET

HEADER = ("kind,n,delta,C,q,solver,trials,successes,proportion,"
          "wilson_lo,wilson_hi,mean_ms,seed_kind,i")

SEED_KIND = "complete-bipartite-bidirected"


def csv_line(kind="threshold", n=7, delta="0.25", C="0.0", q="1.0",
             solver="brute", trials=200, successes=0, proportion="0.000000",
             lo="0.000000", hi="0.018846", mean="0.000",
             seed_kind=SEED_KIND, i=""):
    return (f"{kind},{n},{delta},{C},{q},{solver},{trials},{successes},"
            f"{proportion},{lo},{hi},{mean},{seed_kind},{i}")


def write_table(path, lines):
    path.write_text(HEADER + "\n" + "\n".join(lines) + "\n", encoding="utf-8")
    return str(path)


def threshold_series_lines(n, delta, cs, proportions, **overrides):
    """One line per C value; band strings derived from the proportion."""
    lines = []
    for c, p in zip(cs, proportions):
        lo = max(0.0, p - 0.04)
        hi = min(1.0, p + 0.04)
        lines.append(csv_line(
            n=n, delta=delta, C=c, successes=int(round(p * 200)),
            proportion=f"{p:.6f}", lo=f"{lo:.6f}", hi=f"{hi:.6f}", **overrides))
    return lines


def coupling_line(i, proportion, n=6, delta="0.5", C="4.0", trials=10000):
    p = float(proportion)
    return csv_line(kind="coupling", n=n, delta=delta, C=C, trials=trials,
                    successes=int(round(p * trials)), proportion=proportion,
                    lo=f"{max(0.0, p - 0.01):.6f}", hi=f"{min(1.0, p + 0.01):.6f}",
                    i=str(i))


def svg_root(path):
    return ET.parse(path).getroot()


def find_all(root, tag):
    return [el for el in root.iter() if el.tag.split("}")[-1] == tag]


def series_groups(root):
    return [g for g in find_all(root, "g") if g.get("class") == "series"]


def circles(node):
    return find_all(node, "circle")


def text_by_class(root, cls):
    for t in find_all(root, "text"):
        if t.get("class") == cls:
            return t
    return None


def polyline_points(g):
    (line,) = find_all(g, "polyline")
    return line.get("points").split()
