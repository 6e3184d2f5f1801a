"""Minimal deterministic SVG writer.

Attributes serialize in insertion order and values must already be strings,
so a rendered document is a pure function of the element tree.
"""

from __future__ import annotations

from xml.sax.saxutils import escape, quoteattr

SVG_NS = "http://www.w3.org/2000/svg"


def fnum(x: float) -> str:
    """Coordinate formatting: two decimals, trailing zeros trimmed."""
    s = f"{x:.2f}".rstrip("0").rstrip(".")
    return "0" if s in ("", "-0") else s


class Element:
    __slots__ = ("tag", "attrs", "children", "text")

    def __init__(self, tag: str, attrs: dict[str, str] | None = None,
                 text: str | None = None):
        for key, value in (attrs or {}).items():
            if not isinstance(value, str):
                raise TypeError(f"attribute {key!r} must be a string")
        self.tag = tag
        self.attrs = dict(attrs or {})
        self.children: list[Element] = []
        self.text = text

    def child(self, tag: str, attrs: dict[str, str] | None = None,
              text: str | None = None) -> "Element":
        element = Element(tag, attrs, text)
        self.children.append(element)
        return element

    def _render(self, parts: list[str], depth: int) -> None:
        pad = "  " * depth
        attrs = "".join(f" {k}={quoteattr(v)}" for k, v in self.attrs.items())
        if not self.children and self.text is None:
            parts.append(f"{pad}<{self.tag}{attrs}/>")
            return
        if not self.children:
            parts.append(f"{pad}<{self.tag}{attrs}>{escape(self.text)}</{self.tag}>")
            return
        parts.append(f"{pad}<{self.tag}{attrs}>")
        if self.text is not None:
            parts.append(f"{pad}  {escape(self.text)}")
        for element in self.children:
            element._render(parts, depth + 1)
        parts.append(f"{pad}</{self.tag}>")

    def to_string(self) -> str:
        parts: list[str] = []
        self._render(parts, 0)
        return "\n".join(parts)


def document(width: int, height: int,
             attrs: dict[str, str] | None = None) -> Element:
    base = {
        "xmlns": SVG_NS,
        "width": str(width),
        "height": str(height),
        "viewBox": f"0 0 {width} {height}",
    }
    base.update(attrs or {})
    return Element("svg", base)


def write_svg(root: Element, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write('<?xml version="1.0" encoding="UTF-8"?>\n')
        fh.write(root.to_string())
        fh.write("\n")
