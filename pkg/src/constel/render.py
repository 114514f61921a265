"""SVG rendering of constellations.

Rationals are converted to floats here and only here; rendering output never
feeds back into any verification.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET

from .builder import Constellation
from .geometry import tangency_point
from .graphs import pair_classification

_COLORS = {"base": "#333333", "large": "#2b6cb0", "small": "#c53030"}


def render_constellation(
    c: Constellation, path, size: int = 800, highlight=()
) -> None:
    """Write an SVG with one stroke-only circle per family member.

    highlight options: "tangencies" marks every tangency point,
    "matchings" draws large-small center segments.
    """
    xs_min = min(float(ci.cx - ci.r) for ci in c.circles)
    xs_max = max(float(ci.cx + ci.r) for ci in c.circles)
    ys_min = min(float(ci.cy - ci.r) for ci in c.circles)
    ys_max = max(float(ci.cy + ci.r) for ci in c.circles)
    span = max(xs_max - xs_min, ys_max - ys_min) or 1.0
    margin = 0.05 * span
    scale = size / (span + 2 * margin)

    def sx(x):
        return (float(x) - xs_min + margin) * scale

    def sy(y):  # flip: SVG y grows downward
        return size - (float(y) - ys_min + margin) * scale

    svg = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        width=f"{size}",
        height=f"{size}",
        viewBox=f"0 0 {size} {size}",
    )
    group = ET.SubElement(svg, "g", fill="none")
    for ci, tag in zip(c.circles, c.provenance):
        ET.SubElement(
            group,
            "circle",
            cx=f"{sx(ci.cx):.3f}",
            cy=f"{sy(ci.cy):.3f}",
            r=f"{float(ci.r) * scale:.3f}",
            stroke=_COLORS.get(tag.kind, "#555555"),
            attrib={"stroke-width": "1"},
        )
    if "matchings" in highlight:
        for i, j, kind in pair_classification(list(c.circles)):
            if kind != "external":
                continue
            kinds = {c.provenance[i].kind, c.provenance[j].kind}
            if kinds == {"large", "small"}:
                a, b = c.circles[i], c.circles[j]
                ET.SubElement(
                    group,
                    "line",
                    x1=f"{sx(a.cx):.3f}",
                    y1=f"{sy(a.cy):.3f}",
                    x2=f"{sx(b.cx):.3f}",
                    y2=f"{sy(b.cy):.3f}",
                    stroke="#38a169",
                    attrib={"stroke-width": "0.8", "stroke-dasharray": "4 3"},
                )
    if "tangencies" in highlight:
        for i, j, kind in pair_classification(list(c.circles)):
            if kind in ("external", "internal"):
                p = tangency_point(c.circles[i], c.circles[j])
                ET.SubElement(
                    group,
                    "circle",
                    cx=f"{sx(p[0]):.3f}",
                    cy=f"{sy(p[1]):.3f}",
                    r="2",
                    fill="#d69e2e",
                    stroke="none",
                )
    ET.ElementTree(svg).write(path)
