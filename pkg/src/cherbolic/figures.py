"""Polygon figures: hand-written SVG, plus an optional matplotlib PNG."""

from __future__ import annotations

import math
from pathlib import Path
from xml.sax.saxutils import escape

from .plane import geodesic_arc
from .report import PolygonDocument

SIZE = 1000
RADIUS = 450  # pixels per unit of disk radius


def to_screen(u: complex) -> tuple[float, float]:
    """Disk coordinate to the SVG frame (y axis pointing up, as in the usual drawings)."""
    return SIZE / 2 + RADIUS * u.real, SIZE / 2 - RADIUS * u.imag


def _fmt(x: float) -> str:
    return f"{x:.3f}".rstrip("0").rstrip(".")


def _coords(doc: PolygonDocument) -> dict[str, complex]:
    return {v.label: v.coord for v in doc.vertices}


def side_path(doc: PolygonDocument, side) -> str:
    coords = _coords(doc)
    a, b = coords[side.start], coords[side.end]
    x0, y0 = to_screen(a)
    x1, y1 = to_screen(b)
    if side.center is None:
        return f"M {_fmt(x0)} {_fmt(y0)} L {_fmt(x1)} {_fmt(y1)}"
    c = side.center
    cross = ((a - c).conjugate() * (b - c)).imag
    # counterclockwise in the disk is clockwise on screen, which is SVG's positive sweep
    sweep = 1 if cross > 0 else 0
    r = _fmt(side.radius * RADIUS)
    return f"M {_fmt(x0)} {_fmt(y0)} A {r} {r} 0 0 {sweep} {_fmt(x1)} {_fmt(y1)}"


def _side_midpoint(doc: PolygonDocument, number: int) -> complex:
    side = doc.sides[number - 1]
    coords = _coords(doc)
    pts = geodesic_arc(coords[side.start], coords[side.end]).points(3)
    return complex(pts[1])


def _label_position(u: complex, offset: float = 0.06) -> complex:
    # push labels away from the origin so they sit outside the polygon
    if abs(u) < 1e-9:
        return u + offset
    return u * (1 + offset / abs(u))


def polygon_svg(doc: PolygonDocument, title: str | None = None) -> str:
    title = title or f"{doc.case} p={doc.p}"
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="0 0 {SIZE} {SIZE}" '
        f'width="{SIZE}" height="{SIZE}">',
        f"<title>{escape(title)}</title>",
        "<defs>",
        '<marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="8" markerHeight="8" '
        'orient="auto-start-reverse"><polygon points="0,0 10,5 0,10" fill="#b03030"/></marker>',
        "</defs>",
        f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>',
        f'<circle class="boundary" cx="{SIZE // 2}" cy="{SIZE // 2}" r="{RADIUS}" '
        'fill="none" stroke="#888" stroke-width="2"/>',
        '<g class="sides" fill="none" stroke="#1f4e9c" stroke-width="3">',
    ]
    for side in doc.sides:
        out.append(f'<path id="l{side.number}" d="{side_path(doc, side)}"/>')
    out.append("</g>")

    out.append('<g class="pairings" stroke="#b03030" stroke-width="1.5" stroke-dasharray="6 4">')
    for q in doc.pairings:
        x0, y0 = to_screen(_side_midpoint(doc, q.source))
        x1, y1 = to_screen(_side_midpoint(doc, q.target))
        out.append(
            f'<line class="pairing" data-name="{escape(q.name)}" x1="{_fmt(x0)}" y1="{_fmt(y0)}" '
            f'x2="{_fmt(x1)}" y2="{_fmt(y1)}" marker-end="url(#arrow)"/>'
        )
    out.append("</g>")

    out.append('<g class="vertices">')
    for v in doc.vertices:
        x, y = to_screen(v.coord)
        if v.ideal:
            out.append(
                f'<circle class="vertex ideal" cx="{_fmt(x)}" cy="{_fmt(y)}" r="7" '
                'fill="white" stroke="black" stroke-width="2"/>'
            )
        else:
            out.append(f'<circle class="vertex" cx="{_fmt(x)}" cy="{_fmt(y)}" r="6" fill="black"/>')
    out.append("</g>")

    out.append('<g class="labels" font-family="serif" font-size="26" text-anchor="middle">')
    for v in doc.vertices:
        x, y = to_screen(_label_position(v.coord))
        out.append(f'<text x="{_fmt(x)}" y="{_fmt(y + 9)}">{escape(v.label)}</text>')
    for side in doc.sides:
        x, y = to_screen(_label_position(_side_midpoint(doc, side.number), 0.04))
        out.append(f'<text x="{_fmt(x)}" y="{_fmt(y + 7)}" font-size="18" fill="#1f4e9c">l{side.number}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(doc: PolygonDocument, path: str | Path) -> None:
    _atomic_write(Path(path), polygon_svg(doc))


def write_png(doc: PolygonDocument, path: str | Path, dpi: int = 150) -> None:
    """Render the same figure with matplotlib (imported only here)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    coords = _coords(doc)
    fig, ax = plt.subplots(figsize=(6, 6))
    t = [2 * math.pi * k / 400 for k in range(401)]
    ax.plot([math.cos(a) for a in t], [math.sin(a) for a in t], color="0.55", lw=1)
    for side in doc.sides:
        pts = geodesic_arc(coords[side.start], coords[side.end]).points(80)
        ax.plot(pts.real, pts.imag, color="#1f4e9c", lw=2)
    for q in doc.pairings:
        a, b = _side_midpoint(doc, q.source), _side_midpoint(doc, q.target)
        ax.annotate(
            "",
            xy=(b.real, b.imag),
            xytext=(a.real, a.imag),
            arrowprops={"arrowstyle": "->", "color": "#b03030", "ls": "--", "lw": 1},
        )
    for v in doc.vertices:
        face = "white" if v.ideal else "black"
        ax.plot([v.coord.real], [v.coord.imag], "o", ms=6, mfc=face, mec="black")
        lab = _label_position(v.coord, 0.07)
        ax.text(lab.real, lab.imag, v.label, ha="center", va="center", fontsize=11)
    ax.set_xlim(-1.1, 1.1)
    ax.set_ylim(-1.1, 1.1)
    ax.set_aspect("equal")
    ax.axis("off")
    ax.set_title(f"{doc.case} p={doc.p}")
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    fig.savefig(tmp, dpi=dpi, format="png")
    plt.close(fig)
    tmp.replace(path)


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    tmp.replace(path)
