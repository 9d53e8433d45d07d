"""Deterministic SVG pictures of plane tropical curves.

Coordinates stay exact until serialization, where they are rounded to six
decimals with integer arithmetic.  Conventions: fan rays dashed grey from the
origin, curve edges solid, end weights printed next to ends, markings as red
dots labelled x1, x2, ...
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

__all__ = ["EmptyScene", "RenderOptions", "fmt", "render_curve", "render_all", "contact_sheet"]


class EmptyScene(ValueError):
    pass


@dataclass(frozen=True)
class RenderOptions:
    fan: bool = True
    label_all: bool = False
    size: int = 480
    margin: Fraction = Fraction(1, 6)


def fmt(q) -> str:
    """Fixed six-decimal rendering of a rational, without floating point."""
    q = Fraction(q)
    scaled = round(q * 10**6)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**6)
    return f"{sign}{whole}.{frac:06d}"


def _q(pair) -> Fraction:
    return Fraction(int(pair[0]), int(pair[1]))


def _extend(p: Tuple[Fraction, Fraction], d: Sequence[int], length: Fraction):
    """Point at distance ``length`` (max-norm) from p in direction d."""
    m = max(abs(d[0]), abs(d[1]))
    return (p[0] + length * d[0] / m, p[1] + length * d[1] / m)


def _scene(curve: Dict):
    verts = [(_q(v[0]), _q(v[1])) for v in curve["vertices"]]
    marks = {}
    ends = []
    for leg in curve["legs"]:
        if leg["kind"] == "marking":
            marks[leg["label"]] = verts[leg["vertex"]]
        else:
            ends.append((verts[leg["vertex"]], leg["vector"], leg["weight"], leg["label"]))
    edges = [(verts[e["from"]], verts[e["to"]]) for e in curve["edges"]]
    return verts, marks, ends, edges


def _bbox(points: Sequence[Tuple[Fraction, Fraction]]):
    xs = [p[0] for p in points] + [Fraction(0)]
    ys = [p[1] for p in points] + [Fraction(0)]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, Fraction(1))
    return x0, x1, y0, y1, span


def render_curve(curve: Dict, a: int, options: RenderOptions = RenderOptions(), title: Optional[str] = None) -> str:
    """One SVG document for one serialized curve."""
    verts, marks, ends, edges = _scene(curve)
    x0, x1, y0, y1, span = _bbox(verts)
    pad = span * options.margin + span / 4
    vx0, vx1, vy0, vy1 = x0 - pad, x1 + pad, y0 - pad, y1 + pad
    width, height = vx1 - vx0, vy1 - vy0
    reach = span / 4 + span * options.margin / 2
    unit = span / 60

    # SVG y grows downwards, so every y is negated on output
    out: List[str] = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{options.size}" '
        f'height="{options.size}" viewBox="{fmt(vx0)} {fmt(-vy1)} {fmt(width)} {fmt(height)}">'
    )
    if title:
        out.append(f"<title>{title}</title>")
    out.append(f'<rect x="{fmt(vx0)}" y="{fmt(-vy1)}" width="{fmt(width)}" height="{fmt(height)}" fill="white"/>')
    if options.fan:
        rays = ((-1, a), (0, 1), (1, 0), (0, -1))
        out.append(f'<g stroke="#999999" stroke-width="{fmt(unit / 3)}" stroke-dasharray="{fmt(unit)},{fmt(unit)}" fill="none">')
        for r in rays:
            far = _extend((Fraction(0), Fraction(0)), r, span * 2)
            out.append(f'<line x1="0.000000" y1="0.000000" x2="{fmt(far[0])}" y2="{fmt(-far[1])}"/>')
        out.append("</g>")
    out.append(f'<g stroke="black" stroke-width="{fmt(unit / 2)}" fill="none">')
    for p, q in edges:
        out.append(f'<line x1="{fmt(p[0])}" y1="{fmt(-p[1])}" x2="{fmt(q[0])}" y2="{fmt(-q[1])}"/>')
    for p, vec, w, _ in ends:
        q = _extend(p, vec, reach)
        out.append(f'<line x1="{fmt(p[0])}" y1="{fmt(-p[1])}" x2="{fmt(q[0])}" y2="{fmt(-q[1])}"/>')
    out.append("</g>")
    font = fmt(unit * 3)
    out.append(f'<g font-family="sans-serif" font-size="{font}" fill="black">')
    for p, vec, w, _ in ends:
        if w > 1 or options.label_all:
            q = _extend(p, vec, reach * 3 / 4)
            out.append(f'<text x="{fmt(q[0] + unit)}" y="{fmt(-q[1] - unit)}">{w}</text>')
    out.append("</g>")
    out.append(f'<g fill="red" font-family="sans-serif" font-size="{font}">')
    for k in sorted(marks):
        p = marks[k]
        out.append(f'<circle cx="{fmt(p[0])}" cy="{fmt(-p[1])}" r="{fmt(unit)}"/>')
        out.append(f'<text x="{fmt(p[0] + unit * 3 / 2)}" y="{fmt(-p[1] + unit * 3)}">x{k}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def contact_sheet(svgs: Sequence[str], columns: int = 3, cell: int = 320) -> str:
    """All pictures side by side, each embedded as a nested svg element."""
    if not svgs:
        raise EmptyScene("nothing to draw")
    rows = (len(svgs) + columns - 1) // columns
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{columns * cell}" height="{rows * cell}">',
    ]
    for idx, doc in enumerate(svgs):
        body = doc.split("\n", 1)[1]  # drop the XML declaration
        body = body.replace(
            '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" ',
            f'<svg x="{(idx % columns) * cell}" y="{(idx // columns) * cell}" ',
            1,
        )
        body = _resize(body, cell)
        out.append(body.rstrip("\n"))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _resize(doc: str, cell: int) -> str:
    head, rest = doc.split(">", 1)
    head = re.sub(r'width="\d+"', f'width="{cell}"', head, count=1)
    head = re.sub(r'height="\d+"', f'height="{cell}"', head, count=1)
    return head + ">" + rest


def render_all(curves: Sequence[Dict], a: int, options: RenderOptions = RenderOptions()) -> Dict[str, str]:
    """File name -> SVG text: ``curve_<index>_<type>.svg`` per curve plus ``contact_sheet.svg``."""
    if not curves:
        raise EmptyScene("no curves to render")
    files: Dict[str, str] = {}
    docs = []
    for idx, c in enumerate(curves, start=1):
        name = f"curve_{idx}_{c['type']}.svg"
        doc = render_curve(c, a, options, title=f"curve {idx}, type {c['type']}, multiplicity {c['multiplicity']}")
        files[name] = doc
        docs.append(doc)
    files["contact_sheet.svg"] = contact_sheet(docs)
    return files
