"""Surface JSON and SVG export."""
from __future__ import annotations

import json
from xml.sax.saxutils import escape

from .exactnum import CNum, FieldSpec, common_field
from .surface import Surface, ValidationError

__all__ = ["surface_to_json", "surface_from_json", "load_surface", "dump_surface", "surface_svg"]


def surface_to_json(s: Surface) -> dict:
    """Exact JSON; edges are referenced by (polygon id, position)."""
    polys = [{"id": pid, "vertices": [v.to_json() for v in vs]} for pid, vs in s.verts.items()]
    gluings = []
    for e in sorted(s.glue):
        f = s.glue[e]
        if e < f:
            gluings.append([list(s.edge_loc[e]), list(s.edge_loc[f])])
    marked = [list(s.edge_loc[c]) for c in sorted(s.marked)]
    return {"field": list(s.field.radicands), "polygons": polys, "gluings": gluings, "marked": marked}


def surface_from_json(data: dict) -> Surface:
    try:
        spec = FieldSpec(tuple(data.get("field", ())))
        ids = [p["id"] for p in data["polygons"]]
        polys = [[CNum.from_json(v) for v in p["vertices"]] for p in data["polygons"]]
        gluings = [(tuple(a), tuple(b)) for a, b in data["gluings"]]
        marked = [tuple(m) for m in data.get("marked", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError([f"malformed surface JSON: {exc}"]) from exc
    spec = spec.join(common_field(v for p in polys for v in p))
    return Surface.from_polygons(polys, gluings, marked, ids=ids, field=spec)


def load_surface(path) -> Surface:
    with open(path) as fh:
        return surface_from_json(json.load(fh))


def dump_surface(s: Surface, path) -> None:
    with open(path, "w") as fh:
        json.dump(surface_to_json(s), fh, indent=1)
        fh.write("\n")


def surface_svg(s: Surface, scale: float = 120.0, gap: float = 0.4) -> str:
    """One group per polygon laid out left to right; edge pairs share a label."""
    label = {}
    for e in sorted(s.glue):
        if e not in label:
            label[e] = label[s.glue[e]] = str(len(label) // 2)
    zeros = set(s.zero_classes)
    groups, x_off, height = [], 0.0, 0.0
    for pid, vs in s.verts.items():
        pts = [(float(v.re), float(v.im)) for v in vs]
        xmin = min(p[0] for p in pts)
        ymin = min(p[1] for p in pts)
        shifted = [((x - xmin + x_off) * scale, (y - ymin) * scale) for x, y in pts]
        height = max(height, max(p[1] for p in shifted))
        path = " ".join(f"{x:.2f},{-y:.2f}" for x, y in shifted)
        items = [f'<polygon points="{path}" fill="#eef" stroke="#335" stroke-width="1"/>']
        n = len(shifted)
        for k, e in enumerate(s.edges[pid]):
            (x0, y0), (x1, y1) = shifted[k], shifted[(k + 1) % n]
            items.append(f'<text x="{(x0 + x1) / 2:.2f}" y="{-(y0 + y1) / 2:.2f}" font-size="10">{label[e]}</text>')
            ci = s.corner_class[e]
            if ci in zeros:
                angle = 2 * s.cone_multiples[ci]
                items.append(f'<circle cx="{x0:.2f}" cy="{-y0:.2f}" r="3" fill="#c00">'
                             f'<title>cone angle {angle}pi</title></circle>')
        groups.append(f'<g id="{escape(pid)}">' + "".join(items) + "</g>")
        x_off += max(p[0] for p in pts) - xmin + gap
    w, h = x_off * scale + 20, height + 20
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0f}" height="{h:.0f}" '
            f'viewBox="-10 {-h + 10:.0f} {w:.0f} {h:.0f}">' + "".join(groups) + "</svg>\n")
