"""Deterministic SVG rendering: one shape element per region."""

from __future__ import annotations

import math

from .cluster import Cluster
from .errors import InvalidArgumentError
from .grid import GridCluster
from .regions import ArcEdge, ArcPolygon, AxisRect, Disk, PixelMask, SegmentEdge
from . import regions as rg

#: fills cycle through this palette by label
PALETTE = (
    "#4e79a7",
    "#f28e2b",
    "#59a14f",
    "#e15759",
    "#b07aa1",
    "#edc948",
    "#76b7b2",
    "#ff9da7",
)
STROKE = "#222222"


def _num(x: float) -> str:
    """Shortest stable decimal for coordinates."""
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def _arc_path_cmds(e: ArcEdge) -> str:
    """SVG elliptical-arc commands for one circular arc edge.

    Arcs sweeping more than pi are split so the large-arc flag is never
    ambiguous for near-half turns.
    """
    cmds = []
    n_parts = 1 if e.sweep <= math.pi else 2
    step = e.sweep / n_parts * (1.0 if e.ccw else -1.0)
    t = e.theta0
    for _ in range(n_parts):
        t_next = t + step
        x, y = e.point_at(t_next)
        # SVG y-axis points down; the writer flips via a transform, under
        # which ccw in math coordinates is sweep flag 0
        sweep_flag = 0 if e.ccw else 1
        cmds.append(
            f"A {_num(e.radius)} {_num(e.radius)} 0 0 {sweep_flag} {_num(x)} {_num(y)}"
        )
        t = t_next
    return " ".join(cmds)


def _region_element(region, fill: str) -> str:
    style = f'fill="{fill}" fill-opacity="0.7" stroke="{STROKE}" stroke-width="0.5%"'
    if isinstance(region, Disk):
        (cx, cy), r = region.center, region.radius
        return f'<circle cx="{_num(cx)}" cy="{_num(cy)}" r="{_num(r)}" {style}/>'
    if isinstance(region, AxisRect):
        (x0, y0), (x1, y1) = region.lo, region.hi
        return (
            f'<rect x="{_num(x0)}" y="{_num(y0)}" width="{_num(x1 - x0)}" '
            f'height="{_num(y1 - y0)}" {style}/>'
        )
    if isinstance(region, ArcPolygon):
        parts = []
        for loop in region.loops:
            p0 = loop[0].endpoint(0)
            cmds = [f"M {_num(p0[0])} {_num(p0[1])}"]
            for e in loop:
                if isinstance(e, SegmentEdge):
                    cmds.append(f"L {_num(e.p1[0])} {_num(e.p1[1])}")
                else:
                    cmds.append(_arc_path_cmds(e))
            cmds.append("Z")
            parts.append(" ".join(cmds))
        return f'<path d="{" ".join(parts)}" {style}/>'
    if isinstance(region, PixelMask):
        return _mask_element(region.mask, region.h, region.origin, style)
    raise InvalidArgumentError(f"unknown region type {type(region)!r}")


def _mask_element(mask, h: float, origin, style: str) -> str:
    """One path tracing the union of set cells (exterior rings and holes)."""
    from shapely.geometry import box
    from shapely.ops import unary_union

    x0, y0 = origin
    cells = [
        box(x0 + j * h, y0 + i * h, x0 + (j + 1) * h, y0 + (i + 1) * h)
        for i, j in zip(*mask.nonzero())
    ]
    union = unary_union(cells)
    polys = getattr(union, "geoms", [union])
    parts = []
    for poly in sorted(polys, key=lambda p: (p.bounds[0], p.bounds[1])):
        for ring in [poly.exterior, *poly.interiors]:
            coords = list(ring.coords)
            cmds = [f"M {_num(coords[0][0])} {_num(coords[0][1])}"]
            cmds.extend(f"L {_num(x)} {_num(y)}" for x, y in coords[1:-1])
            cmds.append("Z")
            parts.append(" ".join(cmds))
    return f'<path d="{" ".join(parts)}" fill-rule="evenodd" {style}/>'


def render_svg(obj: Cluster | GridCluster, path) -> None:
    """Write a deterministic SVG with one shape element per region."""
    if isinstance(obj, GridCluster):
        x0 = y0 = 0.0
        x1, y1 = obj.width * obj.h, obj.height * obj.h
        elements = [
            _mask_element(
                obj.chamber_mask(k),
                obj.h,
                (0.0, 0.0),
                f'fill="{PALETTE[(k - 1) % len(PALETTE)]}" fill-opacity="0.7" '
                f'stroke="{STROKE}" stroke-width="0.5%"',
            )
            for k in range(1, obj.n_chambers + 1)
        ]
    elif isinstance(obj, Cluster):
        x0, y0, x1, y1 = obj.bounding_box()
        elements = [
            _region_element(r, PALETTE[i % len(PALETTE)])
            for i, r in enumerate(obj.regions)
        ]
    else:
        raise InvalidArgumentError(f"cannot render {type(obj)!r}")
    pad = 0.02 * max(x1 - x0, y1 - y0, 1e-9)
    vb = (x0 - pad, y0 - pad, (x1 - x0) + 2 * pad, (y1 - y0) + 2 * pad)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        (
            '<svg xmlns="http://www.w3.org/2000/svg" '
            f'viewBox="{_num(vb[0])} {_num(vb[1])} {_num(vb[2])} {_num(vb[3])}" '
            'width="640" height="640">'
        ),
        # flip the y axis so math coordinates render upright
        f'<g transform="translate(0 {_num(y0 + y1)}) scale(1 -1)">',
        *elements,
        "</g>",
        "</svg>",
    ]
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines))
        f.write("\n")
