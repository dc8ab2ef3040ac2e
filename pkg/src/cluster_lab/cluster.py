"""Clusters of essentially disjoint regions and the half-sum perimeter.

A cluster is an ordered sequence of regions; the external region is the
complement of their union and is never materialized.  The cluster perimeter
is half the sum of all region perimeters plus the perimeter of the union,
which counts every interface exactly once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidArgumentError, InvalidClusterError
from . import regions as rg
from .regions import AxisRect, Disk, PixelMask, Region

#: relative overlap-area tolerance for essential disjointness
OVERLAP_RTOL = 1e-10


def _disk_overlap_area(a: Disk, b: Disk) -> float:
    d = math.dist(a.center, b.center)
    r1, r2 = a.radius, b.radius
    if d >= r1 + r2:
        return 0.0
    if d <= abs(r1 - r2):
        r = min(r1, r2)
        return math.pi * r * r
    # circular lens area
    alpha = 2.0 * math.acos((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1))
    beta = 2.0 * math.acos((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2))
    return 0.5 * (
        r1 * r1 * (alpha - math.sin(alpha)) + r2 * r2 * (beta - math.sin(beta))
    )


def _rect_overlap_area(a: AxisRect, b: AxisRect) -> float:
    w = min(a.hi[0], b.hi[0]) - max(a.lo[0], b.lo[0])
    h = min(a.hi[1], b.hi[1]) - max(a.lo[1], b.lo[1])
    return w * h if (w > 0 and h > 0) else 0.0


def _boxes_overlap(a, b) -> bool:
    ax0, ay0, ax1, ay1 = a
    bx0, by0, bx1, by1 = b
    return ax0 < bx1 and bx0 < ax1 and ay0 < by1 and by0 < ay1


def _sampled_overlap_area(a: Region, b: Region, n: int = 512) -> float:
    """Crude overlap estimate on the intersection of bounding boxes.

    Only used for region pairs without an analytic overlap formula; it
    catches gross overlaps while letting exact tangencies through.
    """
    ba, bb = rg.bounding_box(a), rg.bounding_box(b)
    if not _boxes_overlap(ba, bb):
        return 0.0
    x0, y0 = max(ba[0], bb[0]), max(ba[1], bb[1])
    x1, y1 = min(ba[2], bb[2]), min(ba[3], bb[3])
    k = int(math.isqrt(n))
    xs = np.linspace(x0, x1, k + 2)[1:-1]
    ys = np.linspace(y0, y1, k + 2)[1:-1]
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    both = rg.contains(a, pts) & rg.contains(b, pts)
    return both.mean() * (x1 - x0) * (y1 - y0)


def _pair_overlap_area(a: Region, b: Region) -> float:
    if isinstance(a, Disk) and isinstance(b, Disk):
        return _disk_overlap_area(a, b)
    if isinstance(a, AxisRect) and isinstance(b, AxisRect):
        return _rect_overlap_area(a, b)
    return _sampled_overlap_area(a, b)


@dataclass(frozen=True)
class Cluster:
    """Ordered sequence of essentially disjoint regions."""

    regions: tuple[Region, ...]

    def __init__(self, regions: Sequence[Region], validate: bool = True):
        object.__setattr__(self, "regions", tuple(regions))
        if validate:
            self.validate()

    def __len__(self) -> int:
        return len(self.regions)

    def validate(self) -> None:
        for i, a in enumerate(self.regions):
            area_a = rg.area(a)
            box_a = rg.bounding_box(a)
            for j in range(i + 1, len(self.regions)):
                b = self.regions[j]
                if not _boxes_overlap(box_a, rg.bounding_box(b)):
                    continue
                ov = _pair_overlap_area(a, b)
                lim = OVERLAP_RTOL * min(area_a, rg.area(b))
                if ov > lim:
                    raise InvalidClusterError(
                        f"regions {i + 1} and {j + 1} overlap "
                        f"(area {ov:.3e} > tolerance {lim:.3e})"
                    )

    def bounding_box(self) -> tuple[float, float, float, float]:
        boxes = [rg.bounding_box(r) for r in self.regions]
        return (
            min(b[0] for b in boxes),
            min(b[1] for b in boxes),
            max(b[2] for b in boxes),
            max(b[3] for b in boxes),
        )


def measures(c: Cluster) -> list[float]:
    """Region areas in order."""
    return [rg.area(r) for r in c.regions]


def union_perimeter(c: Cluster) -> float:
    """Perimeter of the union of all regions (= perimeter of the complement).

    Disk-only clusters with disjoint interiors have union perimeter equal to
    the sum of circle lengths (tangency points carry no length).  Rectangle
    clusters use an exact polygon union.  Mixed/arc clusters subtract the
    doubled internal interfaces from the summed boundary lengths.
    """
    if all(isinstance(r, Disk) for r in c.regions):
        return sum(rg.region_perimeter(r) for r in c.regions)
    if all(isinstance(r, AxisRect) for r in c.regions):
        from shapely.geometry import box
        from shapely.ops import unary_union

        u = unary_union([box(*r.lo, *r.hi) for r in c.regions])
        return u.boundary.length
    from .mesh import build_mesh

    mesh = build_mesh(c)
    total = sum(rg.region_perimeter(r) for r in c.regions)
    internal = sum(s.length for s in mesh.segments if s.left != 0 and s.right != 0)
    return total - 2.0 * internal


def cluster_perimeter(c: Cluster) -> float:
    """Half-sum cluster perimeter: (P(union) + sum of region perimeters) / 2."""
    total = sum(rg.region_perimeter(r) for r in c.regions)
    return 0.5 * (union_perimeter(c) + total)


def truncate(c: Cluster, n: int) -> Cluster:
    """Keep only the first ``n`` regions."""
    if n < 1:
        raise InvalidArgumentError(f"truncation length must be >= 1, got {n}")
    if n >= len(c.regions):
        return c
    return Cluster(c.regions[:n], validate=False)
