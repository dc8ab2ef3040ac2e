"""Polygonized measure-theoretic cluster boundaries.

``build_mesh`` overlays all region boundary edges, splitting collinear
segments and cocircular arcs at breakpoints so that every emitted piece
carries exactly the two labels of the regions it separates (0 = external).
Coincident boundary portions of two regions become a single interface piece.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .cluster import Cluster
from .errors import (
    EmptyBoundaryError,
    InvalidClusterError,
    MalformedMeshError,
    UnsupportedRepresentationError,
)
from .regions import ArcEdge, PixelMask, SegmentEdge, region_edges

TWO_PI = 2.0 * math.pi
#: grouping granularity for line/circle keys
KEY_TOL = 1e-9
#: breakpoint merge tolerance (relative to feature size)
BREAK_TOL = 1e-12


@dataclass(frozen=True)
class MeshSegment:
    """One interface piece between regions ``left`` and ``right``."""

    kind: str  # "seg" | "arc"
    geom: tuple  # seg: (p0, p1); arc: (center, radius, a0, a1) with a1 > a0
    left: int
    right: int

    @property
    def length(self) -> float:
        if self.kind == "seg":
            (p0, p1) = self.geom
            return math.dist(p0, p1)
        (_, r, a0, a1) = self.geom
        return r * (a1 - a0)

    def sample_points(self) -> list[tuple[float, float]]:
        """Endpoints plus axis-extreme arc points (for diameter bounds)."""
        if self.kind == "seg":
            return [self.geom[0], self.geom[1]]
        (c, r, a0, a1) = self.geom
        pts = [
            (c[0] + r * math.cos(a), c[1] + r * math.sin(a)) for a in (a0, a1)
        ]
        k0 = math.ceil(a0 / (math.pi / 2.0))
        while k0 * math.pi / 2.0 <= a1:
            a = k0 * math.pi / 2.0
            pts.append((c[0] + r * math.cos(a), c[1] + r * math.sin(a)))
            k0 += 1
        return pts


@dataclass(frozen=True)
class BoundaryMesh:
    segments: tuple[MeshSegment, ...]

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))


def interface_length(mesh: BoundaryMesh) -> float:
    """Total length of the mesh, each two-label interface counted once."""
    total = 0.0
    for s in mesh.segments:
        if s.left == s.right:
            raise MalformedMeshError(
                f"mesh segment carries a single label {s.left}"
            )
        total += s.length
    return total


def diameter_of_boundary(mesh: BoundaryMesh) -> float:
    """Max pairwise distance over segment vertices and arc extreme points."""
    if not mesh.segments:
        raise EmptyBoundaryError("mesh has no segments")
    pts = np.array(
        [p for s in mesh.segments for p in s.sample_points()], dtype=float
    )
    if len(pts) > 16:
        from scipy.spatial import ConvexHull

        try:
            pts = pts[ConvexHull(pts).vertices]
        except Exception:
            pass  # degenerate (collinear) point sets: brute force below
    d2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1)
    return math.sqrt(float(d2.max()))


# ----------------------------------------------------------------------
# overlay machinery


def _canon_line(p0, p1):
    """Canonical (angle, offset) key plus orientation flip flag."""
    dx, dy = p1[0] - p0[0], p1[1] - p0[1]
    n = math.hypot(dx, dy)
    dx, dy = dx / n, dy / n
    flipped = dy < 0 or (dy == 0 and dx < 0)
    if flipped:
        dx, dy = -dx, -dy
    off = dx * p0[1] - dy * p0[0]
    return (dx, dy), off, flipped


def _overlay_intervals(items, tol):
    """Split 1d intervals at all breakpoints (event sweep, O(n log n)).

    ``items`` is a list of (lo, hi, label, side).  Yields elementary
    (lo, hi, cover) with cover = list of (label, side).
    """
    import bisect
    from collections import Counter

    cuts = sorted({t for it in items for t in (it[0], it[1])})
    merged = [cuts[0]]
    for t in cuts[1:]:
        if t - merged[-1] > tol:
            merged.append(t)

    def idx(t: float) -> int:
        i = bisect.bisect_left(merged, t)
        if i > 0 and t - merged[i - 1] <= tol:
            return i - 1
        return min(i, len(merged) - 1)

    n = len(merged)
    starts: list[list] = [[] for _ in range(n)]
    stops: list[list] = [[] for _ in range(n)]
    for lo, hi, lab, side in items:
        i_lo, i_hi = idx(lo), idx(hi)
        if i_hi > i_lo:
            starts[i_lo].append((lab, side))
            stops[i_hi].append((lab, side))
    active: Counter = Counter()
    for i in range(n - 1):
        for key in starts[i]:
            active[key] += 1
        for key in stops[i]:
            active[key] -= 1
            if active[key] == 0:
                del active[key]
        if active:
            yield merged[i], merged[i + 1], list(active)


def _labels_from_cover(cover, where: str):
    """Map a cover set to an interface label pair (or None for a seam)."""
    pos = sorted({lab for lab, side in cover if side > 0})
    neg = sorted({lab for lab, side in cover if side < 0})
    if len(pos) > 1 or len(neg) > 1:
        raise InvalidClusterError(
            f"regions {pos if len(pos) > 1 else neg} overlap along a {where}"
        )
    if pos and neg:
        if pos[0] == neg[0]:
            return None  # region touching itself: not a boundary
        return (pos[0], neg[0])
    lab = pos[0] if pos else neg[0]
    return (lab, 0)


def build_mesh(cluster: Cluster) -> BoundaryMesh:
    """Overlay all region boundaries into labeled interface pieces."""
    for r in cluster.regions:
        if isinstance(r, PixelMask):
            raise UnsupportedRepresentationError(
                "pixel-mask regions are not meshable; use grid diagnostics"
            )
    seg_groups: dict = {}
    arc_groups: dict = {}
    scale = 1.0
    for label, region in enumerate(cluster.regions, start=1):
        for e in region_edges(region):
            if isinstance(e, SegmentEdge):
                d, off, flipped = _canon_line(e.p0, e.p1)
                key = (round(d[0] / KEY_TOL), round(d[1] / KEY_TOL), round(off / KEY_TOL))
                t0 = d[0] * e.p0[0] + d[1] * e.p0[1]
                t1 = d[0] * e.p1[0] + d[1] * e.p1[1]
                lo, hi = min(t0, t1), max(t0, t1)
                side = -1 if flipped else 1  # region left of canonical dir?
                seg_groups.setdefault(key, ((d, off), []))[1].append(
                    (lo, hi, label, side)
                )
                scale = max(scale, abs(lo), abs(hi))
            else:
                key = (
                    round(e.center[0] / KEY_TOL),
                    round(e.center[1] / KEY_TOL),
                    round(e.radius / KEY_TOL),
                )
                start = e.theta0 if e.ccw else e.theta1
                sweep = e.sweep
                a0 = start % TWO_PI
                side = 1 if e.ccw else -1  # +1: region inside the circle
                group = arc_groups.setdefault(key, ((e.center, e.radius), []))[1]
                if a0 + sweep <= TWO_PI + 1e-15:
                    group.append((a0, min(a0 + sweep, TWO_PI), label, side))
                else:
                    group.append((a0, TWO_PI, label, side))
                    group.append((0.0, a0 + sweep - TWO_PI, label, side))
                scale = max(scale, abs(e.center[0]) + e.radius, abs(e.center[1]) + e.radius)

    out: list[MeshSegment] = []
    tol = BREAK_TOL * scale * 16.0
    for (d, off), items in seg_groups.values():
        for lo, hi, cover in _overlay_intervals(items, tol):
            labels = _labels_from_cover(cover, "segment")
            if labels is None or hi - lo <= tol:
                continue
            p_lo = (d[0] * lo - d[1] * off, d[1] * lo + d[0] * off)
            p_hi = (d[0] * hi - d[1] * off, d[1] * hi + d[0] * off)
            out.append(MeshSegment("seg", (p_lo, p_hi), labels[0], labels[1]))
    for (center, radius), items in arc_groups.values():
        atol = tol / radius
        for a0, a1, cover in _overlay_intervals(items, atol):
            labels = _labels_from_cover(cover, "circle")
            if labels is None or a1 - a0 <= atol:
                continue
            out.append(
                MeshSegment("arc", (center, radius, a0, a1), labels[0], labels[1])
            )
    return BoundaryMesh(tuple(out))
