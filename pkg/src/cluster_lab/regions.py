"""Exact planar region representations and their elementary measures.

Regions come in four flavours: disks, axis-aligned rectangles, arc polygons
(closed loops of circular arcs and straight segments) and pixel masks.
The first three are exact: areas and perimeters are closed-form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import InvalidRegionError

# relative tolerance for consecutive arc-polygon endpoints
ENDPOINT_RTOL = 1e-12

TWO_PI = 2.0 * math.pi


def _as_point(p) -> tuple[float, float]:
    x, y = p
    return (float(x), float(y))


@dataclass(frozen=True)
class Disk:
    """Closed disk of positive radius.

    ``curvature`` is the signed bend 1/radius; a negative value marks an
    enclosing circle (region outside).  It must equal ``±1/radius`` exactly
    (same float bits), which the default construction guarantees.
    """

    center: tuple[float, float]
    radius: float
    curvature: float = None  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "center", _as_point(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not (self.radius > 0.0) or not math.isfinite(self.radius):
            raise InvalidRegionError(f"disk radius must be positive, got {self.radius}")
        if self.curvature is None:
            object.__setattr__(self, "curvature", 1.0 / self.radius)
        else:
            object.__setattr__(self, "curvature", float(self.curvature))
            if self.curvature != math.copysign(1.0, self.curvature) / self.radius:
                raise InvalidRegionError(
                    "curvature must equal ±1/radius exactly: "
                    f"got {self.curvature} for radius {self.radius}"
                )


@dataclass(frozen=True)
class AxisRect:
    """Axis-aligned rectangle given by min and max corners."""

    lo: tuple[float, float]
    hi: tuple[float, float]

    def __post_init__(self):
        object.__setattr__(self, "lo", _as_point(self.lo))
        object.__setattr__(self, "hi", _as_point(self.hi))
        if not (self.hi[0] > self.lo[0] and self.hi[1] > self.lo[1]):
            raise InvalidRegionError(f"degenerate rectangle {self.lo}..{self.hi}")

    @property
    def width(self) -> float:
        return self.hi[0] - self.lo[0]

    @property
    def height(self) -> float:
        return self.hi[1] - self.lo[1]


@dataclass(frozen=True)
class SegmentEdge:
    """Straight edge from p0 to p1; the region lies on the left of travel."""

    p0: tuple[float, float]
    p1: tuple[float, float]

    def __post_init__(self):
        object.__setattr__(self, "p0", _as_point(self.p0))
        object.__setattr__(self, "p1", _as_point(self.p1))

    @property
    def length(self) -> float:
        return math.hypot(self.p1[0] - self.p0[0], self.p1[1] - self.p0[1])

    def endpoint(self, which: int) -> tuple[float, float]:
        return self.p0 if which == 0 else self.p1

    def outward_normal(self, t: float = 0.5) -> tuple[float, float]:
        dx, dy = self.p1[0] - self.p0[0], self.p1[1] - self.p0[1]
        n = math.hypot(dx, dy)
        return (dy / n, -dx / n)


@dataclass(frozen=True)
class ArcEdge:
    """Circular arc traversed from angle theta0 to theta1.

    ``ccw=True`` means increasing angle (the region is locally inside the
    circle, signed curvature +1/radius); ``ccw=False`` decreasing angle
    (region outside the circle, signed curvature -1/radius).
    """

    center: tuple[float, float]
    radius: float
    theta0: float
    theta1: float
    ccw: bool = True

    def __post_init__(self):
        object.__setattr__(self, "center", _as_point(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not (self.radius > 0.0):
            raise InvalidRegionError(f"arc radius must be positive, got {self.radius}")
        if self.sweep <= 0.0 or self.sweep > TWO_PI + 1e-9:
            raise InvalidRegionError("arc sweep must lie in (0, 2*pi]")

    @property
    def sweep(self) -> float:
        """Positive swept angle in (0, 2*pi]."""
        d = self.theta1 - self.theta0 if self.ccw else self.theta0 - self.theta1
        d %= TWO_PI
        return TWO_PI if d == 0.0 else d

    @property
    def signed_curvature(self) -> float:
        return (1.0 if self.ccw else -1.0) / self.radius

    @property
    def length(self) -> float:
        return self.radius * self.sweep

    def point_at(self, theta: float) -> tuple[float, float]:
        return (
            self.center[0] + self.radius * math.cos(theta),
            self.center[1] + self.radius * math.sin(theta),
        )

    def endpoint(self, which: int) -> tuple[float, float]:
        return self.point_at(self.theta0 if which == 0 else self.theta1)

    def outward_normal(self, theta: float) -> tuple[float, float]:
        s = 1.0 if self.ccw else -1.0
        return (s * math.cos(theta), s * math.sin(theta))


Edge = Union[SegmentEdge, ArcEdge]


def _edge_area_term(e: Edge) -> float:
    """Green's theorem contribution (1/2) * integral of (x dy - y dx)."""
    if isinstance(e, SegmentEdge):
        return 0.5 * (e.p0[0] * e.p1[1] - e.p1[0] * e.p0[1])
    cx, cy, r = e.center[0], e.center[1], e.radius
    t0, t1 = e.theta0, e.theta1
    dt = e.sweep if e.ccw else -e.sweep
    term = r * r * dt
    term += cx * r * (math.sin(t1) - math.sin(t0))
    term -= cy * r * (math.cos(t1) - math.cos(t0))
    return 0.5 * term


@dataclass(frozen=True)
class ArcPolygon:
    """Region bounded by one or more closed loops of segments and arcs.

    Edges are listed loop by loop, each loop counterclockwise around the
    region (the region lies on the left of travel); holes are clockwise.
    Total signed area must be positive.
    """

    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))
        if not self.edges:
            raise InvalidRegionError("arc polygon needs at least one edge")
        loops = self._split_loops()
        object.__setattr__(self, "_loops", loops)
        if self.signed_area() <= 0.0:
            raise InvalidRegionError("arc polygon signed area must be positive")

    def _split_loops(self) -> tuple[tuple[Edge, ...], ...]:
        scale = max(
            max(abs(c) for e in self.edges for c in (*e.endpoint(0), *e.endpoint(1))),
            1.0,
        )
        tol = ENDPOINT_RTOL * scale * 10.0
        loops: list[tuple[Edge, ...]] = []
        current: list[Edge] = []
        start: tuple[float, float] | None = None
        prev_end: tuple[float, float] | None = None
        for e in self.edges:
            p0, p1 = e.endpoint(0), e.endpoint(1)
            if current:
                assert prev_end is not None
                if math.dist(prev_end, p0) > tol:
                    raise InvalidRegionError(
                        f"edge endpoints do not chain: {prev_end} vs {p0}"
                    )
            else:
                start = p0
            current.append(e)
            prev_end = p1
            # closed loop when we are back at the start
            if start is not None and math.dist(prev_end, start) <= tol and (
                len(current) > 1 or isinstance(e, ArcEdge)
            ):
                loops.append(tuple(current))
                current = []
                start = None
                prev_end = None
        if current:
            raise InvalidRegionError("trailing edges do not close a loop")
        return tuple(loops)

    @property
    def loops(self) -> tuple[tuple[Edge, ...], ...]:
        return self._loops  # type: ignore[attr-defined]

    def signed_area(self) -> float:
        return sum(_edge_area_term(e) for e in self.edges)


@dataclass(frozen=True)
class PixelMask:
    """Binary cell mask on a square grid of spacing ``h``.

    Cell (i, j) covers [x0 + j*h, x0 + (j+1)*h] x [y0 + i*h, y0 + (i+1)*h].
    """

    mask: np.ndarray
    h: float
    origin: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        m = np.asarray(self.mask, dtype=bool)
        m.setflags(write=False)
        object.__setattr__(self, "mask", m)
        object.__setattr__(self, "h", float(self.h))
        object.__setattr__(self, "origin", _as_point(self.origin))
        if m.ndim != 2 or m.size == 0:
            raise InvalidRegionError("pixel mask must be a nonempty 2d array")
        if not (self.h > 0.0):
            raise InvalidRegionError(f"cell size must be positive, got {self.h}")
        if not m.any():
            raise InvalidRegionError("pixel mask has no set cells")


Region = Union[Disk, AxisRect, ArcPolygon, PixelMask]


def area(region: Region) -> float:
    """Lebesgue measure of the region (exact for the analytic shapes)."""
    if isinstance(region, Disk):
        return math.pi * region.radius * region.radius
    if isinstance(region, AxisRect):
        return region.width * region.height
    if isinstance(region, ArcPolygon):
        return region.signed_area()
    if isinstance(region, PixelMask):
        return float(region.mask.sum()) * region.h * region.h
    raise InvalidRegionError(f"unknown region type {type(region)!r}")


def region_perimeter(region: Region) -> float:
    """Boundary length of a single region.

    Pixel masks are measured with a smoothed marching-squares polyline,
    which converges to the Euclidean boundary length.
    """
    if isinstance(region, Disk):
        return TWO_PI * region.radius
    if isinstance(region, AxisRect):
        return 2.0 * (region.width + region.height)
    if isinstance(region, ArcPolygon):
        return sum(e.length for e in region.edges)
    if isinstance(region, PixelMask):
        from .grid import mask_contour_length

        return mask_contour_length(region.mask) * region.h
    raise InvalidRegionError(f"unknown region type {type(region)!r}")


def bounding_box(region: Region) -> tuple[float, float, float, float]:
    """(xmin, ymin, xmax, ymax)."""
    if isinstance(region, Disk):
        (cx, cy), r = region.center, region.radius
        return (cx - r, cy - r, cx + r, cy + r)
    if isinstance(region, AxisRect):
        return (*region.lo, *region.hi)
    if isinstance(region, ArcPolygon):
        xs: list[float] = []
        ys: list[float] = []
        for e in region.edges:
            for w in (0, 1):
                p = e.endpoint(w)
                xs.append(p[0])
                ys.append(p[1])
            if isinstance(e, ArcEdge):
                for k, (dx, dy) in enumerate([(1, 0), (0, 1), (-1, 0), (0, -1)]):
                    if _arc_contains_angle(e, k * math.pi / 2.0):
                        xs.append(e.center[0] + e.radius * dx)
                        ys.append(e.center[1] + e.radius * dy)
        return (min(xs), min(ys), max(xs), max(ys))
    if isinstance(region, PixelMask):
        rows = np.any(region.mask, axis=1).nonzero()[0]
        cols = np.any(region.mask, axis=0).nonzero()[0]
        x0, y0 = region.origin
        h = region.h
        return (
            x0 + cols[0] * h,
            y0 + rows[0] * h,
            x0 + (cols[-1] + 1) * h,
            y0 + (rows[-1] + 1) * h,
        )
    raise InvalidRegionError(f"unknown region type {type(region)!r}")


def diameter(region: Region) -> float:
    x0, y0, x1, y1 = bounding_box(region)
    return math.hypot(x1 - x0, y1 - y0)


def _arc_contains_angle(arc: ArcEdge, theta: float, pad: float = 0.0) -> bool:
    """Whether ``theta`` (mod 2*pi) lies on the swept range of the arc."""
    if arc.ccw:
        start, sweep = arc.theta0, arc.sweep
    else:
        start, sweep = arc.theta1, arc.sweep
    if sweep >= TWO_PI - 1e-15:
        return True
    d = (theta - start) % TWO_PI
    return -pad <= d <= sweep + pad


def contains(region: Region, points: np.ndarray) -> np.ndarray:
    """Vectorized point membership test. ``points`` has shape (n, 2)."""
    pts = np.asarray(points, dtype=float)
    if isinstance(region, Disk):
        d2 = (pts[:, 0] - region.center[0]) ** 2 + (pts[:, 1] - region.center[1]) ** 2
        return d2 <= region.radius * region.radius
    if isinstance(region, AxisRect):
        return (
            (pts[:, 0] >= region.lo[0])
            & (pts[:, 0] <= region.hi[0])
            & (pts[:, 1] >= region.lo[1])
            & (pts[:, 1] <= region.hi[1])
        )
    if isinstance(region, ArcPolygon):
        return np.fromiter(
            (_arcpoly_contains(region, (x, y)) for x, y in pts),
            dtype=bool,
            count=len(pts),
        )
    if isinstance(region, PixelMask):
        x0, y0 = region.origin
        j = np.floor((pts[:, 0] - x0) / region.h).astype(int)
        i = np.floor((pts[:, 1] - y0) / region.h).astype(int)
        ok = (i >= 0) & (i < region.mask.shape[0]) & (j >= 0) & (j < region.mask.shape[1])
        out = np.zeros(len(pts), dtype=bool)
        out[ok] = region.mask[i[ok], j[ok]]
        return out
    raise InvalidRegionError(f"unknown region type {type(region)!r}")


def _arcpoly_contains(poly: ArcPolygon, p: tuple[float, float]) -> bool:
    """Crossing-number test with a horizontal ray towards +x."""
    px, py = p
    crossings = 0
    for e in poly.edges:
        if isinstance(e, SegmentEdge):
            (x0, y0), (x1, y1) = e.p0, e.p1
            if (y0 > py) != (y1 > py):
                xc = x0 + (py - y0) * (x1 - x0) / (y1 - y0)
                if xc > px:
                    crossings += 1
        else:
            cy = e.center[1]
            r = e.radius
            dy = py - cy
            if abs(dy) >= r:
                continue
            dx = math.sqrt(r * r - dy * dy)
            for xc, theta in (
                (e.center[0] + dx, math.atan2(dy, dx)),
                (e.center[0] - dx, math.atan2(dy, -dx)),
            ):
                if xc <= px:
                    continue
                # half-open angular membership [start, start + sweep):
                # a point shared by two adjacent arcs counts exactly once
                # (tangent top/bottom points are excluded by |dy| == r)
                start = e.theta0 if e.ccw else e.theta1
                if e.sweep >= TWO_PI - 1e-15:
                    crossings += 1
                    continue
                d = (theta - start) % TWO_PI
                if d < e.sweep:
                    crossings += 1
    return crossings % 2 == 1


def scale_region(region: Region, factor: float) -> Region:
    """Dilate a region about the origin by ``factor`` (> 0)."""
    if factor <= 0:
        raise InvalidRegionError("scale factor must be positive")
    if isinstance(region, Disk):
        return Disk(
            (region.center[0] * factor, region.center[1] * factor),
            region.radius * factor,
        )
    if isinstance(region, AxisRect):
        return AxisRect(
            (region.lo[0] * factor, region.lo[1] * factor),
            (region.hi[0] * factor, region.hi[1] * factor),
        )
    if isinstance(region, ArcPolygon):
        out: list[Edge] = []
        for e in region.edges:
            if isinstance(e, SegmentEdge):
                out.append(
                    SegmentEdge(
                        (e.p0[0] * factor, e.p0[1] * factor),
                        (e.p1[0] * factor, e.p1[1] * factor),
                    )
                )
            else:
                out.append(
                    ArcEdge(
                        (e.center[0] * factor, e.center[1] * factor),
                        e.radius * factor,
                        e.theta0,
                        e.theta1,
                        e.ccw,
                    )
                )
        return ArcPolygon(tuple(out))
    raise InvalidRegionError(f"cannot scale region type {type(region)!r}")


def disk_edges(disk: Disk) -> tuple[Edge, ...]:
    """Full-circle boundary of a disk as two counterclockwise half arcs."""
    c, r = disk.center, disk.radius
    return (
        ArcEdge(c, r, 0.0, math.pi, True),
        ArcEdge(c, r, math.pi, TWO_PI, True),
    )


def rect_edges(rect: AxisRect) -> tuple[Edge, ...]:
    (x0, y0), (x1, y1) = rect.lo, rect.hi
    return (
        SegmentEdge((x0, y0), (x1, y0)),
        SegmentEdge((x1, y0), (x1, y1)),
        SegmentEdge((x1, y1), (x0, y1)),
        SegmentEdge((x0, y1), (x0, y0)),
    )


def region_edges(region: Region) -> tuple[Edge, ...]:
    """Oriented boundary edges (region on the left) for the exact shapes."""
    if isinstance(region, Disk):
        return disk_edges(region)
    if isinstance(region, AxisRect):
        return rect_edges(region)
    if isinstance(region, ArcPolygon):
        return region.edges
    from .errors import UnsupportedRepresentationError

    raise UnsupportedRepresentationError(
        "pixel masks have no exact edge representation; polygonize first"
    )
