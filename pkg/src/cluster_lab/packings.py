"""Constructors for the three example packings and the packing exponent.

* Apollonian gasket disks via the Descartes curvature reflection,
* exact dyadic square tilings of the unit square,
* the fat-Cantor three-region cluster with its boundary-length gap.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .cluster import Cluster
from .errors import (
    InsufficientDepthError,
    InvalidArgumentError,
    NotFatError,
)
from .regions import ArcEdge, ArcPolygon, AxisRect, Disk, SegmentEdge

TWO_PI = 2.0 * math.pi

#: dedup granularity for (curvature, center) keys
DEDUP_TOL = 1e-9


# ----------------------------------------------------------------------
# Apollonian gasket


@dataclass(frozen=True)
class ApollonianNode:
    """One gasket disk with its generation depth and parent curvatures."""

    disk: Disk
    depth: int
    parent_curvatures: tuple[float, float, float]


_Circle = tuple[float, complex]  # (signed curvature k, k * center)

#: canonical root: unit enclosing circle and two half-disks
CANONICAL_SEED: tuple[_Circle, ...] = (
    (-1.0, 0j),
    (2.0, complex(-1.0, 0.0)),
    (2.0, complex(1.0, 0.0)),
)


def _descartes_children(a: _Circle, b: _Circle, c: _Circle) -> list[_Circle]:
    """Both circles tangent to three mutually tangent circles."""
    ka, kb, kc = a[0], b[0], c[0]
    za, zb, zc = a[1], b[1], c[1]
    root = 2.0 * math.sqrt(max(ka * kb + kb * kc + kc * ka, 0.0))
    zroot = 2.0 * np.sqrt(np.complex128(za * zb + zb * zc + zc * za))
    out = []
    for sign in (1.0, -1.0):
        k = ka + kb + kc + sign * root
        for zsign in (1.0, -1.0):
            z = za + zb + zc + zsign * zroot
            if _is_tangent_solution((k, z), (a, b, c)):
                out.append((k, z))
    return out


def _is_tangent_solution(child: _Circle, parents: Sequence[_Circle]) -> bool:
    k, kz = child
    if k == 0.0:
        return False
    z = kz / k
    r = 1.0 / abs(k)
    for kp, kzp in parents:
        zp = kzp / kp
        rp = 1.0 / abs(kp)
        d = abs(z - zp)
        if kp > 0 and k > 0:
            target = r + rp  # externally tangent
        else:
            target = abs(rp - r)  # internal tangency with enclosing circle
        if abs(d - target) > 1e-6 * max(1.0, target):
            return False
    return True


def _apollonian_bfs(
    min_radius: float,
    seed: Sequence[_Circle] = CANONICAL_SEED,
):
    """All gasket disks of radius >= min_radius, breadth first.

    New circles come from the curvature reflection k' = 2(k1+k2+k3) - k4
    within tangent quadruples (and likewise for curvature-scaled centers),
    which stays on the Descartes quadruple relation by construction.
    Returns the node list and every tangent quadruple visited.
    """
    if not (0.0 < min_radius < 1.0):
        raise InvalidArgumentError(
            f"min_radius must lie in (0, 1), got {min_radius}"
        )
    seed = tuple(seed)
    if len(seed) != 3:
        raise InvalidArgumentError("seed must be three mutually tangent circles")

    def key(c: _Circle):
        k, kz = c
        z = kz / k
        return (
            round(k / DEDUP_TOL),
            round(z.real / DEDUP_TOL),
            round(z.imag / DEDUP_TOL),
        )

    kmax = 1.0 / min_radius
    seen: set = set()
    nodes: list[ApollonianNode] = []

    def admit(c: _Circle, depth: int, parents: tuple[_Circle, _Circle, _Circle]) -> bool:
        kk = key(c)
        if kk in seen:
            return False
        seen.add(kk)
        k, kz = c
        if k > 0:
            z = kz / k
            nodes.append(
                ApollonianNode(
                    Disk((z.real, z.imag), 1.0 / k),
                    depth,
                    tuple(p[0] for p in parents),
                )
            )
        return True

    for c in seed:
        admit(c, 0, seed)
    queue: list[tuple[tuple[_Circle, _Circle, _Circle, _Circle], int]] = []
    for child in _descartes_children(*seed):
        if admit(child, 0, seed):
            queue.append(((seed[0], seed[1], seed[2], child), 1))

    head = 0
    while head < len(queue):
        quad, depth = queue[head]
        head += 1
        for i in range(4):
            others = tuple(quad[j] for j in range(4) if j != i)
            k_new = 2.0 * sum(o[0] for o in others) - quad[i][0]
            if k_new <= 0.0 or k_new > kmax:
                continue
            kz_new = 2.0 * sum(o[1] for o in others) - quad[i][1]
            child = (k_new, kz_new)
            if admit(child, depth, others):
                queue.append(((*others, child), depth + 1))
    nodes.sort(key=lambda n: (n.disk.curvature, n.disk.center))
    return nodes, [quad for quad, _ in queue]


def generate_apollonian_nodes(
    min_radius: float, seed: Sequence[_Circle] = CANONICAL_SEED
) -> list[ApollonianNode]:
    """Gasket disk records (disk, depth, parent curvatures), sorted."""
    return _apollonian_bfs(min_radius, seed)[0]


def generate_apollonian_quadruples(
    min_radius: float, seed: Sequence[_Circle] = CANONICAL_SEED
) -> list[tuple[_Circle, _Circle, _Circle, _Circle]]:
    """Every mutually tangent quadruple visited during generation."""
    return _apollonian_bfs(min_radius, seed)[1]


def generate_apollonian(
    min_radius: float, seed: Sequence[_Circle] = CANONICAL_SEED
) -> list[Disk]:
    """Gasket disks of radius >= min_radius inside the enclosing circle."""
    return [n.disk for n in generate_apollonian_nodes(min_radius, seed)]


def gasket_radius_power_sums(
    min_radius: float, alphas: Sequence[float], cutoffs: Sequence[float]
) -> np.ndarray:
    """Sums of r^alpha over canonical-gasket radii r >= cutoff.

    Curvature-only reflection walk from the root quadruple (-1, 2, 2, 3):
    never reflecting the circle just produced visits every circle exactly
    once, so no geometric dedup is needed and cutoffs far below what the
    full generator can hold in memory become reachable.  Returns an array
    of shape (len(cutoffs), len(alphas)).
    """
    if not (0.0 < min_radius < 1.0):
        raise InvalidArgumentError(
            f"min_radius must lie in (0, 1), got {min_radius}"
        )
    alphas = np.asarray(list(alphas), dtype=float)
    cutoffs = np.asarray(sorted((float(c) for c in cutoffs))[::-1], dtype=float)
    if np.any(cutoffs < min_radius * (1.0 - 1e-12)):
        raise InvalidArgumentError("cutoffs must be >= min_radius")
    sums = _gasket_power_sums_kernel(1.0 / min_radius, alphas, cutoffs)
    return sums


def _gasket_power_sums_kernel(kmax, alphas, cutoffs):
    from numba import njit

    global _gasket_power_sums_kernel
    _gasket_power_sums_kernel = _compile_gasket_kernel(njit)
    return _gasket_power_sums_kernel(kmax, alphas, cutoffs)


def _compile_gasket_kernel(njit):
    @njit(cache=True)
    def kernel(kmax, alphas, cutoffs):
        n_c = len(cutoffs)
        n_a = len(alphas)
        sums = np.zeros((n_c, n_a))

        def add(k):
            r = 1.0 / k
            # cutoffs are sorted descending: r contributes to every cutoff
            # it clears, i.e. a suffix of the rows
            for i in range(n_c):
                if r >= cutoffs[i]:
                    for j in range(n_a):
                        sums[i, j] += r ** alphas[j]

        # root quadruple of the canonical gasket
        add(2.0)
        add(2.0)
        add(3.0)
        # explicit DFS stack: four curvatures plus the index just replaced
        cap = 4096
        stack = np.empty((cap, 5))
        stack[0, 0] = -1.0
        stack[0, 1] = 2.0
        stack[0, 2] = 2.0
        stack[0, 3] = 3.0
        stack[0, 4] = -1.0
        top = 1
        while top > 0:
            top -= 1
            k0 = stack[top, 0]
            k1 = stack[top, 1]
            k2 = stack[top, 2]
            k3 = stack[top, 3]
            last = int(stack[top, 4])
            total = k0 + k1 + k2 + k3
            for i in range(4):
                if i == last:
                    continue
                if i == 0:
                    ki = k0
                elif i == 1:
                    ki = k1
                elif i == 2:
                    ki = k2
                else:
                    ki = k3
                k_new = 2.0 * (total - ki) - ki
                if k_new > kmax:
                    continue
                add(k_new)
                if top == cap:
                    grown = np.empty((2 * cap, 5))
                    grown[:cap] = stack
                    stack = grown
                    cap *= 2
                stack[top, 0] = k0
                stack[top, 1] = k1
                stack[top, 2] = k2
                stack[top, 3] = k3
                stack[top, i] = k_new
                stack[top, 4] = i
                top += 1
        return sums

    return kernel


# ----------------------------------------------------------------------
# packing exponent


@dataclass(frozen=True)
class ExponentEstimate:
    """Bracketed estimate of the radius-series convergence exponent."""

    alpha_hat: float
    cutoff: float
    bracket: tuple[float, float]
    partial_sums: dict[float, tuple[float, ...]] = field(default_factory=dict)


#: growth-factor threshold between consecutive cutoff increments
GROWTH_FACTOR = 1.05


def radius_partial_sums(radii: np.ndarray, alpha: float, cutoffs: Sequence[float]):
    """Partial sums of r^alpha over disks with r >= cutoff, per cutoff."""
    r = np.asarray(radii, dtype=float)
    return tuple(float((r[r >= c] ** alpha).sum()) for c in cutoffs)


def estimate_packing_exponent(
    disks: Sequence[Disk],
    tolerance: float = 0.05,
    cutoffs: Sequence[float] | None = None,
) -> ExponentEstimate:
    """Bracket the infimum exponent of convergence of the radius series.

    The classifier compares successive increments of the partial sums at
    decade-spaced cutoffs: for alpha below the packing exponent the
    increments grow geometrically, above it they shrink geometrically.
    An increment growth factor above GROWTH_FACTOR reads as diverging,
    below 1/GROWTH_FACTOR as converging, in between as unclassifiable
    (the returned bracket covers that band).
    """
    radii = np.array([d.radius for d in disks], dtype=float)
    if len(radii) == 0:
        raise InsufficientDepthError("no disks supplied")
    rmin = float(radii.min())
    if cutoffs is None:
        # decade cutoffs down to the data; a cutoff slightly below the
        # smallest radius is fine (the set is complete above it)
        cutoffs = []
        c = 1e-2
        while 2.0 * c >= rmin:
            cutoffs.append(c)
            c /= 10.0
    cutoffs = sorted((float(c) for c in cutoffs))[::-1]
    if len(cutoffs) < 3:
        raise InsufficientDepthError(
            "need at least three decade cutoffs to compare increments"
        )
    if 2.0 * cutoffs[-1] < rmin:
        raise InsufficientDepthError(
            f"cutoff {cutoffs[-1]} is far below the generated min radius {rmin}"
        )
    sums_cache: dict[float, tuple[float, ...]] = {}

    def sums(alpha: float) -> tuple[float, ...]:
        if alpha not in sums_cache:
            sums_cache[alpha] = radius_partial_sums(radii, alpha, cutoffs)
        return sums_cache[alpha]

    def growth(alpha: float) -> float:
        s = sums(alpha)
        inc = [b - a for a, b in zip(s[:-2], s[1:-1])]
        inc2 = [b - a for a, b in zip(s[1:-1], s[2:])]
        # use the deepest pair of increments
        lo, hi = inc[-1], inc2[-1]
        if lo <= 0.0:
            raise InsufficientDepthError("no disks between the chosen cutoffs")
        return hi / lo

    def diverging(alpha: float) -> bool:
        return growth(alpha) >= GROWTH_FACTOR

    def converging(alpha: float) -> bool:
        return growth(alpha) <= 1.0 / GROWTH_FACTOR

    lo, hi = 1.0, 2.0
    if not diverging(lo) or converging(lo):
        raise InsufficientDepthError("alpha=1 does not classify as diverging")

    def edge(predicate, want_true_below: bool) -> float:
        a, b = lo, hi
        # predicate true at a (resp. false), find the crossing
        for _ in range(40):
            if b - a <= tolerance / 8.0:
                break
            m = 0.5 * (a + b)
            if predicate(m) == want_true_below:
                a = m
            else:
                b = m
        return 0.5 * (a + b)

    alpha_div = edge(diverging, True)  # last diverging alpha
    alpha_conv = edge(lambda t: not converging(t), True)  # first converging alpha
    bracket = (alpha_div, alpha_conv)
    if bracket[1] - bracket[0] > tolerance:
        raise InsufficientDepthError(
            f"cutoffs too shallow: bracket {bracket} wider than {tolerance}"
        )
    return ExponentEstimate(
        alpha_hat=0.5 * (bracket[0] + bracket[1]),
        cutoff=float(cutoffs[-1]),
        bracket=bracket,
        partial_sums=dict(sums_cache),
    )


# ----------------------------------------------------------------------
# square gasket


def _power_of_quarter(a) -> int:
    """Return m with a == 4**-m (m >= 1), else raise ValueError."""
    f = Fraction(a)
    if f.numerator != 1 or f <= 0:
        raise ValueError(f"{a} is not a power of 1/4")
    m = 0
    d = f.denominator
    while d % 4 == 0:
        d //= 4
        m += 1
    if d != 1 or m < 1:
        raise ValueError(f"{a} is not a power of 1/4")
    return m


def square_gasket_areas(depth: int) -> list[Fraction]:
    """Three squares per scale plus one closing square: sums to one exactly."""
    if depth < 1:
        raise InvalidArgumentError("depth must be >= 1")
    areas = [Fraction(1, 4**k) for k in range(1, depth + 1) for _ in range(3)]
    areas.append(Fraction(1, 4**depth))
    return areas


def build_square_gasket(areas: Sequence) -> Cluster:
    """Tile the unit square exactly with squares of the given areas.

    Every area must be a power of 1/4 and the areas must sum to one;
    placement is a deterministic greedy quadtree fill whose residual free
    cell chains into the lower-left quadrant.
    """
    ms: list[int] = []
    for i, a in enumerate(areas):
        try:
            ms.append(_power_of_quarter(a))
        except ValueError as exc:
            raise InvalidArgumentError(f"area #{i}: {exc}") from exc
    total = sum(Fraction(1, 4**m) for m in ms)
    if total != 1:
        raise InvalidArgumentError(
            f"areas must sum to exactly 1, got {total} ({float(total)})"
        )
    # (depth, x, y) heap of free quadtree cells; big cells first,
    # among siblings upper-left, lower-right, then lower-left
    free: list[tuple[int, Fraction, Fraction]] = [(0, Fraction(0), Fraction(0))]
    placed: list[AxisRect | None] = [None] * len(ms)
    for idx in sorted(range(len(ms)), key=lambda i: ms[i]):
        m = ms[idx]
        depth, x, y = heapq.heappop(free)
        while depth < m:
            half = Fraction(1, 2 ** (depth + 1))
            heapq.heappush(free, (depth + 1, x, y))  # lower-left stays free
            heapq.heappush(free, (depth + 1, x, y + half))  # upper-left
            heapq.heappush(free, (depth + 1, x + half, y))  # lower-right
            x, y = x + half, y + half  # continue in the upper-right
            depth += 1
        side = Fraction(1, 2**m)
        placed[idx] = AxisRect(
            (float(x), float(y)), (float(x + side), float(y + side))
        )
    return Cluster([r for r in placed if r is not None], validate=False)


# ----------------------------------------------------------------------
# Cantor circles


@dataclass(frozen=True)
class CantorCluster:
    """Three-region Cantor-circles cluster with its boundary bookkeeping.

    ``h1_boundary_proxy`` is the length of the topological boundary of the
    disk chain at this depth: the circles plus the surviving axis pieces.
    """

    cluster: Cluster
    depth: int
    disk_perimeter: float  # P(E3): circle lengths only
    h1_boundary_proxy: float  # includes surviving segments of the axis
    surviving_length: float
    removed_length: float

    @property
    def gap(self) -> float:
        return self.h1_boundary_proxy - self.disk_perimeter


def default_cantor_schedule(n: int) -> Fraction:
    """Middle-interval length removed at stage n (per surviving interval)."""
    return Fraction(1, 4**n)


def build_cantor_cluster(
    depth: int,
    removed_fraction_schedule: Callable[[int], Fraction] = default_cantor_schedule,
) -> CantorCluster:
    """Fat-Cantor cluster in the unit-width rectangle [0,1] x [-1/2, 1/2].

    Stage n removes the middle piece of length schedule(n) from each of the
    2^(n-1) surviving intervals of the axis segment; disks sit on the
    removed intervals, and the upper/lower halves of the rectangle (minus
    the disks) form the first two regions.
    """
    if depth < 1:
        raise InvalidArgumentError(f"depth must be >= 1, got {depth}")
    intervals: list[tuple[Fraction, Fraction]] = [(Fraction(0), Fraction(1))]
    removed: list[tuple[Fraction, Fraction]] = []
    for n in range(1, depth + 1):
        cut = Fraction(removed_fraction_schedule(n))
        if cut <= 0:
            raise InvalidArgumentError(f"schedule({n}) must be positive")
        nxt: list[tuple[Fraction, Fraction]] = []
        for (a, b) in intervals:
            if b - a <= cut:
                raise NotFatError(
                    f"stage {n} removes {cut} from an interval of length {b - a}"
                )
            mid = (a + b) / 2
            lo, hi = mid - cut / 2, mid + cut / 2
            removed.append((lo, hi))
            nxt.append((a, lo))
            nxt.append((hi, b))
        intervals = nxt
    removed.sort()
    surviving = sorted(intervals)
    removed_len = float(sum(b - a for a, b in removed))
    surviving_len = float(sum(b - a for a, b in surviving))
    if surviving_len <= 0.0:
        raise NotFatError("schedule removed the entire axis segment")

    disks = [
        Disk((float((a + b) / 2), 0.0), float((b - a) / 2)) for a, b in removed
    ]

    def axis_edges(upper: bool):
        """Boundary pieces along the axis, left-to-right for the upper region."""
        pieces = []
        events = sorted(
            [(a, b, "seg") for a, b in surviving] + [(a, b, "arc") for a, b in removed]
        )
        for a, b, kind in events:
            xa, xb = float(a), float(b)
            if kind == "seg":
                pieces.append((xa, xb, None))
            else:
                pieces.append((xa, xb, (float((a + b) / 2), float((b - a) / 2))))
        if not upper:
            pieces = pieces[::-1]
        edges = []
        for xa, xb, disk in pieces:
            if disk is None:
                edges.append(
                    SegmentEdge((xa, 0.0), (xb, 0.0))
                    if upper
                    else SegmentEdge((xb, 0.0), (xa, 0.0))
                )
            else:
                c, r = disk
                if upper:  # over the top of the disk, region above
                    edges.append(ArcEdge((c, 0.0), r, math.pi, 0.0, ccw=False))
                else:  # under the bottom, region below
                    edges.append(ArcEdge((c, 0.0), r, 0.0, -math.pi, ccw=False))
        return edges

    e1 = ArcPolygon(
        tuple(axis_edges(upper=True))
        + (
            SegmentEdge((1.0, 0.0), (1.0, 0.5)),
            SegmentEdge((1.0, 0.5), (0.0, 0.5)),
            SegmentEdge((0.0, 0.5), (0.0, 0.0)),
        )
    )
    e2 = ArcPolygon(
        (
            SegmentEdge((0.0, -0.5), (1.0, -0.5)),
            SegmentEdge((1.0, -0.5), (1.0, 0.0)),
        )
        + tuple(axis_edges(upper=False))
        + (SegmentEdge((0.0, 0.0), (0.0, -0.5)),)
    )
    e3_edges: list[ArcEdge] = []
    for d in disks:
        e3_edges.append(ArcEdge(d.center, d.radius, 0.0, math.pi, True))
        e3_edges.append(ArcEdge(d.center, d.radius, math.pi, TWO_PI, True))
    e3 = ArcPolygon(tuple(e3_edges))

    cluster = Cluster([e1, e2, e3], validate=False)
    disk_perimeter = sum(TWO_PI * d.radius for d in disks)
    return CantorCluster(
        cluster=cluster,
        depth=depth,
        disk_perimeter=disk_perimeter,
        h1_boundary_proxy=disk_perimeter + surviving_len,
        surviving_length=surviving_len,
        removed_length=removed_len,
    )
