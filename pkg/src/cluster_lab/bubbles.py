"""The standard equal-area double bubble as an exact arc cluster.

Two congruent circular lobes of radius R share a straight interface; the
three boundary pieces meet at the two junctions at 120 degrees.  For equal
chamber areas the interface is a straight chord of length R*sqrt(3) and
each outer arc spans 240 degrees, giving area
a = R^2 * (2*pi/3 + sqrt(3)/4) per lobe and total perimeter
P = R * (8*pi/3 + sqrt(3)).
"""

from __future__ import annotations

import math

from .cluster import Cluster
from .errors import InvalidArgumentError
from .regions import ArcEdge, ArcPolygon, SegmentEdge

#: lobe area for unit radius
_LOBE_AREA_UNIT = 2.0 * math.pi / 3.0 + math.sqrt(3.0) / 4.0


def double_bubble_radius(area: float) -> float:
    """Arc radius of the equal-area standard double bubble."""
    if area <= 0:
        raise InvalidArgumentError(f"area must be positive, got {area}")
    return math.sqrt(area / _LOBE_AREA_UNIT)


def double_bubble_perimeter(area: float) -> float:
    """Total perimeter (two 240-degree arcs plus the shared chord)."""
    return double_bubble_radius(area) * (8.0 * math.pi / 3.0 + math.sqrt(3.0))


def standard_double_bubble(area: float) -> Cluster:
    """Equal-area standard double bubble with the given area per chamber.

    The chambers are exact arc polygons; the shared chord lies on the
    vertical axis and both junctions are at (0, +-R*sqrt(3)/2).
    """
    r = double_bubble_radius(area)
    c = r * math.sqrt(3.0) / 2.0  # junction height
    a60 = math.pi / 3.0
    left = ArcPolygon(
        (
            # outer arc from the top junction around the left side
            ArcEdge((-r / 2.0, 0.0), r, a60, 2.0 * math.pi - a60, True),
            SegmentEdge((0.0, -c), (0.0, c)),
        )
    )
    right = ArcPolygon(
        (
            SegmentEdge((0.0, c), (0.0, -c)),
            # outer arc from the bottom junction around the right side
            ArcEdge((r / 2.0, 0.0), r, math.pi + a60, math.pi - a60, True),
        )
    )
    return Cluster([left, right], validate=False)
