import math

import numpy as np
import pytest

from cluster_lab import (
    AxisRect,
    Cluster,
    Disk,
    InvalidArgumentError,
    InvalidClusterError,
    cluster_perimeter,
    measures,
    truncate,
    union_perimeter,
)
from cluster_lab.bubbles import standard_double_bubble


def random_disjoint_cluster(rng, n_cells=6, p_fill=0.6):
    """Regions placed on separate lattice cells: disjoint by construction."""
    regions = []
    for i in range(n_cells):
        for j in range(n_cells):
            if rng.random() > p_fill:
                continue
            cx, cy = i + 0.5, j + 0.5
            if rng.random() < 0.5:
                regions.append(Disk((cx, cy), 0.1 + 0.35 * rng.random()))
            else:
                w, h = 0.1 + 0.35 * rng.random(), 0.1 + 0.35 * rng.random()
                regions.append(AxisRect((cx - w, cy - h), (cx + w, cy + h)))
    if not regions:
        regions.append(Disk((0.5, 0.5), 0.25))
    return Cluster(regions)


class TestValidation:
    def test_overlapping_disks_rejected(self):
        with pytest.raises(InvalidClusterError):
            Cluster([Disk((0, 0), 1.0), Disk((1.0, 0), 1.0)])

    def test_overlapping_rects_rejected(self):
        with pytest.raises(InvalidClusterError):
            Cluster([AxisRect((0, 0), (2, 2)), AxisRect((1, 1), (3, 3))])

    def test_mixed_overlap_rejected(self):
        with pytest.raises(InvalidClusterError):
            Cluster([Disk((0.5, 0.5), 0.5), AxisRect((0, 0), (1, 1))])

    def test_tangent_disks_accepted(self):
        c = Cluster([Disk((0, 0), 1.0), Disk((2.0, 0), 1.0)])
        assert len(c) == 2

    def test_shared_edge_rects_accepted(self):
        c = Cluster([AxisRect((0, 0), (1, 1)), AxisRect((1, 0), (2, 1))])
        assert len(c) == 2

    def test_validate_false_skips_check(self):
        c = Cluster([Disk((0, 0), 1.0), Disk((0.5, 0), 1.0)], validate=False)
        assert len(c) == 2


class TestPerimeter:
    def test_single_disk(self):
        c = Cluster([Disk((0, 0), 2.0)])
        assert cluster_perimeter(c) == pytest.approx(4 * math.pi, rel=1e-15)
        assert union_perimeter(c) == pytest.approx(4 * math.pi, rel=1e-15)

    def test_tangent_disks_half_sum(self):
        c = Cluster([Disk((0, 0), 1.0), Disk((2, 0), 1.0)])
        assert cluster_perimeter(c) == pytest.approx(4 * math.pi, rel=1e-15)

    def test_two_rects_shared_edge(self):
        c = Cluster([AxisRect((0, 0), (1, 1)), AxisRect((1, 0), (2, 1))])
        # union is a 2x1 rectangle (perimeter 6); regions contribute 4 each
        assert union_perimeter(c) == pytest.approx(6.0, abs=1e-12)
        assert cluster_perimeter(c) == pytest.approx(7.0, abs=1e-12)

    def test_double_bubble_half_sum(self):
        c = standard_double_bubble(0.3)
        r = math.sqrt(0.3 / (2 * math.pi / 3 + math.sqrt(3) / 4))
        assert cluster_perimeter(c) == pytest.approx(
            r * (8 * math.pi / 3 + math.sqrt(3)), rel=1e-12
        )

    def test_measures(self):
        c = Cluster([Disk((0, 0), 1.0), AxisRect((5, 5), (7, 6))])
        assert measures(c) == pytest.approx([math.pi, 2.0])


class TestTruncate:
    def test_truncate_keeps_prefix(self):
        c = Cluster([Disk((0, 0), 1.0), Disk((3, 0), 1.0), Disk((6, 0), 1.0)])
        t = truncate(c, 2)
        assert len(t) == 2
        assert t.regions == c.regions[:2]

    def test_truncate_beyond_length_is_identity(self):
        c = Cluster([Disk((0, 0), 1.0)])
        assert truncate(c, 5) is c

    def test_truncate_zero_rejected(self):
        c = Cluster([Disk((0, 0), 1.0)])
        with pytest.raises(InvalidArgumentError):
            truncate(c, 0)

    def test_truncation_monotone_random(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            c = random_disjoint_cluster(rng)
            perims = [
                cluster_perimeter(truncate(c, n))
                for n in range(1, len(c) + 1)
            ]
            full = perims[-1]
            for n in range(len(perims) - 1):
                assert perims[n] <= perims[n + 1] + 1e-10 * full
