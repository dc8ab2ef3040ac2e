import math
from fractions import Fraction

import numpy as np
import pytest

from cluster_lab import (
    InsufficientDepthError,
    InvalidArgumentError,
    NotFatError,
    build_cantor_cluster,
    build_square_gasket,
    estimate_packing_exponent,
    gasket_radius_power_sums,
    generate_apollonian,
    square_gasket_areas,
)
from cluster_lab.packings import (
    default_cantor_schedule,
    radius_partial_sums,
)
from cluster_lab.regions import area, region_perimeter


class TestApollonian:
    def test_descartes_relation(self, apollonian_1e3):
        _, quads = apollonian_1e3
        for quad in quads:
            k = [c[0] for c in quad]
            lhs = sum(ki * ki for ki in k)
            rhs = 0.5 * sum(k) ** 2
            assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))

    def test_pairwise_tangency(self, apollonian_1e3):
        _, quads = apollonian_1e3
        for quad in quads:
            for i in range(4):
                for j in range(i + 1, 4):
                    ki, kzi = quad[i]
                    kj, kzj = quad[j]
                    zi, zj = kzi / ki, kzj / kj
                    ri, rj = 1.0 / abs(ki), 1.0 / abs(kj)
                    d = abs(zi - zj)
                    target = ri + rj if ki > 0 and kj > 0 else abs(ri - rj)
                    assert abs(d - target) <= 1e-9 * max(1.0, target)

    def test_disks_inside_and_disjoint_sample(self, apollonian_1e3):
        nodes, _ = apollonian_1e3
        rng = np.random.default_rng(0)
        disks = [n.disk for n in nodes]
        for d in disks:
            assert math.hypot(*d.center) + d.radius <= 1.0 + 1e-9
        idx = rng.choice(len(disks), size=(300, 2))
        for i, j in idx:
            if i == j:
                continue
            a, b = disks[i], disks[j]
            dist = math.dist(a.center, b.center)
            assert dist >= a.radius + b.radius - 1e-9

    def test_min_radius_respected(self, apollonian_1e3):
        nodes, _ = apollonian_1e3
        assert min(n.disk.radius for n in nodes) >= 1e-3
        # the radius-2 half-disks of the canonical seed are present
        assert max(n.disk.radius for n in nodes) == pytest.approx(0.5)

    def test_invalid_min_radius(self):
        with pytest.raises(InvalidArgumentError):
            generate_apollonian(0.0)
        with pytest.raises(InvalidArgumentError):
            generate_apollonian(1.5)

    def test_power_sum_kernel_matches_generator(self, apollonian_1e3):
        nodes, _ = apollonian_1e3
        radii = np.array([n.disk.radius for n in nodes])
        cutoffs = [1e-1, 1e-2, 1e-3]
        for alpha in (1.0, 1.3, 1.5):
            expected = radius_partial_sums(radii, alpha, cutoffs)
            got = gasket_radius_power_sums(1e-3, [alpha], cutoffs)[:, 0]
            assert got == pytest.approx(expected, rel=1e-12)

    def test_power_sum_cutoff_validation(self):
        with pytest.raises(InvalidArgumentError):
            gasket_radius_power_sums(1e-2, [1.5], [1e-3])


class TestExponent:
    def test_bracket_contains_known_range(self, apollonian_disks_1e4):
        est = estimate_packing_exponent(apollonian_disks_1e4)
        lo, hi = est.bracket
        assert lo <= est.alpha_hat <= hi
        assert hi - lo <= 0.05
        assert 1.25 <= est.alpha_hat <= 1.40

    def test_insufficient_depth(self):
        shallow = generate_apollonian(5e-2)
        with pytest.raises(InsufficientDepthError):
            estimate_packing_exponent(shallow)

    def test_empty_input(self):
        with pytest.raises(InsufficientDepthError):
            estimate_packing_exponent([])


class TestSquareGasket:
    def test_areas_sum_to_one(self):
        for depth in (1, 3, 6):
            assert sum(square_gasket_areas(depth)) == 1

    def test_depth_validation(self):
        with pytest.raises(InvalidArgumentError):
            square_gasket_areas(0)

    def test_tiling_exact(self):
        for depth in (1, 2, 4):
            areas = square_gasket_areas(depth)
            c = build_square_gasket(areas)
            assert len(c) == len(areas)
            for r, a in zip(c.regions, areas):
                assert Fraction(r.hi[0] - r.lo[0]) ** 2 == a
            assert sum(area(r) for r in c.regions) == pytest.approx(1.0)
            # squares stay in the unit square
            for r in c.regions:
                assert 0.0 <= r.lo[0] and r.hi[0] <= 1.0
                assert 0.0 <= r.lo[1] and r.hi[1] <= 1.0

    def test_tiling_has_no_overlap(self):
        c = build_square_gasket(square_gasket_areas(3))
        rng = np.random.default_rng(1)
        pts = rng.random((20_000, 2))
        from cluster_lab.regions import contains

        cover = np.zeros(len(pts), dtype=np.int64)
        for r in c.regions:
            cover += contains(r, pts)
        # interiors tile: almost every point covered exactly once
        assert (cover == 1).mean() > 0.999

    def test_non_quarter_power_rejected(self):
        with pytest.raises(InvalidArgumentError):
            build_square_gasket([Fraction(1, 2), Fraction(1, 2)])

    def test_wrong_total_rejected(self):
        with pytest.raises(InvalidArgumentError):
            build_square_gasket([Fraction(1, 4)] * 3)


class TestCantor:
    def test_default_schedule(self):
        assert default_cantor_schedule(1) == Fraction(1, 4)
        assert default_cantor_schedule(3) == Fraction(1, 64)

    def test_lengths_bookkeeping(self):
        cc = build_cantor_cluster(5)
        assert cc.depth == 5
        assert cc.surviving_length + cc.removed_length == pytest.approx(1.0)
        # removed total: sum over n of 2^(n-1) / 4^n = (1/2)(1 - 2^-depth)
        assert cc.removed_length == pytest.approx(0.5 * (1 - 2.0**-5))
        assert cc.gap == pytest.approx(cc.surviving_length)

    def test_region_areas(self):
        cc = build_cantor_cluster(4)
        e1, e2, e3 = cc.cluster.regions
        disk_area = area(e3)
        assert area(e1) == pytest.approx(0.5 - disk_area / 2, rel=1e-12)
        assert area(e2) == pytest.approx(0.5 - disk_area / 2, rel=1e-12)
        assert disk_area < cc.removed_length  # thin disks on removed gaps

    def test_disk_perimeter_matches_region(self):
        cc = build_cantor_cluster(4)
        e3 = cc.cluster.regions[2]
        assert region_perimeter(e3) == pytest.approx(cc.disk_perimeter, rel=1e-12)

    def test_not_fat_schedule_rejected(self):
        with pytest.raises(NotFatError):
            build_cantor_cluster(3, lambda n: Fraction(1, 2))

    def test_nonpositive_schedule_rejected(self):
        with pytest.raises(InvalidArgumentError):
            build_cantor_cluster(2, lambda n: Fraction(0))

    def test_depth_validation(self):
        with pytest.raises(InvalidArgumentError):
            build_cantor_cluster(0)
