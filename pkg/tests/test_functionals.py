import math

import numpy as np
import pytest

from cluster_lab import (
    AxisRect,
    Cluster,
    Disk,
    EuclideanNorm,
    InvalidArgumentError,
    ManhattanNorm,
    PixelMask,
    PolygonalNorm,
    UnsupportedRepresentationError,
    anisotropic_cluster_perimeter,
    anisotropic_perimeter,
    fractional_perimeter_disk,
    fractional_perimeter_mc,
    wulff_lower_bound,
)
from cluster_lab.functionals import check_fractional_order

SQRT2 = math.sqrt(2.0)


def diamond_norm():
    """Polygonal norm whose unit ball is the l1 ball (= Manhattan norm)."""
    return PolygonalNorm([(1, 0), (0, 1), (-1, 0), (0, -1)])


class TestNorms:
    def test_euclidean_values(self):
        phi = EuclideanNorm()
        assert phi(3.0, 4.0) == pytest.approx(5.0)
        assert phi.circle_integral() == pytest.approx(2 * math.pi)
        assert phi.wulff_area() == pytest.approx(math.pi)

    def test_manhattan_values(self):
        phi = ManhattanNorm()
        assert phi(3.0, -4.0) == pytest.approx(7.0)
        assert phi.circle_integral() == pytest.approx(8.0)
        # Wulff shape of the l1 norm is the square [-1, 1]^2
        assert phi.wulff_area() == pytest.approx(4.0)

    def test_polygonal_matches_manhattan(self):
        phi, l1 = diamond_norm(), ManhattanNorm()
        rng = np.random.default_rng(0)
        v = rng.normal(size=(50, 2))
        assert phi(v[:, 0], v[:, 1]) == pytest.approx(l1(v[:, 0], v[:, 1]))
        assert phi.wulff_area() == pytest.approx(l1.wulff_area())

    def test_polygonal_homogeneity(self):
        phi = PolygonalNorm([(2, 1), (-1, 2), (-2, -1), (1, -2)])
        for lam in (0.5, 3.0):
            assert phi(lam * 1.3, lam * -0.4) == pytest.approx(
                lam * phi(1.3, -0.4), rel=1e-12
            )

    def test_polygonal_validation(self):
        with pytest.raises(InvalidArgumentError):
            PolygonalNorm([(1, 0), (0, 1)])  # too few vertices
        with pytest.raises(InvalidArgumentError):
            PolygonalNorm([(1, 0), (0, 1), (-1, 0)])  # not symmetric
        with pytest.raises(InvalidArgumentError):
            PolygonalNorm([(1, 0), (0, 1), (2, 2), (-1, 0), (0, -1), (-2, -2)])


class TestAnisotropicPerimeter:
    def test_disk_euclidean(self):
        assert anisotropic_perimeter(Disk((0, 0), 2.0), EuclideanNorm()) == (
            pytest.approx(4 * math.pi)
        )

    def test_disk_manhattan(self):
        # integral of |cos| + |sin| over the circle = 8r
        assert anisotropic_perimeter(Disk((1, 1), 3.0), ManhattanNorm()) == (
            pytest.approx(24.0, rel=1e-9)
        )

    def test_rect_manhattan(self):
        r = AxisRect((0, 0), (2, 3))
        assert anisotropic_perimeter(r, ManhattanNorm()) == pytest.approx(10.0)

    def test_pixel_mask_unsupported(self):
        m = PixelMask(np.ones((2, 2), dtype=bool), 1.0)
        with pytest.raises(UnsupportedRepresentationError):
            anisotropic_perimeter(m, EuclideanNorm())

    def test_cluster_interface_weighted_once(self):
        c = Cluster([AxisRect((0, 0), (1, 1)), AxisRect((1, 0), (2, 1))])
        # union perimeter 6 + internal interface 1, all edges axis-aligned
        assert anisotropic_cluster_perimeter(c, ManhattanNorm()) == (
            pytest.approx(7.0, abs=1e-12)
        )
        assert anisotropic_cluster_perimeter(c, EuclideanNorm()) == (
            pytest.approx(7.0, abs=1e-9)
        )

    def test_wulff_lower_bound_attained(self):
        # the Euclidean Wulff shape is the disk; a disk attains the bound
        d = Disk((0, 0), 1.7)
        a = math.pi * 1.7**2
        assert anisotropic_perimeter(d, EuclideanNorm()) == pytest.approx(
            wulff_lower_bound(a, EuclideanNorm()), rel=1e-12
        )
        # the Manhattan Wulff shape is the square
        sq = AxisRect((0, 0), (2, 2))
        assert anisotropic_perimeter(sq, ManhattanNorm()) == pytest.approx(
            wulff_lower_bound(4.0, ManhattanNorm()), rel=1e-12
        )
        # generic polygonal norm consistent with its wulff_area
        assert wulff_lower_bound(1.0, diamond_norm()) == pytest.approx(4.0)

    def test_wulff_bound_rejects_nonpositive_area(self):
        with pytest.raises(InvalidArgumentError):
            wulff_lower_bound(0.0, EuclideanNorm())


class TestFractional:
    def test_order_validation(self):
        for bad in (0.0, 2.0, -0.5, 2.5):
            with pytest.raises(InvalidArgumentError):
                check_fractional_order(bad)
        assert check_fractional_order(0.5) == 0.5

    def test_min_samples_enforced(self):
        with pytest.raises(InvalidArgumentError):
            fractional_perimeter_mc(Disk((0, 0), 1.0), 0.5, 100, 0)

    def test_seed_determinism(self):
        a = fractional_perimeter_mc(Disk((0, 0), 1.0), 0.5, 20_000, 3)
        b = fractional_perimeter_mc(Disk((0, 0), 1.0), 0.5, 20_000, 3)
        c = fractional_perimeter_mc(Disk((0, 0), 1.0), 0.5, 20_000, 4)
        assert a.value == b.value and a.standard_error == b.standard_error
        assert a.value != c.value

    def test_disk_oracle(self):
        # quadrature value of P_{1/2}(B_1) computed independently
        oracle = 62.13063873921783
        est = fractional_perimeter_mc(Disk((0, 0), 1.0), 0.5, 200_000, 11)
        assert abs(est.value - oracle) < 4 * est.standard_error
        assert est.standard_error < 0.02 * oracle

    def test_disk_scaling_exact(self):
        c1 = fractional_perimeter_disk(1.0, 0.5, samples=50_000)
        c2 = fractional_perimeter_disk(2.0, 0.5, samples=50_000)
        assert c2 / c1 == pytest.approx(2.0**1.5, rel=1e-12)

    def test_translation_invariance(self):
        a = fractional_perimeter_mc(Disk((0, 0), 1.0), 0.7, 20_000, 5)
        b = fractional_perimeter_mc(Disk((10, -3), 1.0), 0.7, 20_000, 5)
        assert a.value == pytest.approx(b.value, rel=1e-12)

    def test_cluster_value_and_tail(self):
        from cluster_lab import fractional_cluster_perimeter

        c = Cluster([Disk((0, 0), 1.0), Disk((3, 0), 0.5)])
        res = fractional_cluster_perimeter(c, 0.5, samples=50_000, seed=2)
        # well-separated disks: half-sum is close to the plain sum of the
        # two one-set perimeters minus the (small) interaction
        solo = fractional_perimeter_disk(1.0, 0.5) + fractional_perimeter_disk(
            0.5, 0.5
        )
        assert res.value < solo
        assert res.value > 0.8 * solo
        assert res.tail_bound == 0.0
        res_t = fractional_cluster_perimeter(
            c, 0.5, tail_areas=[0.01, 0.005], samples=50_000, seed=2
        )
        assert res_t.tail_bound > 0.0
        assert res_t.value == pytest.approx(res.value)
