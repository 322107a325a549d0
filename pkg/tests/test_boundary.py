"""Boundary classification against exact density fractions."""

import math

import numpy as np
import pytest

from gaussperim.boundary import (
    BoundaryClass,
    BoundaryLabel,
    DensityProfile,
    classify,
    density_profile,
    section_boundary_test,
    stabilized_boundary_test,
)
from gaussperim.gaussian import derive_rng
from gaussperim.hausdorff import chart_cloud
from gaussperim.sets import (
    complement,
    make_ball,
    make_box,
    make_half_space,
    make_segment,
    union,
)

BALL = make_ball([0.0, 0.0], 1.0)
SQUARE = make_box([-1.0, -1.0], [1.0, 1.0])
SPIKE = union(BALL, make_segment([1.0, 0.0], [2.0, 0.0]))


def labels_of(result):
    return {k: c.label for k, c in result.per_k.items()}


class TestUniformBallSampling:
    def test_halfspace_through_center_is_half(self):
        # Any ball centered on a hyperplane is split exactly in two.
        for m in (1, 2, 3):
            A = make_half_space([1.0] + [0.0] * (m - 1), 0.0)
            prof = density_profile(A, np.zeros(m), j_range=(2, 4), seed=0)
            for f, e in zip(prof.in_fraction, prof.stderr):
                assert f == pytest.approx(0.5, abs=4 * e + 1e-9)

    def test_disk_chord_fraction(self):
        # Disk B(x, r) cut by a line at distance h*r from x: the inside
        # fraction is 1 - (acos(h) - h sqrt(1-h^2))/pi.
        h = 0.3
        r = 0.25
        A = make_half_space([1.0, 0.0], h * r)
        prof = density_profile(A, [0.0, 0.0], j_range=(2, 2), n_per_radius=40_000, seed=1)
        want = 1.0 - (math.acos(h) - h * math.sqrt(1.0 - h * h)) / math.pi
        assert prof.in_fraction[0] == pytest.approx(want, abs=4 * prof.stderr[0])

    def test_radial_distribution(self):
        # |sample - center|^k / r^k must be uniform on [0, 1].
        from gaussperim.boundary import _uniform_in_ball

        rng = derive_rng(7, "radial-check")
        pts = _uniform_in_ball(rng, np.zeros(3), 0.5, 50_000)
        u = (np.linalg.norm(pts, axis=1) / 0.5) ** 3
        assert np.mean(u) == pytest.approx(0.5, abs=0.01)
        assert np.max(u) <= 1.0


class TestDensityProfile:
    def test_interior_point_full(self):
        prof = density_profile(BALL, [0.2, -0.1], seed=2)
        assert np.all(prof.in_fraction == 1.0)

    def test_circle_point_half(self):
        prof = density_profile(BALL, [1.0, 0.0], seed=2)
        assert prof.in_fraction[-1] == pytest.approx(0.5, abs=0.03)

    def test_corner_quarter(self):
        prof = density_profile(SQUARE, [1.0, 1.0], seed=2)
        assert prof.in_fraction[-1] == pytest.approx(0.25, abs=0.03)

    def test_radii_are_dyadic(self):
        prof = density_profile(BALL, [1.0, 0.0], j_range=(3, 6), seed=0)
        assert prof.js == (3, 4, 5, 6)
        assert prof.radii == (0.125, 0.0625, 0.03125, 0.015625)

    def test_validation(self):
        with pytest.raises(ValueError):
            density_profile(BALL, [1.0, 0.0, 0.0], seed=0)
        with pytest.raises(ValueError):
            density_profile(BALL, [1.0, 0.0], n_per_radius=50, seed=0)
        with pytest.raises(ValueError):
            density_profile(BALL, [1.0, 0.0], j_range=(5, 3), seed=0)
        with pytest.raises(ValueError):
            DensityProfile(
                point=np.zeros(2),
                js=(3, 4),
                radii=(0.125, 0.0625),
                in_fraction=np.array([0.5, 1.2]),
                stderr=np.zeros(2),
                samples_per_radius=100,
                seed=0,
            )

    def test_deterministic(self):
        a = density_profile(BALL, [1.0, 0.0], seed=9)
        b = density_profile(BALL, [1.0, 0.0], seed=9)
        assert np.array_equal(a.in_fraction, b.in_fraction)


class TestClassify:
    def test_circle_point(self):
        assert classify(density_profile(BALL, [1.0, 0.0], seed=3)).label is BoundaryLabel.MT_BOUNDARY

    def test_interior(self):
        assert classify(density_profile(BALL, [0.0, 0.0], seed=3)).label is BoundaryLabel.FULL_DENSITY

    def test_exterior(self):
        assert classify(density_profile(BALL, [3.0, 0.0], seed=3)).label is BoundaryLabel.NULL_DENSITY

    def test_spike_point_null_despite_topological_boundary(self):
        prof = density_profile(SPIKE, [1.5, 0.0], seed=3)
        assert classify(prof).label is BoundaryLabel.NULL_DENSITY

    def test_corner_is_boundary(self):
        assert classify(density_profile(SQUARE, [1.0, 1.0], seed=3)).label is BoundaryLabel.MT_BOUNDARY

    def test_indeterminate_between_rules(self):
        prof = DensityProfile(
            point=np.zeros(2),
            js=(8, 9),
            radii=(2.0 ** -8, 2.0 ** -9),
            in_fraction=np.array([0.5, 0.001]),
            stderr=np.array([0.005, 0.0003]),
            samples_per_radius=10_000,
            seed=0,
        )
        assert classify(prof).label is BoundaryLabel.INDETERMINATE

    def test_needs_two_radii(self):
        prof = DensityProfile(
            point=np.zeros(2),
            js=(9,),
            radii=(2.0 ** -9,),
            in_fraction=np.array([0.5]),
            stderr=np.array([0.005]),
            samples_per_radius=10_000,
            seed=0,
        )
        with pytest.raises(ValueError):
            classify(prof)

    def test_metadata_recorded(self):
        cls = classify(density_profile(BALL, [1.0, 0.0], j_range=(4, 8), seed=0), delta=0.02)
        assert cls.delta == 0.02
        assert (cls.j_min, cls.j_max) == (4, 8)
        assert str(cls) == "MTBoundary"

    def test_complement_duality(self):
        comp = complement(BALL)
        for x in ([1.0, 0.0], [0.3, 0.3], [2.0, 0.0]):
            a = classify(density_profile(BALL, x, seed=4)).label
            b = classify(density_profile(comp, x, seed=4)).label
            if a is BoundaryLabel.MT_BOUNDARY:
                assert b is BoundaryLabel.MT_BOUNDARY
            elif a is BoundaryLabel.FULL_DENSITY:
                assert b is BoundaryLabel.NULL_DENSITY
            elif a is BoundaryLabel.NULL_DENSITY:
                assert b is BoundaryLabel.FULL_DENSITY


class TestSectionBoundaryTest:
    def test_halfspace_head_aligned(self):
        A = make_half_space([1.0, 0.0, 0.0], 0.0)
        cls = section_boundary_test(A, [0.0, 1.3, -0.4], k=1, seed=5)
        assert cls.label is BoundaryLabel.MT_BOUNDARY

    def test_halfspace_tail_aligned_degenerates(self):
        A = make_half_space([0.0, 1.0], 0.0)
        cls = section_boundary_test(A, [0.0, 0.0], k=1, seed=5)
        assert cls.label in (BoundaryLabel.FULL_DENSITY, BoundaryLabel.NULL_DENSITY)

    def test_deep_interior_full_at_every_k(self):
        A = make_half_space([1.0, 0.0, 0.0], 0.0)
        for k in (1, 2, 3):
            cls = section_boundary_test(A, [-3.0, 0.1, 0.2], k=k, seed=5)
            assert cls.label is BoundaryLabel.FULL_DENSITY

    def test_full_depth_equals_direct_classification(self):
        cls = section_boundary_test(SPIKE, [1.5, 0.0], k=2, seed=5)
        assert cls.label is BoundaryLabel.NULL_DENSITY

    def test_k_validation(self):
        with pytest.raises(ValueError):
            section_boundary_test(BALL, [1.0, 0.0], k=3, seed=0)
        with pytest.raises(ValueError):
            section_boundary_test(BALL, [1.0, 0.0], k=0, seed=0)


class TestStabilizedBoundaryTest:
    def test_sphere_point_all_depths(self):
        A = make_ball([0.0] * 4, 1.0)
        res = stabilized_boundary_test(A, [1.0, 0.0, 0.0, 0.0], k_min=2, k_max=4, seed=6)
        assert res.is_boundary is True
        assert all(c.label is BoundaryLabel.MT_BOUNDARY for c in res.per_k.values())

    def test_interior_false_with_full_record(self):
        res = stabilized_boundary_test(BALL, [0.1, 0.0], k_min=1, k_max=2, seed=6)
        assert res.is_boundary is False
        assert all(c.label is BoundaryLabel.FULL_DENSITY for c in res.per_k.values())

    def test_spike_false_at_full_depth(self):
        res = stabilized_boundary_test(SPIKE, [1.5, 0.0], k_min=1, k_max=2, seed=6)
        assert res.is_boundary is False
        assert labels_of(res)[2] is BoundaryLabel.NULL_DENSITY

    def test_window_validation(self):
        with pytest.raises(ValueError):
            stabilized_boundary_test(BALL, [1.0, 0.0], k_min=0, k_max=2)
        with pytest.raises(ValueError):
            stabilized_boundary_test(BALL, [1.0, 0.0], k_min=2, k_max=1)
        with pytest.raises(ValueError):
            stabilized_boundary_test(BALL, [1.0, 0.0], k_min=1, k_max=5)


class TestConvexAudit:
    @pytest.mark.parametrize(
        "A,n",
        [(BALL, 64), (SQUARE, 64), (make_ball([0.0, 0.0, 0.0], 1.0), 32)],
        ids=["disk", "square", "ball3d"],
    )
    def test_chart_boundary_points_classify_mt(self, A, n):
        cloud = chart_cloud(A, n, seed=7)
        hits = 0
        for i, x in enumerate(cloud.points):
            cls = classify(density_profile(A, x, seed=100 + i))
            hits += cls.label is BoundaryLabel.MT_BOUNDARY
        assert hits >= 0.95 * n
