"""Path event tests.

The synthesis law is checked against the two facts that pin it down:
Cov(w(s), w(t)) = min(s, t) on the dyadic grid, and exact nesting (a
level-L coefficient vector padded with zeros reproduces the same dyadic
path values at level L+1).  Event fixtures then reduce to closed forms:
a one-sided barrier at level 0 is the half-space {x <= b} in the first
coefficient, with boundary mass phi(b).
"""

import math

import numpy as np
import pytest

from gaussperim.errors import UnsupportedOracleError
from gaussperim.sets import (
    full_set,
    make_ball,
    make_box,
    make_half_space,
    union,
)
from gaussperim.wiener import (
    DomainSpec,
    PathDiscretization,
    brownian_from_coeffs,
    convex_boundary_audit,
    path_event_set,
    perimeter_growth,
)


def phi(a: float) -> float:
    return math.exp(-a * a / 2.0) / math.sqrt(2.0 * math.pi)


class TestPathDiscretization:
    def test_sizes(self):
        disc = PathDiscretization(level=3, d=2)
        assert disc.n_intervals == 8
        assert disc.dim == 16
        assert np.allclose(disc.grid(), np.arange(9) / 8.0)

    def test_validation(self):
        with pytest.raises(ValueError):
            PathDiscretization(level=-1)
        with pytest.raises(ValueError):
            PathDiscretization(level=0, d=0)


class TestSchauderSynthesis:
    def test_zero_coefficients_give_zero_path(self):
        t = PathDiscretization(level=3).grid()
        W = brownian_from_coeffs(np.zeros(8), t)
        assert np.all(W == 0.0)

    def test_level0_endpoint_is_first_coefficient(self):
        W = brownian_from_coeffs(np.array([1.7]), [0.0, 1.0])
        assert W.shape == (2, 1)
        assert W[0, 0] == 0.0
        assert W[1, 0] == 1.7

    def test_nesting_pads_with_zeros(self):
        rng = np.random.default_rng(4)
        c2 = rng.standard_normal(4)
        t = [0.25, 0.5, 0.75, 1.0]
        w2 = brownian_from_coeffs(c2, t)
        w3 = brownian_from_coeffs(np.concatenate([c2, np.zeros(4)]), t)
        assert np.array_equal(w2, w3)

    def test_dyadic_covariance(self):
        disc = PathDiscretization(level=3)
        rng = np.random.default_rng(0)
        C = rng.standard_normal((100_000, disc.dim))
        t = disc.grid()[1:]
        W = brownian_from_coeffs(C, t)[:, :, 0]
        emp = np.cov(W.T)
        exact = np.minimum.outer(t, t)
        assert np.max(np.abs(emp - exact) / exact) < 0.05

    def test_endpoint_normality_ks(self):
        disc = PathDiscretization(level=4)
        rng = np.random.default_rng(1)
        C = rng.standard_normal((100_000, disc.dim))
        xs = np.sort(brownian_from_coeffs(C, [1.0])[:, 0, 0])
        n = xs.size
        cdf = 0.5 * (1.0 + np.array([math.erf(x / math.sqrt(2.0)) for x in xs]))
        d_stat = max(
            float(np.max(np.arange(1, n + 1) / n - cdf)),
            float(np.max(cdf - np.arange(0, n) / n)),
        )
        assert d_stat < 1.628 / math.sqrt(n)  # 1% critical value

    def test_two_spatial_dimensions_are_independent_copies(self):
        rng = np.random.default_rng(2)
        c = rng.standard_normal(8)  # level 2, d = 2
        t = [0.25, 0.5, 0.75, 1.0]
        W = brownian_from_coeffs(c, t, d=2)
        assert W.shape == (4, 2)
        w_x = brownian_from_coeffs(c.reshape(4, 2)[:, 0].copy(), t)
        w_y = brownian_from_coeffs(c.reshape(4, 2)[:, 1].copy(), t)
        assert np.allclose(W[:, 0], w_x[:, 0])
        assert np.allclose(W[:, 1], w_y[:, 0])

    def test_batch_shape(self):
        C = np.zeros((5, 4))
        W = brownian_from_coeffs(C, [0.5, 1.0])
        assert W.shape == (5, 2, 1)

    def test_off_grid_time_rejected(self):
        with pytest.raises(ValueError):
            brownian_from_coeffs(np.zeros(2), [0.3])
        with pytest.raises(ValueError):
            brownian_from_coeffs(np.zeros(2), [1.5])

    def test_bad_coefficient_count_rejected(self):
        with pytest.raises(ValueError):
            brownian_from_coeffs(np.zeros(3), [0.5])
        with pytest.raises(ValueError):
            brownian_from_coeffs(np.zeros(4), [0.5], d=3)


class TestDomainSpec:
    def test_origin_required(self):
        with pytest.raises(ValueError):
            DomainSpec(omega=make_box([1.0], [2.0]))

    def test_radius_validation(self):
        with pytest.raises(ValueError):
            DomainSpec(omega=make_box([-1.0], [1.0]), exterior_ball_radius=0.0)
        spec = DomainSpec(omega=make_box([-1.0], [1.0]), exterior_ball_radius=0.5)
        assert spec.exterior_ball_radius == 0.5


class TestPathEventSet:
    def test_level0_barrier_is_a_half_space(self):
        E = path_event_set(make_half_space([1.0], 1.0), 0)
        assert E.m == 1
        rng = np.random.default_rng(3)
        Z = rng.standard_normal((5000, 1))
        assert np.array_equal(E.contains(Z), Z[:, 0] <= 1.0)

    def test_level1_two_sided_matches_hand_synthesis(self):
        b = 1.5
        E = path_event_set(make_box([-b], [b]), 1)
        rng = np.random.default_rng(5)
        P = rng.standard_normal((4000, 2)) * 1.8
        w_half = 0.5 * P[:, 0] + 0.5 * P[:, 1]
        w_one = P[:, 0]
        expected = (np.abs(w_half) <= b) & (np.abs(w_one) <= b)
        assert np.array_equal(E.contains(P), expected)

    def test_free_domain_keeps_everything(self):
        E = path_event_set(full_set(1), 2)
        assert E.m == 4
        rng = np.random.default_rng(6)
        assert E.contains(rng.standard_normal((100, 4))).all()

    def test_zero_path_is_in_any_event(self):
        E = path_event_set(make_box([-0.1], [0.1]), 3)
        assert bool(E.contains(np.zeros((1, 8)))[0])

    def test_convexity_inherited(self):
        assert path_event_set(make_box([-1.0], [1.0]), 1).convex
        nonconvex = union(make_box([-2.0, -2.0], [0.5, 2.0]),
                          make_box([1.0, -2.0], [2.0, 2.0]))
        assert not path_event_set(nonconvex, 1).convex

    def test_spatial_dimension_scales_the_space(self):
        E = path_event_set(make_ball([0.0, 0.0], 2.0), 2)
        assert E.m == 8
        assert bool(E.contains(np.zeros((1, 8)))[0])

    def test_level_validation(self):
        with pytest.raises(ValueError):
            path_event_set(make_box([-1.0], [1.0]), -1)
        with pytest.raises(ValueError):
            path_event_set(make_box([-1.0], [1.0]), 1.5)


class TestPerimeterGrowth:
    def test_level0_barrier_matches_half_space_mass(self):
        g = perimeter_growth(make_half_space([1.0], 1.0), [0], degree=2, seed=0)
        assert g.finite and g.nondecreasing
        assert g.values[0] == pytest.approx(phi(1.0), rel=0.05)

    def test_two_sided_barrier_grows_with_level(self):
        g = perimeter_growth(make_box([-1.5], [1.5]), [0, 1], seed=0)
        assert g.finite
        assert g.nondecreasing
        assert g.values[0] == pytest.approx(2.0 * phi(1.5), rel=0.10)
        assert 0.2 < g.values[1] < 0.6

    def test_free_domain_has_no_boundary_mass(self):
        g = perimeter_growth(full_set(1), [0, 1], samples=30_000, iters=80, seed=0)
        for e in g.estimates:
            assert e.value <= max(0.02, 3.0 * e.stderr)

    def test_metadata_and_validation(self):
        g = perimeter_growth(make_half_space([1.0], 0.0), [0], samples=5000,
                             iters=20, seed=7)
        assert g.levels == (0,)
        assert g.estimates[0].budget["samples"] == 5000
        with pytest.raises(ValueError):
            perimeter_growth(make_box([-1.0], [1.0]), [])
        with pytest.raises(ValueError):
            perimeter_growth(make_box([-1.0], [1.0]), [1, 1])
        with pytest.raises(ValueError):
            perimeter_growth(make_box([-1.0], [1.0]), [-1, 0])


class TestConvexBoundaryAudit:
    def test_square_with_corners(self):
        square = make_box([-1.0, -1.0], [1.0, 1.0])
        assert convex_boundary_audit(square, n_boundary_pts=48, seed=0) >= 0.95

    def test_ball_3d(self):
        ball = make_ball([0.0, 0.0, 0.0], 1.0)
        assert convex_boundary_audit(ball, n_boundary_pts=48, seed=0) >= 0.95

    def test_level1_path_event_polytope(self):
        E = path_event_set(make_box([-1.5], [1.5]), 1)
        assert not E.charts  # exercises the bisection route
        assert convex_boundary_audit(E, n_boundary_pts=48, seed=0) >= 0.9

    def test_nonconvex_rejected(self):
        blob = union(make_ball([0.0, 0.0], 1.0), make_ball([3.0, 0.0], 1.0))
        with pytest.raises(ValueError):
            convex_boundary_audit(blob)

    def test_degenerate_interior_unsupported(self):
        # a chartless event of essentially zero measure forces the
        # bisection route, which cannot bracket a boundary
        dust = path_event_set(make_box([-1e-9], [1e-9]), 1)
        with pytest.raises(UnsupportedOracleError):
            convex_boundary_audit(dust, n_boundary_pts=8)
