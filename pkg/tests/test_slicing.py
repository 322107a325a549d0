"""Slice profile tests.

Closed-form targets used below (standard normal density phi):

* axis half-space {x . e1 <= a}: every 1-d section crosses at a, so the
  k = 1 profile is exactly phi(a) with zero variance.
* tilted half-space u = (1, 1, 0)/sqrt(2), c = 0: the 1-d section at tail
  (y1, y2) crosses at -y1, so rho(1) = E[phi(y1)] = integral of phi^2
  = 1 / (2 sqrt(pi)).  For k >= 2 the section boundary is a line through
  the origin and every slice contributes exactly phi(0).
* ball(0, 2) in R^2, k = 1: sections at |y| < 2 are intervals with
  endpoints +-sqrt(4 - y^2); integrating the two endpoint densities
  against phi(y) gives 4 exp(-2) / pi.
* ball(0, 1) in R^4: slicing to dimension k gives spheres of radius
  sqrt(1 - |y|^2).  Radial integration collapses each profile value to
  exp(-1/2)/3 (k = 2), 4 exp(-1/2)/(3 pi) (k = 3), exp(-1/2)/2 (k = 4);
  the reductions are re-derived numerically in the oracle self-check.
"""

import math

import numpy as np
import pytest

from gaussperim.gaussian import gauss_density
from gaussperim.sets import (
    SectionSpec,
    empty_set,
    full_set,
    intersection,
    make_ball,
    make_box,
    make_half_space,
    section,
    union,
)
from gaussperim.slicing import (
    MonotonicityReport,
    RhoLimitReport,
    SliceEstimate,
    monotonicity_report,
    rho_F,
    rho_limit,
    slice_perimeter_identity,
)


def phi(a: float) -> float:
    return math.exp(-a * a / 2.0) / math.sqrt(2.0 * math.pi)


TILTED = make_half_space([1.0 / math.sqrt(2.0), 1.0 / math.sqrt(2.0), 0.0], 0.0)
TILTED_K1 = 1.0 / (2.0 * math.sqrt(math.pi))
BALL2 = make_ball([0.0, 0.0], 2.0)
BALL2_K1 = 4.0 * math.exp(-2.0) / math.pi
BALL4 = make_ball([0.0, 0.0, 0.0, 0.0], 1.0)
BALL4_PROFILE = {
    2: math.exp(-0.5) / 3.0,
    3: 4.0 * math.exp(-0.5) / (3.0 * math.pi),
    4: math.exp(-0.5) / 2.0,
}
# Two vertical strips: a cylinder over the x2 coordinate, so the k = 1 and
# k = 2 profiles agree exactly and any measured drop is estimator error.
STRIPS = union(
    make_box([-1.5, -8.5], [-0.5, 8.5]), make_box([0.5, -8.5], [1.5, 8.5])
)
STRIPS_K1 = 2.0 * (phi(0.5) + phi(1.5))


class TestBall4Oracles:
    def test_radial_reduction_matches_closed_forms(self):
        # Independent check of the profile constants: integrate the section
        # mass against the Gaussian tail weight in polar form.
        y = np.linspace(0.0, 1.0, 200_001)[:-1]
        r = np.sqrt(1.0 - y**2)
        # k = 2 tail in R^2: weight is the radial density 2 pi y phi_2(y).
        w2 = y * np.exp(-(y**2) / 2.0)
        mass2 = r * np.exp(-(r**2) / 2.0)
        k2 = float(np.trapezoid(w2 * mass2, y))
        assert k2 == pytest.approx(BALL4_PROFILE[2], rel=1e-6)
        # k = 3 tail in R^1: weight 2 phi(y) on y > 0.
        w3 = 2.0 * np.exp(-(y**2) / 2.0) / math.sqrt(2.0 * math.pi)
        mass3 = 4.0 * math.pi * r**2 * np.exp(-(r**2) / 2.0) / (2.0 * math.pi) ** 1.5
        k3 = float(np.trapezoid(w3 * mass3, y))
        assert k3 == pytest.approx(BALL4_PROFILE[3], rel=1e-6)
        # k = 4: the full sphere mass.
        k4 = 2.0 * math.pi**2 * (2.0 * math.pi) ** -2.0 * math.exp(-0.5)
        assert k4 == pytest.approx(BALL4_PROFILE[4], rel=1e-12)

    def test_profile_is_increasing(self):
        assert BALL4_PROFILE[2] < BALL4_PROFILE[3] < BALL4_PROFILE[4]


class TestSliceEstimateContract:
    def test_negative_value_rejected(self):
        with pytest.raises(ValueError):
            SliceEstimate(
                k=1, value=-0.1, stderr=0.0, slices_used=4,
                backend="quadrature", budget={},
            )

    def test_metadata_recorded(self):
        e = rho_F(make_half_space([1.0, 0.0], 0.0), 1, n_slices=8, seed=42)
        assert e.k == 1
        assert e.slices_used == 8
        assert e.seed == 42
        assert e.budget["n_slices"] == 8
        assert e.budget["per_slice_budget"] == 4096

    def test_argument_validation(self):
        H = make_half_space([1.0, 0.0], 0.0)
        with pytest.raises(ValueError):
            rho_F(H, 0)
        with pytest.raises(ValueError):
            rho_F(H, 3)
        with pytest.raises(ValueError):
            rho_F(H, 1.5)
        with pytest.raises(ValueError):
            rho_F(H, 1, n_slices=0)
        with pytest.raises(ValueError):
            rho_F(H, 1, per_slice_budget=1)
        with pytest.raises(ValueError):
            rho_F(H, 1, target=make_half_space([1.0, 0.0, 0.0], 0.0))


class TestLineCounting:
    def test_axis_half_space_is_exact_with_zero_variance(self):
        H = make_half_space([1.0, 0.0, 0.0], 0.5)
        e = rho_F(H, 1, n_slices=32, seed=3)
        assert e.value == pytest.approx(phi(0.5), abs=1e-12)
        assert e.stderr == 0.0
        assert e.backend == "quadrature"

    def test_tilted_half_space_matches_density_integral(self):
        e = rho_F(TILTED, 1, n_slices=1000, seed=5)
        assert e.stderr < 0.006
        assert abs(e.value - TILTED_K1) < 4.0 * e.stderr

    def test_ball_interval_endpoints(self):
        e = rho_F(BALL2, 1, n_slices=1500, seed=1)
        assert abs(e.value - BALL2_K1) < 4.0 * e.stderr

    def test_target_keeps_only_left_crossings(self):
        left = make_half_space([1.0, 0.0], 0.0)
        e = rho_F(BALL2, 1, n_slices=1500, seed=1, target=left)
        assert abs(e.value - BALL2_K1 / 2.0) < 4.0 * e.stderr

    def test_degenerate_sections_contribute_zero(self):
        assert rho_F(empty_set(2), 1, n_slices=16).value == 0.0
        assert rho_F(full_set(2), 1, n_slices=16).value == 0.0

    def test_deterministic_per_seed(self):
        a = rho_F(TILTED, 1, n_slices=64, seed=9)
        b = rho_F(TILTED, 1, n_slices=64, seed=9)
        c = rho_F(TILTED, 1, n_slices=64, seed=10)
        assert a.value == b.value and a.stderr == b.stderr
        assert a.value != c.value


class TestSectionQuadrature:
    def test_tilted_sections_all_cross_origin(self):
        e = rho_F(TILTED, 2, n_slices=32, seed=5)
        assert e.value == pytest.approx(phi(0.0), abs=1e-10)
        assert e.stderr == 0.0
        assert e.backend == "quadrature"

    def test_full_dimension_needs_one_slice(self):
        e = rho_F(TILTED, 3, n_slices=64, seed=5)
        assert e.slices_used == 1
        assert e.stderr == 0.0
        assert e.value == pytest.approx(phi(0.0), abs=1e-10)

    def test_box_cylinder_profile_is_flat(self):
        # The box spans the full effective range in x3, so slicing it away
        # changes nothing: rho(2) = rho(3) = the square boundary mass.
        B = make_box([-1.0, -1.0, -8.5], [1.0, 1.0, 8.5])
        square = 4.0 * phi(1.0) * math.erf(1.0 / math.sqrt(2.0))
        e2 = rho_F(B, 2, n_slices=16, seed=0)
        e3 = rho_F(B, 3, seed=0)
        assert e2.value == pytest.approx(square, rel=1e-9)
        assert e3.value == pytest.approx(square, rel=1e-9)
        assert abs(e2.value - e3.value) < 1e-8

    @pytest.mark.parametrize("k,n_slices", [(2, 1500), (3, 500), (4, 1)])
    def test_ball4_profile(self, k, n_slices):
        e = rho_F(BALL4, k, n_slices=n_slices, seed=11)
        oracle = BALL4_PROFILE[k]
        if k == 4:
            assert e.value == pytest.approx(oracle, abs=1e-10)
        else:
            assert abs(e.value - oracle) < 4.0 * e.stderr
            assert e.stderr < 0.02

    def test_quadrature_target_halves_the_circle(self):
        disk = make_ball([0.0, 0.0], 1.0)
        left = make_half_space([1.0, 0.0], 0.0)
        e = rho_F(disk, 2, seed=0, target=left, order=256)
        assert e.value == pytest.approx(math.exp(-0.5) / 2.0, rel=0.01)


class TestCoveringFallback:
    def test_chartless_sections_recover_circle_mass(self):
        # Wrapping the ball in an algebra node hides its charts, forcing
        # the covering backend on geometrically identical disk sections.
        A = intersection(make_ball([0.0, 0.0, 0.0], 1.0), full_set(3))
        oracle = math.exp(-0.5) * math.sqrt(math.pi / 8.0)
        e = rho_F(A, 2, n_slices=40, per_slice_budget=8192, seed=2)
        assert e.backend == "covering"
        assert abs(e.value - oracle) < max(4.0 * e.stderr, 0.12 * oracle)

    def test_strip_slices_are_counted_exactly(self):
        e = rho_F(STRIPS, 1, n_slices=8, seed=0)
        assert e.value == pytest.approx(STRIPS_K1, abs=1e-10)
        assert e.stderr == 0.0


class TestRhoLimit:
    def test_axis_half_space_is_flat_and_converged(self):
        H = make_half_space([1.0, 0.0, 0.0], 0.0)
        rep = rho_limit(H, (1, 2, 3), tol=0.02, n_slices=16, seed=0)
        assert isinstance(rep, RhoLimitReport)
        assert rep.converged
        assert rep.violations == ()
        assert rep.value == pytest.approx(phi(0.0), abs=1e-10)
        assert all(abs(d) < 1e-10 for d in rep.increments)

    def test_tilted_profile_climbs_then_flattens(self):
        rep = rho_limit(TILTED, (1, 2, 3), tol=0.02, n_slices=400, seed=4)
        assert rep.increments[0] > 0.05
        assert abs(rep.increments[1]) < 1e-10
        assert not rep.converged  # the jump sits inside the last window
        assert rep.violations == ()
        assert rep.value == pytest.approx(phi(0.0), abs=1e-10)

    def test_empty_set_converges_to_zero(self):
        rep = rho_limit(empty_set(3), (1, 2, 3), tol=0.01, n_slices=8)
        assert rep.converged
        assert rep.value == 0.0

    def test_estimator_drop_is_flagged(self):
        # Exact k = 1 counting against a coarse covering at k = 2 produces
        # a decrease that the diagnostic must attribute to the estimator.
        rep = rho_limit(STRIPS, (1, 2), tol=0.05, n_slices=8,
                        per_slice_budget=8192, seed=0)
        assert len(rep.violations) == 1
        k_from, k_to, drop = rep.violations[0]
        assert (k_from, k_to) == (1, 2)
        assert drop < 0.0
        assert not rep.converged

    def test_validation(self):
        H = make_half_space([1.0, 0.0], 0.0)
        with pytest.raises(ValueError):
            rho_limit(H, ())
        with pytest.raises(ValueError):
            rho_limit(H, (2, 1))
        with pytest.raises(ValueError):
            rho_limit(H, (1, 2), tol=-0.1)

    def test_deterministic(self):
        a = rho_limit(TILTED, (1, 2), n_slices=32, seed=6)
        b = rho_limit(TILTED, (1, 2), n_slices=32, seed=6)
        assert a.values == b.values


class TestMonotonicityReport:
    def test_ball4_profile_is_monotone(self):
        rep = monotonicity_report(BALL4, (2, 3, 4), n_slices=500, seed=1)
        assert isinstance(rep, MonotonicityReport)
        assert rep.ok
        assert rep.failures == ()
        for k, value, stderr in rep.entries:
            if k == 4:
                assert value == pytest.approx(BALL4_PROFILE[4], abs=1e-10)
            else:
                assert abs(value - BALL4_PROFILE[k]) < 4.0 * stderr

    def test_tilted_half_space_is_monotone(self):
        rep = monotonicity_report(TILTED, (1, 2, 3), n_slices=400, seed=2)
        assert rep.ok

    def test_estimator_violation_is_reported(self):
        rep = monotonicity_report(STRIPS, (1, 2), n_slices=8,
                                  per_slice_budget=8192, seed=0)
        assert not rep.ok
        k_small, k_large, excess = rep.failures[0]
        assert (k_small, k_large) == (1, 2)
        assert excess > 0.0

    def test_needs_two_distinct_ks(self):
        with pytest.raises(ValueError):
            monotonicity_report(BALL4, (3, 3))


class TestTowerProperty:
    def test_reslicing_through_k2_matches_direct(self):
        # rho(1) computed directly equals the average over frozen third
        # coordinates of the two-dimensional sections' own rho(1).
        direct = rho_F(TILTED, 1, n_slices=900, seed=21)
        rng = np.random.default_rng(77)
        outer = rng.standard_normal(30)
        means = []
        for y in outer:
            S = section(TILTED, SectionSpec(k=2, tail=np.array([y])))
            means.append(rho_F(S, 1, n_slices=30, seed=int(1000 + 7 * y)).value)
        nested = float(np.mean(means))
        nested_se = float(np.std(means, ddof=1) / math.sqrt(len(means)))
        assert abs(direct.value - nested) < 3.0 * math.hypot(direct.stderr, nested_se)


class TestSliceIdentity:
    def test_half_space_head_component(self):
        H = make_half_space([1.0, 0.0, 0.0], 0.0)
        r = slice_perimeter_identity(H, 1, seed=0)
        assert r.passed
        assert r.lhs == pytest.approx(phi(0.0), rel=0.025)
        assert r.rhs == pytest.approx(phi(0.0), rel=0.025)
        assert r.residual == pytest.approx(r.lhs - r.rhs, abs=1e-15)

    def test_ball_head_component(self):
        r = slice_perimeter_identity(BALL2, 1, seed=0)
        assert r.passed
        assert r.rhs == pytest.approx(BALL2_K1, rel=0.15)
        assert r.lhs == pytest.approx(BALL2_K1, rel=0.05)

    def test_full_dimension_reduces_to_two_dual_runs(self):
        disk = make_ball([0.0, 0.0], 1.0)
        r = slice_perimeter_identity(disk, 2, samples=60_000, iters=150,
                                     slice_samples=60_000, slice_iters=150, seed=0)
        assert r.passed
        assert r.lhs == pytest.approx(math.exp(-0.5), rel=0.06)

    def test_empty_set_gives_exact_zeros(self):
        r = slice_perimeter_identity(empty_set(2), 1, n_slices=4, samples=2000,
                                     iters=10, slice_samples=2000, slice_iters=10)
        assert (r.lhs, r.rhs, r.residual) == (0.0, 0.0, 0.0)
        assert r.passed

    def test_validation(self):
        with pytest.raises(ValueError):
            slice_perimeter_identity(BALL2, 0)
        with pytest.raises(ValueError):
            slice_perimeter_identity(BALL2, 3)
        with pytest.raises(ValueError):
            slice_perimeter_identity(BALL2, 1, n_slices=0)

    def test_deterministic(self):
        kw = dict(n_slices=4, samples=5000, iters=20, slice_samples=5000,
                  slice_iters=20, seed=13)
        a = slice_perimeter_identity(BALL2, 1, **kw)
        b = slice_perimeter_identity(BALL2, 1, **kw)
        assert (a.lhs, a.rhs) == (b.lhs, b.rhs)
