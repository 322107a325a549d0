"""Perimeter through coordinate slices.

Freeze a Gaussian tail y in R^(m-k), look at the head section
{x in R^k : (x, y) in A}, measure its boundary mass, and average over
tails.  The resulting profile rho(A, k) is nondecreasing in k and climbs
toward the full Gaussian perimeter, so comparing the profile against the
direct dual estimate cross-checks both pipelines.

One-dimensional sections get an exact treatment: the boundary of a slice
of the line is a finite set of membership flips, located by scanning and
bisection, and its weighted mass is the sum of normal densities at the
flip points.  Higher-dimensional sections reuse the quadrature or
covering backends from the surface-mass module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .errors import DegenerateSetError
from .gaussian import derive_rng, derive_seed, gauss_density
from .hausdorff import PointCloud, boundary_cloud, hausdorff_gauss
from .perimeter import maximize_perimeter, surface_integral
from .sets import ImplicitSet, SectionSpec, section

SCAN_LO = -8.0  # normal mass outside [-8, 8] is below 1.3e-15
SCAN_HI = 8.0
SCAN_GRID = 1 << 10
BISECT_STEPS = 64
DROP_FLOOR = 1e-12  # exact zero-variance profiles jitter at float epsilon


@dataclass(frozen=True)
class SliceEstimate:
    """Averaged boundary mass of k-dimensional sections.

    backend records which per-slice rule produced the numbers:
    "quadrature" (flip counting for k = 1, chart quadrature otherwise),
    "covering" for chartless sections, or "mixed" when slices disagreed.
    """

    k: int
    value: float
    stderr: float
    slices_used: int
    backend: str
    budget: Dict[str, int]
    seed: Optional[int] = None

    def __post_init__(self):
        if self.value < 0.0:
            raise ValueError("slice estimate must be nonnegative")


def _line_boundary_mass(S: ImplicitSet, tail: np.ndarray, target) -> float:
    """Weighted count of membership flips of a 1-dimensional section."""
    grid = np.linspace(SCAN_LO, SCAN_HI, SCAN_GRID + 1)
    inside = np.asarray(S.contains(grid[:, None]), dtype=bool)
    flip = inside[:-1] != inside[1:]
    if not flip.any():
        return 0.0
    lo = grid[:-1][flip].copy()
    hi = grid[1:][flip].copy()
    state_lo = inside[:-1][flip]
    for _ in range(BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        same = np.asarray(S.contains(mid[:, None]), dtype=bool) == state_lo
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    crossings = 0.5 * (lo + hi)
    if target is not None:
        ambient = np.concatenate(
            [crossings[:, None], np.tile(tail, (crossings.size, 1))], axis=1
        )
        keep = np.asarray(target.contains(ambient), dtype=bool)
        crossings = crossings[keep]
        if crossings.size == 0:
            return 0.0
    return float(np.sum(gauss_density(crossings[:, None])))


def _section_boundary_mass(
    S: ImplicitSet,
    tail: np.ndarray,
    target,
    per_slice_budget: int,
    order: int,
    seed: int,
) -> Tuple[float, str]:
    """Boundary mass of one section, with the backend that produced it."""
    if S.m == 1:
        return _line_boundary_mass(S, tail, target), "quadrature"
    if S.charts:
        if target is None:
            return hausdorff_gauss(S, order=order).value, "quadrature"

        def weighted(X, N):
            ambient = np.concatenate([X, np.tile(tail, (X.shape[0], 1))], axis=1)
            return gauss_density(X) * target.contains(ambient).astype(np.float64)

        value, _ = surface_integral(S, weighted, order=order)
        return value, "quadrature"
    try:
        cloud = boundary_cloud(S, count=per_slice_budget, seed=seed)
    except DegenerateSetError:
        return 0.0, ""  # empty or full section carries no boundary
    if target is not None:
        ambient = np.concatenate(
            [cloud.points, np.tile(tail, (len(cloud), 1))], axis=1
        )
        keep = np.asarray(target.contains(ambient), dtype=bool)
        if not keep.any():
            return 0.0, "covering"
        cloud = PointCloud(
            m=cloud.m,
            points=cloud.points[keep],
            provenance=cloud.provenance,
            tol=cloud.tol,
            inside=None if cloud.inside is None else cloud.inside[keep],
            outside=None if cloud.outside is None else cloud.outside[keep],
        )
    return hausdorff_gauss(cloud).value, "covering"


def rho_F(
    A: ImplicitSet,
    k: int,
    n_slices: int = 64,
    per_slice_budget: int = 4096,
    seed: int = 0,
    target: Optional[ImplicitSet] = None,
    order: int = 64,
) -> SliceEstimate:
    """Mean boundary mass of k-dimensional coordinate sections of A.

    Tails are standard normal draws in R^(m-k); each frozen tail
    contributes the Gaussian surface mass of its head section (zero when
    the section is empty or full).  target, when given, restricts the
    counted boundary to an ambient region.  k = m has no tail and reduces
    to a single exact evaluation with stderr 0.
    """
    m = A.m
    if not isinstance(k, (int, np.integer)) or not (1 <= k <= m):
        raise ValueError(f"k must be an integer in [1, {m}]")
    if n_slices < 1:
        raise ValueError("need at least one slice")
    if per_slice_budget < 2:
        raise ValueError("per_slice_budget too small")
    if target is not None and target.m != m:
        raise ValueError("target must live in the same ambient space as A")

    budget = {"n_slices": n_slices, "per_slice_budget": per_slice_budget, "order": order}
    if k == m:
        value, backend = _section_boundary_mass(
            A, np.zeros(0), target, per_slice_budget, order, derive_seed(seed, "slice", 0)
        )
        return SliceEstimate(
            k=k, value=value, stderr=0.0, slices_used=1,
            backend=backend or "quadrature", budget=budget, seed=seed,
        )

    rng = derive_rng(seed, "slice-tails", k)
    tails = rng.standard_normal((n_slices, m - k))
    values = np.empty(n_slices)
    backends = set()
    for i in range(n_slices):
        S = section(A, SectionSpec(k=k, tail=tails[i]))
        values[i], used = _section_boundary_mass(
            S, tails[i], target, per_slice_budget, order, derive_seed(seed, "slice", i)
        )
        if used:
            backends.add(used)  # degenerate slices carry no backend vote
    value = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / math.sqrt(n_slices)) if n_slices > 1 else 0.0
    backend = backends.pop() if len(backends) == 1 else ("mixed" if backends else "quadrature")
    return SliceEstimate(
        k=k, value=value, stderr=stderr, slices_used=n_slices,
        backend=backend, budget=budget, seed=seed,
    )


@dataclass(frozen=True)
class RhoLimitReport:
    """Slice profile along an increasing k schedule.

    value/stderr repeat the final entry.  converged means the last two
    increments stayed below tol + 2 * (their combined stderr).  Any
    increment more negative than 2 stderr lands in violations as
    (k_from, k_to, drop); the profile should be nondecreasing, so a
    violation flags an estimator inconsistency rather than geometry.
    """

    ks: Tuple[int, ...]
    values: Tuple[float, ...]
    stderrs: Tuple[float, ...]
    increments: Tuple[float, ...]
    value: float
    stderr: float
    converged: bool
    tol: float
    violations: Tuple[Tuple[int, int, float], ...]


def rho_limit(
    A: ImplicitSet,
    k_schedule: Sequence[int],
    tol: float = 0.02,
    n_slices: int = 64,
    per_slice_budget: int = 4096,
    seed: int = 0,
    order: int = 64,
) -> RhoLimitReport:
    """Run the slice profile along k_schedule and judge its convergence."""
    ks = [int(k) for k in k_schedule]
    if len(ks) == 0:
        raise ValueError("k_schedule is empty")
    if any(b <= a for a, b in zip(ks, ks[1:])):
        raise ValueError("k_schedule must be strictly increasing")
    if tol < 0.0:
        raise ValueError("tol must be nonnegative")
    ests = [
        rho_F(
            A, k, n_slices=n_slices, per_slice_budget=per_slice_budget,
            seed=derive_seed(seed, "rho-limit", k), order=order,
        )
        for k in ks
    ]
    values = [e.value for e in ests]
    stderrs = [e.stderr for e in ests]
    increments = [b - a for a, b in zip(values, values[1:])]
    inc_se = [math.hypot(sa, sb) for sa, sb in zip(stderrs, stderrs[1:])]
    converged = len(increments) >= 2 and all(
        d < tol + 2.0 * se for d, se in zip(increments[-2:], inc_se[-2:])
    )
    violations = tuple(
        (ks[i], ks[i + 1], increments[i])
        for i in range(len(increments))
        if increments[i] < -(2.0 * inc_se[i] + DROP_FLOOR)
    )
    return RhoLimitReport(
        ks=tuple(ks),
        values=tuple(values),
        stderrs=tuple(stderrs),
        increments=tuple(increments),
        value=values[-1],
        stderr=stderrs[-1],
        converged=converged,
        tol=tol,
        violations=violations,
    )


@dataclass(frozen=True)
class MonotonicityReport:
    """Pairwise one-sided comparison of the slice profile.

    entries hold (k, value, stderr) rows; failures hold (k_small, k_large,
    excess) for every pair where value(k_small) exceeded value(k_large) by
    more than twice the summed stderrs.
    """

    entries: Tuple[Tuple[int, float, float], ...]
    ok: bool
    failures: Tuple[Tuple[int, int, float], ...]


def monotonicity_report(
    A: ImplicitSet,
    ks: Sequence[int],
    n_slices: int = 64,
    per_slice_budget: int = 4096,
    seed: int = 0,
    order: int = 64,
) -> MonotonicityReport:
    """Check that the slice profile is nondecreasing across the given ks."""
    ks = sorted({int(k) for k in ks})
    if len(ks) < 2:
        raise ValueError("need at least two distinct k values")
    ests = [
        rho_F(
            A, k, n_slices=n_slices, per_slice_budget=per_slice_budget,
            seed=derive_seed(seed, "monotonicity", k), order=order,
        )
        for k in ks
    ]
    entries = tuple((e.k, e.value, e.stderr) for e in ests)
    failures = []
    for i in range(len(ests)):
        for j in range(i + 1, len(ests)):
            slack = 2.0 * (ests[i].stderr + ests[j].stderr)
            excess = ests[i].value - ests[j].value - slack
            if excess > DROP_FLOOR:
                failures.append((ests[i].k, ests[j].k, excess))
    return MonotonicityReport(entries=entries, ok=not failures, failures=tuple(failures))


@dataclass(frozen=True)
class SliceIdentityReport:
    """Head-restricted dual against the tail average of section duals.

    lhs maximizes over fields using only the first k components on the
    full space; rhs averages the k-dimensional dual perimeter of frozen
    sections.  The two estimate the same quantity, so residual should
    vanish within combined_stderr noise.
    """

    k: int
    lhs: float
    lhs_stderr: float
    rhs: float
    rhs_stderr: float
    residual: float
    combined_stderr: float
    passed: bool


def slice_perimeter_identity(
    A: ImplicitSet,
    k: int,
    n_slices: int = 32,
    samples: int = 100_000,
    iters: int = 200,
    slice_samples: int = 20_000,
    slice_iters: int = 120,
    degree: Optional[int] = 3,
    seed: int = 0,
) -> SliceIdentityReport:
    """Compare the k-component dual with the sliced per-section duals.

    degree controls the lhs basis only.  Component-restricted optima are
    low-complexity in practice, and a lean basis cuts the gradient noise
    that otherwise leaves the lhs a few percent under its supremum; the
    default of 3 keeps both sides of the identity comparable.  Pass None
    for the dimension-based default.
    """
    m = A.m
    if not (1 <= k <= m):
        raise ValueError(f"k must lie in [1, {m}]")
    if n_slices < 1:
        raise ValueError("need at least one slice")
    lhs_est = maximize_perimeter(
        A, degree=degree, samples=samples, iters=iters, n_components=k,
        seed=derive_seed(seed, "lhs"),
    )
    if k == m:
        tails = np.zeros((1, 0))
    else:
        tails = derive_rng(seed, "identity-tails", k).standard_normal((n_slices, m - k))
    vals = np.empty(tails.shape[0])
    for i in range(tails.shape[0]):
        S = section(A, SectionSpec(k=k, tail=tails[i]))
        est = maximize_perimeter(
            S, samples=slice_samples, iters=slice_iters,
            seed=derive_seed(seed, "slice-dual", i),
        )
        vals[i] = est.value
    rhs = float(np.mean(vals))
    rhs_stderr = (
        float(np.std(vals, ddof=1) / math.sqrt(vals.size)) if vals.size > 1 else 0.0
    )
    residual = lhs_est.value - rhs
    combined = math.hypot(lhs_est.stderr, rhs_stderr)
    return SliceIdentityReport(
        k=k,
        lhs=lhs_est.value,
        lhs_stderr=lhs_est.stderr,
        rhs=rhs,
        rhs_stderr=rhs_stderr,
        residual=residual,
        combined_stderr=combined,
        passed=abs(residual) <= 2.0 * combined,
    )
