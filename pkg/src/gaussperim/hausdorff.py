"""Spherical Hausdorff mass of codimension-1 sets by greedy ball coverings.

The plain estimator sums V_{m-1} (diam/2)^(m-1) over a greedy cover of a
boundary point cloud and tracks the sum along a shrinking schedule of ball
scales.  The Gaussian-weighted variant multiplies each ball by the standard
normal density at its center; on charted sets the same quantity can instead
be computed by surface quadrature, giving an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from . import backend as K
from .errors import DegenerateSetError, ResolutionError, UnsupportedOracleError
from .gaussian import GaussianSpace, derive_rng, derive_seed, gauss_density
from .perimeter import surface_integral
from .sets import ImplicitSet

#: diameters are kept strictly below the scale by this relative margin
DIAM_MARGIN = 1e-9

#: scales per schedule, halving each step
SCHEDULE_STEPS = 6

SCHEDULE_RATIO = 0.5

#: coarsest scale as a multiple of the cloud's median spacing
SCHEDULE_BASE_FACTOR = 2048.0

#: coarsest scale never exceeds this fraction of the cloud's extent
EXTENT_FRACTION = 0.25


def unit_ball_volume(n: int) -> float:
    """Volume of the unit ball in R^n, pi^(n/2) / Gamma(n/2 + 1)."""
    if n < 0:
        raise ValueError("dimension must be >= 0")
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


@dataclass(frozen=True)
class PointCloud:
    """Points lying on a codimension-1 surface, plus bracketing witnesses.

    For bisection clouds, inside/outside hold the final bracket endpoints
    (membership True at inside, False at outside, separation <= tol), which
    certify that each point sits within tol of a membership flip.
    """

    m: int
    points: np.ndarray
    provenance: str
    tol: float = 0.0
    inside: Optional[np.ndarray] = None
    outside: Optional[np.ndarray] = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != self.m:
            raise ValueError("points must have shape (n, m)")
        if pts.shape[0] == 0:
            raise ValueError("cloud is empty")
        if self.provenance not in ("chart-sampled", "bisection"):
            raise ValueError(f"unknown provenance {self.provenance!r}")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]

    def spacing(self) -> float:
        """Median nearest-neighbor distance."""
        if len(self) < 2:
            return 0.0
        return float(np.median(K.nn_distances(self.points)))

    def bracket_fraction(self, A: ImplicitSet) -> float:
        """Fraction of points whose stored bracket still straddles A."""
        if self.inside is None or self.outside is None:
            raise ValueError("cloud carries no bracket witnesses")
        ok = A.contains(self.inside) & ~A.contains(self.outside)
        return float(np.mean(ok))


@dataclass(frozen=True)
class Covering:
    """Finite ball cover of a cloud at one scale."""

    centers: np.ndarray
    diameters: np.ndarray
    eps: float

    def __post_init__(self):
        if np.any(self.diameters >= self.eps):
            raise ValueError("covering has a ball at or above its scale")

    def __len__(self) -> int:
        return self.centers.shape[0]


def greedy_cover(cloud: PointCloud, eps: float) -> Covering:
    """Farthest-point greedy cover with balls of diameter below eps.

    Each diameter is tightened to twice the largest assigned point
    distance, so isolated points get zero-size balls and the sum of
    ball volumes tracks the cloud geometry instead of the raw scale.
    """
    if eps <= 0:
        raise ValueError("scale must be positive")
    radius = 0.5 * eps * (1.0 - DIAM_MARGIN)
    idx, _, tight = K.greedy_cover_idx(cloud.points, radius)
    centers = cloud.points[idx]
    diameters = np.minimum(2.0 * tight, eps * (1.0 - DIAM_MARGIN))
    return Covering(centers=centers, diameters=diameters, eps=eps)


def default_schedule(cloud: PointCloud) -> Tuple[float, ...]:
    """Geometric scale schedule, six scales halving each step.

    The coarsest scale is a large multiple of the cloud's median spacing
    (tight ball diameters lose about one point gap per ball, so the finest
    scale must stay well above the sampling resolution), capped by a
    fraction of the cloud's extent so balls never fold across the whole
    surface.  The cap also makes denser clouds genuinely more accurate:
    once it binds, the finest scale stops shrinking with the spacing.
    """
    med = cloud.spacing()
    pts = cloud.points
    extent = float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))
    cands = []
    if med > 0.0:
        cands.append(SCHEDULE_BASE_FACTOR * med)
    if extent > 0.0:
        cands.append(EXTENT_FRACTION * extent)
    eps0 = min(cands) if cands else 1.0
    return tuple(eps0 * SCHEDULE_RATIO ** j for j in range(SCHEDULE_STEPS))


@dataclass(frozen=True)
class HausdorffEstimate:
    """Covering or quadrature estimate with its scale trace.

    value is the finest-scale figure; trend is the change over the last
    halving, a Richardson-style convergence diagnostic (small trend means
    the scale limit has stabilized).
    """

    value: float
    per_scale: Tuple[Tuple[float, float], ...]
    trend: float
    method: str
    weighted: bool


def _check_schedule(cloud: PointCloud, schedule: Sequence[float]) -> Tuple[float, ...]:
    sched = tuple(float(e) for e in schedule)
    if len(sched) == 0:
        raise ValueError("schedule is empty")
    if any(e <= 0 for e in sched):
        raise ValueError("schedule scales must be positive")
    if any(b >= a for a, b in zip(sched, sched[1:])):
        raise ValueError("schedule must be strictly decreasing")
    # In m = 1 the covering counts points, so scales below the spacing are
    # legitimate; in higher dimension they make the cover see gaps instead
    # of the surface.
    med = cloud.spacing()
    if cloud.m >= 2 and len(cloud) > 1 and sched[-1] < med:
        raise ResolutionError(
            f"finest scale {sched[-1]:.3g} is below the cloud's median "
            f"spacing {med:.3g}; the cover would see gaps, not the surface"
        )
    return sched


def _covering_sum(cloud: PointCloud, eps: float, weight: Optional[Callable]) -> float:
    cover = greedy_cover(cloud, eps)
    vol = unit_ball_volume(cloud.m - 1) * (0.5 * cover.diameters) ** (cloud.m - 1)
    if weight is not None:
        vol = vol * weight(cover.centers)
    return float(np.sum(vol))


def _covering_estimate(cloud, schedule, weight, weighted) -> HausdorffEstimate:
    sched = _check_schedule(cloud, schedule if schedule is not None else default_schedule(cloud))
    per = tuple((e, _covering_sum(cloud, e, weight)) for e in sched)
    value = per[-1][1]
    trend = value - per[-2][1] if len(per) >= 2 else 0.0
    return HausdorffEstimate(
        value=value, per_scale=per, trend=trend, method="covering", weighted=weighted
    )


def spherical_hausdorff(
    cloud: PointCloud, schedule: Optional[Sequence[float]] = None
) -> HausdorffEstimate:
    """Codimension-1 spherical Hausdorff mass of the cloud's surface."""
    return _covering_estimate(cloud, schedule, None, weighted=False)


def hausdorff_gauss(
    source: Union[PointCloud, ImplicitSet],
    schedule: Optional[Sequence[float]] = None,
    order: int = 64,
) -> HausdorffEstimate:
    """Gaussian-weighted surface mass, by covering or by chart quadrature.

    A PointCloud selects the covering backend (density at ball centers);
    an ImplicitSet with boundary charts selects the quadrature backend.
    """
    if isinstance(source, PointCloud):
        return _covering_estimate(source, schedule, gauss_density, weighted=True)
    if isinstance(source, ImplicitSet):
        if not source.charts:
            raise UnsupportedOracleError(
                f"set {source.label!r} has no charts; pass a point cloud instead"
            )
        value, err = surface_integral(source, lambda X, N: gauss_density(X), order)
        return HausdorffEstimate(
            value=value, per_scale=(), trend=err, method="quadrature", weighted=True
        )
    raise TypeError("source must be a PointCloud or an ImplicitSet")


def boundary_cloud(
    A: ImplicitSet,
    count: int = 4096,
    seed: int = 0,
    tol: float = 1e-7,
    max_batches: int = 64,
) -> PointCloud:
    """Boundary points of A found by bisecting straddling Gaussian pairs.

    Draws independent Gaussian pairs, keeps those with one endpoint inside
    and one outside, and bisects each bracket down to separation tol.  The
    emitted midpoints concentrate where boundary and Gaussian bulk meet,
    which is exactly where the weighted covering estimator needs them.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    space = GaussianSpace(A.m)

    pilot = space.sample(4096, derive_seed(seed, "pilot")).points
    frac = float(np.mean(A.contains(pilot)))
    if frac == 0.0 or frac == 1.0:
        raise DegenerateSetError(
            f"set {A.label!r} looks {'full' if frac else 'empty'} on a pilot "
            "sample; no boundary to bracket"
        )

    ins, outs = [], []
    have = 0
    for batch in range(max_batches):
        X = space.sample(count, derive_seed(seed, "pairs", 2 * batch)).points
        Y = space.sample(count, derive_seed(seed, "pairs", 2 * batch + 1)).points
        mx = A.contains(X)
        my = A.contains(Y)
        straddle = mx != my
        if not straddle.any():
            continue
        sx, sy, smx = X[straddle], Y[straddle], mx[straddle]
        I = np.where(smx[:, None], sx, sy)
        O = np.where(smx[:, None], sy, sx)
        take = min(count - have, I.shape[0])
        ins.append(I[:take])
        outs.append(O[:take])
        have += take
        if have >= count:
            break
    if have < count:
        raise DegenerateSetError(
            f"found {have}/{count} straddling pairs for {A.label!r} within "
            "the sampling budget"
        )

    I = np.concatenate(ins)
    O = np.concatenate(outs)
    gap = float(np.max(np.sqrt(np.sum((I - O) ** 2, axis=1))))
    steps = max(1, int(math.ceil(math.log2(max(gap, tol) / tol))))
    for _ in range(min(steps, 80)):
        M = 0.5 * (I + O)
        inM = A.contains(M)
        I = np.where(inM[:, None], M, I)
        O = np.where(inM[:, None], O, M)
    mid = 0.5 * (I + O)
    return PointCloud(
        m=A.m, points=mid, provenance="bisection", tol=tol, inside=I, outside=O
    )


def chart_cloud(A: ImplicitSet, count: int = 4096, seed: int = 0) -> PointCloud:
    """Boundary points drawn from A's charts, allocated by surface area.

    Parameters are drawn uniformly in each chart's box with rejection on
    the area density, so the points land uniformly on the surface itself.
    """
    if not A.charts:
        raise UnsupportedOracleError(f"set {A.label!r} has no charts")
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = derive_rng(seed, "chart-cloud")

    # Rough area weight per chart from a pilot of the area density.
    weights = []
    for chart in A.charts:
        lo = np.asarray(chart.lo, dtype=np.float64)
        hi = np.asarray(chart.hi, dtype=np.float64)
        if chart.q == 0:
            weights.append(1.0)
            continue
        U = rng.uniform(lo, hi, size=(2048, chart.q))
        box = float(np.prod(hi - lo))
        weights.append(float(np.mean(chart.area_factor(U))) * box)
    weights = np.asarray(weights)
    if not np.all(np.isfinite(weights)) or weights.sum() <= 0:
        raise DegenerateSetError(f"charts of {A.label!r} have no usable area")
    alloc = np.floor(count * weights / weights.sum()).astype(int)
    while alloc.sum() < count:
        alloc[int(np.argmax(weights))] += 1

    pieces = []
    for chart, n_i in zip(A.charts, alloc):
        if n_i == 0:
            continue
        lo = np.asarray(chart.lo, dtype=np.float64)
        hi = np.asarray(chart.hi, dtype=np.float64)
        if chart.q == 0:
            pieces.append(np.repeat(chart.embed(np.zeros((1, 0))), n_i, axis=0))
            continue
        pilot = chart.area_factor(rng.uniform(lo, hi, size=(2048, chart.q)))
        cap = 1.2 * float(np.max(pilot))
        got = []
        need = n_i
        while need > 0:
            U = rng.uniform(lo, hi, size=(4 * need, chart.q))
            acc = rng.uniform(0.0, cap, size=4 * need) < chart.area_factor(U)
            sel = U[acc][:need]
            if sel.shape[0]:
                got.append(sel)
                need -= sel.shape[0]
        pieces.append(chart.embed(np.concatenate(got)))
    pts = np.concatenate(pieces)
    return PointCloud(m=A.m, points=pts, provenance="chart-sampled")
