"""Brownian path events as nested finite-dimensional sets.

A path event {w : w(t) in Omega for all t} becomes computable once the
path is synthesized from finitely many coefficients.  We use the
Levy-Ciesielski construction: independent standard normal coefficients
weight the linear ramp and the Schauder hat functions, and the partial
sum through depth L reproduces Brownian motion exactly on the dyadic
grid of step 2^-L.  Because deepening the expansion only appends
coefficients, the level-L event lives in the head coordinates of the
level-(L+1) space, giving the nested tower that makes level-by-level
perimeter estimates comparable.

Constraints are enforced at the dyadic grid points only, so each event
is an honest cylinder set of the path space rather than an approximation
of uncontrolled quality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .boundary import (
    DEFAULT_DELTA,
    DEFAULT_J_RANGE,
    DEFAULT_N_PER_RADIUS,
    BoundaryLabel,
    classify,
    density_profile,
)
from .errors import DegenerateSetError, UnsupportedOracleError
from .gaussian import derive_seed
from .hausdorff import boundary_cloud, chart_cloud
from .perimeter import PerimeterEstimate, maximize_perimeter
from .sets import ImplicitSet

GRID_ATOL = 1e-12


@dataclass(frozen=True)
class PathDiscretization:
    """Schauder depth and spatial dimension of a path space.

    level L spans 2^L coefficients per spatial component: the ramp t and
    the hat functions of generations 0..L-1.  Coefficients are laid out
    generation-major with the d spatial components contiguous, so the
    level-L vector is exactly the head of the level-(L+1) vector.
    """

    level: int
    d: int = 1

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("level must be nonnegative")
        if self.d < 1:
            raise ValueError("spatial dimension must be positive")

    @property
    def n_intervals(self) -> int:
        return 1 << self.level

    @property
    def dim(self) -> int:
        return self.n_intervals * self.d

    def grid(self) -> np.ndarray:
        n = self.n_intervals
        return np.arange(n + 1) / n


def _schauder_matrix(level: int, t: np.ndarray) -> np.ndarray:
    """Columns evaluate the ramp and the Schauder hats at the times t."""
    n = 1 << level
    S = np.empty((t.size, n))
    S[:, 0] = t
    col = 1
    for j in range(level):
        width = 2.0 ** (-j)
        peak = 2.0 ** (j / 2.0)
        for k in range(1 << j):
            left = k * width
            right = left + width
            up = np.clip(t - left, 0.0, None)
            down = np.clip(right - t, 0.0, None)
            # hat height at the midpoint: peak * width / 2 = 2^(-j/2 - 1)
            S[:, col] = peak * np.minimum(up, down) * ((t > left) & (t < right))
            col += 1
    return S


def brownian_from_coeffs(coeffs, t_grid, d: int = 1):
    """Synthesize path values at dyadic times from normal coefficients.

    coeffs may be a single (2^L * d)-vector or a batch (N, 2^L * d); the
    result is (T, d) or (N, T, d) accordingly.  Times must be dyadic at
    the level implied by the coefficient count.
    """
    C = np.atleast_2d(np.asarray(coeffs, dtype=np.float64))
    single = np.asarray(coeffs).ndim == 1
    if d < 1 or C.shape[1] % d != 0:
        raise ValueError("coefficient count is not a multiple of d")
    n = C.shape[1] // d
    level = n.bit_length() - 1
    if 1 << level != n:
        raise ValueError("coefficients per component must be a power of two")
    t = np.asarray(t_grid, dtype=np.float64).reshape(-1)
    if np.any(t < -GRID_ATOL) or np.any(t > 1.0 + GRID_ATOL):
        raise ValueError("times must lie in [0, 1]")
    scaled = t * (1 << level)
    if np.any(np.abs(scaled - np.round(scaled)) > GRID_ATOL):
        raise ValueError(f"times must be dyadic multiples of 2^-{level}")
    S = _schauder_matrix(level, t)
    W = np.einsum("tn,bnd->btd", S, C.reshape(C.shape[0], n, d))
    return W[0] if single else W


@dataclass(frozen=True)
class DomainSpec:
    """Spatial domain of a path event, with optional regularity metadata.

    exterior_ball_radius records a uniform exterior ball bound when one
    is known; it tags fixtures whose events have finite perimeter and is
    not used by any computation here.
    """

    omega: ImplicitSet
    exterior_ball_radius: Optional[float] = None

    def __post_init__(self):
        origin = np.zeros((1, self.omega.m))
        if not bool(self.omega.contains(origin)[0]):
            raise ValueError("the domain must contain the origin")
        if self.exterior_ball_radius is not None and self.exterior_ball_radius <= 0:
            raise ValueError("exterior ball radius must be positive")


def path_event_set(domain, level: int) -> ImplicitSet:
    """The event {all dyadic grid values of the path lie in the domain}.

    Membership is exact for the discretized event.  The event inherits
    convexity from the domain (it is a linear preimage of a product of
    copies of it).
    """
    if not isinstance(domain, DomainSpec):
        domain = DomainSpec(omega=domain)
    omega = domain.omega
    if not isinstance(level, (int, np.integer)) or level < 0:
        raise ValueError("level must be a nonnegative integer")
    disc = PathDiscretization(level=int(level), d=omega.m)
    n, d = disc.n_intervals, disc.d
    times = disc.grid()[1:]  # w(0) = 0 lies in the domain by construction
    S = _schauder_matrix(disc.level, times)

    def member(P):
        P = np.atleast_2d(np.asarray(P, dtype=np.float64))
        W = np.einsum("tn,bnd->btd", S, P.reshape(P.shape[0], n, d))
        ok = omega.contains(W.reshape(-1, d)).reshape(P.shape[0], times.size)
        return ok.all(axis=1)

    return ImplicitSet(
        m=disc.dim,
        membership=member,
        convex=omega.convex,
        label=f"path-event(level={disc.level},{omega.label})",
    )


@dataclass(frozen=True)
class PerimeterGrowth:
    """Per-level dual estimates of a path event's perimeter.

    nondecreasing allows per-step slack of twice the combined stderr;
    a False value signals either optimizer trouble or a non-nested run.
    """

    levels: Tuple[int, ...]
    estimates: Tuple[PerimeterEstimate, ...]
    nondecreasing: bool
    finite: bool

    @property
    def values(self) -> Tuple[float, ...]:
        return tuple(e.value for e in self.estimates)


def perimeter_growth(
    domain,
    levels: Sequence[int],
    samples: int = 100_000,
    iters: int = 200,
    degree: Optional[int] = None,
    seed: int = 0,
) -> PerimeterGrowth:
    """Estimate the event perimeter along increasing Schauder levels."""
    lv = [int(x) for x in levels]
    if len(lv) == 0:
        raise ValueError("levels is empty")
    if any(x < 0 for x in lv) or any(b <= a for a, b in zip(lv, lv[1:])):
        raise ValueError("levels must be strictly increasing and nonnegative")
    ests = []
    for L in lv:
        A = path_event_set(domain, L)
        ests.append(
            maximize_perimeter(
                A, degree=degree, samples=samples, iters=iters,
                seed=derive_seed(seed, "wiener-level", L),
            )
        )
    finite = all(math.isfinite(e.value) for e in ests)
    nondecreasing = all(
        b.value >= a.value - 2.0 * math.hypot(a.stderr, b.stderr)
        for a, b in zip(ests, ests[1:])
    )
    return PerimeterGrowth(
        levels=tuple(lv), estimates=tuple(ests),
        nondecreasing=nondecreasing, finite=finite,
    )


def convex_boundary_audit(
    A: ImplicitSet,
    n_boundary_pts: int = 64,
    n_per_radius: int = DEFAULT_N_PER_RADIUS,
    j_range: Tuple[int, int] = DEFAULT_J_RANGE,
    delta: float = DEFAULT_DELTA,
    seed: int = 0,
) -> float:
    """Fraction of sampled boundary points the classifier calls MTBoundary.

    For a convex set with interior the topological and measure-theoretic
    boundaries agree, so the fraction should approach 1 up to classifier
    tolerance at corners and sampling noise.
    """
    if not A.convex:
        raise ValueError("audit requires a set with the convex flag")
    if n_boundary_pts < 1:
        raise ValueError("need at least one boundary point")
    if A.charts:
        cloud = chart_cloud(A, count=n_boundary_pts, seed=derive_seed(seed, "audit"))
    else:
        try:
            cloud = boundary_cloud(
                A, count=n_boundary_pts, seed=derive_seed(seed, "audit")
            )
        except DegenerateSetError as exc:
            raise UnsupportedOracleError(
                "convex audit needs a set with nondegenerate interior"
            ) from exc
    hits = 0
    for i, x in enumerate(cloud.points):
        prof = density_profile(
            A, x, j_range=j_range, n_per_radius=n_per_radius,
            seed=derive_seed(seed, "audit-point", i),
        )
        if classify(prof, delta=delta).label is BoundaryLabel.MT_BOUNDARY:
            hits += 1
    return hits / len(cloud)
