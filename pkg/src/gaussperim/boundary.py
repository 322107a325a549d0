"""Density-based boundary classification at dyadic scales.

A point is a density boundary point when both the set and its complement
keep a positive volume fraction in small balls around it.  Fractions are
estimated by uniform sampling in balls of dyadic radii; the decision rule
reads the two finest radii against a threshold delta, with Indeterminate
as a first-class outcome when the evidence is too thin.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .gaussian import derive_rng, derive_seed
from .sets import ImplicitSet, SectionSpec, section

DEFAULT_DELTA = 0.01
DEFAULT_J_RANGE = (3, 9)
DEFAULT_N_PER_RADIUS = 10_000


class BoundaryLabel(enum.Enum):
    FULL_DENSITY = "FullDensity"
    NULL_DENSITY = "NullDensity"
    MT_BOUNDARY = "MTBoundary"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class BoundaryClass:
    label: BoundaryLabel
    delta: float
    j_min: int
    j_max: int

    def __str__(self) -> str:
        return self.label.value


@dataclass(frozen=True)
class DensityProfile:
    """Volume fractions of a set in dyadic balls around one point.

    in_fraction[i] estimates vol(B(x, r_i) inside A) / vol(B(x, r_i)) for
    r_i = 2^-j_i, with a binomial stderr per radius.
    """

    point: np.ndarray
    js: Tuple[int, ...]
    radii: Tuple[float, ...]
    in_fraction: np.ndarray
    stderr: np.ndarray
    samples_per_radius: int
    seed: int

    def __post_init__(self):
        frac = np.asarray(self.in_fraction, dtype=np.float64)
        if np.any(frac < 0.0) or np.any(frac > 1.0):
            raise ValueError("fractions must lie in [0, 1]")


def _uniform_in_ball(rng, center: np.ndarray, radius: float, n: int) -> np.ndarray:
    k = center.size
    g = rng.normal(size=(n, k))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    r = radius * rng.uniform(size=(n, 1)) ** (1.0 / k)
    return center[None, :] + g * r


def density_profile(
    A: ImplicitSet,
    x,
    j_range: Tuple[int, int] = DEFAULT_J_RANGE,
    n_per_radius: int = DEFAULT_N_PER_RADIUS,
    seed: int = 0,
) -> DensityProfile:
    """Sampled in-fractions of A in balls B(x, 2^-j) for j in j_range."""
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if x.size != A.m:
        raise ValueError("point dimension does not match the set")
    j_lo, j_hi = int(j_range[0]), int(j_range[1])
    if j_hi < j_lo:
        raise ValueError("j_range must be nondecreasing")
    if n_per_radius < 100:
        raise ValueError("need at least 100 samples per radius")

    js = tuple(range(j_lo, j_hi + 1))
    radii = tuple(2.0 ** -j for j in js)
    fracs = np.empty(len(js))
    errs = np.empty(len(js))
    for i, (j, r) in enumerate(zip(js, radii)):
        rng = derive_rng(seed, "density-profile", j)
        pts = _uniform_in_ball(rng, x, r, n_per_radius)
        f = float(np.mean(A.contains(pts)))
        fracs[i] = f
        errs[i] = math.sqrt(f * (1.0 - f) / n_per_radius)
    return DensityProfile(
        point=x,
        js=js,
        radii=radii,
        in_fraction=fracs,
        stderr=errs,
        samples_per_radius=n_per_radius,
        seed=seed,
    )


def classify(profile: DensityProfile, delta: float = DEFAULT_DELTA) -> BoundaryClass:
    """Decision rule on the two finest radii of a density profile.

    MTBoundary needs both the set and complement fractions to clear delta
    by two stderr at both radii; FullDensity and NullDensity need the
    complement (resp. set) fraction below delta; anything else stays
    Indeterminate.
    """
    if len(profile.js) < 2:
        raise ValueError("profile needs at least 2 radii")
    f1, f2 = profile.in_fraction[-2:]
    e1, e2 = profile.stderr[-2:]
    meta = dict(delta=delta, j_min=profile.js[0], j_max=profile.js[-1])

    def mt(f, e):
        return min(f, 1.0 - f) >= delta + 2.0 * e

    if mt(f1, e1) and mt(f2, e2):
        return BoundaryClass(BoundaryLabel.MT_BOUNDARY, **meta)
    if (1.0 - f1) < delta and (1.0 - f2) < delta:
        return BoundaryClass(BoundaryLabel.FULL_DENSITY, **meta)
    if f1 < delta and f2 < delta:
        return BoundaryClass(BoundaryLabel.NULL_DENSITY, **meta)
    return BoundaryClass(BoundaryLabel.INDETERMINATE, **meta)


def section_boundary_test(
    A: ImplicitSet,
    z,
    k: int,
    j_range: Tuple[int, int] = DEFAULT_J_RANGE,
    n_per_radius: int = DEFAULT_N_PER_RADIUS,
    seed: int = 0,
    delta: float = DEFAULT_DELTA,
) -> BoundaryClass:
    """Classify the head of z against the section of A at z's tail.

    Splits z into (x, y) with x the first k coordinates, forms the
    k-dimensional slice {x' : (x', y) in A}, and runs the density test
    at x inside that slice.
    """
    z = np.asarray(z, dtype=np.float64).reshape(-1)
    if z.size != A.m:
        raise ValueError("point dimension does not match the set")
    if not (1 <= k <= A.m):
        raise ValueError("k out of range")
    S = section(A, SectionSpec(k=k, tail=z[k:]))
    profile = density_profile(S, z[:k], j_range, n_per_radius, seed)
    return classify(profile, delta)


@dataclass(frozen=True)
class StabilizedResult:
    """Conjunction of section boundary tests over a window of depths.

    is_boundary is True when every depth says MTBoundary, False when any
    depth is definitively interior or exterior, None when the only
    dissent is Indeterminate.
    """

    is_boundary: Optional[bool]
    per_k: Dict[int, BoundaryClass]


def stabilized_boundary_test(
    A: ImplicitSet,
    z,
    k_min: int = 1,
    k_max: Optional[int] = None,
    j_range: Tuple[int, int] = DEFAULT_J_RANGE,
    n_per_radius: int = DEFAULT_N_PER_RADIUS,
    seed: int = 0,
    delta: float = DEFAULT_DELTA,
) -> StabilizedResult:
    """Finite-window surrogate for the stabilized density boundary."""
    if k_max is None:
        k_max = A.m
    if not (1 <= k_min <= k_max <= A.m):
        raise ValueError("need 1 <= k_min <= k_max <= m")
    per_k = {}
    for k in range(k_min, k_max + 1):
        per_k[k] = section_boundary_test(
            A, z, k, j_range, n_per_radius, derive_seed(seed, "stabilized", k), delta
        )
    labels = [c.label for c in per_k.values()]
    if any(l in (BoundaryLabel.FULL_DENSITY, BoundaryLabel.NULL_DENSITY) for l in labels):
        verdict: Optional[bool] = False
    elif any(l is BoundaryLabel.INDETERMINATE for l in labels):
        verdict = None
    else:
        verdict = True
    return StabilizedResult(is_boundary=verdict, per_k=per_k)
