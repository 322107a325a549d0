"""Implicit set model: membership oracles, boundary charts, sections, algebra.

Sets are membership-first: every estimator in the package works from the
vectorized oracle alone. Charts, normals, convexity and vertex lists are
optional extras that unlock the quadrature oracle and cheaper boundary
sampling for the closed-form fixtures.

Coordinate sections follow the head/tail split: section(A, SectionSpec(k, y))
is the set {x in R^k : (x, y) in A}. Primitive fixtures propagate their
structure through sections (a ball slices to a ball, a half-space to a
half-space, algebra nodes slice memberwise), so sections of closed-form
fixtures keep their charts.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

HALF_SPACE_CHART_EXTENT = 8.5  # Gaussian tail beyond this is < 1e-16 relative


@dataclass(frozen=True)
class BoundaryChart:
    """One parametrized boundary patch.

    lo/hi bound the parameter box in R^q (q = m-1 for hypersurface patches;
    q = 0 single-point patches are allowed and carry one node of weight 1).
    embed maps parameters (n, q) to boundary points (n, m); area_factor is
    the surface Jacobian; outward_normal the unit outward normal.
    """

    lo: np.ndarray
    hi: np.ndarray
    embed: Callable[[np.ndarray], np.ndarray]
    area_factor: Callable[[np.ndarray], np.ndarray]
    outward_normal: Callable[[np.ndarray], np.ndarray]

    @property
    def q(self) -> int:
        return len(self.lo)


@dataclass(frozen=True)
class SectionSpec:
    """Head dimension k and the frozen tail y in R^(m-k)."""

    k: int
    tail: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "tail", np.asarray(self.tail, dtype=np.float64).reshape(-1)
        )


@dataclass(frozen=True)
class ImplicitSet:
    m: int
    membership: Callable[[np.ndarray], np.ndarray]
    convex: bool = False
    charts: Optional[tuple] = None
    normal_field: Optional[Callable[[np.ndarray], np.ndarray]] = None
    vertices: Optional[np.ndarray] = None
    section_rule: Optional[Callable[[SectionSpec], "ImplicitSet"]] = None
    label: str = ""

    def contains(self, P) -> np.ndarray:
        P = np.asarray(P, dtype=np.float64)
        single = P.ndim == 1
        P = np.atleast_2d(P)
        if P.shape[1] != self.m:
            raise ValueError(
                f"membership: points have dim {P.shape[1]}, set has m={self.m}"
            )
        out = np.asarray(self.membership(P), dtype=bool).reshape(P.shape[0])
        return bool(out[0]) if single else out


def make_half_space(normal, offset: float, label: str = "") -> ImplicitSet:
    """A = {z : <u, z> <= a} with u = normal / |normal|, a = offset / |normal|."""
    u = np.asarray(normal, dtype=np.float64).reshape(-1)
    nrm = float(np.linalg.norm(u))
    if nrm == 0.0:
        raise ValueError("half-space normal must be nonzero")
    u = u / nrm
    a = float(offset) / nrm
    m = u.size

    def member(P):
        return P @ u <= a

    # Orthonormal basis of the hyperplane via QR of [u | I].
    if m > 1:
        qmat, _ = np.linalg.qr(np.column_stack([u, np.eye(m)]), mode="reduced")
        V = qmat[:, 1:m]
    else:
        V = np.zeros((1, 0))
    R = HALF_SPACE_CHART_EXTENT

    def embed(P):
        return a * u[None, :] + P @ V.T

    chart = BoundaryChart(
        lo=np.full(m - 1, -R),
        hi=np.full(m - 1, R),
        embed=embed,
        area_factor=lambda P: np.ones(P.shape[0]),
        outward_normal=lambda P: np.broadcast_to(u, (P.shape[0], m)).copy(),
    )

    def rule(spec: SectionSpec) -> ImplicitSet:
        k = spec.k
        uh, ut = u[:k], u[k:]
        c = a - float(ut @ spec.tail)
        nh = float(np.linalg.norm(uh))
        if nh < 1e-12:
            return full_set(k) if 0.0 <= c else empty_set(k)
        return make_half_space(uh, c, label=f"{label or 'half_space'}|section")

    return ImplicitSet(
        m=m,
        membership=member,
        convex=True,
        charts=(chart,),
        normal_field=lambda P: np.broadcast_to(u, (np.atleast_2d(P).shape[0], m)).copy(),
        section_rule=rule,
        label=label or f"half_space(m={m})",
    )


def _ball_charts(c, r):
    m = c.size
    if m == 1:
        return tuple(
            BoundaryChart(
                lo=np.zeros(0),
                hi=np.zeros(0),
                embed=(lambda P, s=s: np.full((P.shape[0], 1), c[0] + s * r)),
                area_factor=lambda P: np.ones(P.shape[0]),
                outward_normal=(lambda P, s=s: np.full((P.shape[0], 1), float(s))),
            )
            for s in (-1.0, 1.0)
        )
    if m == 2:

        def embed2(P):
            th = P[:, 0]
            return c[None, :] + r * np.column_stack([np.cos(th), np.sin(th)])

        def normal2(P):
            th = P[:, 0]
            return np.column_stack([np.cos(th), np.sin(th)])

        return (
            BoundaryChart(
                lo=np.array([0.0]),
                hi=np.array([2.0 * np.pi]),
                embed=embed2,
                area_factor=lambda P: np.full(P.shape[0], r),
                outward_normal=normal2,
            ),
        )
    if m == 3:

        def embed3(P):
            th, ph = P[:, 0], P[:, 1]
            st = np.sin(th)
            return c[None, :] + r * np.column_stack(
                [st * np.cos(ph), st * np.sin(ph), np.cos(th)]
            )

        def normal3(P):
            th, ph = P[:, 0], P[:, 1]
            st = np.sin(th)
            return np.column_stack([st * np.cos(ph), st * np.sin(ph), np.cos(th)])

        return (
            BoundaryChart(
                lo=np.array([0.0, 0.0]),
                hi=np.array([np.pi, 2.0 * np.pi]),
                embed=embed3,
                area_factor=lambda P: r * r * np.sin(P[:, 0]),
                outward_normal=normal3,
            ),
        )
    if m == 4:

        def dir4(P):
            t1, t2, ph = P[:, 0], P[:, 1], P[:, 2]
            s1, s2 = np.sin(t1), np.sin(t2)
            return np.column_stack(
                [s1 * s2 * np.cos(ph), s1 * s2 * np.sin(ph), s1 * np.cos(t2), np.cos(t1)]
            )

        return (
            BoundaryChart(
                lo=np.array([0.0, 0.0, 0.0]),
                hi=np.array([np.pi, np.pi, 2.0 * np.pi]),
                embed=lambda P: c[None, :] + r * dir4(P),
                area_factor=lambda P: r**3 * np.sin(P[:, 0]) ** 2 * np.sin(P[:, 1]),
                outward_normal=dir4,
            ),
        )
    return None  # m >= 5: membership + normal only


def make_ball(center, radius: float, label: str = "") -> ImplicitSet:
    c = np.asarray(center, dtype=np.float64).reshape(-1)
    r = float(radius)
    if r <= 0.0:
        raise ValueError("ball radius must be positive")
    m = c.size

    def member(P):
        return np.sum((P - c) ** 2, axis=1) <= r * r

    def normal(P):
        d = np.atleast_2d(P) - c
        nrm = np.linalg.norm(d, axis=1, keepdims=True)
        nrm[nrm == 0.0] = 1.0
        return d / nrm

    def rule(spec: SectionSpec) -> ImplicitSet:
        k = spec.k
        r2 = r * r - float(np.sum((spec.tail - c[k:]) ** 2))
        if r2 <= 0.0:
            return empty_set(k)
        return make_ball(c[:k], float(np.sqrt(r2)), label=f"{label or 'ball'}|section")

    return ImplicitSet(
        m=m,
        membership=member,
        convex=True,
        charts=_ball_charts(c, r),
        normal_field=normal,
        section_rule=rule,
        label=label or f"ball(m={m},r={r:g})",
    )


def make_box(lo, hi, label: str = "") -> ImplicitSet:
    lo = np.asarray(lo, dtype=np.float64).reshape(-1)
    hi = np.asarray(hi, dtype=np.float64).reshape(-1)
    if lo.size != hi.size or np.any(lo >= hi):
        raise ValueError("box needs lo < hi componentwise")
    m = lo.size

    def member(P):
        return np.all((P >= lo) & (P <= hi), axis=1)

    charts = []
    for axis in range(m):
        for sgn, val in ((-1.0, lo[axis]), (1.0, hi[axis])):
            keep = [j for j in range(m) if j != axis]

            def embed(P, axis=axis, val=val, keep=tuple(keep)):
                out = np.empty((P.shape[0], m))
                out[:, axis] = val
                for c, j in enumerate(keep):
                    out[:, j] = P[:, c]
                return out

            def normal(P, axis=axis, sgn=sgn):
                out = np.zeros((P.shape[0], m))
                out[:, axis] = sgn
                return out

            charts.append(
                BoundaryChart(
                    lo=lo[keep].copy(),
                    hi=hi[keep].copy(),
                    embed=embed,
                    area_factor=lambda P: np.ones(P.shape[0]),
                    outward_normal=normal,
                )
            )

    def normal_field(P):
        P = np.atleast_2d(P)
        gap = np.minimum(np.abs(P - lo), np.abs(hi - P))
        axis = np.argmin(gap, axis=1)
        out = np.zeros_like(P)
        rows = np.arange(P.shape[0])
        mid = 0.5 * (lo + hi)
        out[rows, axis] = np.where(P[rows, axis] >= mid[axis], 1.0, -1.0)
        return out

    verts = None
    if m <= 10:
        grid = np.meshgrid(*[(lo[j], hi[j]) for j in range(m)], indexing="ij")
        verts = np.column_stack([g.ravel() for g in grid])

    def rule(spec: SectionSpec) -> ImplicitSet:
        k = spec.k
        if np.any(spec.tail < lo[k:]) or np.any(spec.tail > hi[k:]):
            return empty_set(k)
        return make_box(lo[:k], hi[:k], label=f"{label or 'box'}|section")

    return ImplicitSet(
        m=m,
        membership=member,
        convex=True,
        charts=tuple(charts),
        normal_field=normal_field,
        vertices=verts,
        section_rule=rule,
        label=label or f"box(m={m})",
    )


def make_segment(p, q, atol: float = 1e-12, label: str = "") -> ImplicitSet:
    """Closed segment from p to q: a measure-zero set with an exact oracle."""
    p = np.asarray(p, dtype=np.float64).reshape(-1)
    q = np.asarray(q, dtype=np.float64).reshape(-1)
    d = q - p
    L2 = float(d @ d)
    if L2 == 0.0:
        raise ValueError("segment endpoints coincide")
    m = p.size

    def member(P):
        t = ((P - p) @ d) / L2
        tc = np.clip(t, 0.0, 1.0)
        proj = p[None, :] + tc[:, None] * d[None, :]
        return np.sum((P - proj) ** 2, axis=1) <= atol * atol

    return ImplicitSet(m=m, membership=member, label=label or f"segment(m={m})")


def empty_set(m: int) -> ImplicitSet:
    return ImplicitSet(
        m=m,
        membership=lambda P: np.zeros(P.shape[0], dtype=bool),
        convex=True,
        section_rule=lambda spec: empty_set(spec.k),
        label="empty",
    )


def full_set(m: int) -> ImplicitSet:
    return ImplicitSet(
        m=m,
        membership=lambda P: np.ones(P.shape[0], dtype=bool),
        convex=True,
        section_rule=lambda spec: full_set(spec.k),
        label="full",
    )


def complement(A: ImplicitSet) -> ImplicitSet:
    # Same boundary, flipped orientation; convexity does not survive.
    charts = None
    if A.charts:
        charts = tuple(
            replace(ch, outward_normal=(lambda P, f=ch.outward_normal: -f(P)))
            for ch in A.charts
        )
    normal = None
    if A.normal_field is not None:
        normal = lambda P, f=A.normal_field: -f(P)
    rule = None
    if A.section_rule is not None:
        rule = lambda spec, r=A.section_rule: complement(r(spec))
    return ImplicitSet(
        m=A.m,
        membership=lambda P, f=A.membership: ~np.asarray(f(P), dtype=bool),
        convex=False,
        charts=charts,
        normal_field=normal,
        vertices=A.vertices,
        section_rule=rule,
        label=f"not({A.label})",
    )


def union(A: ImplicitSet, B: ImplicitSet) -> ImplicitSet:
    if A.m != B.m:
        raise ValueError("union: dimension mismatch")
    rule = None
    if A.section_rule is not None and B.section_rule is not None:
        rule = lambda spec: union(A.section_rule(spec), B.section_rule(spec))
    return ImplicitSet(
        m=A.m,
        membership=lambda P: np.asarray(A.membership(P), bool)
        | np.asarray(B.membership(P), bool),
        section_rule=rule,
        label=f"union({A.label},{B.label})",
    )


def intersection(A: ImplicitSet, B: ImplicitSet) -> ImplicitSet:
    if A.m != B.m:
        raise ValueError("intersection: dimension mismatch")
    rule = None
    if A.section_rule is not None and B.section_rule is not None:
        rule = lambda spec: intersection(A.section_rule(spec), B.section_rule(spec))
    return ImplicitSet(
        m=A.m,
        membership=lambda P: np.asarray(A.membership(P), bool)
        & np.asarray(B.membership(P), bool),
        convex=A.convex and B.convex,
        section_rule=rule,
        label=f"isect({A.label},{B.label})",
    )


def section(A: ImplicitSet, spec: SectionSpec) -> ImplicitSet:
    """The head slice {x in R^k : (x, tail) in A}."""
    k = spec.k
    if not (1 <= k <= A.m) or spec.tail.size != A.m - k:
        raise ValueError("section: bad head dimension or tail size")
    if k == A.m:
        return A
    if A.section_rule is not None:
        return A.section_rule(spec)
    tail = spec.tail

    def member(X):
        X = np.atleast_2d(X)
        full = np.empty((X.shape[0], A.m))
        full[:, :k] = X
        full[:, k:] = tail
        return A.membership(full)

    return ImplicitSet(m=k, membership=member, convex=A.convex, label=f"{A.label}|section")
