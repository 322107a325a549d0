"""Finite-dimensional standard Gaussian space: density, sampling, splits.

Sampling uses the Philox counter-based bit generator. A draw of `count`
points is assembled from fixed-size chunks, each chunk seeded by
SeedSequence((seed, chunk_index)), so the resulting array depends only on
(seed, count, m) and not on how the chunks are scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_SAMPLE_CHUNK = 65536


def _entropy(seed, tags):
    ent = [int(seed) & 0xFFFFFFFFFFFFFFFF]
    for t in tags:
        if isinstance(t, str):
            ent.append(int.from_bytes(t.encode()[:8].ljust(8, b"\0"), "little"))
        else:
            ent.append(int(t) & 0xFFFFFFFFFFFFFFFF)
    return ent


def derive_rng(seed, *tags) -> np.random.Generator:
    """Independent Philox stream keyed by a seed plus integer/string tags."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(_entropy(seed, tags))))


def derive_seed(seed, *tags) -> int:
    """Stable 63-bit subseed from a base seed and tags."""
    ss = np.random.SeedSequence(_entropy(seed, tags))
    return int(ss.generate_state(1, np.uint64)[0] >> 1)


def gauss_density(Z) -> np.ndarray:
    """Standard Gaussian density at each row of Z."""
    Z = np.atleast_2d(np.asarray(Z, dtype=np.float64))
    m = Z.shape[1]
    return (2.0 * np.pi) ** (-m / 2.0) * np.exp(-0.5 * np.sum(Z * Z, axis=1))


@dataclass(frozen=True)
class SampleBatch:
    points: np.ndarray  # (count, m)
    seed: int
    count: int


@dataclass(frozen=True)
class CoordinateSplit:
    """Split of R^m into head coordinates (first k) and tail (rest)."""

    m: int
    k: int

    def __post_init__(self):
        if not (0 <= self.k <= self.m):
            raise ValueError(f"split k={self.k} outside [0, {self.m}]")

    def head(self, Z):
        return np.atleast_2d(np.asarray(Z, dtype=np.float64))[:, : self.k]

    def tail(self, Z):
        return np.atleast_2d(np.asarray(Z, dtype=np.float64))[:, self.k :]

    def combine(self, X, y):
        """Assemble full points from head rows X (n, k) and one tail y."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        y = np.asarray(y, dtype=np.float64).reshape(-1)
        if X.shape[1] != self.k or y.size != self.m - self.k:
            raise ValueError("combine: dimension mismatch")
        out = np.empty((X.shape[0], self.m))
        out[:, : self.k] = X
        out[:, self.k :] = y
        return out


@dataclass(frozen=True)
class GaussianSpace:
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("dimension must be >= 1")

    def density(self, Z):
        Z = np.atleast_2d(np.asarray(Z, dtype=np.float64))
        if Z.shape[1] != self.m:
            raise ValueError("density: dimension mismatch")
        return gauss_density(Z)

    def sample(self, count: int, seed: int) -> SampleBatch:
        if count < 1:
            raise ValueError("sample: count must be >= 1")
        pts = np.empty((count, self.m))
        for ci, lo in enumerate(range(0, count, _SAMPLE_CHUNK)):
            hi = min(lo + _SAMPLE_CHUNK, count)
            rng = derive_rng(seed, ci)
            pts[lo:hi] = rng.standard_normal((hi - lo, self.m))
        return SampleBatch(points=pts, seed=int(seed), count=count)

    def split(self, k: int) -> CoordinateSplit:
        return CoordinateSplit(self.m, k)
