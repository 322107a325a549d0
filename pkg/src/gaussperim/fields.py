"""Polynomial test vector fields with exact norm control.

A TestField stores Hermite-basis coefficients for K active components (the
field maps R^m into span(e_1..e_K), K = m unless restricted). Two norm
control modes:

  "squash" : evaluation returns s(|G|) G with s(r) = (1 + r^p)^(-1/p),
             which is smooth and keeps |field| < 1 everywhere. Its
             divergence-star is evaluated exactly through the chain rule.
  "none"   : the raw polynomial field. Admissibility is then the caller's
             promise and is checked empirically where required.

divergence_star(z) = -div G(z) + <G(z), z> in both modes, exact in both
(closed-form Hermite recurrences, no numerical differentiation).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import backend as K
from .hermite import multi_indices, n_basis

ADMISSIBLE_SLACK = 1e-12


@dataclass(frozen=True)
class TestField:
    __test__ = False  # not a pytest class, despite the name

    m: int
    degree: int
    coef: np.ndarray  # (n_components, NB)
    norm_control: str = "squash"
    p: int = 8

    def __post_init__(self):
        if self.norm_control not in ("squash", "none"):
            raise ValueError(f"unknown norm_control {self.norm_control!r}")
        if self.norm_control == "squash" and (self.p < 4 or self.p % 2):
            raise ValueError("squash power must be an even integer >= 4")
        coef = np.ascontiguousarray(self.coef, dtype=np.float64)
        nb = n_basis(self.m, self.degree)
        if coef.ndim != 2 or coef.shape[1] != nb or not (1 <= coef.shape[0] <= self.m):
            raise ValueError(
                f"coef must be (K, {nb}) with 1 <= K <= {self.m}, got {coef.shape}"
            )
        object.__setattr__(self, "coef", coef)
        object.__setattr__(self, "_midx", multi_indices(self.m, self.degree))

    @property
    def n_components(self) -> int:
        return self.coef.shape[0]

    @classmethod
    def zeros(cls, m, degree, n_components=None, norm_control="squash"):
        k = m if n_components is None else n_components
        return cls(m, degree, np.zeros((k, n_basis(m, degree))), norm_control)

    @classmethod
    def constant(cls, vec, norm_control="none"):
        """Constant field G(z) = vec (degree 0)."""
        vec = np.asarray(vec, dtype=np.float64).reshape(-1)
        m = vec.size
        coef = vec[:, None].copy()
        return cls(m, 0, coef, norm_control)

    @classmethod
    def linear(cls, const, lin, norm_control="squash"):
        """Degree-1 field G_a(z) = const[a] + sum_j lin[a, j] z_j."""
        const = np.asarray(const, dtype=np.float64).reshape(-1)
        lin = np.asarray(lin, dtype=np.float64)
        kc, m = lin.shape
        if const.size != kc:
            raise ValueError("linear: const/lin shape mismatch")
        midx = multi_indices(m, 1)
        coef = np.zeros((kc, midx.shape[0]))
        for b, alpha in enumerate(midx):
            s = int(alpha.sum())
            if s == 0:
                coef[:, b] = const
            else:
                j = int(np.argmax(alpha))
                coef[:, b] = lin[:, j]
        return cls(m, 1, coef, norm_control)

    def _points(self, Z):
        Z = np.ascontiguousarray(np.atleast_2d(np.asarray(Z, dtype=np.float64)))
        if Z.shape[1] != self.m:
            raise ValueError("field evaluation: dimension mismatch")
        return Z

    def _tables(self, Z):
        return K.hermite_tables(Z, self.degree + 1)

    def values(self, Z) -> np.ndarray:
        """Field values, zero-padded to full m-vectors: (n, m)."""
        Z = self._points(Z)
        G = K.field_values(self._tables(Z), self._midx, self.coef)
        if self.norm_control == "squash":
            r = np.sqrt(np.sum(G * G, axis=1))
            G = G * ((1.0 + r**self.p) ** (-1.0 / self.p))[:, None]
        out = np.zeros((Z.shape[0], self.m))
        out[:, : self.n_components] = G
        return out

    def divergence_star(self, Z) -> np.ndarray:
        Z = self._points(Z)
        T = self._tables(Z)
        if self.norm_control == "squash":
            return K.squash_divstar(T, self._midx, self.coef, Z, self.p)
        return K.raw_divstar(T, self._midx, self.coef)

    def sup_norm(self, Z) -> float:
        vals = self.values(Z)
        return float(np.sqrt(np.sum(vals * vals, axis=1)).max())

    def raw_sup_norm(self, Z) -> float:
        Z = self._points(Z)
        G = K.field_values(self._tables(Z), self._midx, self.coef)
        return float(np.sqrt(np.sum(G * G, axis=1)).max())

    def scaled(self, lam: float) -> "TestField":
        return replace(self, coef=self.coef * float(lam))

    def check_admissible(self, Z) -> bool:
        """sup |G| <= 1 + slack over the batch (structural for squash)."""
        if self.norm_control == "squash":
            return True
        return self.sup_norm(Z) <= 1.0 + ADMISSIBLE_SLACK
