"""Exact algebra on Gaussian-enveloped radial functions.

Every closed-form object in this package is a finite sum

    f(r) = sum_k  c_k * r**p_k * exp(-b r^2 / 2) * P_k(b r^2)

with integer powers p_k (possibly negative) and polynomials P_k in the
dimensionless variable x = b r^2.  The family is closed under d/dr, under
both first-order ladder operators

    a_m = (1/sqrt(2)) ( d/dr + (m + b r^2)/r )
    b_m = (1/sqrt(2)) (-d/dr + (m + b r^2)/r )

and under the radial Laplacian

    lap_m = d^2/dr^2 + (1/r) d/dr - (m + b r^2)^2 / r^2 ,

so operator identities and equation residuals can be evaluated to rounding
accuracy without finite differences.  This is the "analytic path"; sampled
profiles without a closed form fall back to the finite-difference path in
:mod:`dkp_landau.grids`.

The ladder images follow from the single differentiation rule

    d/dr [ r^p e^{-x/2} P(x) ] = r^{p-1} e^{-x/2} [ p P - x P + 2 x P' ]

which keeps everything inside the family.
"""

from __future__ import annotations

from typing import Dict, Iterable, Tuple

import numpy as np
from numpy.polynomial import polynomial as npoly

SQRT2 = np.sqrt(2.0)


def _trim(coeffs) -> np.ndarray:
    c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    nz = np.nonzero(c)[0]
    if nz.size == 0:
        return np.zeros(1, dtype=complex)
    return np.array(c[: nz[-1] + 1], dtype=complex)


def _shift(coeffs: np.ndarray) -> np.ndarray:
    """Multiply a polynomial in x by x (ascending coefficients)."""
    return np.concatenate([np.zeros(1, dtype=complex), coeffs])


class GaussPoly:
    """A finite sum of terms c * r**p * exp(-b r^2/2) * P(b r^2).

    Immutable by convention; all operations return new instances.  Terms are
    stored as a mapping {power p -> ascending coefficient array of P}.
    """

    __slots__ = ("b_field", "terms")

    def __init__(self, b_field: float, terms: Dict[int, np.ndarray] | None = None):
        if b_field <= 0:
            raise ValueError("b_field must be positive")
        self.b_field = float(b_field)
        clean: Dict[int, np.ndarray] = {}
        for p, c in (terms or {}).items():
            c = _trim(c)
            if c.size == 1 and c[0] == 0:
                continue
            clean[int(p)] = c
        self.terms = clean

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zero(cls, b_field: float) -> "GaussPoly":
        return cls(b_field, {})

    @classmethod
    def term(cls, b_field: float, coef: complex, power: int, poly: Iterable[complex] = (1.0,)) -> "GaussPoly":
        c = _trim(poly) * complex(coef)
        return cls(b_field, {int(power): c})

    @classmethod
    def gaussian(cls, b_field: float) -> "GaussPoly":
        """exp(-b r^2 / 2)."""
        return cls.term(b_field, 1.0, 0)

    # ------------------------------------------------------------------
    # algebra

    def _check_b(self, other: "GaussPoly") -> None:
        if abs(other.b_field - self.b_field) > 0:
            raise ValueError("cannot combine functions with different field strengths")

    def __add__(self, other: "GaussPoly") -> "GaussPoly":
        self._check_b(other)
        terms = {p: c.copy() for p, c in self.terms.items()}
        for p, c in other.terms.items():
            if p in terms:
                terms[p] = npoly.polyadd(terms[p], c)
            else:
                terms[p] = c
        return GaussPoly(self.b_field, terms)

    def __neg__(self) -> "GaussPoly":
        return GaussPoly(self.b_field, {p: -c for p, c in self.terms.items()})

    def __sub__(self, other: "GaussPoly") -> "GaussPoly":
        return self + (-other)

    def __mul__(self, scalar: complex) -> "GaussPoly":
        s = complex(scalar)
        return GaussPoly(self.b_field, {p: c * s for p, c in self.terms.items()})

    __rmul__ = __mul__

    def shift_power(self, k: int) -> "GaussPoly":
        """Multiply by r**k."""
        return GaussPoly(self.b_field, {p + k: c for p, c in self.terms.items()})

    def mul_poly(self, poly: Iterable[complex]) -> "GaussPoly":
        """Multiply by a polynomial in x = b r^2."""
        q = _trim(poly)
        return GaussPoly(self.b_field, {p: npoly.polymul(c, q) for p, c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def max_coeff(self) -> float:
        if not self.terms:
            return 0.0
        return max(float(np.max(np.abs(c))) for c in self.terms.values())

    # ------------------------------------------------------------------
    # calculus

    def derivative(self) -> "GaussPoly":
        out = GaussPoly.zero(self.b_field)
        for p, c in self.terms.items():
            dpoly = npoly.polyadd(p * c, _shift(npoly.polyadd(2.0 * npoly.polyder(c), -c)))
            out = out + GaussPoly(self.b_field, {p - 1: _trim(dpoly)})
        return out

    def apply_a(self, m: int) -> "GaussPoly":
        """Image under a_m = (1/sqrt2)(d/dr + (m + b r^2)/r)."""
        out = GaussPoly.zero(self.b_field)
        for p, c in self.terms.items():
            q = npoly.polyadd((p + m) * c, _shift(2.0 * npoly.polyder(c)))
            out = out + GaussPoly(self.b_field, {p - 1: _trim(q / SQRT2)})
        return out

    def apply_b(self, m: int) -> "GaussPoly":
        """Image under b_m = (1/sqrt2)(-d/dr + (m + b r^2)/r)."""
        out = GaussPoly.zero(self.b_field)
        for p, c in self.terms.items():
            q = npoly.polyadd((m - p) * c, _shift(npoly.polyadd(2.0 * c, -2.0 * npoly.polyder(c))))
            out = out + GaussPoly(self.b_field, {p - 1: _trim(q / SQRT2)})
        return out

    def laplacian(self, m: int) -> "GaussPoly":
        """Expanded radial Laplacian f'' + f'/r - ((m + b r^2)/r)^2 f."""
        d1 = self.derivative()
        out = d1.derivative() + d1.shift_power(-1)
        out = out + self.shift_power(-2).mul_poly([-float(m) * m, -2.0 * m, -1.0])
        return out

    # ------------------------------------------------------------------
    # evaluation

    def __call__(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        x = self.b_field * r * r
        env = np.exp(-0.5 * x)
        out = np.zeros(r.shape, dtype=complex)
        for p, c in self.terms.items():
            out += npoly.polyval(x, c) * np.power(r, p)
        return out * env

    def __repr__(self) -> str:  # pragma: no cover
        parts = [f"r^{p}*P{len(c) - 1}(x)" for p, c in sorted(self.terms.items())]
        return f"GaussPoly(b={self.b_field}, {' + '.join(parts) or '0'})"
