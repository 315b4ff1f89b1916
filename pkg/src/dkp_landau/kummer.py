"""Confluent hypergeometric machinery and the exact radial eigenfunctions.

The separated radial equation becomes, in x = B r^2, the Kummer equation
x Y'' + (gamma - x) Y' - alpha Y = 0 with

    alpha = |m|/2 + 1/2 + m/2 - lam2/(4B),     gamma = |m| + 1 ,

and terminating series (alpha = -n) give the normalizable solutions

    phi_{n,m}(r) = (B r^2)^{|m|/2} e^{-B r^2/2} M(-n, |m|+1; B r^2).

The regular power |m|/2 is selected throughout; the x^{-|m|/2} solution is
never square integrable at the origin.

Ladder actions map eigenfunctions to eigenfunctions:

    a_m phi_{n,m} = sqrt(2B) m phi_{n,m-1}                     (m >= 1)
    a_m phi_{n,m} = -sqrt(2B) n/(|m|+1) phi_{n-1,m-1}          (m <= 0)
    b_m phi_{n,m} = sqrt(2B) (n+m+1)/(m+1) phi_{n,m+1}         (m >= 0)
    b_m phi_{n,m} = -sqrt(2B) |m| phi_{n+1,m+1}                (m <= -1)

These follow from the standard contiguous relations of M (equivalently the
associated-Laguerre ladder identities) and are unit-tested against the
exact polynomial algebra.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .analytic import GaussPoly
from .exceptions import KummerPoleError, NormalizationError, SeriesConvergenceError
from .grids import RadialGrid, RadialProfile
from .spectra import lambda2_quantized

SERIES_CAP = 500
SERIES_RTOL = 1e-17


@dataclass(frozen=True)
class KummerParams:
    alpha: float
    gamma_c: float

    @property
    def is_polynomial(self) -> bool:
        return self.alpha <= 0 and self.alpha == round(self.alpha)


def kummer_poly_coeffs(n: int, gamma_c: float) -> np.ndarray:
    """Ascending coefficients of the terminating series M(-n, gamma_c; x)."""
    coeffs = np.zeros(n + 1)
    c = 1.0
    coeffs[0] = c
    for j in range(n):
        c *= (-n + j) / ((gamma_c + j) * (j + 1))
        coeffs[j + 1] = c
    return coeffs


def kummer_m(params: KummerParams, x):
    """M(alpha, gamma; x) by terminating polynomial or power series.

    The series stops once three successive terms are each below
    SERIES_RTOL of the partial sum; more than SERIES_CAP terms raises.
    """
    g = params.gamma_c
    if g <= 0 and g == round(g):
        raise KummerPoleError(f"gamma = {g} is a non-positive integer")
    x = np.asarray(x, dtype=float)
    if params.is_polynomial:
        n = int(round(-params.alpha))
        return np.polynomial.polynomial.polyval(x, kummer_poly_coeffs(n, g))

    total = np.ones_like(x)
    term = np.ones_like(x)
    small_streak = 0
    for j in range(SERIES_CAP):
        term = term * (params.alpha + j) / ((g + j) * (j + 1)) * x
        total = total + term
        if np.all(np.abs(term) < SERIES_RTOL * np.maximum(np.abs(total), 1e-300)):
            small_streak += 1
            if small_streak >= 3:
                return total if total.shape else float(total)
        else:
            small_streak = 0
    raise SeriesConvergenceError(f"no convergence after {SERIES_CAP} terms (alpha={params.alpha}, x up to {float(np.max(x))})")


def eigen_closed_form(n: int, m: int, b_field: float) -> GaussPoly:
    """Closed form of phi_{n,m} = x^{|m|/2} e^{-x/2} M(-n, |m|+1; x)."""
    am = abs(m)
    return GaussPoly.term(b_field, b_field ** (am / 2.0), am, kummer_poly_coeffs(n, am + 1))


@dataclass(frozen=True)
class RadialEigenfunction:
    n: int
    m: int
    b_field: float
    lambda2: float
    profile: RadialProfile

    @property
    def closed_form(self) -> GaussPoly:
        return self.profile.closed_form


def build_eigenfunction(n: int, m: int, b_field: float, grid: RadialGrid) -> RadialEigenfunction:
    if n < 0:
        raise ValueError("n must be >= 0")
    cf = eigen_closed_form(n, m, b_field)
    profile = RadialProfile.from_closed_form(grid, cf, m_index=m)
    return RadialEigenfunction(n, m, b_field, lambda2_quantized(n, m, b_field), profile)


def normalize(eig: RadialEigenfunction) -> RadialEigenfunction:
    """Scale so that Integral |phi|^2 r dr = 1 (cylindrical radial measure)."""
    vals = eig.profile.values
    peak = float(np.max(np.abs(vals)))
    if peak == 0.0:
        raise NormalizationError("cannot normalize a zero profile")
    if float(np.abs(vals[-1])) > 1e-12 * peak:
        warnings.warn("profile tail above 1e-12 of peak at r_max; norm is truncated",
                      RuntimeWarning, stacklevel=2)
    norm2 = eig.profile.grid.integrate(np.abs(vals) ** 2).real
    if norm2 <= 0.0:
        raise NormalizationError("non-positive norm")
    scale = 1.0 / math.sqrt(norm2)
    cf = eig.profile.closed_form * scale if eig.profile.closed_form is not None else None
    prof = RadialProfile(eig.profile.grid, vals * scale, eig.m, cf)
    return RadialEigenfunction(eig.n, eig.m, eig.b_field, eig.lambda2, prof)


def ladder_shift_a(n: int, m: int, b_field: float) -> Tuple[float, int, int]:
    """(coeff, n', m') with a_m phi_{n,m} = coeff * phi_{n',m'}; coeff may be 0."""
    s = math.sqrt(2.0 * b_field)
    if m >= 1:
        return s * m, n, m - 1
    if n == 0:
        return 0.0, 0, m - 1
    return -s * n / (abs(m) + 1), n - 1, m - 1


def ladder_shift_b(n: int, m: int, b_field: float) -> Tuple[float, int, int]:
    """(coeff, n', m') with b_m phi_{n,m} = coeff * phi_{n',m'}."""
    s = math.sqrt(2.0 * b_field)
    if m >= 0:
        return s * (n + m + 1) / (m + 1), n, m + 1
    return -s * abs(m), n + 1, m + 1


def inverse_b_closed_form(m: int, n: int, b_field: float, coeff: complex) -> GaussPoly:
    """Closed-form decaying solution of b_{m-1} phi = coeff * phi_{n,m}.

    Away from the degenerate level this is a multiple of a_m phi_{n,m}
    (composition eigenvalue (lam2 - 2B)/2).  At the degenerate level
    (n = 0, m <= 0, lam2 = 2B) the a-image vanishes and the integrating
    factor yields the incomplete-gamma form

        phi = coeff |m|! / (sqrt2 B^{|m|/2+1}) r^{-(|m|+1)} e^{-B r^2/2}
              * sum_{j<=|m|} x^j / j!

    which is singular at the origin; that is the exact decaying solution.
    """
    lam2 = lambda2_quantized(n, m, b_field)
    gap = lam2 - 2.0 * b_field
    if abs(gap) > 1e-12 * max(1.0, lam2):
        c, n2, m2 = ladder_shift_a(n, m, b_field)
        return eigen_closed_form(n2, m2, b_field) * (2.0 * coeff * c / gap)
    q = abs(m)
    pref = coeff * math.factorial(q) / (math.sqrt(2.0) * b_field ** (q / 2.0 + 1.0))
    poly = np.array([1.0 / math.factorial(j) for j in range(q + 1)])
    return GaussPoly.term(b_field, pref, -(q + 1), poly)


def inverse_a_closed_form(m: int, n: int, b_field: float, coeff: complex) -> GaussPoly:
    """Closed-form solution of a_{m+1} phi = coeff * phi_{n,m} (always regular)."""
    lam2 = lambda2_quantized(n, m, b_field)
    c, n2, m2 = ladder_shift_b(n, m, b_field)
    return eigen_closed_form(n2, m2, b_field) * (2.0 * coeff * c / (lam2 + 2.0 * b_field))


def radial_equation_residual(eig: RadialEigenfunction, x_values: np.ndarray) -> float:
    """Relative residual of x phi'' + phi' - (m^2/4x + x/4 + m/2 - lam2/4B) phi.

    Derivatives are with respect to x and are evaluated exactly from the
    closed form; the residual is scaled by the largest participating term.
    """
    cf = eig.closed_form
    b = eig.b_field
    x = np.asarray(x_values, dtype=float)
    r = np.sqrt(x / b)
    d1 = cf.derivative()
    d2 = d1.derivative()
    phi = cf(r)
    phi_r = d1(r)
    phi_rr = d2(r)
    t1 = (phi_rr - phi_r / r) / (4.0 * b)          # x d2phi/dx2
    t2 = phi_r / (2.0 * b * r)                     # dphi/dx
    m = eig.m
    t3 = -(m * m / (4.0 * x) + x / 4.0 + m / 2.0 - eig.lambda2 / (4.0 * b)) * phi
    scale = max(float(np.max(np.abs(t1))), float(np.max(np.abs(t2))),
                float(np.max(np.abs(t3))), 1e-300)
    return float(np.max(np.abs(t1 + t2 + t3))) / scale
