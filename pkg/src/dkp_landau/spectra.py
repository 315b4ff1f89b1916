"""Quantized energy spectra for the three solution branches.

Ordinary particle (sigma = 0):

    SCALAR_F :  eps^2 = M^2 + k^2 + lam2
    G_PLUS   :  sqrt(eps^2 - k^2) = (+B + sqrt(B^2 + M^2 (M^2 + lam2))) / M
    G_MINUS  :  same with -B

where lam2 = 4B (n + 1/2 + (|m| + m)/2) is the Landau quantization of the
separated radial equation.  The two G branches diagonalize the 2x2 coupling
of the (g, G) pair; the scalar branch decouples completely.

Polarizable particle (sigma != 0): the coupling matrix picks up the derived
parameters gamma, beta, rho, alpha; energies come from a quadratic in
x = gamma - 1, and each root of the squared relation is validated against
the original unsquared relation and tagged with the sign it satisfies
(roots satisfying neither sign to tolerance are flagged as spurious).
The SCALAR_F branch is independent of sigma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from .exceptions import DegenerateCouplingError, DegenerateDenominatorError

#: relative tolerance for validating a root against the unsquared relation
UNSQUARED_RTOL = 1e-9


class Branch(Enum):
    SCALAR_F = "scalar_f"
    G_PLUS = "g_plus"
    G_MINUS = "g_minus"


@dataclass(frozen=True)
class PhysicalParams:
    """Inverse-length units throughout: mass = Mc/hbar, b_field = eB/(2 hbar)."""

    mass: float
    b_field: float
    k_z: float = 0.0
    sigma: float = 0.0

    def __post_init__(self):
        if self.mass <= 0:
            raise ValueError("mass must be positive")
        if self.b_field <= 0:
            raise ValueError("b_field must be positive")

    @property
    def beta(self) -> float:
        return self.sigma * 4.0 * self.b_field ** 2 / self.mass ** 2

    @property
    def rho(self) -> float:
        return 1.0 - 4.0 * self.b_field ** 2 * self.sigma ** 2 / self.mass ** 4

    @property
    def degenerate_denominator(self) -> bool:
        m4 = self.mass ** 4
        return abs(m4 - 4.0 * self.b_field ** 2 * self.sigma) <= 1e-14 * m4


@dataclass(frozen=True)
class PolarizableAux:
    """Derived couplings gamma, beta, rho, alpha = gamma*rho and x = gamma - 1."""

    gamma: float
    beta: float
    rho: float
    alpha: float
    x: float

    @classmethod
    def from_params(cls, p: PhysicalParams, eps2: float) -> "PolarizableAux":
        gamma = (eps2 - p.k_z ** 2) / p.mass ** 2
        return cls(gamma=gamma, beta=p.beta, rho=p.rho, alpha=gamma * p.rho, x=gamma - 1.0)


@dataclass(frozen=True)
class SpectrumEntry:
    """One quantized level with its root provenance and validity flags."""

    branch: Branch
    n: Optional[int]
    m: Optional[int]
    lambda2: float
    eps2: float
    eps: float
    root_sign: int = 0
    flags: Tuple[str, ...] = ()
    provenance: str = ""

    @property
    def ok(self) -> bool:
        return not self.flags


def lambda2_quantized(n: int, m: int, b_field: float) -> float:
    """Landau quantization 4B (n + 1/2 + (|m| + m)/2); m-independent for m <= 0."""
    if n < 0:
        raise ValueError("radial quantum number n must be >= 0")
    return 2.0 * b_field * (2 * n + 1 + abs(m) + m)


def ordinary_branch_energy(p: PhysicalParams, branch: Branch, lambda2: float,
                           n: Optional[int] = None, m: Optional[int] = None) -> SpectrumEntry:
    """Closed-form level of one branch for the ordinary (sigma = 0) particle."""
    if p.sigma != 0.0:
        raise ValueError("ordinary branch energies require sigma = 0")
    msq = p.mass ** 2
    ksq = p.k_z ** 2
    flags: Tuple[str, ...] = ()
    if branch is Branch.SCALAR_F:
        eps2 = msq + ksq + lambda2
        sign = 0
        provenance = "scalar-branch closed form"
    else:
        sign = +1 if branch is Branch.G_PLUS else -1
        root = math.sqrt(p.b_field ** 2 + msq * (msq + lambda2))
        y = (sign * p.b_field + root) / p.mass
        if y <= 0.0:
            flags = ("sub_threshold",)
        eps2 = y * y + ksq
        provenance = f"coupled-branch closed form ({'+' if sign > 0 else '-'}B)"
    if eps2 < ksq - 1e-15 * max(1.0, ksq):
        flags = flags + ("sub_threshold",)
    eps = math.sqrt(eps2) if eps2 >= 0 else math.nan
    return SpectrumEntry(branch, n, m, lambda2, eps2, eps, sign, flags, provenance)


def coupling_matrix(p: PhysicalParams, eps2: float) -> np.ndarray:
    """2x2 matrix coupling the (g, G) pair at energy eps2.

    Reduces to [[0, 2iB], [-2iB*gamma, 0]] at sigma = 0.
    """
    if eps2 <= p.k_z ** 2:
        raise ValueError("eps2 must exceed k_z^2 (gamma > 0)")
    aux = PolarizableAux.from_params(p, eps2)
    tib = 2.0j * p.b_field
    return np.array([[aux.beta, tib], [-tib * aux.alpha, aux.beta * aux.gamma]], dtype=complex)


@dataclass(frozen=True)
class CouplingDiagonalization:
    s_matrix: np.ndarray
    eigenvalues: Tuple[complex, complex]


def coupling_eigenvalues(aux: PolarizableAux, b_field: float) -> Tuple[float, float]:
    """Closed-form eigenvalues; the sigma = 0 limit is +/- 2B sqrt(gamma)."""
    disc = aux.beta ** 2 * (1.0 - aux.gamma) ** 2 + 16.0 * b_field ** 2 * aux.rho * aux.gamma
    if disc < 0:
        raise DegenerateCouplingError("negative discriminant; eigenvalues not real")
    root = math.sqrt(disc)
    half = 0.5 * aux.beta * (1.0 + aux.gamma)
    return half + 0.5 * root, half - 0.5 * root


def diagonalize_coupling(matrix: np.ndarray, aux: PolarizableAux,
                         b_field: float) -> CouplingDiagonalization:
    """Rows of S are left eigenrows: S A S^-1 = diag(lam1, lam2).

    s_i1 = (lam_i - beta*gamma) / (2iB), s_i2 = 1.  At sigma = 0 this is
    rows (-i sqrt(gamma), 1) and (+i sqrt(gamma), 1).
    """
    lam1, lam2 = coupling_eigenvalues(aux, b_field)
    scale = max(abs(lam1), abs(lam2), 1.0)
    if abs(lam1 - lam2) <= 1e-13 * scale:
        raise DegenerateCouplingError("coincident coupling eigenvalues")
    tib = 2.0j * b_field
    s = np.array([[(lam1 - aux.beta * aux.gamma) / tib, 1.0],
                  [(lam2 - aux.beta * aux.gamma) / tib, 1.0]], dtype=complex)
    return CouplingDiagonalization(s, (lam1, lam2))


def unsquared_relation(p: PhysicalParams, lambda2: float, x: float) -> Tuple[float, float]:
    """(lhs, rhs) of the pre-squaring energy relation; rhs is nan if imaginary."""
    beta = p.beta
    msq = p.mass ** 2
    lhs = (2.0 * msq - beta) * x - 2.0 * (lambda2 + beta)
    rhs_sq = beta ** 2 * x * x + (16.0 * p.b_field ** 2 - 4.0 * beta ** 2) * (x + 1.0)
    rhs = math.sqrt(rhs_sq) if rhs_sq >= 0 else math.nan
    return lhs, rhs


def classify_root(p: PhysicalParams, lambda2: float, x: float) -> Tuple[int, float]:
    """Sign of the unsquared relation satisfied by x, and its relative residual."""
    lhs, rhs = unsquared_relation(p, lambda2, x)
    if math.isnan(rhs):
        return 0, math.inf
    scale = max(abs(lhs), abs(rhs), 1e-300)
    res_plus = abs(lhs - rhs) / scale
    res_minus = abs(lhs + rhs) / scale
    if res_plus <= UNSQUARED_RTOL and res_plus <= res_minus:
        return +1, res_plus
    if res_minus <= UNSQUARED_RTOL:
        return -1, res_minus
    return 0, min(res_plus, res_minus)


def _stable_quadratic_roots(a2: float, a1: float, a0: float) -> Tuple[float, float]:
    disc = a1 * a1 - 4.0 * a2 * a0
    if disc < 0:
        raise ValueError("negative discriminant")
    sq = math.sqrt(disc)
    q = -0.5 * (a1 + sq) if a1 >= 0 else -0.5 * (a1 - sq)
    if q == 0.0:
        return 0.0, 0.0
    x1, x2 = q / a2, a0 / q
    return (x1, x2) if x1 >= x2 else (x2, x1)


def polarizable_spectrum(p: PhysicalParams, lambda2: float,
                         n: Optional[int] = None, m: Optional[int] = None) -> List[SpectrumEntry]:
    """Both coupled-branch levels of the polarizable particle at one lam2.

    Solves the quadratic in x = gamma - 1,

        M^2 (M^2 - beta) x^2
        - [ (lam2 + beta)(2 M^2 - beta) + (4B^2 - beta^2) ] x
        + (lam2 + beta)^2 - (4B^2 - beta^2) = 0 ,

    maps each root to eps^2 = M^2 (x + 1) + k^2, validates it against the
    unsquared relation, and tags the satisfied sign (+ -> G_PLUS eigenline,
    - -> G_MINUS).  Complex or sub-threshold roots are retained as flagged
    diagnostics rather than dropped.
    """
    if p.degenerate_denominator:
        raise DegenerateDenominatorError("mass^4 == 4 B^2 sigma; quadratic degenerates")
    beta = p.beta
    msq = p.mass ** 2
    bsq = 4.0 * p.b_field ** 2 - beta ** 2
    lb = lambda2 + beta
    a2 = msq * (msq - beta)
    a1 = -(lb * (2.0 * msq - beta) + bsq)
    a0 = lb * lb - bsq
    disc = a1 * a1 - 4.0 * a2 * a0

    provenance = "polarizable quadratic"
    if disc < 0:
        out = []
        for br in (Branch.G_PLUS, Branch.G_MINUS):
            out.append(SpectrumEntry(br, n, m, lambda2, math.nan, math.nan, 0,
                                     ("evanescent",), provenance))
        return out

    entries: List[SpectrumEntry] = []
    for x in _stable_quadratic_roots(a2, a1, a0):
        sign, residual = classify_root(p, lambda2, x)
        eps2 = msq * (x + 1.0) + p.k_z ** 2
        flags: Tuple[str, ...] = ()
        if sign == 0:
            flags = ("spurious",)
        if eps2 < p.k_z ** 2 - 1e-15 * max(1.0, p.k_z ** 2):
            flags = flags + ("sub_threshold",)
        eps = math.sqrt(eps2) if eps2 >= 0 else math.nan
        if sign > 0:
            branch = Branch.G_PLUS
        elif sign < 0:
            branch = Branch.G_MINUS
        else:
            branch = Branch.G_PLUS if not entries else Branch.G_MINUS
        entries.append(SpectrumEntry(branch, n, m, lambda2, eps2, eps, sign, flags, provenance))
    return entries


def full_spectrum_table(p: PhysicalParams, n_max: int,
                        m_range: Tuple[int, int]) -> List[SpectrumEntry]:
    """All levels for n <= n_max and m_min <= m <= m_max, sorted by (branch, eps).

    Per-level failures become flagged entries; the scan never aborts.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    m_min, m_max = m_range
    entries: List[SpectrumEntry] = []
    ordinary = PhysicalParams(p.mass, p.b_field, p.k_z, 0.0)
    for n in range(n_max + 1):
        for m in range(m_min, m_max + 1):
            lam2 = lambda2_quantized(n, m, p.b_field)
            scalar = ordinary_branch_energy(ordinary, Branch.SCALAR_F, lam2, n, m)
            entries.append(scalar)
            if p.sigma == 0.0:
                entries.append(ordinary_branch_energy(p, Branch.G_PLUS, lam2, n, m))
                entries.append(ordinary_branch_energy(p, Branch.G_MINUS, lam2, n, m))
            else:
                try:
                    entries.extend(polarizable_spectrum(p, lam2, n, m))
                except DegenerateDenominatorError:
                    for br in (Branch.G_PLUS, Branch.G_MINUS):
                        entries.append(SpectrumEntry(br, n, m, lam2, math.nan, math.nan, 0,
                                                     ("degenerate_denominator",),
                                                     "polarizable quadratic"))
    order = {Branch.SCALAR_F: 0, Branch.G_PLUS: 1, Branch.G_MINUS: 2}

    def key(e: SpectrumEntry):
        eps = e.eps if math.isfinite(e.eps) else math.inf
        return (order[e.branch], eps, e.n, e.m)

    return sorted(entries, key=key)
