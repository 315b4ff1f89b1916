"""Spin-1 particle in a homogeneous magnetic field: exact spectra and states.

Solver-and-verifier for the quantized Landau levels of a first-order
(DKP-type) spin-1 wave equation, including the generalized particle with an
intrinsic polarizability coupling.  The package computes the energy spectra
of the three solution branches, reconstructs the full 10- or 15-component
radial wavefunctions, and certifies them numerically against the first- and
second-order radial systems.
"""

from .spectra import (
    Branch,
    PhysicalParams,
    SpectrumEntry,
    full_spectrum_table,
    lambda2_quantized,
    ordinary_branch_energy,
    polarizable_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "Branch",
    "PhysicalParams",
    "SpectrumEntry",
    "full_spectrum_table",
    "lambda2_quantized",
    "ordinary_branch_energy",
    "polarizable_spectrum",
    "__version__",
]
