"""Bound states of an induced electric dipole in an inverse-square potential
with harmonic confinement and a hard-wall cut-off.

Three independent routes to the spectrum:

* closed-form geometric ladder (`spectrum.energy_levels_asymptotic`),
* exact quantization of the Whittaker-W boundary condition
  (`spectrum.quantize_exact`),
* direct finite-difference eigensolve (`oracle.fd_eigensolve`).
"""

from .errors import (
    AccuracyLoss,
    BracketError,
    ConvergenceError,
    DipoleWellError,
    DomainError,
    ForbiddenRegion,
    GridTooCoarse,
    NoBoundStateRegime,
    ParameterPole,
    PoleError,
    RegimeError,
    StepTooLarge,
)
from .model import (
    DerivedParams,
    KappaMap,
    PhysicalParams,
    derive,
    effective_potential,
    lambda_from_charge,
)
from .oracle import (
    GridScheme,
    OracleResult,
    RadialGridSpec,
    fd_eigensolve,
    numerov_node_count,
    sturm_tridiag_eigs,
)
from .special import (
    SmallXApprox,
    gamma_stirling_imag,
    gamma_uniform_asymptotic,
    kummer_m,
    ln_gamma_complex,
    whittaker_m_imag,
    whittaker_w_imag,
    whittaker_w_scaled,
    whittaker_w_smallx_approx,
)
from .spectrum import (
    EnergyLevel,
    RadialProfile,
    Route,
    binding_energy,
    energy_levels_asymptotic,
    energy_levels_s_wave,
    quantize_exact,
    radial_wavefunction,
    x0_branch,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyLoss", "BracketError", "ConvergenceError", "DipoleWellError",
    "DomainError", "ForbiddenRegion", "GridTooCoarse", "NoBoundStateRegime",
    "ParameterPole", "PoleError", "RegimeError", "StepTooLarge",
    "DerivedParams", "KappaMap", "PhysicalParams", "derive",
    "effective_potential", "lambda_from_charge",
    "GridScheme", "OracleResult", "RadialGridSpec", "fd_eigensolve",
    "numerov_node_count", "sturm_tridiag_eigs",
    "SmallXApprox", "gamma_stirling_imag", "gamma_uniform_asymptotic",
    "kummer_m", "ln_gamma_complex", "whittaker_m_imag", "whittaker_w_imag",
    "whittaker_w_scaled", "whittaker_w_smallx_approx",
    "EnergyLevel", "RadialProfile", "Route", "binding_energy",
    "energy_levels_asymptotic", "energy_levels_s_wave", "quantize_exact",
    "radial_wavefunction", "x0_branch",
    "__version__",
]
