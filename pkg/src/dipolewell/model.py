"""Physical configuration of the dipole-in-a-field problem and derived parameters.

A neutral atom with polarizability alpha sits in the radial electric field
E = lambda/r of a uniformly charged non-conducting cylinder of radius R.
The induced dipole energy is the attractive inverse-square potential
-alpha*lambda^2/r^2; a two-dimensional harmonic trap of frequency omega is
superimposed, and the region r < R is forbidden (hard wall).  Natural units
hbar = c = 1 throughout; energies are reported in the same units as the
inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, ForbiddenRegion, NoBoundStateRegime

CONFIG_KEYS = ("mass", "alpha", "lambda", "omega", "radius", "ell", "pz")


@dataclass(frozen=True)
class PhysicalParams:
    """Inputs of the physical problem.

    mass_m                particle mass (> 0)
    polarizability_alpha  atomic polarizability (> 0)
    field_coupling_lambda field strength constant lambda in E = lambda/r (> 0)
    omega                 trap angular frequency (>= 0; 0 disables the trap)
    cutoff_R              hard-wall cylinder radius (> 0)
    ell                   angular momentum quantum number (integer)
    p_z                   axial momentum eigenvalue (enters as a rigid
                          energy shift p_z^2/(2m))
    """

    mass_m: float
    polarizability_alpha: float
    field_coupling_lambda: float
    omega: float
    cutoff_R: float
    ell: int = 0
    p_z: float = 0.0

    def __post_init__(self) -> None:
        for name in ("mass_m", "polarizability_alpha", "field_coupling_lambda", "cutoff_R"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be strictly positive")
        if self.omega < 0:
            raise DomainError("omega must be >= 0")
        if not isinstance(self.ell, int):
            raise DomainError("ell must be an integer")

    @property
    def coupling_strength(self) -> float:
        """2 m alpha lambda^2, the dimensionless inverse-square strength."""
        return 2.0 * self.mass_m * self.polarizability_alpha * self.field_coupling_lambda**2

    @property
    def energy_shift(self) -> float:
        return self.p_z**2 / (2.0 * self.mass_m)


@dataclass(frozen=True)
class DerivedParams:
    """Dimensionless parameters of the radial problem.

    Lambda          sqrt(2 m alpha lambda^2 - ell^2)  (> 0 in the bound regime)
    mu              Lambda / 2, the imaginary order of the Whittaker functions
    x0              m omega R^2, the cut-off in the oscillator variable x = m omega r^2
    energy_shift_pz p_z^2/(2m), rigid additive offset of every level
    """

    Lambda: float
    mu: float
    x0: float
    energy_shift_pz: float


def lambda_from_charge(rho: float, R: float, epsilon0: float) -> float:
    """Field constant lambda = rho R^2 / (2 epsilon0) of the charged cylinder."""
    if rho <= 0 or R <= 0 or epsilon0 <= 0:
        raise DomainError("lambda_from_charge requires positive rho, R, epsilon0")
    return rho * R * R / (2.0 * epsilon0)


def derive(params: PhysicalParams) -> DerivedParams:
    """Derive (Lambda, mu, x0, shift) from the physical inputs.

    Raises NoBoundStateRegime when ell^2 >= 2 m alpha lambda^2, where the
    imaginary-order solution family (and the closed-form spectrum) ceases
    to exist.  The boundary ell^2 == 2 m alpha lambda^2 is rejected too:
    Lambda = 0 degenerates the order.
    """
    strength = params.coupling_strength
    lam_sq = strength - float(params.ell) ** 2
    if lam_sq <= 0:
        raise NoBoundStateRegime(
            f"ell^2 = {params.ell**2} >= 2*m*alpha*lambda^2 = {strength:.6g}: "
            "no imaginary-order bound-state family (need ell^2 < 2*m*alpha*lambda^2)"
        )
    Lambda = math.sqrt(lam_sq)
    x0 = params.mass_m * params.omega * params.cutoff_R**2
    return DerivedParams(Lambda, 0.5 * Lambda, x0, params.energy_shift)


def effective_potential(
    params: PhysicalParams, r: float, *, include_centrifugal: bool = False
) -> float:
    """Effective radial potential -alpha lambda^2/r^2 + m omega^2 r^2 / 2.

    With include_centrifugal=True the quantum centrifugal term
    ell^2/(2 m r^2) is added.  r < cutoff_R raises ForbiddenRegion.
    """
    if r < params.cutoff_R:
        raise ForbiddenRegion(f"r = {r} < cutoff radius R = {params.cutoff_R}")
    inv_sq = -params.polarizability_alpha * params.field_coupling_lambda**2
    if include_centrifugal:
        inv_sq += float(params.ell) ** 2 / (2.0 * params.mass_m)
    return inv_sq / (r * r) + 0.5 * params.mass_m * params.omega**2 * r * r


@dataclass(frozen=True)
class KappaMap:
    """Affine maps between energy E and the Whittaker parameters.

        kappa = (E - shift) / (2 omega),   beta = 1/2 - kappa,
        E     = 2 omega kappa + shift      (tau = 2 m (E - shift) = 4 m omega kappa)

    Defined only for omega > 0; the static omega = 0 problem has no
    oscillator variable and is handled by the numeric oracle alone.
    """

    omega: float
    mass_m: float
    energy_shift: float = 0.0

    def __post_init__(self) -> None:
        if self.omega <= 0:
            raise DomainError("KappaMap requires omega > 0")
        if self.mass_m <= 0:
            raise DomainError("KappaMap requires mass_m > 0")

    @classmethod
    def from_params(cls, params: PhysicalParams) -> "KappaMap":
        return cls(params.omega, params.mass_m, params.energy_shift)

    def kappa_of_energy(self, energy: float) -> float:
        return (energy - self.energy_shift) / (2.0 * self.omega)

    def energy_of_kappa(self, kappa: float) -> float:
        return 2.0 * self.omega * kappa + self.energy_shift

    def beta_of_kappa(self, kappa: float) -> float:
        return 0.5 - kappa

    def kappa_of_beta(self, beta: float) -> float:
        return 0.5 - beta

    def tau_of_energy(self, energy: float) -> float:
        return 2.0 * self.mass_m * (energy - self.energy_shift)

    def energy_of_tau(self, tau: float) -> float:
        return tau / (2.0 * self.mass_m) + self.energy_shift


def parse_config_text(text: str) -> dict[str, float]:
    """Parse the flat ``key = value`` configuration format.

    Lines are UTF-8, ``#`` starts a comment, blank lines are ignored.
    Recognized keys: mass, alpha, lambda, omega, radius, ell, pz.
    """
    out: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip().lower()
        if key not in CONFIG_KEYS:
            raise DomainError(f"config line {lineno}: unknown key {key!r}")
        try:
            out[key] = float(val.strip())
        except ValueError as exc:
            raise DomainError(f"config line {lineno}: bad number {val.strip()!r}") from exc
    return out


def params_from_mapping(values: dict[str, float]) -> PhysicalParams:
    """Build PhysicalParams from config-file / CLI keys (missing pz -> 0)."""
    missing = [k for k in ("mass", "alpha", "lambda", "omega", "radius") if k not in values]
    if missing:
        raise DomainError(f"missing required parameter(s): {', '.join(missing)}")
    ell = values.get("ell", 0.0)
    if abs(ell - round(ell)) > 0:
        raise DomainError(f"ell must be an integer, got {ell}")
    return PhysicalParams(
        mass_m=values["mass"],
        polarizability_alpha=values["alpha"],
        field_coupling_lambda=values["lambda"],
        omega=values["omega"],
        cutoff_R=values["radius"],
        ell=int(round(ell)),
        p_z=values.get("pz", 0.0),
    )
