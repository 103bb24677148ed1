"""Bound-state energies by the two analytic routes, plus radial wavefunctions.

Route 1 (closed form): for small cut-off x0 = m omega R^2 the boundary
condition reduces to a cosine quantization whose branches nu = -n give

    E_n = omega + p_z^2/(2m)
          - (2 [2 m alpha lambda^2 - ell^2] / (m R^2))
            * exp(pi/(2 Lambda) - 2) * exp(-2 pi n / Lambda)

a geometric ladder with binding ratio exp(-2 pi / Lambda) between
consecutive levels.

Route 2 (exact quantization): the n-th energy is the root kappa_n of
W_{kappa, i mu}(x0) = 0 bracketed around the closed-form estimate and
bisected on the *scaled* W mantissa, so the search works even where W
itself underflows double precision.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import BracketError, DomainError
from .model import DerivedParams, KappaMap, PhysicalParams, derive
from .special import whittaker_w_scaled

X0_ADMISSIBLE_DEFAULT = 0.01
BETA_MIN_DEFAULT = 10.0


class Route(enum.Enum):
    """Which computation produced an energy level."""

    ASYMPTOTIC = "asymptotic"
    EXACT = "exact"
    ORACLE = "oracle"

    def __str__(self) -> str:  # CSV-friendly
        return self.value


@dataclass(frozen=True)
class RegimeFlags:
    """Validity indicators for one closed-form level.

    x0_admissible   the quantization-branch value x0 is < the smallness threshold
    beta_ok         beta_n = 1/2 - kappa_n exceeds the large-beta threshold
    """

    x0_admissible: bool
    beta_ok: bool

    @property
    def ok(self) -> bool:
        return self.x0_admissible and self.beta_ok

    def failures(self) -> list[str]:
        out = []
        if not self.x0_admissible:
            out.append("x0_admissible")
        if not self.beta_ok:
            out.append("beta_min")
        return out


@dataclass(frozen=True)
class EnergyLevel:
    """One bound state: level index n >= 1, energy, producing route.

    kappa is None when omega = 0 (the kappa map is undefined there).
    extra_sign_changes flags additional W sign changes seen inside the
    final bracket window of the exact route (reported, not interpreted).
    """

    n: int
    ell: int
    energy: float
    route: Route
    kappa: float | None
    est_error: float
    regime: RegimeFlags | None = None
    extra_sign_changes: int = 0


class X0Branch(NamedTuple):
    value: float
    admissible: bool


def x0_branch(
    derived: DerivedParams,
    beta: float,
    nu: int,
    *,
    admissible_below: float = X0_ADMISSIBLE_DEFAULT,
) -> X0Branch:
    """Cut-off value selected by the cosine quantization branch nu:

        x0 = (Lambda^2 / beta) exp(pi/(2 Lambda) - 2) exp(2 pi nu / Lambda)

    Successive branches differ by the exact factor exp(2 pi / Lambda).
    The admissible flag records x0 < admissible_below (the x0 << 1 regime,
    satisfied by nu = -n with n = 1, 2, ...).
    """
    if beta <= 0:
        raise DomainError("x0_branch requires beta > 0")
    lam = derived.Lambda
    value = (lam * lam / beta) * math.exp(
        math.pi / (2.0 * lam) - 2.0 + 2.0 * math.pi * nu / lam
    )
    return X0Branch(value, value < admissible_below)


def binding_energy(params: PhysicalParams, n: int) -> float:
    """Closed-form binding omega + shift - E_n (positive, R^-2 scaled):

        b_n = (2 Lambda^2 / (m R^2)) exp(pi/(2 Lambda) - 2) exp(-2 pi n / Lambda)

    Lambda^2 enters directly (not via sqrt-then-square) so the s-wave
    special case reduces to the same arithmetic bit for bit.
    """
    d = derive(params)
    lam = d.Lambda
    lam_sq = params.coupling_strength - float(params.ell) ** 2
    coef = 2.0 * lam_sq / (params.mass_m * params.cutoff_R**2)
    return coef * math.exp(math.pi / (2.0 * lam) - 2.0) * math.exp(-2.0 * math.pi * n / lam)


def _regime_flags(
    params: PhysicalParams, beta_n: float | None, x0_admissible: float, beta_min: float
) -> RegimeFlags:
    d = derive(params)
    x0_ok = d.x0 < x0_admissible
    beta_ok = True if beta_n is None else beta_n >= beta_min
    return RegimeFlags(x0_ok, beta_ok)


def energy_levels_asymptotic(
    params: PhysicalParams,
    n_max: int,
    *,
    x0_admissible: float = X0_ADMISSIBLE_DEFAULT,
    beta_min: float = BETA_MIN_DEFAULT,
) -> list[EnergyLevel]:
    """Closed-form levels n = 1..n_max (general ell), strictly increasing in n.

    Works for omega >= 0: omega enters only as an additive offset, so the
    omega = 0 limit is taken literally.  Each level carries regime flags
    instead of being silently dropped when it falls outside the validity
    domain.
    """
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    d = derive(params)
    shift = d.energy_shift_pz
    kmap = KappaMap.from_params(params) if params.omega > 0 else None
    levels = []
    for n in range(1, n_max + 1):
        b = binding_energy(params, n)
        energy = params.omega + shift - b
        kappa = None
        beta_n = None
        if kmap is not None:
            kappa = kmap.kappa_of_energy(energy)
            beta_n = kmap.beta_of_kappa(kappa)
        flags = _regime_flags(params, beta_n, x0_admissible, beta_min)
        # double rounding of the exp-ladder: ~couple of ulp on the binding
        est = 8.0 * np.finfo(float).eps * b
        levels.append(EnergyLevel(n, params.ell, energy, Route.ASYMPTOTIC, kappa, est, flags))
    return levels


def energy_levels_s_wave(params: PhysicalParams, n_max: int) -> list[EnergyLevel]:
    """Dedicated s-wave (ell = 0) closed form with prefactor 4 alpha lambda^2 / R^2.

    Algebraically identical to the general formula at ell = 0; kept as a
    separate arithmetic path so the reduction identity can be verified.
    """
    if params.ell != 0:
        raise DomainError("energy_levels_s_wave requires ell = 0")
    d = derive(params)
    lam = d.Lambda
    shift = d.energy_shift_pz
    coef = (
        4.0
        * params.polarizability_alpha
        * params.field_coupling_lambda**2
        / params.cutoff_R**2
    )
    kmap = KappaMap.from_params(params) if params.omega > 0 else None
    levels = []
    for n in range(1, n_max + 1):
        b = coef * math.exp(math.pi / (2.0 * lam) - 2.0) * math.exp(-2.0 * math.pi * n / lam)
        energy = params.omega + shift - b
        kappa = kmap.kappa_of_energy(energy) if kmap is not None else None
        est = 8.0 * np.finfo(float).eps * b
        levels.append(EnergyLevel(n, 0, energy, Route.ASYMPTOTIC, kappa, est, None))
    return levels


def _mantissa_at_beta(beta: float, mu: float, x0: float) -> float:
    return whittaker_w_scaled(0.5 - beta, mu, x0).mantissa


def quantize_exact(
    params: PhysicalParams,
    n: int,
    *,
    max_window: float | None = None,
    x0_admissible: float = X0_ADMISSIBLE_DEFAULT,
    beta_min: float = BETA_MIN_DEFAULT,
) -> EnergyLevel:
    """Exact level n: root of W_{kappa, i mu}(x0) = 0 nearest the closed form.

    Brackets beta = 1/2 - kappa inside an expanding multiplicative window
    beta_hat * (1 +/- 2^k * 1e-3) around the closed-form estimate, then
    bisects the scaled-W mantissa until the bracket is narrower than
    1e-12 * max(1, |kappa|).  The window never reaches the neighboring
    geometric branch.  Raises BracketError when no sign change is found.
    """
    if params.omega <= 0:
        raise DomainError("quantize_exact requires omega > 0 (use the numeric oracle)")
    if n < 1:
        raise DomainError("level index n must be >= 1")
    d = derive(params)
    mu = d.mu
    x0 = d.x0
    kmap = KappaMap.from_params(params)

    estimate = energy_levels_asymptotic(params, n)[-1]
    beta_hat = kmap.beta_of_kappa(kmap.kappa_of_energy(estimate.energy))
    if beta_hat <= 0:
        raise BracketError(
            f"closed-form estimate for n={n} gives beta_hat = {beta_hat:.3g} <= 0; "
            "no quantization search possible"
        )
    # stay well inside the current branch: neighbors sit at factors e^{+-2pi/Lambda}
    gap = 1.0 - math.exp(-2.0 * math.pi / d.Lambda)
    window_cap = max_window if max_window is not None else min(0.35, 0.45 * gap)

    f_hat = _mantissa_at_beta(beta_hat, mu, x0)
    lo = hi = beta_hat
    f_lo = f_hi = f_hat
    bracket = None
    delta = 1e-3
    while delta <= window_cap:
        lo_new, hi_new = beta_hat * (1.0 - delta), beta_hat * (1.0 + delta)
        f_lo_new, f_hi_new = (
            _mantissa_at_beta(lo_new, mu, x0),
            _mantissa_at_beta(hi_new, mu, x0),
        )
        if f_lo_new * f_lo < 0:
            bracket = (lo_new, lo, f_lo_new, f_lo)
            break
        if f_hi * f_hi_new < 0:
            bracket = (hi, hi_new, f_hi, f_hi_new)
            break
        lo, hi, f_lo, f_hi = lo_new, hi_new, f_lo_new, f_hi_new
        delta *= 2.0
    if bracket is None:
        raise BracketError(
            f"no sign change of W around beta_hat = {beta_hat:.6g} within "
            f"relative window +-{window_cap:.3g} (n={n})"
        )

    b_lo, b_hi, g_lo, g_hi = bracket
    window_lo, window_hi = b_lo, b_hi
    kappa_scale = max(1.0, abs(0.5 - beta_hat))
    tol = 1e-12 * kappa_scale
    while (b_hi - b_lo) > tol:
        mid = 0.5 * (b_lo + b_hi)
        g_mid = _mantissa_at_beta(mid, mu, x0)
        if g_mid == 0.0:
            b_lo = b_hi = mid
            break
        if g_lo * g_mid < 0:
            b_hi, g_hi = mid, g_mid
        else:
            b_lo, g_lo = mid, g_mid
    beta_root = 0.5 * (b_lo + b_hi)

    # anomaly scan: any sign changes other than the converged root
    samples = np.linspace(window_lo, window_hi, 33)
    signs = np.sign([_mantissa_at_beta(b, mu, x0) for b in samples])
    changes = int(np.sum(signs[:-1] * signs[1:] < 0))
    extra = max(0, changes - 1)

    kappa_root = kmap.kappa_of_beta(beta_root)
    energy = kmap.energy_of_kappa(kappa_root)
    w_root = whittaker_w_scaled(kappa_root, mu, x0)
    slope_scale = max(abs(g_hi - g_lo) / max(b_hi - b_lo, 1e-300), 1e-300)
    noise_width = abs(w_root.est_error) if w_root.value != 0 else 0.0
    est_kappa = 0.5 * (b_hi - b_lo) + noise_width / slope_scale
    est = 2.0 * params.omega * est_kappa

    flags = _regime_flags(params, beta_root, x0_admissible, beta_min)
    return EnergyLevel(
        n, params.ell, energy, Route.EXACT, kappa_root, est, flags, extra_sign_changes=extra
    )


@dataclass(frozen=True)
class RadialProfile:
    """Sampled radial wavefunction f(r) = W_{kappa, i mu}(m omega r^2)/sqrt(m omega r^2).

    Values are rescaled to max |f| = 1 (the solution is only defined up to
    a constant; max-abs normalization is grid-robust).  boundary_warning is
    set when the level does not come from the exact-quantization route, in
    which case f(R) is visibly nonzero.
    """

    r_samples: np.ndarray
    f_values: np.ndarray
    normalization: str = "max-abs-one"
    route: Route = Route.EXACT
    boundary_warning: bool = False

    def node_count(self) -> int:
        """Interior sign changes of f, ignoring the r = R boundary zero."""
        v = self.f_values
        interior = v[1:] if abs(v[0]) < 1e-6 else v
        s = np.sign(interior[np.abs(interior) > 1e-9])
        return int(np.sum(s[:-1] * s[1:] < 0))


def radial_wavefunction(
    params: PhysicalParams,
    level: EnergyLevel,
    r_max: float,
    samples: int = 512,
    *,
    noise_floor: float = 1e-12,
) -> RadialProfile:
    """Sample f(r) on a uniform grid in [R, r_max] and normalize to max|f| = 1.

    Evaluates W in scaled form on a shared exponent, so profiles of deeply
    bound levels (where W itself underflows) stay representable.  Deep in
    the forbidden tail the scaled mantissa falls below double-precision
    phase resolution; samples with |mantissa| < noise_floor are clipped to
    exactly 0 rather than reported as amplified rounding noise.
    """
    if params.omega <= 0:
        raise DomainError("radial_wavefunction requires omega > 0")
    if r_max <= params.cutoff_R:
        raise DomainError("r_max must exceed the cut-off radius")
    if samples < 2:
        raise DomainError("need at least 2 samples")
    if level.kappa is None:
        raise DomainError("level carries no kappa (omega = 0 route?)")
    mu = derive(params).mu
    r = np.linspace(params.cutoff_R, r_max, samples)
    mant = np.empty(samples)
    expo = np.empty(samples)
    for i, ri in enumerate(r):
        x = params.mass_m * params.omega * ri * ri
        w = whittaker_w_scaled(level.kappa, mu, x)
        raw = w.mantissa if abs(w.mantissa) >= noise_floor else 0.0
        mant[i] = raw / math.sqrt(x)
        expo[i] = w.exponent
    ref = float(np.max(expo[mant != 0.0])) if np.any(mant != 0.0) else 0.0
    f = mant * np.exp(expo - ref)
    peak = float(np.max(np.abs(f)))
    if peak == 0.0 or not math.isfinite(peak):
        raise DomainError("wavefunction vanished or overflowed on the whole grid")
    f /= peak
    return RadialProfile(
        r, f, route=level.route, boundary_warning=level.route is not Route.EXACT
    )
