"""Laboratory inputs and the dimensionless quantities derived from them.

All lengths are SI metres internally. The derived set covers the kernel
amplitude ``eta_mag``, the crystal parameter ``beta``, the index ratios
``nu1``/``nu2`` and the series bookkeeping pair ``big_a``/``big_x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace

from .errors import InvalidInputError

# CODATA 2018 (exact in the SI)
CONSTANTS = {
    "h": 6.62607015e-34,  # J s
    "c": 299792458.0,  # m / s
}

DEFAULT_INDEX_BAND = (1.0, 3.0)
IDENTITY_RTOL = 1e-12


def _finite(name, value):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise InvalidInputError(name, f"not a number: {value!r}") from None
    if not math.isfinite(value):
        raise InvalidInputError(name, f"must be finite, got {value!r}")
    return value


def photons_per_pulse(power, rep_rate, wavelength):
    """Mean photon number in one pump pulse: pulse energy over h c / lambda."""
    power = _finite("pump_power", power)
    rep_rate = _finite("rep_rate", rep_rate)
    wavelength = _finite("lambda_p", wavelength)
    if power < 0:
        raise InvalidInputError("pump_power", "must be >= 0")
    if rep_rate <= 0:
        raise InvalidInputError("rep_rate", "must be > 0")
    if wavelength <= 0:
        raise InvalidInputError("lambda_p", "must be > 0")
    pulse_energy = power / rep_rate
    photon_energy = CONSTANTS["h"] * CONSTANTS["c"] / wavelength
    return pulse_energy / photon_energy


@dataclass(frozen=True)
class ExperimentConfig:
    """Raw laboratory inputs in SI units.

    ``pump_power`` may be zero (vacuum output); everything else must be
    strictly positive.
    """

    lambda_p: float
    delta_lambda: float
    pump_power: float
    rep_rate: float
    n_o: float
    n_eff: float
    sigma_II: float
    crystal_length: float
    waist: float
    index_band: tuple = field(default=DEFAULT_INDEX_BAND, compare=False, repr=False)

    def __post_init__(self):
        for f in fields(self):
            if f.name == "index_band":
                continue
            value = _finite(f.name, getattr(self, f.name))
            object.__setattr__(self, f.name, value)
            if f.name == "pump_power":
                if value < 0:
                    raise InvalidInputError(f.name, "must be >= 0")
            elif value <= 0:
                raise InvalidInputError(f.name, "must be > 0")
        if self.delta_lambda >= self.lambda_p:
            raise InvalidInputError("delta_lambda", "must be smaller than lambda_p")
        lo, hi = self.index_band
        for name in ("n_o", "n_eff"):
            if not lo < getattr(self, name) < hi:
                raise InvalidInputError(name, f"outside sanity band ({lo}, {hi})")

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name != "index_band"}


@dataclass(frozen=True)
class DerivedParams:
    photons_per_pulse: float
    alpha0_mag: float
    n_3: float
    nu1: float
    nu2: float
    eta_mag: float
    beta: float
    big_a: float
    big_x: float
    enhanced_cross_section: float
    k_biphot: float

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


def index_ratios(n_o, n_eff):
    """Return (n_3, nu1, nu2) with nu1 + nu2 == 2 exactly in floating point."""
    n_3 = 0.5 * (n_o + n_eff)
    # 2 - x is exact for x in [1, 2], so derive the smaller ratio from the larger
    if n_o >= n_eff:
        nu1 = n_o / n_3
        nu2 = 2.0 - nu1
    else:
        nu2 = n_eff / n_3
        nu1 = 2.0 - nu2
    return n_3, nu1, nu2


def biphoton_schmidt(beta):
    beta = _finite("beta", beta)
    if beta <= 0:
        raise InvalidInputError("beta", "must be > 0")
    return 1.0 / (2.0 * beta)


def eta_magnitude(cfg, alpha0_mag, n_3):
    lam = cfg.lambda_p
    return (
        math.pi**2 * alpha0_mag * cfg.sigma_II * cfg.crystal_length * cfg.waist
        / (n_3**2 * lam**2)
        * math.sqrt(math.pi * cfg.delta_lambda / (2.0 * lam))
    )


def crystal_beta(cfg, n_3):
    return cfg.n_o * cfg.n_eff * cfg.crystal_length * cfg.lambda_p / (math.pi * n_3 * cfg.waist**2)


def amplitude_a(cfg, n_3, beta):
    return cfg.n_o**2 * cfg.n_eff**2 / (4.0 * n_3**4 * beta)


def strength_x(cfg, alpha0_mag):
    lam = cfg.lambda_p
    return (
        2.0 * math.pi**2 * alpha0_mag * cfg.sigma_II * cfg.crystal_length
        / (cfg.n_o * cfg.n_eff * lam**2 * cfg.waist)
        * math.sqrt(cfg.delta_lambda / lam)
    )


def quadratic_exponent(cfg, alpha0_mag):
    """Closed lab-unit form of |eta|^2 / (pi w^4 beta), no intermediate beta."""
    n_3 = 0.5 * (cfg.n_o + cfg.n_eff)
    return (
        math.pi**5 * alpha0_mag**2 * cfg.sigma_II**2 * cfg.crystal_length * cfg.delta_lambda
        / (2.0 * n_3**3 * cfg.n_o * cfg.n_eff * cfg.lambda_p**6)
    )


def derive(cfg: ExperimentConfig) -> DerivedParams:
    """Compute every derived quantity and check the internal identities."""
    n_photons = photons_per_pulse(cfg.pump_power, cfg.rep_rate, cfg.lambda_p)
    alpha0 = math.sqrt(n_photons)
    n_3, nu1, nu2 = index_ratios(cfg.n_o, cfg.n_eff)
    eta = eta_magnitude(cfg, alpha0, n_3)
    beta = crystal_beta(cfg, n_3)
    big_a = amplitude_a(cfg, n_3, beta)
    big_x = strength_x(cfg, alpha0)

    if nu1 + nu2 != 2.0:
        raise InvalidInputError("nu1", "index ratios do not sum to 2")
    if not (beta > 0 and big_a > 0 and big_x >= 0):
        raise InvalidInputError("beta", "derived parameters out of range")
    lhs = eta**2 / (math.pi * cfg.waist**4 * beta)
    rhs = 0.5 * big_a * big_x**2
    if abs(lhs - rhs) > IDENTITY_RTOL * max(abs(lhs), abs(rhs)):
        raise InvalidInputError("big_x", f"trace identity violated: {lhs!r} vs {rhs!r}")

    return DerivedParams(
        photons_per_pulse=n_photons,
        alpha0_mag=alpha0,
        n_3=n_3,
        nu1=nu1,
        nu2=nu2,
        eta_mag=eta,
        beta=beta,
        big_a=big_a,
        big_x=big_x,
        enhanced_cross_section=alpha0 * cfg.sigma_II,
        k_biphot=biphoton_schmidt(beta),
    )


def retarget(cfg: ExperimentConfig, beta=None, big_x=None, enhanced_cross_section=None):
    """Return a config adjusted to hit a requested beta and/or X.

    beta is set through the crystal length (beta is linear in L). X is then
    set through the pump power, or ``enhanced_cross_section`` (m^2) is set
    through sigma_II at fixed power.
    """
    if beta is not None:
        current = derive(cfg).beta
        cfg = replace(cfg, crystal_length=cfg.crystal_length * beta / current)
    if enhanced_cross_section is not None:
        alpha0 = math.sqrt(photons_per_pulse(cfg.pump_power, cfg.rep_rate, cfg.lambda_p))
        if alpha0 == 0:
            raise InvalidInputError("pump_power", "cannot set enhanced cross-section at zero power")
        cfg = replace(cfg, sigma_II=enhanced_cross_section / alpha0)
    if big_x is not None:
        if big_x < 0:
            raise InvalidInputError("big_x", "must be >= 0")
        # X scales as sqrt(power); evaluate the unit-power value
        unit = strength_x(cfg, math.sqrt(photons_per_pulse(1.0, cfg.rep_rate, cfg.lambda_p)))
        cfg = replace(cfg, pump_power=(big_x / unit) ** 2)
    return cfg


# Laboratory numbers of the reference experiment. The index pair is chosen
# to give beta = 0.00211; the text does not state its BBO indices.
BASELINE = ExperimentConfig(
    lambda_p=400e-9,
    delta_lambda=5e-9,
    pump_power=1.0,
    rep_rate=100e6,
    n_o=1.6614,
    n_eff=1.6526,
    sigma_II=0.76e-8 * 1e-12,
    crystal_length=10e-3,
    waist=1e-3,
)
