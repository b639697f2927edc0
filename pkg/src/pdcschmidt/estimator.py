"""ln K estimates from every method, the comparison curves, and validity flags.

Everything is carried as ln K; K itself is only formed when ln K < 700.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import gausstrace, pwtrace, spectral
from .errors import InvalidInputError
from .kernels import FULL_SINC, KernelSpec
from .params import ExperimentConfig, derive, quadratic_exponent

QUADRATIC = "quadratic"
SERIES_TC = "series_tc"
SERIES_PW = "series_pw"
CLOSED_MODEL = "closed_model"
SPECTRAL_ORACLE = "spectral_oracle"
METHODS = (QUADRATIC, SERIES_TC, SERIES_PW, CLOSED_MODEL, SPECTRAL_ORACLE)

VALIDITY_X = 0.8
OVERFLOW_LN = 700.0

# Printed curve coefficients c_n of X^{2n}, stored as (rational, power of pi).
CURVE_COEFFS = {
    "tc": (
        (Fraction(1, 2), 0),
        (Fraction(-1, 12), 0),
        (Fraction(16, 405), 0),
        (Fraction(-17, 630), 0),
    ),
    "pw": (
        (Fraction(1, 2), 0),
        (Fraction(-1, 9), -1),
        (Fraction(11, 225), -2),
        (Fraction(-2567, 99225), -3),
    ),
}


def coeff_value(entry):
    frac, pi_power = entry
    return frac.numerator / frac.denominator * math.pi**pi_power


@lru_cache(maxsize=None)
def bernoulli(m):
    """Bernoulli number B_m (B_1 = -1/2) as a Fraction."""
    b = [Fraction(1)]
    for k in range(1, m + 1):
        b.append(-sum(math.comb(k + 1, j) * b[j] for j in range(k)) / Fraction(k + 1))
    return b[m]


@lru_cache(maxsize=None)
def lncosh_coeff(n):
    """Coefficient of y^{2n} in ln cosh y (1/2, -1/12, 1/45, -17/2520, ...)."""
    if n < 1:
        raise InvalidInputError("n", "order must be >= 1")
    two2n = 2 ** (2 * n)
    return Fraction(two2n * (two2n - 1)) * bernoulli(2 * n) / (math.factorial(2 * n) * 2 * n)


def implied_xi(which, n):
    """xi_n implied by a printed curve: c_n / (ln cosh coefficient)_n."""
    frac, pi_power = CURVE_COEFFS[which][n - 1]
    ratio = frac / lncosh_coeff(n)
    return ratio.numerator / ratio.denominator * math.pi**pi_power


@dataclass(frozen=True)
class CurvePoint:
    x: float
    f_model: float
    f_quad: float
    f_tc: float
    f_pw: float


def _poly(which, x):
    total = 0.0
    for n, entry in enumerate(CURVE_COEFFS[which], start=1):
        total += coeff_value(entry) * x ** (2 * n)
    return total


def f_curves(x) -> CurvePoint:
    x = float(x)
    if x < 0:
        raise InvalidInputError("x", "must be >= 0")
    # 1 - cos x = 2 sin^2(x/2) keeps precision at small x
    return CurvePoint(
        x=x,
        f_model=2.0 * math.sin(0.5 * x) ** 2,
        f_quad=0.5 * x * x,
        f_tc=_poly("tc", x),
        f_pw=_poly("pw", x),
    )


@dataclass(frozen=True)
class SchmidtEstimate:
    method: str
    ln_k: float
    k: float | None
    valid: bool
    reason: str = ""
    big_x: float = 0.0
    error: float = 0.0

    @property
    def log10_k(self):
        return self.ln_k / math.log(10.0)

    def as_dict(self):
        return {
            "method": self.method,
            "ln_k": self.ln_k,
            "log10_k": self.log10_k,
            "k": self.k,
            "overflow": self.k is None,
            "valid": self.valid,
            "reason": self.reason,
            "big_x": self.big_x,
            "error": self.error,
        }


def _estimate(method, ln_k, big_x, restricted=True, error=0.0):
    ln_k = ln_k + 0.0  # no -0.0 in output
    valid = True
    reason = ""
    if restricted and big_x > VALIDITY_X:
        valid = False
        reason = f"X = {big_x:.4g} > {VALIDITY_X} exceeds model validity"
    k = math.exp(ln_k) if ln_k < OVERFLOW_LN else None
    return SchmidtEstimate(method, ln_k, k, valid, reason, big_x, error)


def logk_quadratic(params, config: ExperimentConfig | None = None, check_rtol=1e-10) -> SchmidtEstimate:
    """ln K = A X^2 / 2, the small-amplitude limit.

    With ``config`` the lab-unit closed form is evaluated too and must agree.
    """
    ln_k = 0.5 * params.big_a * params.big_x**2
    if config is not None:
        other = quadratic_exponent(config, params.alpha0_mag)
        if abs(other - ln_k) > check_rtol * max(abs(ln_k), abs(other), 1e-300):
            raise InvalidInputError("big_x", f"quadratic forms disagree: {ln_k!r} vs {other!r}")
    return _estimate(QUADRATIC, ln_k, params.big_x, restricted=False)


def logk_model(params) -> SchmidtEstimate:
    """ln K = A (1 - cos X)."""
    ln_k = params.big_a * 2.0 * math.sin(0.5 * params.big_x) ** 2
    return _estimate(CLOSED_MODEL, ln_k, params.big_x)


def engine_xi(which, n, nu1=1.0, nu2=1.0):
    """xi_n from the corresponding trace engine (thin-crystal or plane-wave)."""
    if which == "tc":
        return gausstrace.xi_limit(n, nu1, nu2)[0]
    if which == "pw":
        return pwtrace.xi_pw(n).xi
    raise InvalidInputError("which", f"expected 'tc' or 'pw', got {which!r}")


def series_coefficients(which, order=4, source="engine"):
    """c_n = (ln cosh coefficient)_n * xi_n for n = 1..order.

    ``source="engine"`` takes xi_n from the trace engines; ``"printed"``
    uses the stored curve coefficients (order <= 4).
    """
    out = []
    for n in range(1, order + 1):
        if source == "printed":
            if n > len(CURVE_COEFFS[which]):
                raise InvalidInputError("order", "printed coefficients stop at order 4")
            out.append(coeff_value(CURVE_COEFFS[which][n - 1]))
        else:
            a_n = lncosh_coeff(n)
            xi = 1.0 if n == 1 else engine_xi(which, n)
            out.append(a_n.numerator / a_n.denominator * xi)
    return out


def logk_series(params, which="pw", order=4, source="engine") -> SchmidtEstimate:
    """ln K = A sum_n c_n X^{2n}, truncated at ``order``.

    ``error`` holds the magnitude of the last included term.
    """
    if which not in ("tc", "pw"):
        raise InvalidInputError("which", f"expected 'tc' or 'pw', got {which!r}")
    if order < 1:
        raise InvalidInputError("order", "must be >= 1")
    coeffs = series_coefficients(which, order, source)
    x2 = params.big_x**2
    terms = [c * x2**n for n, c in enumerate(coeffs, start=1)]
    ln_k = params.big_a * math.fsum(terms) if order > 1 else 0.5 * params.big_a * params.big_x**2
    method = SERIES_TC if which == "tc" else SERIES_PW
    return _estimate(method, ln_k, params.big_x, error=abs(params.big_a * terms[-1]))


def logk_oracle(params, variant=FULL_SINC, **options) -> SchmidtEstimate:
    """ln K from the singular spectrum; no X restriction. ``error`` is the tail bound."""
    spec = KernelSpec.from_params(params, variant)
    res = spectral.compute_spectrum(spec, **options)
    return _estimate(SPECTRAL_ORACLE, res.ln_k, params.big_x, restricted=False, error=res.tail_bound)


def estimate(params, method, config=None, **options) -> SchmidtEstimate:
    if method == QUADRATIC:
        return logk_quadratic(params, config)
    if method == SERIES_TC:
        return logk_series(params, "tc", options.get("order", 4), options.get("source", "engine"))
    if method == SERIES_PW:
        return logk_series(params, "pw", options.get("order", 4), options.get("source", "engine"))
    if method == CLOSED_MODEL:
        return logk_model(params)
    if method == SPECTRAL_ORACLE:
        return logk_oracle(params, **options)
    raise InvalidInputError("method", f"unknown method {method!r}")


def estimate_config(config: ExperimentConfig, method, **options) -> SchmidtEstimate:
    return estimate(derive(config), method, config=config, **options)
