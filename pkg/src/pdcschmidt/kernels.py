"""Down-conversion kernel magnitude in dimensionless transverse coordinates.

Transverse spatial frequencies ``a`` are rescaled to ``u = pi * w_p * a``.
In these units the kernel shape depends only on ``beta``, ``nu1`` and
``nu2``, and a contraction over ``d^2 a`` becomes ``d^2 u / (pi w_p)^2``.
The ``amplitude`` of a :class:`KernelSpec` already includes that measure
factor, so operator traces are plain Lebesgue integrals over ``u``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

FULL_SINC = "full_sinc"
THIN_CRYSTAL = "thin_crystal"
VARIANTS = (FULL_SINC, THIN_CRYSTAL)

# Gaussian phase-matching regulator normalisation. sqrt(pi) makes the
# thin-crystal first trace equal the exact sinc first trace.
THIN_CRYSTAL_PREFACTOR = math.sqrt(math.pi)


@dataclass(frozen=True)
class KernelSpec:
    variant: str
    beta: float
    nu1: float = 1.0
    nu2: float = 1.0
    amplitude: float = 1.0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise InvalidInputError("variant", f"expected one of {VARIANTS}, got {self.variant!r}")
        if not self.beta > 0:
            raise InvalidInputError("beta", "must be > 0")
        if abs(self.nu1 + self.nu2 - 2.0) > 1e-12:
            raise InvalidInputError("nu1", "nu1 + nu2 must equal 2")
        if not self.amplitude >= 0:
            raise InvalidInputError("amplitude", "must be >= 0")

    @classmethod
    def from_params(cls, params, variant=FULL_SINC):
        return cls(
            variant=variant,
            beta=params.beta,
            nu1=params.nu1,
            nu2=params.nu2,
            amplitude=kernel_amplitude(params.big_a, params.big_x, params.beta, variant),
        )


def kernel_amplitude(big_a, big_x, beta, variant=FULL_SINC):
    """|eta| / (pi w_p)^2, times the regulator prefactor for the thin-crystal kernel.

    Uses |eta|^2 / (pi w_p^4) = A X^2 beta / 2, so w_p never appears.
    """
    amp = big_x * math.sqrt(big_a * beta / (2.0 * math.pi**3))
    if variant == THIN_CRYSTAL:
        amp *= THIN_CRYSTAL_PREFACTOR
    return amp


def to_dimensionless(a, waist):
    if not waist > 0:
        raise InvalidInputError("waist", "must be > 0")
    return math.pi * waist * np.asarray(a, dtype=float)


def from_dimensionless(u, waist):
    if not waist > 0:
        raise InvalidInputError("waist", "must be > 0")
    return np.asarray(u, dtype=float) / (math.pi * waist)


def sinc(t):
    """sin(t)/t with sinc(0) = 1 (numpy's sinc is normalised by pi)."""
    return np.sinc(np.asarray(t) / np.pi)


def phase_matching(variant, beta, d2):
    """Magnitude of the phase-matching factor given |u1 - u2|^2."""
    arg = 0.5 * beta * d2
    if variant == THIN_CRYSTAL:
        return np.exp(-arg)
    return np.abs(sinc(arg))


def eval_kernel(spec: KernelSpec, u1, u2):
    """|H|(u1, u2); ``u1``/``u2`` broadcast with a trailing axis of length 2."""
    u1 = np.asarray(u1, dtype=float)
    u2 = np.asarray(u2, dtype=float)
    d = u1 - u2
    s = spec.nu1 * u1 + spec.nu2 * u2
    d2 = np.sum(d * d, axis=-1)
    s2 = np.sum(s * s, axis=-1)
    return spec.amplitude * phase_matching(spec.variant, spec.beta, d2) * np.exp(-s2)


def eval_polar(spec: KernelSpec, r1, r2, cos_dphi):
    """Same kernel in polar form; depends on the angles only through their difference."""
    cross = r1 * r2 * cos_dphi
    d2 = r1 * r1 + r2 * r2 - 2.0 * cross
    s2 = (spec.nu1 * r1) ** 2 + (spec.nu2 * r2) ** 2 + 2.0 * spec.nu1 * spec.nu2 * cross
    return spec.amplitude * phase_matching(spec.variant, spec.beta, d2) * np.exp(-s2)
