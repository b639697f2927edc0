"""Plane-wave pump traces with the sinc phase matching kept.

For an infinitely wide pump the pump factor of each kernel collapses to a
delta function. Around the 2n-fold contraction cycle this forces
u_{j+1} = -u_j (at nu1 = nu2), so every sinc factor shares the argument
2 beta |u|^2 and the trace reduces to the one-dimensional integral

    S_n = int_0^inf sinc^{2n}(x) dx,   xi_n = (2/pi)^n S_n,

where xi_n is normalised against the exact single-pair trace (xi_1 = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import AccuracyError, InvalidInputError
from .gausstrace import PW_QUADRATURE, TraceResult
from .kernels import FULL_SINC, KernelSpec, eval_kernel, kernel_amplitude, phase_matching
from .quadrature import gl_panels, sinc_power_tail

AT_SINC_ZEROS = "at_sinc_zeros"
UNIFORM = "uniform"


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-14
    rel_tol: float = 1e-12
    max_panels: int = 4096
    panel_splitting: str = AT_SINC_ZEROS

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise InvalidInputError("abs_tol", "tolerances must be > 0")
        if self.max_panels < 8:
            raise InvalidInputError("max_panels", "must be >= 8")
        if self.panel_splitting not in (AT_SINC_ZEROS, UNIFORM):
            raise InvalidInputError("panel_splitting", f"unknown mode {self.panel_splitting!r}")


DEFAULT_SPEC = QuadratureSpec()


def _check_order(n):
    if int(n) != n or n < 1:
        raise InvalidInputError("n", "order must be an integer >= 1")
    return int(n)


def _panel_sum(n, edges, order):
    x, w = gl_panels(edges, order)
    return float(np.sum(w * np.sinc(x / np.pi) ** (2 * n)))


@lru_cache(maxsize=None)
def _sinc_power(n, spec):
    panels = 32
    best = None
    while panels <= spec.max_panels:
        if spec.panel_splitting == AT_SINC_ZEROS:
            edges = math.pi * np.arange(panels + 1)
        else:
            # deliberately misaligned with the zeros
            edges = 0.73 * math.pi * np.arange(panels + 1)
        body = _panel_sum(n, edges, 32)
        body_err = abs(body - _panel_sum(n, edges, 24))
        tail, tail_err = sinc_power_tail(n, edges[-1])
        value = body + tail
        err = body_err + tail_err
        best = (value, err)
        if err <= max(spec.abs_tol, spec.rel_tol * abs(value)):
            return best
        panels *= 2
    raise AccuracyError(f"int sinc^{2 * n} not converged within {spec.max_panels} panels", *best)


def sinc_power_integral(n, spec: QuadratureSpec = DEFAULT_SPEC):
    """int_0^inf sinc^{2n}(x) dx; returns (value, error estimate)."""
    return _sinc_power(_check_order(n), spec)


def xi_pw(n, spec: QuadratureSpec = DEFAULT_SPEC) -> TraceResult:
    """Plane-wave xi_n = (2/pi)^n S_n.

    ``value`` equals ``xi`` (the trace in units of A X^{2n}).
    """
    n = _check_order(n)
    s, err = sinc_power_integral(n, spec)
    scale = (2.0 / math.pi) ** n
    return TraceResult(order=n, value=scale * s, xi=scale * s, method=PW_QUADRATURE, err_estimate=scale * err)


def trace_pw(n, params, spec: QuadratureSpec = DEFAULT_SPEC) -> TraceResult:
    res = xi_pw(n, spec)
    weight = params.big_a * params.big_x ** (2 * n)
    return TraceResult(
        order=res.order,
        value=res.xi * weight,
        xi=res.xi,
        method=PW_QUADRATURE,
        err_estimate=res.err_estimate * weight,
    )


def xi_pw_gaussian_pump(n, spec: QuadratureSpec = DEFAULT_SPEC) -> TraceResult:
    """Plane-wave limit taken with the pump Gaussian kept until after integration.

    Integrating the 2n pump Gaussians exactly (instead of replacing 2n - 1
    of them by delta functions) leaves the alternating zero mode with a
    Jacobian 1/n relative to the delta chain, so xi_n -> xi_n / n. This is
    the value the spectral oracle approaches for the sinc kernel as
    beta -> 0.
    """
    res = xi_pw(n, spec)
    return TraceResult(order=res.order, value=res.xi / n, xi=res.xi / n, method=PW_QUADRATURE,
                       err_estimate=res.err_estimate / n)


def _collapsed_chain(n, beta, panels, order):
    """Delta-collapsed cycle integral J_n = int d^2u prod_j |H|(u_j, u_{j+1}).

    The collapsed cycle visits u, -u, u, ... so each kernel factor is
    evaluated at (u, -u), where the pump factor equals 1.
    """
    unit = KernelSpec(FULL_SINC, beta, 1.0, 1.0, 1.0)
    edges = np.sqrt(np.arange(panels + 1) * math.pi / (2.0 * beta))
    r, w = gl_panels(edges, order)
    u = np.stack([r, np.zeros_like(r)], axis=-1)
    integrand = np.ones_like(r)
    for j in range(2 * n):
        sign = 1.0 if j % 2 == 0 else -1.0
        integrand = integrand * eval_kernel(unit, sign * u, -sign * u)
    body = 2.0 * math.pi * float(np.sum(w * r * integrand))
    # tail in t = 2 beta r^2: r dr = dt / (4 beta)
    tail, tail_err = sinc_power_tail(n, panels * math.pi, method="asymptotic")
    scale = 2.0 * math.pi / (4.0 * beta)
    return body + scale * tail, scale * tail_err


def collapsed_cycle_xi(n, beta=0.05, panels=256, order=32):
    """xi_n from direct radial quadrature of the delta-collapsed cycle.

    Independent of :func:`xi_pw`: different integration variable, nodes
    and tail evaluation. Each of the 2n - 1 collapsed pump Gaussians
    contributes a factor pi; the chain is normalised by its n = 1 value.
    Returns (xi_n, error estimate).
    """
    n = _check_order(n)

    def chain(m):
        j, err = _collapsed_chain(m, beta, panels, order)
        a = 1.0 / (4.0 * beta)
        pref = 16.0**m * (beta / (2.0 * math.pi**3)) ** m * a ** (m - 1) * math.pi ** (2 * m - 1)
        return pref * j, pref * err

    cn, en = chain(n)
    c1, e1 = chain(1)
    xi = cn / c1
    return xi, abs(xi) * (en / abs(cn) + e1 / abs(c1))


def first_trace_quadrature(beta, nu1, nu2, big_a, big_x, panels=96, order=24, n_s=80, n_phi=8):
    """tr{Z} = 16 tr{|H_oe| |H_eo|} for the exact sinc kernel by nested quadrature.

    Integrates |H|^2 over (u1, u2) in the coordinates d = u1 - u2,
    s = nu1 u1 + nu2 u2: d radially with panels split at sinc zeros, s on
    a 2D polar grid, the relative angle by the trapezoid rule. The sinc^2
    tail beyond the last d panel is added from its oscillatory expansion.
    """
    spec = KernelSpec(FULL_SINC, beta, nu1, nu2, 1.0)
    jac = np.array([[1.0, -1.0], [nu1, nu2]])
    inv = np.linalg.inv(jac)
    det2 = np.linalg.det(jac) ** 2

    d_edges = np.sqrt(2.0 * math.pi * np.arange(panels + 1) / beta)
    rd, wd = gl_panels(d_edges, order)
    rs, ws = gl_panels(np.linspace(0.0, 7.0, 8), n_s // 8 if n_s >= 8 else 8)
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi

    # s on a polar grid, d along the x axis (integrand depends on |d|, |s| and their angle)
    sx = (rs[:, None] * np.cos(phi)[None, :]).ravel()
    sy = (rs[:, None] * np.sin(phi)[None, :]).ravel()
    s_w = ((ws * rs)[:, None] * np.full(n_phi, 2.0 * math.pi / n_phi)[None, :]).ravel()

    inner = np.empty_like(rd)
    for i, r in enumerate(rd):
        d = np.stack([np.full_like(sx, r), np.zeros_like(sx)], axis=-1)
        s = np.stack([sx, sy], axis=-1)
        u1 = inv[0, 0] * d + inv[0, 1] * s
        u2 = inv[1, 0] * d + inv[1, 1] * s
        inner[i] = np.sum(s_w * eval_kernel(spec, u1, u2) ** 2)
    body = 2.0 * math.pi * float(np.sum(wd * rd * inner))

    # separable tail: inner(d) / pm(d)^2 is the pump integral, constant in d
    pm_last = phase_matching(FULL_SINC, beta, rd[-1] ** 2)
    pump_integral = inner[-1] / pm_last**2
    t_max = 0.5 * beta * d_edges[-1] ** 2
    tail_t, tail_err = sinc_power_tail(1, t_max)
    tail = 2.0 * math.pi / beta * tail_t * pump_integral

    amp = kernel_amplitude(big_a, big_x, beta, FULL_SINC)
    value = 16.0 * amp**2 * (body + tail) / det2
    xi = value / (big_a * big_x**2) if big_x > 0 else math.nan
    err = 16.0 * amp**2 * 2.0 * math.pi / beta * tail_err * pump_integral / det2
    return TraceResult(order=1, value=value, xi=xi, method=PW_QUADRATURE, err_estimate=err)
