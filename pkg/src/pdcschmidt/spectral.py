"""Series-free ln K from the singular spectrum of the kernel operator.

The kernel depends on the two transverse angles only through their
difference, so the operator is block diagonal in the azimuthal index l.
Each block is a radial kernel 2 pi F_l(r1, r2) acting on L^2(r dr),
discretised by Nystrom on composite Gauss-Legendre nodes. Then

    ln K = sum_l m_l sum_k ln cosh(4 s_k),   m_0 = 1, m_l = 2 (l >= 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg
from scipy.fft import rfft

from .errors import CostGuardError, ResolutionError, UndefinedBiphotonError
from .kernels import FULL_SINC, THIN_CRYSTAL, KernelSpec, eval_kernel, eval_polar
from .quadrature import gl_panels, sinc_power_tail

LN2 = math.log(2.0)
OVERFLOW_LN = 700.0
# pairs with exp(-(nu1 r1 - nu2 r2)^2) below e^-45 are dropped
BAND_EXPONENT = 45.0
# |sinc| has kinks in the angle, so its harmonics decay only algebraically
ALIAS_TOL = {THIN_CRYSTAL: 1e-12, FULL_SINC: 1e-5}


@dataclass
class SpectrumResult:
    sectors: list = field(default_factory=list)  # (l, singular values, multiplicity)
    truncation: dict = field(default_factory=dict)
    ln_k: float = 0.0
    k_biphot_spectral: float | None = None
    tail_bound: float = 0.0
    converged: bool = True

    @property
    def k(self):
        return math.exp(self.ln_k) if self.ln_k < OVERFLOW_LN else None

    def rows(self):
        """(l, k, s) triples in sector order."""
        for ell, values, _ in self.sectors:
            for k, s in enumerate(values):
                yield ell, k, float(s)


def log_cosh(x):
    """ln cosh x without overflow and without cancellation near 0."""
    x = np.abs(np.asarray(x, dtype=float))
    small = x <= 20.0
    out = np.empty_like(x)
    xs = x[small]
    out[small] = np.log1p(2.0 * np.sinh(0.5 * xs) ** 2)
    xl = x[~small]
    out[~small] = xl - LN2 + np.log1p(np.exp(-2.0 * xl))
    return out


def logdet_cosh(sectors):
    """sum_l m_l sum_k ln cosh(4 s_k) with a fixed summation order."""
    total = 0.0
    for _, values, mult in sectors:
        total += mult * float(np.sum(log_cosh(4.0 * np.asarray(values))))
    return total


def biphoton_from_spectrum(sectors):
    """Schmidt number of the normalised two-photon amplitude: (sum s^2)^2 / sum s^4."""
    s2 = s4 = 0.0
    for _, values, mult in sectors:
        v2 = np.asarray(values) ** 2
        s2 += mult * float(np.sum(v2))
        s4 += mult * float(np.sum(v2 * v2))
    if s4 == 0.0:
        raise UndefinedBiphotonError("all singular values vanish")
    return s2 * s2 / s4


def default_r_max(beta):
    return max(6.0, 6.0 / math.sqrt(2.0 * beta))


def default_n_angle(r_max):
    n = max(64, int(math.ceil(16.0 * r_max)))
    return 1 << (n - 1).bit_length()


def radial_grid(spec: KernelSpec, r_max, n_radial=None, panel_order=8, nodes_per_unit=3.0):
    """Composite Gauss-Legendre nodes on [0, r_max].

    For the sinc kernel the panels are also split at r = sqrt(k pi / (2 beta)),
    where the pump-collapsed kernel |sinc(2 beta r^2)| has its kinks.
    """
    if n_radial is None:
        n_radial = panel_order * max(2, int(math.ceil(r_max * nodes_per_unit / panel_order)))
    n_panels = max(1, int(math.ceil(n_radial / panel_order)))
    edges = np.linspace(0.0, r_max, n_panels + 1)
    if spec.variant == FULL_SINC:
        k_max = int(2.0 * spec.beta * r_max**2 / math.pi)
        kinks = np.sqrt(np.arange(1, k_max + 1) * math.pi / (2.0 * spec.beta))
        edges = np.unique(np.concatenate([edges, kinks[kinks < r_max]]))
    return gl_panels(edges, panel_order)


def angular_blocks(spec: KernelSpec, r1, r2, l_max, n_angle, chunk=4096, alias_tol=None):
    """F_l(r1, r2) = (1/2pi) int |H|(r1, r2, dphi) cos(l dphi) dphi, l = 0..l_max.

    Trapezoid rule on the periodic angle (FFT). ``r1``/``r2`` are 1-D arrays
    of equal length; the result has shape (len(r1), l_max + 1).
    """
    if n_angle < 64 or n_angle & (n_angle - 1):
        raise ResolutionError(f"n_angle must be a power of two >= 64, got {n_angle}")
    half = n_angle // 2
    if l_max > half:
        raise ResolutionError(f"l_max {l_max} exceeds n_angle/2 = {half}")
    if alias_tol is None:
        alias_tol = ALIAS_TOL[spec.variant]
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    cosd = np.cos(2.0 * math.pi * np.arange(n_angle) / n_angle)
    out = np.empty((r1.size, l_max + 1))
    top = 0.0
    peak = 0.0
    for start in range(0, r1.size, chunk):
        sl = slice(start, start + chunk)
        vals = eval_polar(spec, r1[sl, None], r2[sl, None], cosd[None, :])
        coeffs = rfft(vals, axis=1).real / n_angle
        out[sl] = coeffs[:, : l_max + 1]
        peak = max(peak, float(np.max(np.abs(coeffs[:, 0]), initial=0.0)))
        top = max(top, float(np.max(np.abs(coeffs[:, half]), initial=0.0)))
    if peak > 0 and top > alias_tol * peak:
        raise ResolutionError(f"angular aliasing: |F_(n/2)| / |F_0| = {top / peak:.3g}")
    return out


def singular_spectrum(block, r, w, symmetric=None):
    """Nystrom singular values of the radial operator 2 pi F_l on L^2(r dr).

    M_ij = sqrt(w_i r_i) 2 pi F_l(r_i, r_j) sqrt(w_j r_j); returned in
    descending order.
    """
    block = np.asarray(block, dtype=float)
    sq = np.sqrt(np.asarray(w) * np.asarray(r))
    live = np.flatnonzero(np.any(block != 0.0, axis=1) | np.any(block != 0.0, axis=0))
    if live.size == 0:
        return np.zeros(0)
    m = 2.0 * math.pi * sq[live, None] * block[np.ix_(live, live)] * sq[None, live]
    if symmetric is None:
        symmetric = np.allclose(m, m.T, rtol=0, atol=1e-14 * np.max(np.abs(m)))
    try:
        if symmetric:
            vals = np.abs(linalg.eigvalsh(0.5 * (m + m.T)))
        else:
            vals = linalg.svdvals(m)
    except linalg.LinAlgError as exc:
        raise ResolutionError(f"eigensolver failed: {exc}") from exc
    return np.sort(vals)[::-1]


def radial_tail_bound(spec: KernelSpec, r_max):
    """Bound on the ln K mass outside the radial window.

    Uses ln cosh(4s) <= 8 s^2 and the exact separation of |H|^2 into
    difference and pump-sum coordinates; the window is taken as
    |u1 - u2| <= 2 r_max along the pump-confined manifold.
    """
    t0 = 2.0 * spec.beta * r_max**2
    if spec.variant == FULL_SINC:
        tail, _ = sinc_power_tail(1, t0)
        d_part = 2.0 * math.pi / spec.beta * tail
    else:
        d_part = math.pi / spec.beta * math.exp(-2.0 * t0)
    s_part = math.pi / 2.0
    jac = (spec.nu1 + spec.nu2) ** 2
    return 8.0 * spec.amplitude**2 * d_part * s_part / jac


def _banded_pairs(spec, r):
    diff = spec.nu1 * r[:, None] - spec.nu2 * r[None, :]
    return np.nonzero(diff * diff < BAND_EXPONENT)


def _solve(spec, r_max, n_radial, n_angle, rel_tol, l_max):
    r, w = radial_grid(spec, r_max, n_radial)
    n = r.size
    symmetric = spec.nu1 == spec.nu2
    ii, jj = _banded_pairs(spec, r)
    if symmetric:
        keep = ii <= jj
        ii, jj = ii[keep], jj[keep]
    cap = n_angle // 2 - 1
    l_cap = cap if l_max is None else min(l_max, cap)
    f = angular_blocks(spec, r[ii], r[jj], l_cap + 1, n_angle)

    sectors = []
    ln_k = 0.0
    sum_s2 = 0.0
    quiet = 0
    sentinels = None
    ell = 0
    while ell <= l_cap:
        block = np.zeros((n, n))
        block[ii, jj] = f[:, ell]
        if symmetric:
            block[jj, ii] = f[:, ell]
        values = singular_spectrum(block, r, w, symmetric=symmetric)
        values = values[values > 0]
        mult = 1 if ell == 0 else 2
        sectors.append((ell, values, mult))
        c = mult * float(np.sum(log_cosh(4.0 * values)))
        q = mult * float(np.sum(values**2))
        ln_k += c
        sum_s2 += q
        small = c <= rel_tol * ln_k and q <= rel_tol * sum_s2
        if sentinels is not None:
            if not small:
                sentinels = None
                quiet = 0
            elif ell >= sentinels:
                break
        elif small:
            quiet += 1
            if quiet == 2:
                sentinels = ell + 2
        else:
            quiet = 0
        ell += 1
    converged = sentinels is not None and ell <= l_cap
    return sectors, converged, dict(r_max=r_max, n_radial=n, n_angle=n_angle, l_max=sectors[-1][0])


def compute_spectrum(spec: KernelSpec, r_max=None, n_radial=None, n_angle=None, rel_tol=1e-10,
                     l_max=None, check=False, check_tol=1e-4, strict=False) -> SpectrumResult:
    """Sector-by-sector singular spectrum and ln K of the kernel operator.

    With ``check`` the run is repeated at doubled radial and angular
    resolution and the change in ln K is added to ``tail_bound``; a change
    above ``check_tol`` relative raises :class:`ResolutionError`. With
    ``strict`` an unconverged sector sweep also raises.
    """
    if spec.amplitude == 0.0:
        return SpectrumResult(sectors=[], truncation=dict(r_max=0.0, n_radial=0, n_angle=0, l_max=-1))
    r_max = default_r_max(spec.beta) if r_max is None else float(r_max)
    n_angle = default_n_angle(r_max) if n_angle is None else int(n_angle)

    sectors, converged, trunc = _solve(spec, r_max, n_radial, n_angle, rel_tol, l_max)
    if strict and not converged:
        raise ResolutionError(f"sector sum not converged by l = {trunc['l_max']}")
    ln_k = logdet_cosh(sectors)
    tail = radial_tail_bound(spec, r_max)
    # the last two sectors are below rel_tol * ln_k; bound the rest geometrically
    last = sum(m * float(np.sum(log_cosh(4.0 * v))) for _, v, m in sectors[-2:])
    tail += last

    if check:
        fine, fine_conv, _ = _solve(spec, r_max, 2 * trunc["n_radial"], 2 * n_angle, rel_tol, l_max)
        delta = abs(logdet_cosh(fine) - ln_k)
        tail += delta
        converged = converged and fine_conv
        if delta > check_tol * max(ln_k, 1e-300):
            raise ResolutionError(f"ln K changed by {delta:.3g} under grid doubling")

    kb = biphoton_from_spectrum(sectors) if any(v.size for _, v, _ in sectors) else None
    return SpectrumResult(sectors=sectors, truncation=trunc, ln_k=ln_k, k_biphot_spectral=kb,
                          tail_bound=tail, converged=converged)


def full_grid_check(spec: KernelSpec, n_per_axis=24, extent=None):
    """ln K from the dense 2D x 2D operator on a Cartesian grid (no angular split)."""
    if n_per_axis**4 > 32**4:
        raise CostGuardError(f"grid {n_per_axis}^4 exceeds 32^4 points")
    if spec.amplitude == 0.0:
        return 0.0
    if extent is None:
        extent = min(default_r_max(spec.beta), max(4.0, math.sqrt(6.0 / spec.beta)))
    x, wx = gl_panels(np.linspace(-extent, extent, 5), max(2, n_per_axis // 4))
    gx, gy = np.meshgrid(x, x, indexing="ij")
    pts = np.stack([gx.ravel(), gy.ravel()], axis=-1)
    wts = (wx[:, None] * wx[None, :]).ravel()
    h = eval_kernel(spec, pts[:, None, :], pts[None, :, :])
    sq = np.sqrt(wts)
    m = sq[:, None] * h * sq[None, :]
    if spec.nu1 == spec.nu2:
        s = np.abs(linalg.eigvalsh(m))
    else:
        s = linalg.svdvals(m)
    return float(np.sum(log_cosh(4.0 * s)))
