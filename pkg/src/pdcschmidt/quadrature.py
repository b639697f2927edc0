"""Gauss-Legendre panels and oscillatory tails of sinc-power integrals."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy import integrate


@lru_cache(maxsize=None)
def _leggauss(order):
    return np.polynomial.legendre.leggauss(order)


def gl_panels(edges, order=16):
    """Nodes and weights of composite Gauss-Legendre on consecutive ``edges``."""
    edges = np.asarray(edges, dtype=float)
    x, w = _leggauss(order)
    a, b = edges[:-1], edges[1:]
    half = 0.5 * (b - a)
    nodes = (half[:, None] * (x[None, :] + 1.0) + a[:, None]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def sin_power_fourier(n):
    """sin^{2n}(s) = c_0 + sum_k c_k cos(2 k s); returns [c_0, c_1, ..., c_n]."""
    scale = 4.0**n
    coeffs = [math.comb(2 * n, n) / scale]
    for k in range(1, n + 1):
        coeffs.append((-1) ** k * 2.0 * math.comb(2 * n, n - k) / scale)
    return coeffs


def _cos_power_tail_qawf(p, omega, a):
    # the piece is O(a^-p / omega); an absolute tolerance on that scale
    scale = a ** (-p) / omega
    val, err = integrate.quad(lambda s: s ** (-p), a, np.inf, weight="cos", wvar=omega, limlst=200,
                              epsabs=1e-12 * scale, epsrel=1e-12)
    return val, err


def _cos_power_tail_asymptotic(p, omega, a, terms=40):
    """Re of int_a^inf e^{i w s} s^{-p} ds by repeated integration by parts.

    F_p = e^{i w a} sum_j (i/w) (-i/w)^j (p)_j a^{-p-j}; the series is
    asymptotic and is cut at its smallest term.
    """
    total = 0j
    term = 1j / omega * a ** (-p)
    last = abs(term)
    for j in range(terms):
        total += term
        nxt = term * (-1j / omega) * (p + j) / a
        if abs(nxt) > last:
            break
        term, last = nxt, abs(nxt)
    val = (np.exp(1j * omega * a) * total).real
    return val, last


def sinc_power_tail(n, a, method="qawf"):
    """int_a^inf sinc^{2n}(s) ds for a > 0, with an error estimate."""
    coeffs = sin_power_fourier(n)
    p = 2 * n
    total = coeffs[0] * a ** (1 - p) / (p - 1)
    err = 0.0
    tail_fn = _cos_power_tail_qawf if method == "qawf" else _cos_power_tail_asymptotic
    for k, c in enumerate(coeffs[1:], start=1):
        v, e = tail_fn(p, 2.0 * k, a)
        total += c * v
        err += abs(c) * e
    return total, err
