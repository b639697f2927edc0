"""Thin-crystal traces against an independent transfer-matrix quadrature."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pdcschmidt.errors import InvalidInputError, SingularFormError
from pdcschmidt.gausstrace import (
    GAUSSIAN_ANALYTIC,
    cycle_form,
    fitted_beta_power,
    richardson,
    trace_tc,
    xi_limit,
    xi_tc,
)
from pdcschmidt.params import BASELINE, derive, retarget
from pdcschmidt.quadrature import gl_panels


def transfer_cycle(n, beta, nu1, nu2, half_width=150.0, panels=60, order=24):
    """One Cartesian component of the 2n-fold cycle integral as tr (T^T T)^n.

    T[e, o] = exp(-(beta/2)(x_e - x_o)^2 - (nu1 x_e + nu2 x_o)^2) on a
    Gauss-Legendre grid. Shares nothing with the determinant route.
    """
    x, w = gl_panels(np.linspace(-half_width, half_width, panels + 1), order)
    sw = np.sqrt(w)
    q = 0.5 * beta * (x[:, None] - x[None, :]) ** 2 + (nu1 * x[:, None] + nu2 * x[None, :]) ** 2
    t = sw[:, None] * np.exp(-q) * sw[None, :]
    step = t.T @ t
    return float(np.trace(np.linalg.matrix_power(step, n)))


def xi_from_cycle(n, beta, nu1, nu2, component):
    # tr Z^n = 16^n amp^{2n} component^2 with amp^2 = A X^2 beta / (2 pi^2)
    a_beta = (nu1 * nu2) ** 2 / 4
    big_a = a_beta / beta
    return 16.0**n * (a_beta / (2 * math.pi**2)) ** n * component**2 / big_a


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("nu1", [1.0, 1.0026554013277007, 1.03])
def test_cycle_integral_matches_transfer_matrix(n, nu1):
    beta = 1e-2
    nu2 = 2.0 - nu1
    form = cycle_form(n, beta, nu1, nu2)
    ref = transfer_cycle(n, beta, nu1, nu2)
    assert form.component_integral() == pytest.approx(ref, rel=5e-9)
    assert xi_tc(n, beta, nu1, nu2) == pytest.approx(xi_from_cycle(n, beta, nu1, nu2, ref), rel=5e-9)


def test_second_order_closed_form():
    for beta in (1e-3, 0.05, 0.7):
        assert xi_tc(2, beta) == pytest.approx(2.0 / (2.0 + beta) ** 2, rel=1e-13)


@given(st.floats(1e-4, 2.0), st.floats(0.9, 1.1))
def test_first_order_is_exactly_one(beta, nu1):
    assert xi_tc(1, beta, nu1, 2.0 - nu1) == pytest.approx(1.0, abs=1e-10)


@given(st.integers(1, 6), st.floats(1e-3, 1.0), st.floats(0.9, 1.1))
def test_cycle_form_is_symmetric_positive(n, beta, nu1):
    m = cycle_form(n, beta, nu1, 2.0 - nu1).matrix
    assert np.array_equal(m, m.T)
    assert np.all(np.linalg.eigvalsh(m) > 0)


def test_circulant_at_equal_indices():
    m = cycle_form(3, 0.1).matrix
    assert np.allclose(np.roll(np.roll(m, 2, axis=0), 2, axis=1), m)


@pytest.mark.parametrize("n", range(1, 7))
def test_limits(n):
    value, err = xi_limit(n)
    assert value == pytest.approx(2.0 ** (n - 1) / n**2, rel=1e-10)
    assert err < 1e-9


def test_limits_do_not_depend_on_nu_ratio_at_leading_order():
    assert xi_limit(3, 1.01, 0.99)[0] == pytest.approx(xi_limit(3)[0], rel=1e-3)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_beta_exponent(n):
    betas = np.geomspace(1e-4, 1e-2, 9)
    p, naive = fitted_beta_power(n, betas)
    assert p == pytest.approx(-1.0, abs=1e-3)
    assert naive == pytest.approx(-1.0, abs=5e-2)


def test_richardson_exact_on_polynomials():
    h = [0.4, 0.2, 0.1, 0.05]
    vals = [3.0 - 2 * x + 0.5 * x**2 - x**3 for x in h]
    est, err, _ = richardson(h, vals)
    assert est == pytest.approx(3.0, abs=1e-13)


def test_trace_from_params():
    p = derive(retarget(BASELINE, beta=0.01, big_x=0.3))
    res = trace_tc(2, p)
    assert res.method == GAUSSIAN_ANALYTIC
    assert res.value == pytest.approx(res.xi * p.big_a * p.big_x**4, rel=1e-14)
    assert res.err_estimate < 1e-10 * res.value


def test_beta_zero_is_singular():
    with pytest.raises(SingularFormError):
        cycle_form(2, 0.0)
    with pytest.raises(InvalidInputError):
        cycle_form(0, 0.1)
