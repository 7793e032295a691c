import math

import mpmath
import numpy as np
import pytest

from conftest import EULER_GAMMA, LOG_2PI_MINUS_GAMMA
from nbsums.arith import sieve
from nbsums.errors import AccuracyError, DomainError
from nbsums.nb import (
    dn_squared,
    gram_minimize,
    linear_terms,
    linear_terms_closed,
    nb_asymptotic,
    verify_bhk_integral,
    vn_coefficients,
    zeta_half,
    zeta_half_array,
)


@pytest.mark.parametrize("t", [0.0, 1.0, 14.134725, 17.5, 100.0, 999.5, 2000.0])
def test_zeta_against_mpmath(t):
    z = zeta_half(t)
    ref = complex(mpmath.zeta(mpmath.mpc(0.5, t)))
    assert abs(z.value - ref) <= 1e-9 * max(1.0, abs(ref))
    assert z.err_est < 1e-9


def test_zeta_half_value():
    assert zeta_half(0).re == pytest.approx(-1.4603545088095868, abs=1e-12)


def test_conjugate_symmetry():
    a, b = zeta_half(17.5), zeta_half(-17.5)
    assert abs(a.value - b.value.conjugate()) < 1e-10


def test_first_zero_bracketed():
    # Z(t) = exp(i theta(t)) zeta(1/2 + it) is real
    def Z(t):
        return float(mpmath.re(mpmath.exp(1j * mpmath.siegeltheta(t)) * zeta_half(t).value))

    assert Z(14.1) * Z(14.2) < 0


def test_zeta_range():
    with pytest.raises(AccuracyError):
        zeta_half(2e4)
    assert zeta_half_array(np.array([1.0, 2.0]))[0].shape == (2,)


def test_bhk_one_one():
    r = verify_bhk_integral(1, 1, 2000)
    assert abs(r.quadrature.value - LOG_2PI_MINUS_GAMMA) <= 1e-3
    assert r.passes


def test_bhk_symmetry():
    a = verify_bhk_integral(1, 2).quadrature.value
    b = verify_bhk_integral(2, 1).quadrature.value
    assert abs(a - b) < 1e-6


@pytest.mark.parametrize("h, k", [(2, 3), (1, 2), (3, 5), (4, 6)])
def test_bhk_matches_closed_form(h, k):
    r = verify_bhk_integral(h, k)
    assert abs(r.difference) <= 1e-3


def test_bhk_domain():
    with pytest.raises(DomainError):
        verify_bhk_integral(60, 1)


def test_vn_coefficients():
    a = vn_coefficients(10)
    assert a[0] == 1.0 and a[-1] == 0.0 and a[3] == 0.0
    assert vn_coefficients(20, sieve(30))[3] == 0.0
    with pytest.raises(DomainError):
        vn_coefficients(1)


def test_linear_terms_quadrature_vs_closed():
    vals, errs = linear_terms(50)
    closed = linear_terms_closed(50)
    assert np.all(np.abs(vals - closed) <= errs + 1e-7)
    assert closed[0] == pytest.approx(EULER_GAMMA - 1, abs=1e-15)


def test_linear_terms_refinement():
    v2, e2 = linear_terms(20, 2000.0)
    v4, _ = linear_terms(20, 4000.0)
    assert np.all(np.abs(v2 - v4) <= e2)


def test_single_term_routes():
    # 1 - 2 l_1 + b_11 against the direct integral of |1 - zeta|^2
    g, ge = dn_squared(1, np.ones(1), "gram", linear="quadrature")
    d, de = dn_squared(1, np.ones(1), "direct")
    assert g == pytest.approx(1 - 2 * (EULER_GAMMA - 1) + LOG_2PI_MINUS_GAMMA, abs=1e-5)
    assert abs(g - d) <= ge + de


def test_zero_polynomial():
    assert dn_squared(3, np.zeros(3))[0] == 1.0


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_gram_vs_direct(N):
    a = vn_coefficients(N)
    g, ge = dn_squared(N, a, "gram")
    d, de = dn_squared(N, a, "direct")
    assert abs(g - d) <= ge + de


def test_dn_domain():
    with pytest.raises(DomainError):
        dn_squared(30, np.zeros(30), "direct")
    with pytest.raises(DomainError):
        dn_squared(3, np.zeros(2))
    with pytest.raises(DomainError):
        dn_squared(3, np.zeros(3), "other")


def test_minimize_one():
    r = gram_minimize(1)
    ell = linear_terms_closed(1)[0]
    assert r.coefficients[0] == pytest.approx(ell / LOG_2PI_MINUS_GAMMA, rel=1e-14)
    assert r.value == pytest.approx(1 - ell**2 / LOG_2PI_MINUS_GAMMA, rel=1e-14)


def test_minimize_beats_vn_and_is_monotone():
    mu = sieve(100)
    prev = math.inf
    for N in (10, 50, 100):
        opt = gram_minimize(N)
        assert not opt.regularized
        assert opt.value <= dn_squared(N, vn_coefficients(N, mu))[0] + 1e-10
        assert opt.value <= prev + 1e-12
        prev = opt.value


def test_vn_sweep_decreasing():
    mu = sieve(500)
    vals = [dn_squared(N, vn_coefficients(N, mu))[0] for N in (10, 20, 50, 100, 200, 300, 400, 500)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert nb_asymptotic(100) == pytest.approx((2 + EULER_GAMMA - math.log(4 * math.pi)) / math.log(100))
