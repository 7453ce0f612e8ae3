"""Elliptic integrals and Jacobi functions against independent oracles."""

import math

import mpmath
import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import quad

from blochtop.elliptic import complete_E, complete_K, jacobi_sn_cn_dn

M_GRID = [0.0, 0.02, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.999999]


def K_quad(m):
    val, _ = quad(lambda th: 1.0 / math.sqrt(1.0 - m * math.sin(th) ** 2),
                  0.0, 0.5 * math.pi, epsabs=1e-12, epsrel=1e-12, limit=200)
    return val


def E_quad(m):
    val, _ = quad(lambda th: math.sqrt(1.0 - m * math.sin(th) ** 2),
                  0.0, 0.5 * math.pi, epsabs=1e-12, epsrel=1e-12)
    return val


@pytest.mark.parametrize("m", M_GRID)
def test_complete_K_matches_quadrature(m):
    assert_allclose(complete_K(m), K_quad(m), rtol=1e-11)


@pytest.mark.parametrize("m", M_GRID + [1.0])
def test_complete_E_matches_quadrature(m):
    assert_allclose(complete_E(m), E_quad(m), rtol=1e-11)


@pytest.mark.parametrize("m", M_GRID)
def test_complete_integrals_match_mpmath(m):
    assert_allclose(complete_K(m), float(mpmath.ellipk(m)), rtol=1e-13)
    assert_allclose(complete_E(m), float(mpmath.ellipe(m)), rtol=1e-13)


def test_special_values():
    assert_allclose(complete_K(0.0), 0.5 * math.pi, rtol=1e-15)
    assert_allclose(complete_E(0.0), 0.5 * math.pi, rtol=1e-15)
    assert complete_E(1.0) == 1.0
    # A&S 17.3.33 table entry for m = 1/2
    assert_allclose(complete_K(0.5), 1.8540746773013719, rtol=1e-14)
    assert_allclose(complete_E(0.5), 1.3506438810476755, rtol=1e-14)


@pytest.mark.parametrize("m", [0.1, 0.3, 0.5, 0.8])
def test_legendre_relation(m):
    lhs = (complete_E(m) * complete_K(1.0 - m)
           + complete_E(1.0 - m) * complete_K(m)
           - complete_K(m) * complete_K(1.0 - m))
    assert_allclose(lhs, 0.5 * math.pi, rtol=1e-13)


def test_K_log_asymptote_near_one():
    m = 1.0 - 1e-8
    assert_allclose(complete_K(m), 0.5 * math.log(16.0 / (1.0 - m)), rtol=1e-6)


def test_K_domain_errors():
    with pytest.raises(ValueError):
        complete_K(-0.1)
    with pytest.raises(ValueError):
        complete_K(1.0)
    with pytest.raises(ValueError):
        complete_E(1.2)


@pytest.mark.parametrize("m", [0.0, 0.1, 0.5, 0.9, 0.99, 0.999999])
def test_jacobi_matches_mpmath(m):
    K = complete_K(m) if m < 1.0 else 10.0
    u = np.linspace(-10.0 * K, 10.0 * K, 41)
    sn, cn, dn = jacobi_sn_cn_dn(u, m)
    ref_sn = [float(mpmath.ellipfun("sn", ui, m=m)) for ui in u]
    ref_cn = [float(mpmath.ellipfun("cn", ui, m=m)) for ui in u]
    ref_dn = [float(mpmath.ellipfun("dn", ui, m=m)) for ui in u]
    assert_allclose(sn, ref_sn, atol=1e-12)
    assert_allclose(cn, ref_cn, atol=1e-12)
    assert_allclose(dn, ref_dn, atol=1e-12)


@pytest.mark.parametrize("m", [0.0, 0.2, 0.5, 0.9, 0.999999, 1.0])
def test_jacobi_identities(m):
    rng = np.random.default_rng(7)
    u = rng.uniform(-20.0, 20.0, size=200)
    sn, cn, dn = jacobi_sn_cn_dn(u, m)
    assert_allclose(sn**2 + cn**2, 1.0, atol=1e-11)
    assert_allclose(dn**2 + m * sn**2, 1.0, atol=1e-11)


@pytest.mark.parametrize("m", [0.1, 0.5, 0.9, 0.99])
def test_jacobi_periodicity(m):
    K = complete_K(m)
    u = np.linspace(-3.0, 3.0, 17)
    for f, g in zip(jacobi_sn_cn_dn(u, m), jacobi_sn_cn_dn(u + 4.0 * K, m)):
        assert_allclose(f, g, atol=1e-10)


@pytest.mark.parametrize("m", [0.1, 0.5, 0.9])
def test_jacobi_derivatives(m):
    u = np.linspace(-4.0, 4.0, 23)
    h = 1e-5
    snp, cnp, dnp = jacobi_sn_cn_dn(u + h, m)
    snm, cnm, dnm = jacobi_sn_cn_dn(u - h, m)
    sn, cn, dn = jacobi_sn_cn_dn(u, m)
    assert_allclose((snp - snm) / (2 * h), cn * dn, atol=1e-7)
    assert_allclose((cnp - cnm) / (2 * h), -sn * dn, atol=1e-7)
    assert_allclose((dnp - dnm) / (2 * h), -m * sn * cn, atol=1e-7)


def test_jacobi_hyperbolic_limit():
    u = np.linspace(-5.0, 5.0, 11)
    sn, cn, dn = jacobi_sn_cn_dn(u, 1.0)
    assert_allclose(sn, np.tanh(u), rtol=1e-15)
    assert_allclose(cn, 1.0 / np.cosh(u), rtol=1e-15)
    assert_allclose(dn, cn, rtol=1e-15)
    # just inside the switch the same closed form is used
    sn2, _, _ = jacobi_sn_cn_dn(u, 1.0 - 1e-13)
    assert_allclose(sn2, np.tanh(u), rtol=1e-15)


def test_jacobi_scalar_and_shape():
    s = jacobi_sn_cn_dn(0.3, 0.5)
    assert all(isinstance(x, float) for x in s)
    out = jacobi_sn_cn_dn(np.zeros((2, 3)), 0.5)
    assert all(x.shape == (2, 3) for x in out)
    sn, cn, dn = jacobi_sn_cn_dn(0.0, 0.7)
    assert (sn, cn, dn) == (0.0, 1.0, 1.0)


def test_jacobi_domain_errors():
    with pytest.raises(ValueError):
        jacobi_sn_cn_dn(0.1, -0.2)
    with pytest.raises(ValueError):
        jacobi_sn_cn_dn(0.1, 1.0001)
