import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import eval_jacobi, roots_jacobi

from tra_spectrum.errors import DomainError
from tra_spectrum.orthopoly import JacobiBasisSpec, jacobi_basis_table, jacobi_norm
from tra_spectrum.tra_core import (
    MAX_RECURSION_TERMS,
    BasisParams,
    basis_params,
    build_J,
    build_J_threshold,
    build_sigma,
    eval_P,
    first_coefficient,
    pt_spectrum,
    recursion_coeffs,
    recursion_vector,
)

U1 = (1.0, -50.0, 2.0)
TABLE1_N100 = [-27.878950096074, -14.799140053574, -5.854541479288, -0.996376819225]


def test_basis_params():
    bp = basis_params(-8.0, 1.0)
    assert bp.mu == pytest.approx(4.0)
    assert bp.nu == pytest.approx(1.5)
    with pytest.raises(DomainError):
        basis_params(0.0, 1.0)
    with pytest.raises(DomainError):
        basis_params(-1.0, -0.2)
    assert BasisParams.at_threshold(1.0) == BasisParams(0.0, 1.5)


def test_recursion_coeffs_formula():
    mu, nu = 2.7, 1.5
    for n in range(5):
        s = 2 * n + mu + nu
        c_expect = (nu**2 - mu**2) / (s * (s + 2))
        d_expect = 2 / (s + 2) * math.sqrt((n + 1) * (n + mu + 1) * (n + nu + 1) * (n + mu + nu + 1) / ((s + 1) * (s + 3)))
        c, d = recursion_coeffs(n, mu, nu)
        assert c == pytest.approx(c_expect, rel=1e-14)
        assert d == pytest.approx(d_expect, rel=1e-14)


def test_recursion_coeffs_match_jacobi_operator():
    # C_n, D_n are the entries of multiplication by x in the orthonormal Jacobi basis
    mu, nu = 3.2, 1.5
    x, w = roots_jacobi(30, mu, nu)
    p = np.array([jacobi_norm(n, mu, nu) * eval_jacobi(n, mu, nu, x) for n in range(6)]) / 2**0.25
    X = (p * w * x) @ p.T
    c, d = recursion_coeffs(np.arange(6), mu, nu)
    np.testing.assert_allclose(np.diag(X), c, atol=1e-12)
    np.testing.assert_allclose(np.diag(X, 1), d[:5], atol=1e-12)


@settings(max_examples=40)
@given(
    eps=st.floats(-80, -1e-3),
    u0=st.floats(0.01, 10),
    u1=st.floats(-100, 10),
    u2=st.floats(-50, 200),
    N=st.integers(1, 40),
)
def test_sigma_is_affine_in_J(eps, u0, u1, u2, N):
    bp = basis_params(eps, u0)
    sigma = build_sigma(bp.mu, bp.nu, u2, N).to_dense()
    J = build_J(eps, u0, u1, u2, N).to_dense()
    expect = 4 * J + (0.25 - 2 * u1) * np.eye(N)
    np.testing.assert_allclose(sigma, expect, rtol=1e-12, atol=1e-10 * (1 + np.abs(expect).max()))


def test_threshold_J_uses_mu_zero():
    J0 = build_J_threshold(1.0, -50, 2, 5).to_dense()
    Jb = build_J(-1e-30, 1.0, -50, 2, 5).to_dense()
    np.testing.assert_allclose(J0, Jb, rtol=1e-12)


@pytest.mark.parametrize("eps", [-27.0, -3.5, -0.2])
def test_first_coefficient_matches_recursion(eps):
    bp = basis_params(eps, 1.0)
    P = eval_P(eps, 1.0, -50, 2, 3)
    assert P[0] == 1.0
    assert first_coefficient(bp, -50, 2) == pytest.approx(P[1], rel=1e-12)


def test_eval_P_errors():
    with pytest.raises(DomainError):
        eval_P(-1.0, 1.0, -50, 0.0, 5)
    with pytest.raises(DomainError):
        eval_P(-1.0, 1.0, -50, 2.0, MAX_RECURSION_TERMS + 1)
    with pytest.raises(DomainError):
        eval_P(0.0, 1.0, -50, 2.0, 5)


@pytest.mark.parametrize("k", range(4))
def test_recursion_vector_residual_at_levels(k):
    eps = TABLE1_N100[k]
    P, mismatch = recursion_vector(eps, *U1, 100)
    bp = basis_params(eps, U1[0])
    res = build_sigma(bp.mu, bp.nu, U1[2], 100) @ P - (0.25 - 2 * U1[1]) * P
    assert np.linalg.norm(res) <= 1e-6 * np.linalg.norm(P)
    assert mismatch < 1e-6
    # leading terms agree with the forward recursion
    np.testing.assert_allclose(P[:3], eval_P(eps, *U1, 3), rtol=0, atol=1e-9)


def test_recursion_vector_off_level_mismatch():
    _, mismatch = recursion_vector(-20.0, *U1, 50)
    assert mismatch > 1.0


def _ode_residual(eps, u, N, n_grid):
    P, _ = recursion_vector(eps, *u, N)
    bp = basis_params(eps, u[0])
    r = np.linspace(0.2, 6, n_grid)
    h = r[1] - r[0]
    psi = P @ jacobi_basis_table(JacobiBasisSpec(bp.mu, bp.nu), N - 1, r)
    t = np.tanh(r) ** 2
    V = (u[0] + u[1] * t + u[2] * t * t) / np.sinh(r) ** 2
    d2 = (psi[2:] - 2 * psi[1:-1] + psi[:-2]) / h**2
    return np.abs(-0.5 * d2 + (V[1:-1] - eps) * psi[1:-1]).max() / np.abs(psi).max()


def test_expansion_solves_radial_equation_at_level():
    # second-order differences: the residual must fall ~16x when h shrinks 4x
    coarse = _ode_residual(TABLE1_N100[0], U1, 20, 2001)
    fine = _ode_residual(TABLE1_N100[0], U1, 20, 8001)
    assert fine < 5e-5
    assert coarse / fine == pytest.approx(16, rel=0.1)
    assert _ode_residual(-27.0, U1, 20, 8001) > 0.1


def test_pt_spectrum_closed_form():
    levels = pt_spectrum(1.0, -50.0)
    nu, root = 1.5, math.sqrt(100.25)
    assert levels == pytest.approx([-0.5 * (2 * n + 1 + nu - root) ** 2 for n in range(4)], rel=1e-15)
    assert levels[0] == pytest.approx(-28.21877, abs=1e-5)
    assert pt_spectrum(1.0, 0.0) == []
    with pytest.raises(DomainError):
        pt_spectrum(1.0, 1.0)


def test_pt_levels_are_sigma_eigenvalues():
    # with u2 = 0 Sigma is diagonal and each level makes one diagonal entry hit 1/4 - 2 u1
    for n, eps in enumerate(pt_spectrum(1.0, -50.0)):
        bp = basis_params(eps, 1.0)
        sig = build_sigma(bp.mu, bp.nu, 0.0, 10)
        assert sig.diag[n] == pytest.approx(100.25, rel=1e-13)
        np.testing.assert_array_equal(sig.sub, 0.0)
