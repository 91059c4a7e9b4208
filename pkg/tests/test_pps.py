import numpy as np
import pytest
import scipy.linalg as sla

from oracles import fd_levels_extrapolated
from tra_spectrum import pps
from tra_spectrum.errors import DomainError, NumericalError
from tra_spectrum.pps import (
    chebyshev_grid,
    count_nodes,
    parameter_curves,
    partial_sums,
    pps_spectrum,
    reconstruct_wavefunction,
    sigma_eigenvalues,
    stability_scan,
)
from tra_spectrum.orthopoly import JacobiBasisSpec, jacobi_basis_eval
from tra_spectrum.tra_core import basis_params, eval_P, pt_spectrum

U1 = (1.0, -50.0, 2.0)


def test_chebyshev_grid():
    g = chebyshev_grid(-10.0, -1e-6, 16)
    assert len(g) == 16
    assert np.all(np.diff(g) > 0)
    assert g[0] > -10 and g[-1] < -1e-6
    with pytest.raises(DomainError):
        chebyshev_grid(-1.0, 0.5)
    with pytest.raises(DomainError):
        chebyshev_grid(-1.0, -2.0)


def test_curves_are_sigma_eigenvalues():
    grid = chebyshev_grid(-40.0, size=12)
    curves = parameter_curves(1.0, 2.0, 20, grid, M=5)
    assert [c.index for c in curves] == list(range(5))
    eta = sigma_eigenvalues(grid[3], 1.0, 2.0, 20)
    for c in curves:
        assert c.u1[3] == pytest.approx((0.25 - eta[c.index]) / 2, rel=1e-13)
        # the fitted interpolant passes through its samples
        np.testing.assert_allclose(c(c.eps), c.u1, rtol=1e-10)
    # curves are ordered: curve 0 lies above the others
    assert np.all(curves[0].u1 > curves[1].u1)


def test_curve_count_checked():
    with pytest.raises(DomainError):
        parameter_curves(1.0, 2.0, 5, M=6)
    with pytest.raises(DomainError):
        parameter_curves(1.0, 2.0, 5, eps_grid=[-2.0, 0.0, -1.0, -3.0])


def test_failed_grid_points_are_dropped(monkeypatch, caplog):
    real = pps.sigma_eigenvalues
    calls = {"n": 0}

    def flaky(eps, *args):
        calls["n"] += 1
        if calls["n"] % 4 == 0:
            raise NumericalError("synthetic failure")
        return real(eps, *args)

    monkeypatch.setattr(pps, "sigma_eigenvalues", flaky)
    grid = chebyshev_grid(-40.0, size=16)
    curves = parameter_curves(1.0, 2.0, 10, grid, M=2)
    assert len(curves[0].eps) == 12
    assert "synthetic failure" in caplog.text

    monkeypatch.setattr(pps, "sigma_eigenvalues", lambda *a: (_ for _ in ()).throw(NumericalError("x")))
    with pytest.raises(NumericalError):
        parameter_curves(1.0, 2.0, 10, grid)


def test_table1_against_finite_differences():
    spec = pps_spectrum(*U1, 100)
    fd = fd_levels_extrapolated(U1)
    assert len(spec.energies) == 4
    np.testing.assert_allclose(spec.energies, fd, atol=5e-6)
    assert not spec.warnings
    assert not any(lv.flagged for lv in spec.levels)
    assert [lv.curve for lv in spec.levels] == sorted(lv.curve for lv in spec.levels)


def test_levels_do_not_depend_on_grid():
    a = pps_spectrum(*U1, 30, grid=32).energies
    b = pps_spectrum(*U1, 30, grid=80).energies
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-11)


def test_pt_limit():
    approx = pps_spectrum(1.0, -50.0, 1e-6, 50).energies
    exact = pt_spectrum(1.0, -50.0)
    assert len(approx) == len(exact) == 4
    np.testing.assert_allclose(approx, exact, atol=1e-4)
    np.testing.assert_allclose(pps_spectrum(1.0, -50.0, 0.0, 50).energies, exact, atol=1e-10)


def test_repulsive_line_has_no_levels():
    assert pps_spectrum(1.0, 0.0, 2.0, 30).energies == []


def test_stability_scan_synthetic():
    # geometric convergence then blow-up after N = 9
    r = np.linspace(0, 1, 5)
    terms = [np.sin(r + 1) * 10.0**-k for k in range(8)] + [np.cos(r) * 10.0**k for k in range(6)]
    sums = np.cumsum(terms, axis=0)
    rep = stability_scan(sums)
    assert rep.plateau[1] <= 8
    assert rep.critical_n == 9
    assert rep.plateau_median < 1e-4


def test_partial_sums_match_expansion():
    r = np.linspace(0.1, 5, 7)
    eps = -27.878950096074
    sums = partial_sums(eps, *U1, r, 6)
    assert sums.shape == (6, 7)
    P = eval_P(eps, *U1, 6)
    spec = JacobiBasisSpec(basis_params(eps, U1[0]).mu, basis_params(eps, U1[0]).nu)
    for k in range(1, 6):
        np.testing.assert_allclose(sums[k] - sums[k - 1], P[k] * jacobi_basis_eval(spec, k, r), rtol=1e-10, atol=1e-14)


@pytest.mark.parametrize("m", range(4))
def test_wavefunction_nodes_and_onset(m):
    eps = pps_spectrum(*U1, 100).energies[m]
    r = np.linspace(0, 8, 801)[1:]
    wf = reconstruct_wavefunction(eps, *U1, r)
    assert count_nodes(wf.values) == m
    assert wf.report.critical_n is not None and 5 <= wf.report.critical_n <= 12
    assert np.max(np.abs(wf.values)) == pytest.approx(1.0)


def test_wavefunction_shape_matches_finite_differences():
    eps = pps_spectrum(*U1, 100).energies[1]
    n, r_max = 4000, 14.0
    h = r_max / (n + 1)
    r = h * np.arange(1, n + 1)
    t = np.tanh(r) ** 2
    V = (U1[0] + U1[1] * t + U1[2] * t * t) / np.sinh(r) ** 2
    w, v = sla.eigh_tridiagonal(1 / h**2 + V, np.full(n - 1, -0.5 / h**2), select="i", select_range=(1, 1))
    fd = v[:, 0] / np.max(np.abs(v[:, 0]))
    wf = reconstruct_wavefunction(eps, *U1, r)
    fd *= np.sign(fd @ wf.values)
    assert np.max(np.abs(wf.values - fd)) < 5e-3


def test_wavefunction_off_level_never_settles():
    r = np.linspace(0, 8, 401)[1:]
    on = reconstruct_wavefunction(-27.878950096074, *U1, r).report.plateau_median
    off = reconstruct_wavefunction(-25.0, *U1, r).report.plateau_median
    assert off > 100 * on


def test_count_nodes_floor():
    x = np.linspace(0, 3 * np.pi, 300)
    assert count_nodes(np.sin(x)) == 2
    tail = np.concatenate([np.sin(x), 1e-9 * np.array([1, -1, 1, -1])])
    assert count_nodes(tail) == 2


def test_reconstruct_argument_check():
    with pytest.raises(DomainError):
        reconstruct_wavefunction(-1.0, *U1, [1.0], N_terms=1)
