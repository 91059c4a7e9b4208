"""Bound spectrum from the potential-parameter spectrum (u1 eigencurves).

At fixed eps < 0 the eigenvalues eta of Sigma(mu(eps), nu, u2) are the values
1/4 - 2 u1 for which eps is an exact level. Tracing them over a grid of
energies gives curves u1_m(eps); a horizontal line u1 = const cuts them at
the bound-state energies.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .eigenkernels import eig_sym_tridiag
from .errors import DomainError, NumericalError
from .orthopoly import JacobiBasisSpec, jacobi_basis_table
from .rational import ThieleInterpolant, thiele_fit
from .tra_core import basis_params, build_sigma, eval_P

log = logging.getLogger(__name__)

DEFAULT_GRID = 64
EPS_TOP = -1e-6


@dataclass(frozen=True)
class ParameterCurve:
    index: int
    eps: np.ndarray
    u1: np.ndarray
    interpolant: ThieleInterpolant

    def __call__(self, eps):
        return self.interpolant(eps)


@dataclass
class PpsLevel:
    eps: float
    curve: int
    bracket: tuple[float, float]
    iterations: int
    fit_guess: float
    flagged: bool = False


@dataclass
class PpsSpectrum:
    levels: list[PpsLevel]
    N: int
    u: tuple[float, float, float]
    warnings: list[str] = field(default_factory=list)

    @property
    def energies(self) -> list[float]:
        return [lv.eps for lv in self.levels]


def default_eps_min(u0: float, u1: float, u2: float) -> float:
    return -(abs(u0) + abs(u1) + abs(u2) + 1.0)


def chebyshev_grid(eps_min: float, eps_max: float = EPS_TOP, size: int = DEFAULT_GRID) -> np.ndarray:
    """Chebyshev points of the first kind on (eps_min, eps_max), ascending."""
    if not eps_min < eps_max < 0:
        raise DomainError(f"need eps_min < eps_max < 0, got ({eps_min}, {eps_max})")
    k = np.arange(size)
    t = -np.cos((2 * k + 1) * np.pi / (2 * size))
    return 0.5 * (eps_min + eps_max) + 0.5 * (eps_max - eps_min) * t


def sigma_eigenvalues(eps: float, u0: float, u2: float, N: int) -> np.ndarray:
    bp = basis_params(eps, u0)
    return eig_sym_tridiag(build_sigma(bp.mu, bp.nu, u2, N))


def sigma_eigenvalue(eps: float, u0: float, u2: float, N: int, m: int) -> float:
    """m-th smallest eigenvalue of Sigma at energy eps."""
    bp = basis_params(eps, u0)
    return float(eig_sym_tridiag(build_sigma(bp.mu, bp.nu, u2, N), select=m)[0])


def parameter_curves(
    u0: float,
    u2: float,
    N: int,
    eps_grid=None,
    M: int | None = None,
    workers: int | None = None,
) -> list[ParameterCurve]:
    """The M highest u1 curves (M smallest Sigma eigenvalues) over ``eps_grid``.

    Grid points where the eigensolver fails are dropped with a warning.
    """
    M = N if M is None else M
    if M > N:
        raise DomainError(f"curve count {M} exceeds basis size {N}")
    if eps_grid is None:
        eps_grid = chebyshev_grid(-(abs(u0) + abs(u2) + 1.0) * 10)
    eps_grid = np.sort(np.asarray(eps_grid, dtype=float))
    if np.any(eps_grid >= 0):
        raise DomainError("energy grid must be strictly negative")

    def solve(eps):
        try:
            return sigma_eigenvalues(eps, u0, u2, N)[:M]
        except NumericalError as exc:
            log.warning("eps=%g skipped: %s", eps, exc)
            return None

    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            rows = list(pool.map(solve, eps_grid))
    else:
        rows = [solve(e) for e in eps_grid]
    keep = [i for i, row in enumerate(rows) if row is not None]
    if len(keep) < 4:
        raise NumericalError(f"only {len(keep)} grid points survived; at least 4 are needed")
    eps_ok = eps_grid[keep]
    eta = np.array([rows[i] for i in keep])
    u1 = (0.25 - eta) / 2
    curves = []
    for m in range(M):
        curves.append(ParameterCurve(m, eps_ok, u1[:, m], thiele_fit(eps_ok, u1[:, m])))
    return curves


def _fit_roots(curve: ParameterCurve, u1_target: float, refine: int = 16) -> list[float]:
    """Roots of the interpolant minus the target, for initial guesses."""
    e = curve.eps
    fine = np.concatenate([np.linspace(a, b, refine, endpoint=False) for a, b in zip(e[:-1], e[1:])] + [e[-1:]])
    g = curve(fine) - u1_target
    roots = []
    for a, b, ga, gb in zip(fine[:-1], fine[1:], g[:-1], g[1:]):
        if np.isfinite(ga) and np.isfinite(gb) and ga * gb < 0:
            roots.append(brentq(lambda x: curve(x) - u1_target, a, b, xtol=1e-14))
    return roots


def pps_spectrum(
    u0: float,
    u1: float,
    u2: float,
    N: int,
    eps_min: float | None = None,
    grid: int = DEFAULT_GRID,
    curves: int | None = None,
    workers: int | None = None,
) -> PpsSpectrum:
    """Finite bound spectrum (eps < 0, ascending) for the line u1 = const.

    Brackets come from the sampled curves and their Thiele fits; every root is
    then polished on the exact function eps -> eta_m(eps) - (1/4 - 2 u1).
    """
    if eps_min is None:
        eps_min = default_eps_min(u0, u1, u2)
    eps_grid = chebyshev_grid(eps_min, EPS_TOP, grid)
    pcs = parameter_curves(u0, u2, N, eps_grid, M=curves, workers=workers)
    target = 0.25 - 2 * u1
    warnings: list[str] = []
    levels: list[PpsLevel] = []
    for curve in pcs:
        samples = curve.u1 - u1
        changes = [j for j in range(len(samples) - 1) if samples[j] * samples[j + 1] < 0]
        exact_zero = [j for j in range(len(samples)) if samples[j] == 0]
        if not changes and not exact_zero:
            continue
        guesses = _fit_roots(curve, u1)
        m = curve.index

        def g(eps, m=m):
            return sigma_eigenvalue(eps, u0, u2, N, m) - target

        for j in exact_zero:
            eps = float(curve.eps[j])
            levels.append(PpsLevel(eps, m, (eps, eps), 0, eps))
        for j in changes:
            a, b = float(curve.eps[j]), float(curve.eps[j + 1])
            inside = [x for x in guesses if a <= x <= b]
            guess = inside[0] if inside else 0.5 * (a + b)
            if not inside:
                warnings.append(f"curve {m}: fit gave no root in [{a:.6g}, {b:.6g}]")
            root, info = brentq(g, a, b, xtol=1e-13, rtol=4 * np.finfo(float).eps, full_output=True)
            flagged = abs(root - guess) > 1e-6
            if flagged:
                warnings.append(f"curve {m}: fit guess {guess:.10g} differs from polished root {root:.10g}")
            levels.append(PpsLevel(float(root), m, (a, b), info.iterations, float(guess), flagged))
    levels.sort(key=lambda lv: lv.eps)
    curve_order = [lv.curve for lv in levels]
    if curve_order != sorted(curve_order):
        warnings.append("curve index is not monotone in energy; possible curve crossing")
    for w in warnings:
        log.warning(w)
    return PpsSpectrum(levels, N, (u0, u1, u2), warnings)


# --- wavefunctions ---------------------------------------------------------------


@dataclass
class StabilityReport:
    """Behaviour of the partial sums psi_N as terms are added.

    ``changes[k]`` is the relative sup-norm change when going from N-1 to N
    terms with N = ``n_terms[k]``. ``critical_n`` is the first N past the
    plateau whose change exceeds ``DIVERGENCE_FACTOR`` times the plateau median.
    """

    n_terms: np.ndarray
    changes: np.ndarray
    plateau: tuple[int, int]
    plateau_median: float
    critical_n: int | None


DIVERGENCE_FACTOR = 10.0
PLATEAU_WIDTH = 3


@dataclass
class Wavefunction:
    r: np.ndarray
    values: np.ndarray
    n_terms: int
    report: StabilityReport


def partial_sums(eps: float, u0: float, u1: float, u2: float, r, n_max: int) -> np.ndarray:
    """psi_N(r) for N = 1..n_max (row N-1)."""
    r = np.asarray(r, dtype=float)
    bp = basis_params(eps, u0)
    P = eval_P(eps, u0, u1, u2, n_max)
    phi = jacobi_basis_table(JacobiBasisSpec(bp.mu, bp.nu), n_max - 1, r)
    return np.cumsum(P[:, None] * phi, axis=0)


def stability_scan(sums: np.ndarray) -> StabilityReport:
    n_terms = np.arange(2, len(sums) + 1)
    sup = np.max(np.abs(sums), axis=1)
    diffs = np.max(np.abs(np.diff(sums, axis=0)), axis=1) / sup[1:]
    width = min(PLATEAU_WIDTH, len(diffs))
    medians = [np.median(diffs[k : k + width]) for k in range(len(diffs) - width + 1)]
    start = int(np.argmin(medians))
    end = start + width - 1
    med = float(medians[start])
    critical = None
    for k in range(end + 1, len(diffs)):
        if diffs[k] > DIVERGENCE_FACTOR * med:
            critical = int(n_terms[k])
            break
    return StabilityReport(n_terms, diffs, (int(n_terms[start]), int(n_terms[end])), med, critical)


def reconstruct_wavefunction(
    eps_m: float,
    u0: float,
    u1: float,
    u2: float,
    r_grid,
    N_terms: int | None = None,
    N_scan: int = 30,
) -> Wavefunction:
    """Partial-sum bound state, normalized to unit sup-norm.

    With ``N_terms=None`` the sum is truncated at the end of the stability
    plateau found by the scan over 2..N_scan terms.
    """
    if N_terms is not None and N_terms < 2:
        raise DomainError("N_terms must be >= 2")
    r = np.asarray(r_grid, dtype=float)
    n_max = max(N_scan, N_terms or 0)
    sums = partial_sums(eps_m, u0, u1, u2, r, n_max)
    report = stability_scan(sums[:N_scan])
    n_use = report.plateau[1] if N_terms is None else N_terms
    psi = sums[n_use - 1]
    psi = psi / np.max(np.abs(psi))
    return Wavefunction(r, psi, n_use, report)


def count_nodes(values, rel_floor: float = 1e-6) -> int:
    """Sign changes of ``values``, ignoring samples below rel_floor * max."""
    v = np.asarray(values)
    v = v[np.abs(v) > rel_floor * np.max(np.abs(v))]
    return int(np.sum(np.sign(v[1:]) != np.sign(v[:-1])))
