"""Complex scaling in the Laguerre basis.

With the u0/r^2 part absorbed into the centrifugal term (effective angular
momentum l~), the Hamiltonian is H = T(l~) + V~(r), V~ non-singular and short
range. The basis

    chi_n(r) = c_n (g r)^(l~+1) exp(-g r/2) L_n^(2l~+1)(g r),   g = rho exp(-i theta)

makes the kinetic and overlap matrices tridiagonal. All three matrices are
used with a common factor g dropped (it cancels in the generalized problem):

    T_nm = (g^2/8) [2(n+l~+1) d_nm + sqrt(..) d_n,m+-1]
    O_nm = 2(n+l~+1) d_nm - sqrt(..) d_n,m+-1
    V_nm = int_0^inf y^(2l~+2) e^-y c_n c_m L_n L_m V~(y/g) dy
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .eigenkernels import SymTridiag, eig_gen_complex
from .errors import DomainError
from .orthopoly import gauss_rule, laguerre_table
from .potential import PotentialParams, effective_ell, eval_regularized

log = logging.getLogger(__name__)

DEFAULT_DRHO = 1.0
DEFAULT_DTHETA = 1e-3
DEFAULT_TOL = 1e-4
BOUND_IMAG_TOL = 1e-8
SWEEP_BOUND_TOL = 1e-4


@dataclass(frozen=True)
class CsConfig:
    """Computational parameters; ``rho`` is in units of lambda."""

    ell: int
    rho: float
    theta: float
    N: int
    kquad: int | None = None
    u0: float = 0.0

    def __post_init__(self):
        if self.ell < 0:
            raise DomainError(f"ell must be >= 0, got {self.ell}")
        if not self.rho > 0:
            raise DomainError(f"rho must be positive, got {self.rho}")
        if not 0 <= self.theta < math.pi / 2:
            raise DomainError(f"theta must lie in [0, pi/2), got {self.theta}")
        if self.N < 1:
            raise DomainError("N must be >= 1")
        if self.kquad is not None and self.kquad < self.N:
            raise DomainError(f"kquad ({self.kquad}) must be >= N ({self.N})")

    @property
    def ell_eff(self) -> float:
        return effective_ell(self.u0, self.ell)

    @property
    def gamma(self) -> complex:
        return self.rho * complex(math.cos(self.theta), -math.sin(self.theta))

    @property
    def quad_order(self) -> int:
        return self.N + 20 if self.kquad is None else self.kquad

    def perturbed(self, drho: float = DEFAULT_DRHO, dtheta: float = DEFAULT_DTHETA) -> CsConfig:
        return replace(self, rho=self.rho * drho, theta=self.theta + dtheta)


def config_for(p: PotentialParams, ell: int, rho: float, theta: float, N: int, kquad: int | None = None) -> CsConfig:
    """CsConfig with the basis scale given in units of lambda."""
    return CsConfig(ell, rho * p.lam, theta, N, kquad, p.u[0])


def cs_kinetic(cfg: CsConfig) -> SymTridiag:
    n = np.arange(cfg.N)
    le = cfg.ell_eff
    g2 = cfg.gamma**2
    diag = g2 / 4 * (n + le + 1)
    sub = g2 / 8 * np.sqrt((n[:-1] + 1) * (n[:-1] + 2 * le + 2))
    return SymTridiag(diag, sub)


def cs_overlap(cfg: CsConfig) -> SymTridiag:
    n = np.arange(cfg.N)
    le = cfg.ell_eff
    return SymTridiag(2 * (n + le + 1.0), -np.sqrt((n[:-1] + 1) * (n[:-1] + 2 * le + 2)))


def cs_potential_matrix(p: PotentialParams, cfg: CsConfig) -> np.ndarray:
    """Complex-symmetric matrix of the regularized potential on the rotated ray."""
    alpha = 2 * cfg.ell_eff + 1
    rule = gauss_rule("laguerre", cfg.quad_order, alpha)
    y, w = rule.nodes, rule.weights
    keep = w > 0
    y, w = y[keep], w[keep]
    n = np.arange(cfg.N)
    log_c = 0.5 * (np.array([math.lgamma(k + 1) for k in n]) - np.array([math.lgamma(k + alpha + 1) for k in n]))
    # orthonormal Laguerre values scaled by sqrt(w y)
    L = laguerre_table(cfg.N - 1, alpha, y) * np.exp(log_c)[:, None] * np.sqrt(w * y)
    v = eval_regularized(p, y / cfg.gamma)
    V = (L * v) @ L.T
    return 0.5 * (V + V.T)


@dataclass
class HarrisSet:
    eigenvalues: np.ndarray
    config: CsConfig


def cs_hamiltonian(p: PotentialParams, cfg: CsConfig) -> np.ndarray:
    return cs_kinetic(cfg).to_dense() + cs_potential_matrix(p, cfg)


def harris_eigenvalues(p: PotentialParams, cfg: CsConfig) -> HarrisSet:
    """All N eigenvalues of (H, Omega) in the Laguerre basis."""
    if cfg.u0 != p.u[0]:
        cfg = replace(cfg, u0=p.u[0])
    H = cs_hamiltonian(p, cfg)
    omega = cs_overlap(cfg).to_dense()
    return HarrisSet(eig_gen_complex(H, omega), cfg)


@dataclass
class ClassifiedSpectrum:
    bound: list[float] = field(default_factory=list)
    resonances: list[complex] = field(default_factory=list)
    unstable: list[tuple[complex, float]] = field(default_factory=list)
    theta: float = 0.0


def _greedy_match(a: np.ndarray, b: np.ndarray):
    d = np.abs(a[:, None] - b[None, :])
    pairs = []
    used_a, used_b = set(), set()
    for flat in np.argsort(d, axis=None):
        i, j = divmod(int(flat), len(b))
        if i in used_a or j in used_b:
            continue
        pairs.append((i, j, float(d[i, j])))
        used_a.add(i)
        used_b.add(j)
        if len(used_a) == len(a) or len(used_b) == len(b):
            break
    unmatched = [i for i in range(len(a)) if i not in used_a]
    return pairs, unmatched


def classify_eigenvalues(
    run_a: HarrisSet | np.ndarray,
    run_b: HarrisSet | np.ndarray,
    tol: float = DEFAULT_TOL,
    theta: float | None = None,
    bound_tol: float = BOUND_IMAG_TOL,
) -> ClassifiedSpectrum:
    """Keep eigenvalues of run_a that reappear in run_b within tol (1 + |E|).

    Survivors on the negative real axis are bound states; survivors strictly
    inside the wedge -2 theta < arg E < 0 are resonances. The rest, and all
    unmatched or drifting eigenvalues, go to ``unstable`` with their drift.
    """
    if theta is None:
        theta = run_a.config.theta if isinstance(run_a, HarrisSet) else 0.0
    a = np.asarray(run_a.eigenvalues if isinstance(run_a, HarrisSet) else run_a, dtype=complex)
    b = np.asarray(run_b.eigenvalues if isinstance(run_b, HarrisSet) else run_b, dtype=complex)
    out = ClassifiedSpectrum(theta=theta)
    pairs, unmatched = _greedy_match(a, b)
    for i, _, drift in pairs:
        e = a[i]
        scale = 1 + abs(e)
        if drift > tol * scale:
            out.unstable.append((complex(e), drift))
        elif e.real < 0 and abs(e.imag) <= bound_tol * scale:
            out.bound.append(float(e.real))
        elif e.imag < 0 and -2 * theta < np.angle(e) < 0:
            out.resonances.append(complex(e))
        else:
            out.unstable.append((complex(e), drift))
    for i in unmatched:
        out.unstable.append((complex(a[i]), math.inf))
    out.bound.sort()
    out.resonances.sort(key=lambda z: -z.imag)
    return out


def cs_spectrum(
    p: PotentialParams,
    cfg: CsConfig,
    drho: float = DEFAULT_DRHO,
    dtheta: float = DEFAULT_DTHETA,
    tol: float = DEFAULT_TOL,
    bound_tol: float = BOUND_IMAG_TOL,
) -> ClassifiedSpectrum:
    """Classified spectrum from a run at ``cfg`` and one at the perturbed parameters."""
    run_a = harris_eigenvalues(p, cfg)
    run_b = harris_eigenvalues(p, cfg.perturbed(drho, dtheta))
    return classify_eigenvalues(run_a, run_b, tol, bound_tol=bound_tol)


def scan_rho(p: PotentialParams, cfg: CsConfig, rhos, **kwargs) -> tuple[float, list[tuple[float, int]]]:
    """Pick the rho with the most stable eigenvalues (ties go to the smaller rho)."""
    counts = []
    for rho in rhos:
        c = cs_spectrum(p, replace(cfg, rho=float(rho)), **kwargs)
        counts.append((float(rho), len(c.bound) + len(c.resonances)))
    best = max(counts, key=lambda rc: (rc[1], -rc[0]))
    return best[0], counts


@dataclass
class SweepFrame:
    v1: float
    spectrum: ClassifiedSpectrum | None
    error: str | None = None


def sweep_v1(
    p_base: PotentialParams,
    v1_grid,
    cfg: CsConfig,
    drho: float = DEFAULT_DRHO,
    dtheta: float = DEFAULT_DTHETA,
    tol: float = DEFAULT_TOL,
    workers: int | None = None,
    bound_tol: float = SWEEP_BOUND_TOL,
) -> list[SweepFrame]:
    """Classified spectra along a grid of V1 values; failing frames are recorded, not raised.

    Near threshold at large theta the truncated basis leaves the shallow bound
    levels with a spurious Im E of up to ~1e-5 although they are theta-stable,
    so the sweep uses the looser ``SWEEP_BOUND_TOL`` by default.
    """

    def frame(v1):
        try:
            spec = cs_spectrum(p_base.with_v1(float(v1)), cfg, drho, dtheta, tol, bound_tol)
            return SweepFrame(float(v1), spec)
        except Exception as exc:  # noqa: BLE001 - one bad frame must not stop the sweep
            log.warning("V1=%g failed: %s", v1, exc)
            return SweepFrame(float(v1), None, str(exc))

    grid = list(v1_grid)
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(frame, grid))
    return [frame(v) for v in grid]


@dataclass
class Handoff:
    """A bound level lost between two frames and the resonance that replaces it."""

    v1_drop: float
    v1_birth: float
    last_bound: float
    resonance: complex


def detect_handoffs(frames: list[SweepFrame], window: int = 1, near: float = 1.0) -> list[Handoff]:
    """Pair each drop in the bound count with a new near-threshold resonance.

    A birth is a frame where the number of resonances with |E| < ``near``
    grows; it must come no later than ``window`` frames after the drop.
    """
    ok = [f for f in frames if f.spectrum is not None]
    bound = [len(f.spectrum.bound) for f in ok]
    n_near = [sum(abs(z) < near for z in f.spectrum.resonances) for f in ok]
    births = [j for j in range(1, len(ok)) if n_near[j] > n_near[j - 1]]
    out = []
    used: set[int] = set()
    for i in range(1, len(ok)):
        if bound[i] >= bound[i - 1]:
            continue
        for j in births:
            if j in used or not i <= j <= i + window:
                continue
            used.add(j)
            z = min((z for z in ok[j].spectrum.resonances if abs(z) < near), key=abs)
            out.append(Handoff(ok[i].v1, ok[j].v1, max(ok[i - 1].spectrum.bound), z))
            break
    return out
