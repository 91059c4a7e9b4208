"""Tridiagonal representation of the S-wave problem in the Jacobi basis.

Everything here is dimensionless: eps = E/lambda^2 and u_i = V_i/lambda^2.
With mu^2 = -2 eps and nu^2 = 2 u0 + 1/4 the wave operator J = H - E is
symmetric tridiagonal, and J f = 0 becomes the three-term recursion

    (1/4 - 2 u1) P_n = [(2n+mu+nu+1)^2 + u2 (1 + C_n)] P_n + u2 (D_{n-1} P_{n-1} + D_n P_{n+1})
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eigenkernels import SymTridiag, eig_sym_tridiag
from .errors import DomainError

MAX_RECURSION_TERMS = 200


@dataclass(frozen=True)
class BasisParams:
    mu: float
    nu: float

    @classmethod
    def at_threshold(cls, u0: float) -> BasisParams:
        """mu = 0, i.e. eps = 0: the Hamiltonian-diagonalization basis.

        :func:`basis_params` refuses eps = 0 because the basis is then not
        square integrable at infinity; this constructor makes that choice explicit.
        """
        return cls(0.0, _nu(u0))


def _nu(u0):
    if not u0 > -0.125:
        raise DomainError(f"u0 must exceed -1/8, got {u0}")
    return math.sqrt(2 * u0 + 0.25)


def basis_params(eps: float, u0: float) -> BasisParams:
    """Jacobi exponents (mu, nu) = (sqrt(-2 eps), sqrt(2 u0 + 1/4)) for eps < 0."""
    if not eps < 0:
        raise DomainError(f"the tridiagonal construction needs eps < 0, got {eps}")
    return BasisParams(math.sqrt(-2 * eps), _nu(u0))


def recursion_coeffs(n, mu: float, nu: float):
    """(C_n, D_n) for scalar or array ``n``."""
    n = np.asarray(n, dtype=float)
    s = 2 * n + mu + nu
    c = (nu * nu - mu * mu) / (s * (s + 2))
    d = (2 / (s + 2)) * np.sqrt((n + 1) * (n + mu + 1) * (n + nu + 1) * (n + mu + nu + 1) / ((s + 1) * (s + 3)))
    if c.ndim == 0:
        return float(c), float(d)
    return c, d


def build_sigma(mu: float, nu: float, u2: float, N: int) -> SymTridiag:
    """The matrix whose eigenvalues are the admissible values of 1/4 - 2 u1."""
    if N < 1:
        raise DomainError(f"basis size must be >= 1, got {N}")
    n = np.arange(N)
    c, d = recursion_coeffs(n, mu, nu)
    diag = (2 * n + mu + nu + 1) ** 2 + u2 * (1 + c)
    return SymTridiag(diag, u2 * d[:-1])


def _j_from(bp: BasisParams, u1, u2, N) -> SymTridiag:
    if N < 1:
        raise DomainError(f"basis size must be >= 1, got {N}")
    n = np.arange(N)
    mu, nu = bp.mu, bp.nu
    c, d = recursion_coeffs(n, mu, nu)
    diag = (n + (mu + nu + 1) / 2) ** 2 - 1 / 16 + u1 / 2 + (u2 / 4) * (1 + c)
    return SymTridiag(diag, (u2 / 4) * d[:-1])


def build_J(eps: float, u0: float, u1: float, u2: float, N: int) -> SymTridiag:
    """J/lambda^2 in the Jacobi basis fixed by (eps, u0)."""
    return _j_from(basis_params(eps, u0), u1, u2, N)


def build_J_threshold(u0: float, u1: float, u2: float, N: int) -> SymTridiag:
    """J at eps = 0 (mu forced to 0), which is the Hamiltonian matrix itself."""
    return _j_from(BasisParams.at_threshold(u0), u1, u2, N)


def build_J_basis(bp: BasisParams, u1: float, u2: float, N: int) -> SymTridiag:
    return _j_from(bp, u1, u2, N)


def first_coefficient(bp: BasisParams, u1: float, u2: float) -> float:
    """Closed form of P_1."""
    mu, nu = bp.mu, bp.nu
    _, d0 = recursion_coeffs(0, mu, nu)
    bracket = 2 * u1 + 2 * u2 * (nu + 1) / (mu + nu + 2) + (mu + nu + 1) ** 2 - 0.25
    return -bracket / (u2 * d0)


def eval_P(eps: float, u0: float, u1: float, u2: float, N: int) -> np.ndarray:
    """Expansion coefficients P_0..P_{N-1} by forward recursion (no rescaling)."""
    if u2 == 0:
        raise DomainError("u2 = 0 decouples the recursion; use pt_spectrum for the Poschl-Teller case")
    if N > MAX_RECURSION_TERMS:
        raise DomainError(f"at most {MAX_RECURSION_TERMS} recursion terms are supported, got {N}")
    if N < 1:
        raise DomainError("N must be >= 1")
    bp = basis_params(eps, u0)
    sig = build_sigma(bp.mu, bp.nu, u2, max(N, 2))
    target = 0.25 - 2 * u1
    P = np.zeros(N)
    P[0] = 1.0
    prev = 0.0
    for n in range(N - 1):
        lower = sig.sub[n - 1] * prev if n > 0 else 0.0
        P[n + 1] = ((target - sig.diag[n]) * P[n] - lower) / sig.sub[n]
        prev = P[n]
    return P


def recursion_vector(eps: float, u0: float, u1: float, u2: float, N: int) -> tuple[np.ndarray, float]:
    """Stable P_0..P_{N-1} (P_0 = 1) at a level energy, with its eigenvalue mismatch.

    The forward recursion in :func:`eval_P` amplifies rounding error past a
    few terms. Here P is instead the eigenvector of Sigma(eps) whose eigenvalue
    is closest to 1/4 - 2 u1; the returned mismatch |eta - (1/4 - 2 u1)|
    vanishes when eps is an exact level of the N-term problem.
    """
    bp = basis_params(eps, u0)
    eta, vecs = eig_sym_tridiag(build_sigma(bp.mu, bp.nu, u2, N), want_vectors=True)
    target = 0.25 - 2 * u1
    k = int(np.argmin(np.abs(eta - target)))
    v = vecs[:, k]
    if v[0] == 0:
        raise DomainError("leading coefficient vanishes; P_0 = 1 normalization impossible")
    return v / v[0], float(abs(eta[k] - target))


def pt_spectrum(u0: float, u1: float) -> list[float]:
    """Closed-form bound levels of the V2 = 0 (Poschl-Teller) potential."""
    if not u1 <= 0.125:
        raise DomainError(f"u1 must be <= 1/8 for a real spectrum, got {u1}")
    nu = _nu(u0)
    root = math.sqrt(0.25 - 2 * u1)
    n_max = math.floor(0.5 * abs(1 + nu - root))
    levels = []
    for n in range(n_max + 1):
        arg = 2 * n + 1 + nu - root
        if arg < 0:
            levels.append(-0.5 * arg * arg)
    return levels
