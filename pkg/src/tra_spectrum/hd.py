"""Direct diagonalization of the Hamiltonian in the Jacobi basis.

The Hamiltonian is the tridiagonal J at eps = 0 (mu = 0). The overlap of that
basis, int (1-x)^-1 (1+x)^nu P_n P_m dx, diverges logarithmically at x = 1:
the basis functions do not decay at infinity. It is evaluated with a Gauss
rule of fixed order ``kquad`` (default N), which acts as a cutoff; this is
what limits the accuracy of the method for the weakly bound levels.

A regularized variant uses mu_reg > 0 instead, where the overlap is finite and
H = J(mu_reg) - (mu_reg^2 / 2) Omega.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .eigenkernels import eig_gen_sym
from .errors import DomainError, NumericalError
from .orthopoly import gauss_rule, jacobi_norm, jacobi_table
from .tra_core import BasisParams, build_J_basis


@dataclass(frozen=True)
class HdProblem:
    H: np.ndarray
    Omega: np.ndarray
    N: int
    kquad: int
    mu: float


def hd_overlap(nu: float, N: int, kquad: int | None = None, mu_reg: float = 0.0) -> np.ndarray:
    """Overlap matrix <phi_n|phi_m> of the Jacobi basis with exponents (mu_reg, nu).

    For mu_reg = 0 the integrand P_n P_m / (1 - x) is summed with the
    ``kquad``-point Gauss rule of weight (1+x)^nu. For mu_reg > 0 the rule
    of weight (1-x)^(mu_reg-1) (1+x)^nu is exact once kquad >= N.
    """
    kquad = N if kquad is None else kquad
    if not nu > 0:
        raise DomainError(f"nu must be positive, got {nu}")
    if kquad < N:
        raise DomainError(f"quadrature order {kquad} must be at least the basis size {N}")
    if mu_reg < 0:
        raise DomainError("mu_reg must be non-negative")
    if mu_reg == 0:
        rule = gauss_rule("jacobi", kquad, 0.0, nu)
        w = rule.weights / (1 - rule.nodes)
    else:
        rule = gauss_rule("jacobi", kquad, mu_reg - 1.0, nu)
        w = rule.weights
    n = np.arange(N)
    P = jacobi_table(N - 1, mu_reg, nu, rule.nodes) * jacobi_norm(n, mu_reg, nu)[:, None]
    omega = (P * w) @ P.T / math.sqrt(2)
    return 0.5 * (omega + omega.T)


def jacobi_shifted_integral(n: int, m: int, a: float, b: float) -> float:
    """Closed form of int (1-x)^(a-1) (1+x)^b P_n^(a,b) P_m^(a,b) dx, a > 0.

    Equals 2^(a+b) Gamma(k+a+1) Gamma(K+b+1) / (a k! Gamma(K+a+b+1)) with
    k = min(n, m), K = max(n, m).
    """
    k, K = min(n, m), max(n, m)
    log_val = (
        (a + b) * math.log(2.0)
        + gammaln(k + a + 1)
        + gammaln(K + b + 1)
        - gammaln(k + 1)
        - gammaln(K + a + b + 1)
    )
    return math.exp(log_val) / a


def hd_problem(u0: float, u1: float, u2: float, N: int, kquad: int | None = None, mu_reg: float = 0.0) -> HdProblem:
    kquad = N if kquad is None else kquad
    bp = BasisParams.at_threshold(u0)
    if mu_reg:
        bp = BasisParams(mu_reg, bp.nu)
    omega = hd_overlap(bp.nu, N, kquad, mu_reg)
    H = build_J_basis(bp, u1, u2, N).to_dense()
    if mu_reg:
        H = H - 0.5 * mu_reg**2 * omega
    return HdProblem(H, omega, N, kquad, bp.mu)


def hd_spectrum(
    u0: float, u1: float, u2: float, N: int, kquad: int | None = None, mu_reg: float = 0.0
) -> list[float]:
    """Negative generalized eigenvalues of (H, Omega), ascending."""
    prob = hd_problem(u0, u1, u2, N, kquad, mu_reg)
    try:
        E = eig_gen_sym(prob.H, prob.Omega)
    except NumericalError as exc:
        raise NumericalError(f"{exc}; try a smaller N or a larger kquad") from exc
    return [float(e) for e in E if e < 0]
