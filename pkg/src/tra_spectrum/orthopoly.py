"""Jacobi and Laguerre polynomials, Gauss rules and the Jacobi basis functions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import betaln, gammaln

from .eigenkernels import SymTridiag, eig_sym_tridiag
from .errors import DomainError

MAX_DEGREE = 2000


def _check_degree(n):
    if n < 0:
        raise DomainError(f"degree must be non-negative, got {n}")
    if n > MAX_DEGREE:
        raise DomainError(f"degree {n} exceeds the supported maximum {MAX_DEGREE}")


def _check_exponent(name, value):
    if not value > -1:
        raise DomainError(f"{name} must be > -1, got {value}")


def jacobi_table(n_max: int, mu: float, nu: float, x) -> np.ndarray:
    """P_k^(mu,nu)(x) for k = 0..n_max, stacked along the first axis."""
    _check_degree(n_max)
    _check_exponent("mu", mu)
    _check_exponent("nu", nu)
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max == 0:
        return out
    out[1] = 0.5 * (mu + nu + 2) * x + 0.5 * (mu - nu)
    a, b = mu, nu
    for k in range(1, n_max):
        s = 2 * k + a + b
        c1 = 2 * (k + 1) * (k + a + b + 1) * s
        c2 = (s + 1) * (a * a - b * b)
        c3 = s * (s + 1) * (s + 2)
        c4 = 2 * (k + a) * (k + b) * (s + 2)
        out[k + 1] = ((c2 + c3 * x) * out[k] - c4 * out[k - 1]) / c1
    return out


def jacobi_eval(n: int, mu: float, nu: float, x):
    """Jacobi polynomial P_n^(mu,nu)(x) by forward three-term recurrence."""
    return jacobi_table(n, mu, nu, x)[n]


def laguerre_table(n_max: int, alpha: float, y) -> np.ndarray:
    """L_k^alpha(y) for k = 0..n_max; ``y`` may be complex."""
    _check_degree(n_max)
    _check_exponent("alpha", alpha)
    y = np.asarray(y)
    dtype = complex if np.iscomplexobj(y) else float
    out = np.empty((n_max + 1,) + y.shape, dtype=dtype)
    out[0] = 1.0
    if n_max == 0:
        return out
    out[1] = 1.0 + alpha - y
    for k in range(1, n_max):
        out[k + 1] = ((2 * k + 1 + alpha - y) * out[k] - (k + alpha) * out[k - 1]) / (k + 1)
    return out


def laguerre_eval(n: int, alpha: float, y):
    """Generalized Laguerre polynomial L_n^alpha(y)."""
    return laguerre_table(n, alpha, y)[n]


# --- Gauss rules -------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule for int w(x) f(x) dx; ``kind`` is "jacobi" or "laguerre".

    For "jacobi" the weight is (1-x)^a (1+x)^b on [-1, 1] with ``params = (a, b)``;
    for "laguerre" it is y^a e^-y on [0, inf) with ``params = (a,)``.
    """

    kind: str
    params: tuple[float, ...]
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def order(self) -> int:
        return len(self.nodes)

    def integrate(self, values) -> float:
        return np.tensordot(self.weights, values, axes=(0, -1))


def _jacobi_recurrence(K, a, b):
    k = np.arange(K, dtype=float)
    s = 2 * k + a + b
    with np.errstate(divide="ignore", invalid="ignore"):
        diag = (b * b - a * a) / (s * (s + 2))
    diag[0] = (b - a) / (a + b + 2)
    j = np.arange(1, K, dtype=float)
    s = 2 * j + a + b
    with np.errstate(divide="ignore", invalid="ignore"):
        off2 = 4 * j * (j + a) * (j + b) * (j + a + b) / (s * s * (s + 1) * (s - 1))
    if K > 1:
        off2[0] = 4 * (a + 1) * (b + 1) / ((a + b + 2) ** 2 * (a + b + 3))
    mass = np.exp((a + b + 1) * np.log(2.0) + betaln(a + 1, b + 1))
    return diag, np.sqrt(off2), mass


def _laguerre_recurrence(K, a):
    k = np.arange(K, dtype=float)
    diag = 2 * k + a + 1
    j = k[1:]
    return diag, np.sqrt(j * (j + a)), np.exp(gammaln(a + 1))


def christoffel_weights(diag, off, mass, nodes) -> np.ndarray:
    """Gauss weights 1 / sum_k p_k(x)^2 from the orthonormal recurrence.

    Mathematically equal to mass * v_0^2 for the Golub-Welsch eigenvectors, but
    accurate in the relative sense for tiny weights (far Laguerre nodes), where
    the eigenvector components underflow. A running log-scale keeps the sum
    finite for high orders.
    """
    K = len(diag)
    x = np.asarray(nodes, dtype=float)
    log_scale = np.zeros_like(x)
    p_prev = np.zeros_like(x)
    p = np.full_like(x, 1.0 / np.sqrt(mass))
    acc = p * p
    for k in range(K - 1):
        p_next = ((x - diag[k]) * p - (off[k - 1] if k > 0 else 0.0) * p_prev) / off[k]
        p_prev, p = p, p_next
        acc = acc + p * p
        big = np.abs(p) > 1e100
        if np.any(big):
            f = 1.0 / np.abs(p[big])
            p[big] *= f
            p_prev[big] *= f
            acc[big] *= f * f
            log_scale[big] -= np.log(f)
    with np.errstate(under="ignore"):
        return np.exp(-2 * log_scale) / acc


def gauss_rule(kind: str, K: int, *params: float) -> QuadratureRule:
    """Golub-Welsch Gauss rule of order K.

    ``gauss_rule("laguerre", K, alpha)`` or ``gauss_rule("jacobi", K, a, b)``.
    Nodes are the eigenvalues of the recurrence matrix; weights come from the
    Christoffel sum (see :func:`christoffel_weights`).
    """
    if K < 1:
        raise DomainError(f"quadrature order must be >= 1, got {K}")
    for i, v in enumerate(params):
        _check_exponent(f"weight parameter {i}", v)
    if kind == "laguerre":
        if len(params) != 1:
            raise DomainError("laguerre rule takes one weight parameter")
        diag, off, mass = _laguerre_recurrence(K, params[0])
    elif kind == "jacobi":
        if len(params) != 2:
            raise DomainError("jacobi rule takes two weight parameters")
        diag, off, mass = _jacobi_recurrence(K, *params)
    else:
        raise DomainError(f"unknown quadrature kind {kind!r}")
    nodes = eig_sym_tridiag(SymTridiag(diag, off))
    weights = christoffel_weights(diag, off, mass, nodes)
    return QuadratureRule(kind, tuple(float(v) for v in params), nodes, weights)


# --- Jacobi basis on the half line --------------------------------------------


def x_of_r(lam: float, r):
    """Map r in [0, inf) onto x = 2 tanh^2(lam r) - 1 in [-1, 1)."""
    return 2 * np.tanh(lam * np.asarray(r, dtype=float)) ** 2 - 1


def jacobi_norm(n, mu: float, nu: float):
    """A_n making (A_n^2/sqrt 2) int (1-x)^mu (1+x)^nu [P_n]^2 dx = 1."""
    n = np.asarray(n, dtype=float)
    log_a2 = (
        np.log(2 * n + mu + nu + 1)
        - (mu + nu + 0.5) * np.log(2.0)
        + gammaln(n + 1)
        + gammaln(n + mu + nu + 1)
        - gammaln(n + nu + 1)
        - gammaln(n + mu + 1)
    )
    return np.exp(0.5 * log_a2)


@dataclass(frozen=True)
class JacobiBasisSpec:
    mu: float
    nu: float
    lam: float = 1.0

    def __post_init__(self):
        _check_exponent("mu", self.mu)
        _check_exponent("nu", self.nu)

    @property
    def exponents(self) -> tuple[float, float]:
        """Powers of (1 - x) and (1 + x) multiplying the polynomial."""
        return self.mu / 2, self.nu / 2 + 0.25


def jacobi_basis_table(spec: JacobiBasisSpec, n_max: int, r) -> np.ndarray:
    """phi_k(r) for k = 0..n_max."""
    x = x_of_r(spec.lam, r)
    ea, eb = spec.exponents
    # 1 - x = 2 sech^2 computed directly to keep the far tail accurate
    one_minus_x = 2.0 / np.cosh(spec.lam * np.asarray(r, dtype=float)) ** 2
    envelope = one_minus_x**ea * (1 + x) ** eb
    k = np.arange(n_max + 1)
    norms = jacobi_norm(k, spec.mu, spec.nu).reshape((-1,) + (1,) * np.ndim(x))
    return norms * envelope * jacobi_table(n_max, spec.mu, spec.nu, x)


def jacobi_basis_eval(spec: JacobiBasisSpec, n: int, r):
    """Basis function phi_n(r) = A_n (1-x)^(mu/2) (1+x)^(nu/2+1/4) P_n^(mu,nu)(x)."""
    return jacobi_basis_table(spec, n, r)[n]
