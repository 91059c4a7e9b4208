"""Eigenvalue kernels: symmetric tridiagonal, and generalized problems with an SPD metric.

LAPACK (through scipy) does the heavy lifting; this module adds the Cholesky
reduction, residual checks and error reporting the rest of the package relies on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.linalg import lapack

from .errors import NumericalError


@dataclass(frozen=True)
class SymTridiag:
    """Symmetric tridiagonal matrix stored as diagonal and first sub-diagonal.

    Entries may be complex (complex-symmetric, not Hermitian).
    """

    diag: np.ndarray
    sub: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "diag", np.asarray(self.diag))
        object.__setattr__(self, "sub", np.asarray(self.sub))
        if self.diag.ndim != 1 or len(self.diag) < 1:
            raise ValueError("diag must be a non-empty 1-d array")
        if len(self.sub) != len(self.diag) - 1:
            raise ValueError(f"sub must have length {len(self.diag) - 1}, got {len(self.sub)}")

    @property
    def size(self) -> int:
        return len(self.diag)

    def to_dense(self) -> np.ndarray:
        dtype = np.result_type(self.diag, self.sub)
        out = np.diag(self.diag.astype(dtype))
        if self.size > 1:
            out += np.diag(self.sub, 1) + np.diag(self.sub, -1)
        return out

    def __matmul__(self, v):
        v = np.asarray(v)
        out = self.diag * v
        out[:-1] += self.sub * v[1:]
        out[1:] += self.sub * v[:-1]
        return out


def eig_sym_tridiag(m: SymTridiag, want_vectors: bool = False, select: int | None = None):
    """Eigenvalues (ascending) of a real symmetric tridiagonal matrix.

    ``select=k`` returns only the k-th smallest eigenvalue (and its vector).
    """
    d = np.asarray(m.diag, dtype=float)
    e = np.asarray(m.sub, dtype=float)
    kwargs = {}
    if select is not None:
        kwargs = {"select": "i", "select_range": (select, select)}
    try:
        if d.size == 1:
            w, v = d.copy(), np.ones((1, 1))
            if select not in (None, 0):
                raise IndexError(select)
        else:
            res = sla.eigh_tridiagonal(d, e, eigvals_only=not want_vectors, **kwargs)
            w, v = res if want_vectors else (res, None)
    except sla.LinAlgError as exc:
        raise NumericalError(f"tridiagonal eigensolver did not converge: {exc}") from exc
    if want_vectors:
        return w, v
    return w


def _check_finite(*mats):
    for m in mats:
        if not np.all(np.isfinite(m)):
            raise NumericalError("matrix has non-finite entries")


def _cholesky(B: np.ndarray) -> np.ndarray:
    B = np.asarray(B, dtype=float)
    c, info = lapack.dpotrf(B, lower=1, clean=1)
    if info > 0:
        raise NumericalError(f"metric matrix is not positive definite (pivot {info - 1} failed)")
    if info < 0:
        raise NumericalError(f"dpotrf: illegal argument {-info}")
    return c


def _reduce(A, L):
    # L^-1 A L^-T without forming inverses
    tmp = sla.solve_triangular(L, A, lower=True)
    return sla.solve_triangular(L, tmp.T, lower=True).T


def _check_residual(A, B, E, F, tol, what):
    normA = np.linalg.norm(A, 2)
    normB = np.linalg.norm(B, 2)
    res = np.linalg.norm(A @ F - (B @ F) * E, axis=0)
    bound = tol * (normA + np.abs(E) * normB) * np.linalg.norm(F, axis=0)
    bad = np.nonzero(res > bound)[0]
    if bad.size:
        k = bad[0]
        raise NumericalError(f"{what}: residual {res[k]:.3e} exceeds {bound[k]:.3e} for eigenvalue {E[k]}")


def eig_gen_sym(A, B, want_vectors: bool = False, check: bool = True):
    """Solve A f = E B f, A symmetric, B symmetric positive definite.

    Returns the eigenvalues in ascending order (and the B-orthonormal vectors).
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    _check_finite(A, B)
    L = _cholesky(B)
    C = _reduce(A, L)
    C = 0.5 * (C + C.T)
    w, v = sla.eigh(C)
    F = sla.solve_triangular(L.T, v, lower=False)
    if check:
        _check_residual(A, B, w, F, 1e-9, "eig_gen_sym")
    if want_vectors:
        return w, F
    return w


def eig_gen_complex(A, B, want_vectors: bool = False, check: bool = True):
    """Solve A f = E B f for complex A and real SPD B; eigenvalues are unordered."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=float)
    _check_finite(A, B)
    L = _cholesky(B)
    C = _reduce(A, L)
    try:
        w, v = sla.eig(C)
    except sla.LinAlgError as exc:
        raise NumericalError(f"complex eigensolver did not converge: {exc}") from exc
    F = sla.solve_triangular(L.T, v, lower=False)
    if check:
        _check_residual(A, B, w, F, 1e-8, "eig_gen_complex")
    if want_vectors:
        return w, F
    return w
