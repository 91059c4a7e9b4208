"""Thiele continued-fraction rational interpolation.

    f(x) ~ a_0 + (x - z_0) / (a_1 + (x - z_1) / (a_2 + ...))

Coefficients are inverse differences. Support points are added greedily (the
sample with the largest current error goes next) until every sample is
reproduced to ``rtol``; this keeps the fraction short and avoids the
breakdowns of the plain in-order construction on smooth data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ThieleInterpolant:
    coeffs: np.ndarray
    support: np.ndarray

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        a, z = self.coeffs, self.support
        acc = np.zeros_like(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            for k in range(len(a) - 1, 0, -1):
                acc = (x - z[k - 1]) / (a[k] + acc)
        return a[0] + acc

    @property
    def order(self) -> int:
        return len(self.coeffs)


def thiele_fit(x, y, rtol: float = 1e-13, max_terms: int | None = None) -> ThieleInterpolant:
    """Greedy Thiele interpolant through the samples ``(x, y)``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or len(x) == 0:
        raise ValueError("x and y must be 1-d arrays of equal, non-zero length")
    n = len(x)
    max_terms = n if max_terms is None else min(max_terms, n)
    scale = max(np.max(np.abs(y)), np.finfo(float).tiny)
    coeffs: list[float] = []
    support: list[float] = []
    # rho[j] holds the running inverse difference of sample j
    rho = y.copy()
    remaining = np.ones(n, dtype=bool)
    i = int(np.argmin(np.abs(y - np.median(y))))
    for k in range(max_terms):
        if k > 0:
            with np.errstate(divide="ignore", invalid="ignore"):
                rho = (x - support[-1]) / (rho - coeffs[-1])
            interp = ThieleInterpolant(np.array(coeffs), np.array(support))
            err = np.abs(interp(x) - y)
            err[~remaining] = -1.0
            err[~np.isfinite(err)] = np.inf
            if np.max(err) <= rtol * scale:
                break
            i = int(np.argmax(err))
            if not np.isfinite(rho[i]):
                break
        coeffs.append(float(rho[i]))
        support.append(float(x[i]))
        remaining[i] = False
    return ThieleInterpolant(np.array(coeffs), np.array(support))
