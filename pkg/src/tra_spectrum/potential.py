"""The four-parameter hyperbolic potential and its shape classification.

    V(r) = [V0 + V1 tanh^2(lr) + V2 tanh^4(lr)] / sinh^2(lr)

With t = tanh^2(lr) this is the rational function
V = l^2 (1 - t)/t (u0 + u1 t + u2 t^2), u_i = V_i / l^2.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

POLE_THRESHOLD = 1e-12
SERIES_RADIUS = 0.05
DOUBLE_ROOT_TOL = 1e-9

# Taylor coefficients of sinh^-2 z - z^-2, sech^2 z and tanh^2 z sech^2 z,
# i.e. the u0, u1, u2 parts of the regularized potential in powers z^0..z^10.
_SERIES_U0 = (-1 / 3, 1 / 15, -2 / 189, 1 / 675, -2 / 10395, 1382 / 58046625)
_SERIES_U1 = (1.0, -1.0, 2 / 3, -17 / 45, 62 / 315, -1382 / 14175)
_SERIES_U2 = (0.0, 1.0, -5 / 3, 77 / 45, -88 / 63, 14102 / 14175)


@dataclass(frozen=True)
class PotentialParams:
    """Physical parameters (lambda, V0, V1, V2).

    ``lam`` is the inverse range; energies are in units where hbar = m = 1.
    V2 = 0 is accepted and gives the hyperbolic Poschl-Teller potential.
    """

    lam: float
    v0: float
    v1: float
    v2: float

    def __post_init__(self):
        if not self.lam > 0:
            raise DomainError(f"lambda must be positive, got {self.lam}")
        if not self.v0 > 0:
            raise DomainError(f"V0 must be positive, got {self.v0}")

    @classmethod
    def from_reduced(cls, u0: float, u1: float, u2: float, lam: float = 1.0) -> PotentialParams:
        lam2 = lam * lam
        return cls(lam, u0 * lam2, u1 * lam2, u2 * lam2)

    @property
    def u(self) -> tuple[float, float, float]:
        lam2 = self.lam * self.lam
        return self.v0 / lam2, self.v1 / lam2, self.v2 / lam2

    def with_v1(self, v1: float) -> PotentialParams:
        return PotentialParams(self.lam, self.v0, v1, self.v2)


def _real_if_input_real(r, value):
    if np.isrealobj(r):
        return value.real
    return value


def _csch2_tanh2(z):
    """(1/sinh^2 z, tanh^2 z) without overflow for large Re z."""
    z = np.asarray(z, dtype=complex)
    csch2 = np.empty_like(z)
    tanh2 = np.empty_like(z)
    far = z.real > 1.0
    # in terms of q = exp(-2z), which only underflows harmlessly
    q = np.exp(-2 * z[far])
    csch2[far] = 4 * q / (1 - q) ** 2
    tanh2[far] = ((1 - q) / (1 + q)) ** 2
    near = ~far
    s = np.sinh(z[near])
    if np.any(np.abs(s) < POLE_THRESHOLD):
        raise DomainError("r is at (or too close to) a pole of 1/sinh^2(lambda r)")
    csch2[near] = 1 / (s * s)
    tanh2[near] = np.tanh(z[near]) ** 2
    return csch2, tanh2


def eval_potential(p: PotentialParams, r):
    """V(r) for real or complex ``r`` (scalar or array)."""
    r_arr = np.asarray(r)
    z = p.lam * r_arr.astype(complex)
    csch2, t = _csch2_tanh2(z)
    v = (p.v0 + p.v1 * t + p.v2 * t * t) * csch2
    out = _real_if_input_real(r_arr, v)
    return out if out.ndim else out[()]


def eval_potential_rational(p: PotentialParams, t):
    """V as a function of t = tanh^2(lambda r) in (0, 1)."""
    t = np.asarray(t, dtype=float)
    u0, u1, u2 = p.u
    return p.lam**2 * (1 - t) / t * (u0 + u1 * t + u2 * t * t)


def near_origin_coeffs(p: PotentialParams) -> tuple[float, float, float]:
    """(c_sing, c0, c2) with V ~ c_sing/r^2 + c0 + (lambda r)^2 c2 as r -> 0."""
    return (
        p.v0 / p.lam**2,
        p.v1 - p.v0 / 3,
        p.v2 - p.v1 + p.v0 / 15,
    )


def _regularized_series(p: PotentialParams, z):
    u0, u1, u2 = p.u
    coeffs = [u0 * a + u1 * b + u2 * c for a, b, c in zip(_SERIES_U0, _SERIES_U1, _SERIES_U2)]
    z2 = z * z
    acc = np.zeros_like(z)
    for c in reversed(coeffs):
        acc = acc * z2 + c
    return p.lam**2 * acc


def eval_regularized(p: PotentialParams, r):
    """The non-singular remainder V(r) - u0/r^2, finite at the origin.

    Near the origin (|lambda r| < 0.05) a Taylor series through (lambda r)^10 is
    used, since the direct subtraction cancels catastrophically there.
    """
    r_arr = np.asarray(r)
    z = p.lam * np.atleast_1d(r_arr).astype(complex)
    out = np.empty_like(z)
    small = np.abs(z) < SERIES_RADIUS
    if np.any(small):
        out[small] = _regularized_series(p, z[small])
    big = ~small
    if np.any(big):
        zb = z[big]
        csch2, t = _csch2_tanh2(zb)
        out[big] = (p.v0 + p.v1 * t + p.v2 * t * t) * csch2 - p.v0 / (zb * zb)
    out = out.reshape(r_arr.shape)
    out = _real_if_input_real(r_arr, out)
    return out if out.ndim else out[()]


def effective_ell(u0: float, ell: int) -> float:
    """Non-integer angular momentum absorbing the u0/r^2 term into the centrifugal barrier."""
    radicand = (ell + 0.5) ** 2 + 2 * u0
    if not radicand > 0:
        raise DomainError(f"(ell + 1/2)^2 + 2 u0 = {radicand} must be positive")
    return -0.5 + np.sqrt(radicand)


class ConfigKind(enum.Enum):
    RESONANCES_ONLY = "ResonancesOnly"
    BOUND_AND_RESONANCES = "BoundAndResonances"
    INFLECTION = "Inflection"
    MONOTONE = "Monotone"
    BOUND_ONLY = "BoundOnly"


FIGURE_PANEL = {
    ConfigKind.RESONANCES_ONLY: "Fig. 1a",
    ConfigKind.BOUND_AND_RESONANCES: "Fig. 1b",
    ConfigKind.INFLECTION: "Fig. 1c",
    ConfigKind.MONOTONE: "Fig. 1d",
    ConfigKind.BOUND_ONLY: "Fig. 1e",
}


@dataclass(frozen=True)
class ConfigClass:
    kind: ConfigKind
    critical_points: list[tuple[float, float]] = field(default_factory=list)

    def label(self) -> str:
        return f"{self.kind.value} ({FIGURE_PANEL[self.kind]})"


def _critical_cubic(u0, u1, u2):
    # t^2 dV/dt for V(t) = (1 - t)(u0 + u1 t + u2 t^2)/t, highest power first
    return np.array([-2.0 * u2, u2 - u1, 0.0, -u0])


def _discriminant(c):
    a, b, cc, d = c
    return 18 * a * b * cc * d - 4 * b**3 * d + b * b * cc * cc - 4 * a * cc**3 - 27 * a * a * d * d


def classify_configuration(p: PotentialParams) -> ConfigClass:
    """Shape class of V from the critical points of V(t) on t in (0, 1).

    Since V -> +inf at the origin and V -> 0 at infinity, the first critical
    point is always a minimum; the cubic has no linear term, so at most two of
    its roots are positive.
    """
    u0, u1, u2 = p.u
    c = _critical_cubic(u0, u1, u2)
    scale = np.max(np.abs(c))
    c = c / scale
    # negligible coefficients would make np.roots overflow
    c[np.abs(c) < 1e-14] = 0.0
    roots = np.roots(c)
    real = sorted(
        float(z.real) for z in roots if abs(z.imag) <= 1e-7 * max(1.0, abs(z)) and 0.0 < z.real < 1.0
    )
    lam2 = p.lam**2

    def vt(t):
        return float(lam2 * (1 - t) / t * (u0 + u1 * t + u2 * t * t))

    if c[0] != 0 and abs(_discriminant(c)) <= DOUBLE_ROOT_TOL:
        # a double root is shared with the derivative 3a t^2 + 2b t
        t_double = float(-2 * c[1] / (3 * c[0]))
        if 0.0 < t_double < 1.0:
            return ConfigClass(ConfigKind.INFLECTION, [(t_double, vt(t_double))])
        real = [t for t in real if abs(t - t_double) > 1e-4]
    points = [(t, vt(t)) for t in real]
    if not real:
        return ConfigClass(ConfigKind.MONOTONE, points)
    if len(real) == 1:
        return ConfigClass(ConfigKind.BOUND_ONLY, points)
    t_min = real[0]
    kind = ConfigKind.BOUND_AND_RESONANCES if vt(t_min) < 0 else ConfigKind.RESONANCES_ONLY
    return ConfigClass(kind, points)
