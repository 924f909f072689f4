"""Half-space points, reflection and the substitution ``t <-> y``.

For a difference vector ``z = x - R y`` with ``z_d > 0`` the map

    y(t) = beta * (t - z_d) + mu(omega, t) - r,      t >= z_d,

is strictly increasing from ``[z_d, inf)`` onto ``[0, inf)``. Its inverse
``t(y)`` is obtained in closed form from a quadratic; ``mu_tilde`` and
``dt_dy`` follow from it. All array functions broadcast over ``y`` / ``t``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError

__all__ = [
    "ProblemParams",
    "HalfSpacePoint",
    "DiffVector",
    "reflect",
    "mu",
    "y_of_t",
    "t_of_y",
    "mu_tilde",
    "dt_dy",
    "dmu_tilde_dy",
]


@dataclass(frozen=True)
class ProblemParams:
    """Dimension ``d`` and impedance ``beta``; ``nu = (d - 3) / 2`` is derived."""

    d: int
    beta: float

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise DomainError(f"dimension d must be an integer >= 1, got {self.d!r}")
        if not (math.isfinite(self.beta) and self.beta > 0):
            raise DomainError(f"impedance beta must be a finite positive real, got {self.beta!r}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "beta", float(self.beta))

    @property
    def nu(self) -> Fraction:
        return Fraction(self.d - 3, 2)

    @property
    def two_lambda(self) -> int:
        """Twice the Bessel order ``nu + 1/2`` of the full-space kernel."""
        return self.d - 2


@dataclass(frozen=True)
class HalfSpacePoint:
    """A point of the closed upper half-space ``x_d >= 0``."""

    coords: tuple

    def __init__(self, coords, allow_boundary: bool = False):
        c = tuple(float(v) for v in np.asarray(coords, dtype=float).reshape(-1))
        if not c:
            raise DomainError("a point needs at least one coordinate")
        if not all(math.isfinite(v) for v in c):
            raise DomainError("coordinates must be finite")
        if c[-1] < 0 or (c[-1] == 0 and not allow_boundary):
            raise DomainError(f"last coordinate must be positive, got {c[-1]!r}")
        object.__setattr__(self, "coords", c)

    @property
    def d(self) -> int:
        return len(self.coords)

    def as_array(self) -> np.ndarray:
        return np.array(self.coords)


def reflect(y):
    """Mirror a point across the boundary: ``(y', y_d) -> (y', -y_d)``."""
    arr = np.array(y.coords if isinstance(y, HalfSpacePoint) else y, dtype=float)
    arr[-1] = -arr[-1]
    return arr


@dataclass(frozen=True)
class DiffVector:
    """The vector ``z = x - R y`` split as ``(z', z_d)``, with ``r_plus = r + beta z_d``."""

    z_prime: tuple
    z_d: float
    beta: float
    omega: float = field(init=False)
    r: float = field(init=False)
    r_plus: float = field(init=False)

    def __post_init__(self):
        zp = tuple(float(v) for v in self.z_prime)
        if not (self.z_d > 0 and math.isfinite(self.z_d)):
            raise DomainError(f"z_d must be positive, got {self.z_d!r}")
        if not self.beta > 0:
            raise DomainError(f"beta must be positive, got {self.beta!r}")
        omega = math.hypot(*zp) if zp else 0.0
        r = math.hypot(omega, self.z_d)
        object.__setattr__(self, "z_prime", zp)
        object.__setattr__(self, "z_d", float(self.z_d))
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "r_plus", r + self.beta * self.z_d)

    @classmethod
    def from_vector(cls, z, beta: float) -> "DiffVector":
        z = np.asarray(z, dtype=float).reshape(-1)
        return cls(tuple(z[:-1]), float(z[-1]), beta)

    @classmethod
    def from_points(cls, x, y, beta: float) -> "DiffVector":
        """``z = x - R y`` for two half-space points."""
        xa = np.asarray(x.coords if isinstance(x, HalfSpacePoint) else x, dtype=float)
        return cls.from_vector(xa - reflect(y), beta)

    def with_z_d(self, z_d: float) -> "DiffVector":
        return DiffVector(self.z_prime, z_d, self.beta)

    @property
    def d(self) -> int:
        return len(self.z_prime) + 1


def mu(omega, t):
    """``sqrt(omega^2 + t^2)``, overflow-safe."""
    return np.hypot(omega, t)


def y_of_t(z: DiffVector, t):
    """Forward substitution ``y(z, t)``; exactly 0 at ``t = z_d``."""
    t = np.asarray(t, dtype=float)
    if np.any(t < z.z_d):
        raise DomainError("t must satisfy t >= z_d")
    m = mu(z.omega, t)
    # mu - r = (t^2 - z_d^2) / (mu + r), no cancellation near t = z_d
    out = z.beta * (t - z.z_d) + (t - z.z_d) * (t + z.z_d) / (m + z.r)
    return out if out.ndim else float(out)


def _t_closed_form(z: DiffVector, y):
    beta, om = z.beta, z.omega
    w = y + z.r_plus
    if beta == 1.0:
        return (w - om) * (w + om) / (2.0 * w)
    # (beta^2 - 1) t^2 - 2 beta w t + (w^2 - omega^2) = 0; the admissible root
    # is the one with w - beta t = mu > 0, written in cancellation-free form
    c = (w - om) * (w + om)
    disc = (w * w + (beta * beta - 1.0) * om * om)
    root = np.sqrt(np.maximum(disc, 0.0))
    return c / (beta * w + root)


def _t_newton(z: DiffVector, y):
    beta, om = z.beta, z.omega
    y = np.atleast_1d(np.asarray(y, dtype=float))
    w = y + z.r_plus
    lo = np.full_like(y, z.z_d)
    hi = w / beta
    t = np.clip(np.maximum(z.z_d, w / (1.0 + beta)), lo, hi)
    for _ in range(100):
        f = y_of_t(z, t) - y
        lo = np.where(f < 0, t, lo)
        hi = np.where(f > 0, t, hi)
        step = f / (beta + t / mu(om, t))
        t_new = t - step
        bad = (t_new <= lo) | (t_new >= hi)
        t_new = np.where(bad, 0.5 * (lo + hi), t_new)
        if np.all(np.abs(t_new - t) <= 1e-16 * np.maximum(1.0, np.abs(t))):
            t = t_new
            break
        t = t_new
    return t


def t_of_y(z: DiffVector, y):
    """Inverse substitution: the unique ``t >= z_d`` with ``y_of_t(z, t) = y``."""
    y = np.asarray(y, dtype=float)
    if np.any(y < 0):
        raise DomainError("y must be nonnegative")
    t = np.asarray(_t_closed_form(z, y), dtype=float)
    # the closed form is exact at y = 0 up to rounding; pin the endpoint
    t = np.where(y == 0, z.z_d, t)
    ok = (t >= z.z_d - 1e-12 * (1.0 + abs(z.z_d))) & np.isfinite(t)
    if not np.all(ok):
        t = np.where(ok, t, _t_newton(z, np.broadcast_to(y, t.shape)).reshape(t.shape))
    t = np.maximum(t, z.z_d)
    return t if t.ndim else float(t)


def mu_tilde(z: DiffVector, y, t=None):
    """``mu(omega, t(z, y))``; pass ``t`` to reuse an inverse already computed."""
    if t is None:
        t = t_of_y(z, y)
    return mu(z.omega, t)


def dt_dy(z: DiffVector, y, t=None):
    """``mu_tilde / (t + beta mu_tilde)``."""
    if t is None:
        t = t_of_y(z, y)
    m = mu(z.omega, t)
    return m / (t + z.beta * m)


def dmu_tilde_dy(z: DiffVector, y, t=None):
    """``t / (t + beta mu_tilde)``."""
    if t is None:
        t = t_of_y(z, y)
    m = mu(z.omega, t)
    return t / (t + z.beta * m)
