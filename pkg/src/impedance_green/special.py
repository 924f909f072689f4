"""Modified Bessel functions K of integer and half-integer order, E1 and U(1,1,.).

All functions accept a complex scalar or array ``z`` in the closed right
half-plane ``|arg z| <= pi/2``, ``z != 0``, and return the same shape.

Orders are passed as ``two_lambda`` (twice the order), or as a
:class:`BesselOrder`, so integer and half-integer orders share one exact
representation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels_jit, _kernels_np
from ._accel import USE_NUMBA
from .errors import DomainError

__all__ = [
    "BesselOrder",
    "bessel_k",
    "bessel_k_scaled",
    "bessel_k_scaled_diff",
    "exp_integral_e1",
    "exp_integral_e1_scaled",
    "tricomi_u11",
    "backend_name",
]

# arguments with |arg z| <= pi/2 + _ARG_SLACK are accepted; covers -0.0 real
# parts produced by rounding s*mu for s on the imaginary axis
_ARG_SLACK = 1e-12


@dataclass(frozen=True)
class BesselOrder:
    """Order ``lambda = twice_order / 2`` of a Macdonald function."""

    twice_order: int

    def __post_init__(self):
        if int(self.twice_order) != self.twice_order or self.twice_order < 0:
            raise DomainError(f"twice_order must be a nonnegative integer, got {self.twice_order!r}")

    @classmethod
    def from_value(cls, order) -> "BesselOrder":
        twice = Fraction(order) * 2
        if twice.denominator != 1:
            raise DomainError(f"order {order!r} is neither integer nor half-integer")
        return cls(int(twice))

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice_order, 2)

    @property
    def is_half_integer(self) -> bool:
        return self.twice_order % 2 == 1


def _backend(backend=None):
    if backend is None:
        return _kernels_jit if USE_NUMBA else _kernels_np
    if backend == "numba":
        return _kernels_jit
    if backend == "numpy":
        return _kernels_np
    raise ValueError(f"unknown backend {backend!r}")


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"


def _twice(order) -> int:
    if isinstance(order, BesselOrder):
        return order.twice_order
    if isinstance(order, (int, np.integer)) and order >= 0:
        return int(order)
    raise DomainError(f"order must be a BesselOrder or a nonnegative two_lambda int, got {order!r}")


def _as_complex_array(z):
    arr = np.asarray(z, dtype=np.complex128)
    flat = np.ascontiguousarray(arr.reshape(-1))
    if not np.all(np.isfinite(flat)):
        raise DomainError("argument must be finite")
    if np.any(flat == 0):
        raise DomainError("argument must be nonzero")
    if np.any(flat.real < -_ARG_SLACK * np.abs(flat)):
        raise DomainError("argument must satisfy |arg z| <= pi/2")
    # clamp rounding-level negative real parts onto the imaginary axis
    flat = np.where(flat.real < 0, 1j * flat.imag, flat)
    return arr.shape, flat


def _finish(shape, out, z):
    out = out.reshape(shape)
    if np.ndim(z) == 0 and not isinstance(z, np.ndarray):
        return complex(out)
    return out


def bessel_k_scaled(order, z, *, backend=None):
    """Return ``e^z K_lambda(z)``.

    Parameters
    ----------
    order : BesselOrder or int
        The order, or ``2*lambda`` as a plain int.
    z : complex or array_like
        Argument with ``Re z >= 0`` and ``z != 0``.

    Notes
    -----
    Half-integer orders use the terminating Bessel-polynomial sum. Integer
    orders use the ascending series for ``|z| <= 2`` and Steed's algorithm
    on Temme's second continued fraction beyond, followed by upward
    recurrence for orders above one.
    """
    two_lambda = _twice(order)
    shape, flat = _as_complex_array(z)
    out = _backend(backend).kscaled_array(two_lambda, flat)
    return _finish(shape, out, z)


def bessel_k(order, z, *, backend=None):
    """Return ``K_lambda(z)``; underflows to 0 for large ``Re z`` (use the scaled form)."""
    two_lambda = _twice(order)
    shape, flat = _as_complex_array(z)
    out = _backend(backend).kscaled_array(two_lambda, flat) * np.exp(-flat)
    return _finish(shape, out, z)


def bessel_k_scaled_diff(order, z, *, backend=None):
    """Return ``e^z (K_{lambda+1}(z) - K_lambda(z))`` free of large-``|z|`` cancellation."""
    two_lambda = _twice(order)
    shape, flat = _as_complex_array(z)
    out = _backend(backend).kscaled_diff_array(two_lambda, flat)
    return _finish(shape, out, z)


def exp_integral_e1(z, *, backend=None):
    """Principal-branch exponential integral ``E1(z)``."""
    shape, flat = _as_complex_array(z)
    out = _backend(backend).e1_array(flat)
    return _finish(shape, out, z)


def exp_integral_e1_scaled(z, *, backend=None):
    """``e^z E1(z)``, finite for all large ``|z|``."""
    shape, flat = _as_complex_array(z)
    out = _backend(backend).e1_scaled_array(flat)
    return _finish(shape, out, z)


def tricomi_u11(z, *, backend=None):
    """Tricomi's confluent hypergeometric function ``U(1, 1, z) = e^z E1(z)``."""
    return exp_integral_e1_scaled(z, backend=backend)
