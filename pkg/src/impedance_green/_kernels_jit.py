"""Scalar special-function kernels, compiled by numba when it is enabled.

All functions take and return Python/numba scalars except the ``*_array``
loops at the bottom, which map a kernel over a 1-d complex array. Argument
validation lives in :mod:`impedance_green.special`; nothing here raises.
"""
import cmath
import math

import numpy as np

from ._accel import njit

EULER_GAMMA = 0.57721566490153286061
SERIES_RADIUS_K = 2.0
SERIES_RADIUS_E1 = 2.0
ASYMPTOTIC_RADIUS_DIFF = 30.0
_EPS = 1e-17
_MAXIT = 100000


@njit
def k01_series(z):
    """Unscaled ``(K0(z), K1(z))`` from the ascending series, for ``|z| <= 2``."""
    zz = 0.25 * z * z
    log_half = cmath.log(0.5 * z)
    t0 = 1.0 + 0.0j
    i0 = t0
    s0 = 0.0j
    t1 = 1.0 + 0.0j
    i1 = t1
    s1 = (1.0 - 2.0 * EULER_GAMMA) * t1
    h = 0.0
    k = 0
    while k < 200:
        k += 1
        t0 = t0 * zz / (k * k)
        t1 = t1 * zz / (k * (k + 1))
        h += 1.0 / k
        i0 += t0
        s0 += h * t0
        i1 += t1
        s1 += (2.0 * h + 1.0 / (k + 1) - 2.0 * EULER_GAMMA) * t1
        if abs(t0) <= _EPS * abs(i0) and abs(t1) <= _EPS * abs(i1):
            break
    k0 = -(log_half + EULER_GAMMA) * i0 + s0
    k1 = 1.0 / z + log_half * 0.5 * z * i1 - 0.25 * z * s1
    return k0, k1


@njit
def k01_steed_scaled(z):
    """Scaled ``(e^z K0(z), e^z K1(z))`` by Steed's method on Temme's CF2."""
    b = 2.0 * (1.0 + z)
    d = 1.0 / b
    h = d
    delh = d
    q1 = 0.0j
    q2 = 1.0 + 0.0j
    a1 = 0.25
    q = a1 + 0.0j
    c = a1 + 0.0j
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, _MAXIT):
        a -= 2.0 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1 = q2
        q2 = qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels) <= _EPS * abs(s):
            break
    h = a1 * h
    ks0 = cmath.sqrt(math.pi / (2.0 * z)) / s
    ks1 = ks0 * (z + 0.5 - h) / z
    return ks0, ks1


@njit
def k01_scaled(z):
    if abs(z) <= SERIES_RADIUS_K:
        k0, k1 = k01_series(z)
        e = cmath.exp(z)
        return k0 * e, k1 * e
    return k01_steed_scaled(z)


@njit
def kscaled_int(n, z):
    """``e^z K_n(z)`` for integer ``n >= 0`` by upward recurrence from K0, K1."""
    ks0, ks1 = k01_scaled(z)
    if n == 0:
        return ks0
    for m in range(1, n):
        ks0, ks1 = ks1, (2.0 * m / z) * ks1 + ks0
    return ks1


@njit
def kscaled_half(n, z):
    """``e^z K_{n+1/2}(z)``, exact Bessel-polynomial sum of ``n + 1`` terms."""
    c = 1.0
    coeffs = np.empty(n + 1)
    coeffs[0] = 1.0
    for k in range(n):
        c = c * (n + k + 1) * (n - k) / (k + 1)
        coeffs[k + 1] = c
    w = 1.0 / (2.0 * z)
    acc = 0.0j
    for k in range(n, -1, -1):
        acc = acc * w + coeffs[k]
    return cmath.sqrt(math.pi / (2.0 * z)) * acc


@njit
def kscaled(two_lambda, z):
    if two_lambda % 2 == 1:
        return kscaled_half((two_lambda - 1) // 2, z)
    return kscaled_int(two_lambda // 2, z)


@njit
def _asym_coeff(mu, k):
    # a_k(mu) of the large-argument expansion e^z K_mu(z) ~ sqrt(pi/2z) sum a_k z^-k
    num = 1.0
    four_mu2 = 4.0 * mu * mu
    for j in range(1, k + 1):
        num *= (four_mu2 - (2.0 * j - 1.0) ** 2) / (8.0 * j)
    return num


@njit
def kscaled_diff(two_lambda, z):
    """``e^z (K_{lam+1}(z) - K_lam(z))`` without cancellation for large ``|z|``."""
    if two_lambda % 2 == 1:
        n = (two_lambda - 1) // 2
        # difference of the Bessel-polynomial coefficients of orders n+1 and n
        w = 1.0 / (2.0 * z)
        acc = 0.0j
        c_lo = 1.0
        c_hi = 1.0
        terms = np.empty(n + 2)
        terms[0] = 0.0
        for k in range(n + 1):
            c_hi = c_hi * (n + 1 + k + 1) * (n + 1 - k) / (k + 1)
            if k < n:
                c_lo = c_lo * (n + k + 1) * (n - k) / (k + 1)
            else:
                c_lo = 0.0
            terms[k + 1] = c_hi - c_lo
        for k in range(n + 1, 0, -1):
            acc = (acc + terms[k]) * w
        return cmath.sqrt(math.pi / (2.0 * z)) * acc
    n = two_lambda // 2
    if abs(z) < ASYMPTOTIC_RADIUS_DIFF:
        return kscaled_int(n + 1, z) - kscaled_int(n, z)
    acc = 0.0j
    zk = 1.0 + 0.0j
    prev = 1e300
    for k in range(1, 200):
        zk = zk / z
        term = (_asym_coeff(n + 1.0, k) - _asym_coeff(float(n), k)) * zk
        if abs(term) > prev:
            break
        acc += term
        prev = abs(term)
        if abs(term) <= _EPS * abs(acc):
            break
    return cmath.sqrt(math.pi / (2.0 * z)) * acc


@njit
def e1_series(z):
    s = 0.0j
    t = 1.0 + 0.0j
    k = 0
    while k < 500:
        k += 1
        t = -t * z / k
        s += t / k
        if abs(t) <= _EPS * k * abs(s):
            break
    return -EULER_GAMMA - cmath.log(z) - s


@njit
def e1_scaled_cf(z):
    """``e^z E1(z)`` from the even continued fraction (modified Lentz)."""
    b = z + 1.0
    c = 1e300 + 0.0j
    d = 1.0 / b
    h = d
    for i in range(1, _MAXIT):
        an = -float(i * i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        dl = c * d
        h *= dl
        if abs(dl - 1.0) <= 1e-16:
            break
    return h


@njit
def e1(z):
    if abs(z) <= SERIES_RADIUS_E1:
        return e1_series(z)
    return e1_scaled_cf(z) * cmath.exp(-z)


@njit
def e1_scaled(z):
    if abs(z) <= SERIES_RADIUS_E1:
        return e1_series(z) * cmath.exp(z)
    return e1_scaled_cf(z)


@njit
def kscaled_array(two_lambda, z):
    out = np.empty(z.shape[0], dtype=np.complex128)
    for i in range(z.shape[0]):
        out[i] = kscaled(two_lambda, z[i])
    return out


@njit
def kscaled_diff_array(two_lambda, z):
    out = np.empty(z.shape[0], dtype=np.complex128)
    for i in range(z.shape[0]):
        out[i] = kscaled_diff(two_lambda, z[i])
    return out


@njit
def e1_array(z):
    out = np.empty(z.shape[0], dtype=np.complex128)
    for i in range(z.shape[0]):
        out[i] = e1(z[i])
    return out


@njit
def e1_scaled_array(z):
    out = np.empty(z.shape[0], dtype=np.complex128)
    for i in range(z.shape[0]):
        out[i] = e1_scaled(z[i])
    return out
