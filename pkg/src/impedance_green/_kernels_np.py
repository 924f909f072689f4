"""Vectorised pure-numpy twins of :mod:`impedance_green._kernels_jit`.

Same algorithms and crossovers; iterative parts (continued fractions) run
over the whole array with a convergence mask instead of per-element early
exit. Used when numba is disabled and as an independent cross-check.
"""
import numpy as np

from ._kernels_jit import (
    ASYMPTOTIC_RADIUS_DIFF,
    EULER_GAMMA,
    SERIES_RADIUS_E1,
    SERIES_RADIUS_K,
)

_EPS = 1e-17
_MAXIT = 100000


def k01_series(z):
    zz = 0.25 * z * z
    log_half = np.log(0.5 * z)
    t0 = np.ones_like(z)
    i0 = t0.copy()
    s0 = np.zeros_like(z)
    t1 = np.ones_like(z)
    i1 = t1.copy()
    s1 = (1.0 - 2.0 * EULER_GAMMA) * t1
    h = 0.0
    # |z| <= 2 so |zz| <= 1 and 1/(k!)^2 < 1e-35 at k = 22
    for k in range(1, 26):
        t0 = t0 * zz / (k * k)
        t1 = t1 * zz / (k * (k + 1))
        h += 1.0 / k
        i0 += t0
        s0 += h * t0
        i1 += t1
        s1 += (2.0 * h + 1.0 / (k + 1) - 2.0 * EULER_GAMMA) * t1
    k0 = -(log_half + EULER_GAMMA) * i0 + s0
    k1 = 1.0 / z + log_half * 0.5 * z * i1 - 0.25 * z * s1
    return k0, k1


def k01_steed_scaled(z):
    with np.errstate(all="ignore"):
        return _k01_steed_scaled(z)


def _k01_steed_scaled(z):
    b = 2.0 * (1.0 + z)
    d = 1.0 / b
    h = d.copy()
    delh = d.copy()
    q1 = np.zeros_like(z)
    q2 = np.ones_like(z)
    a1 = 0.25
    q = np.full_like(z, a1)
    c = np.full_like(z, a1)
    a = -a1
    s = 1.0 + q * delh
    active = np.ones(z.shape, dtype=bool)
    for i in range(2, _MAXIT):
        a -= 2.0 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q = q + c * qnew
        b = b + 2.0
        d = 1.0 / (b + a * d)
        delh = np.where(active, (b * d - 1.0) * delh, 0.0)
        h = h + delh
        dels = np.where(active, q * delh, 0.0)
        s = s + dels
        active &= np.abs(dels) > _EPS * np.abs(s)
        if not active.any():
            break
    h = a1 * h
    ks0 = np.sqrt(np.pi / (2.0 * z)) / s
    ks1 = ks0 * (z + 0.5 - h) / z
    return ks0, ks1


def k01_scaled(z):
    ks0 = np.empty_like(z)
    ks1 = np.empty_like(z)
    small = np.abs(z) <= SERIES_RADIUS_K
    if small.any():
        zs = z[small]
        k0, k1 = k01_series(zs)
        e = np.exp(zs)
        ks0[small] = k0 * e
        ks1[small] = k1 * e
    if (~small).any():
        ks0[~small], ks1[~small] = k01_steed_scaled(z[~small])
    return ks0, ks1


def kscaled_int(n, z):
    ks0, ks1 = k01_scaled(z)
    if n == 0:
        return ks0
    for m in range(1, n):
        ks0, ks1 = ks1, (2.0 * m / z) * ks1 + ks0
    return ks1


def _bessel_poly_coeffs(n):
    coeffs = [1.0]
    for k in range(n):
        coeffs.append(coeffs[-1] * (n + k + 1) * (n - k) / (k + 1))
    return coeffs


def kscaled_half(n, z):
    coeffs = _bessel_poly_coeffs(n)
    w = 1.0 / (2.0 * z)
    acc = np.zeros_like(z)
    for c in reversed(coeffs):
        acc = acc * w + c
    return np.sqrt(np.pi / (2.0 * z)) * acc


def kscaled_array(two_lambda, z):
    if two_lambda % 2 == 1:
        return kscaled_half((two_lambda - 1) // 2, z)
    return kscaled_int(two_lambda // 2, z)


def _asym_coeffs(mu, kmax):
    out = np.empty(kmax + 1)
    out[0] = 1.0
    for j in range(1, kmax + 1):
        out[j] = out[j - 1] * (4.0 * mu * mu - (2.0 * j - 1.0) ** 2) / (8.0 * j)
    return out


def kscaled_diff_array(two_lambda, z):
    if two_lambda % 2 == 1:
        n = (two_lambda - 1) // 2
        lo = _bessel_poly_coeffs(n) + [0.0]
        hi = _bessel_poly_coeffs(n + 1)
        w = 1.0 / (2.0 * z)
        acc = np.zeros_like(z)
        for k in range(n + 1, 0, -1):
            acc = (acc + (hi[k] - lo[k])) * w
        return np.sqrt(np.pi / (2.0 * z)) * acc
    n = two_lambda // 2
    out = np.empty_like(z)
    near = np.abs(z) < ASYMPTOTIC_RADIUS_DIFF
    if near.any():
        zn = z[near]
        out[near] = kscaled_int(n + 1, zn) - kscaled_int(n, zn)
    if (~near).any():
        zf = z[~near]
        kmax = 60
        coef = _asym_coeffs(n + 1.0, kmax) - _asym_coeffs(float(n), kmax)
        acc = np.zeros_like(zf)
        zk = np.ones_like(zf)
        prev = np.full(zf.shape, np.inf)
        active = np.ones(zf.shape, dtype=bool)
        for k in range(1, kmax):
            zk = zk / zf
            term = coef[k] * zk
            mag = np.abs(term)
            active &= mag <= prev
            acc = acc + np.where(active, term, 0.0)
            prev = mag
            active &= mag > _EPS * np.abs(acc)
            if not active.any():
                break
        out[~near] = np.sqrt(np.pi / (2.0 * zf)) * acc
    return out


def e1_series(z):
    s = np.zeros_like(z)
    t = np.ones_like(z)
    # |z| <= 2: 2^k / (k k!) < 1e-20 by k = 30
    for k in range(1, 34):
        t = -t * z / k
        s += t / k
    return -EULER_GAMMA - np.log(z) - s


def e1_scaled_cf(z):
    b = z + 1.0
    c = np.full_like(z, 1e300)
    d = 1.0 / b
    h = d.copy()
    active = np.ones(z.shape, dtype=bool)
    for i in range(1, _MAXIT):
        an = -float(i * i)
        b = b + 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        dl = np.where(active, c * d, 1.0)
        h = h * dl
        active &= np.abs(dl - 1.0) > 1e-16
        if not active.any():
            break
    return h


def _e1_split(z, scaled):
    out = np.empty_like(z)
    small = np.abs(z) <= SERIES_RADIUS_E1
    if small.any():
        zs = z[small]
        out[small] = e1_series(zs) * (np.exp(zs) if scaled else 1.0)
    if (~small).any():
        zl = z[~small]
        out[~small] = e1_scaled_cf(zl) * (1.0 if scaled else np.exp(-zl))
    return out


def e1_array(z):
    return _e1_split(z, scaled=False)


def e1_scaled_array(z):
    return _e1_split(z, scaled=True)
