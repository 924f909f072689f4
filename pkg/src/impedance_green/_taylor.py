"""Truncated univariate power series (Taylor-mode differentiation).

A series is a 1-d complex array ``c`` with ``f(x0 + h) = sum c[k] h^k + O(h^n)``.
"""
import math

import numpy as np


def variable(x0, n):
    """The identity function ``x0 + h`` truncated to ``n`` coefficients."""
    c = np.zeros(n, dtype=np.complex128)
    c[0] = x0
    if n > 1:
        c[1] = 1.0
    return c


def mul(a, b):
    n = len(a)
    return np.convolve(a, b)[:n]


def power(a, alpha):
    """``a^alpha`` for ``a[0] != 0`` via the J.C.P. Miller recurrence."""
    n = len(a)
    b = np.zeros(n, dtype=np.complex128)
    b[0] = a[0] ** alpha
    for m in range(1, n):
        k = np.arange(1, m + 1)
        b[m] = np.sum((alpha * k - (m - k)) * a[k] * b[m - k]) / (m * a[0])
    return b


def exp(a):
    n = len(a)
    b = np.zeros(n, dtype=np.complex128)
    b[0] = np.exp(a[0])
    for m in range(1, n):
        k = np.arange(1, m + 1)
        b[m] = np.sum(k * a[k] * b[m - k]) / m
    return b


def derivatives(c):
    """Convert Taylor coefficients to derivatives ``f^(k)(x0)``."""
    return np.array([math.factorial(k) * v for k, v in enumerate(c)])
