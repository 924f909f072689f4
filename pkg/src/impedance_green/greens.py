"""Green's function of ``-Laplace + s^2`` in the half-space with an impedance boundary.

The Green's function is assembled as

    G(x, y) = g(|x - y|) + g(|x - R y|) + G_imp(x - R y)

where ``g`` is the full-space kernel and the impedance correction
``G_imp(z) = -(beta/pi) (s^2/2pi)^(nu+1/2) e^{-s|z|} psi(z)`` is a
non-oscillatory integral over ``y in [0, inf)``. ``G_imp`` is available
through three integral routes (y-form, t-form, integrated by parts) and,
for odd ``d`` with ``beta = 1``, in closed form.

Overflow discipline: growing exponentials only appear inside scaled Bessel
calls or merged into a single exponent with non-positive real part.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _taylor
from .errors import DomainError, SingularPointError
from .geometry import DiffVector, HalfSpacePoint, ProblemParams, mu, reflect, t_of_y
from .quadrature import QuadratureConfig, QuadratureResult, integrate_semi_infinite
from .special import bessel_k_scaled, bessel_k_scaled_diff, tricomi_u11

__all__ = [
    "Regime",
    "Frequency",
    "Path",
    "Evaluation",
    "g_nu",
    "psi",
    "q_nu",
    "psi_regularized",
    "g_imp",
    "g_imp_t_form",
    "g_imp_closed_d3_beta1",
    "g_imp_closed_odd_beta1",
    "g_imp_boundary_source",
    "green",
    "green_1d",
    "richardson_zero",
    "SPECIAL_FUNCTION_TOL",
]

SPECIAL_FUNCTION_TOL = 1e-13
LIMIT_ABSORPTION_EPS = (1e-2, 1e-3, 1e-4)


class Regime(str, enum.Enum):
    STRICTLY_DISSIPATIVE = "strictly_dissipative"
    LIMITING_ABSORPTION = "limiting_absorption"


@dataclass(frozen=True)
class Frequency:
    """Complex frequency ``s`` with ``Re s >= 0``, ``s != 0``."""

    s: complex

    def __post_init__(self):
        s = complex(self.s)
        if not (math.isfinite(s.real) and math.isfinite(s.imag)):
            raise DomainError("frequency must be finite")
        if s == 0:
            raise DomainError("frequency s must be nonzero")
        if s.real < 0:
            raise DomainError(f"frequency must satisfy Re s >= 0, got {s!r}")
        object.__setattr__(self, "s", s)

    @classmethod
    def coerce(cls, s) -> "Frequency":
        return s if isinstance(s, Frequency) else cls(s)

    @property
    def regime(self) -> Regime:
        if self.s.real > 0:
            return Regime.STRICTLY_DISSIPATIVE
        return Regime.LIMITING_ABSORPTION


class Path(str, enum.Enum):
    CLOSED_FORM_D1 = "closed_form_d1"
    CLOSED_FORM_D3_BETA1 = "closed_form_d3_beta1"
    CLOSED_FORM_ODD_BETA1 = "closed_form_odd_beta1"
    QUADRATURE_Y_FORM = "quadrature_y_form"
    QUADRATURE_T_FORM = "quadrature_t_form"
    REGULARIZED = "regularized"
    LIMIT_ABSORPTION_EXTRAPOLATED = "limit_absorption_extrapolated"


@dataclass(frozen=True)
class Evaluation:
    value: complex
    path: Path
    error_estimate: float
    converged: bool = True


def _lambda(params: ProblemParams):
    """Bessel order ``nu + 1/2`` as ``(two_lambda, lambda)``."""
    two = abs(params.d - 2)
    return two, two / 2.0


def _integrand_cfg(cfg, decay, frequency, scale):
    cfg = cfg or QuadratureConfig()
    return cfg.replace(decay_rate=decay, frequency=frequency, length_scale=scale)


def g_nu(params: ProblemParams, s, r):
    """Full-space kernel ``(2pi)^-(nu+3/2) (s/r)^(nu+1/2) K_{nu+1/2}(s r)``.

    Accepts scalar or array ``r > 0``. Reduces to ``e^{-sr}/(4 pi r)`` for
    ``d = 3`` and ``K_0(sr)/(2 pi)`` for ``d = 2``.
    """
    s = Frequency.coerce(s).s
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr <= 0):
        raise DomainError("g_nu needs r > 0")
    two, lam = _lambda(params)
    sr = s * r_arr
    val = (s / r_arr) ** lam * np.exp(-sr) * bessel_k_scaled(two, sr) / (2.0 * math.pi) ** (params.d / 2.0)
    return complex(val) if np.ndim(val) == 0 else val


def _impedance_prefactor(params: ProblemParams, s: complex) -> complex:
    # (s^2 / 2pi)^(nu+1/2) taken as s^(d-2) / (2pi)^((d-2)/2): equal to the
    # principal branch for Re s > 0 and continuous onto the imaginary axis
    return -(params.beta / math.pi) * s ** (params.d - 2) / (2.0 * math.pi) ** ((params.d - 2) / 2.0)


def _check_z(z: DiffVector, params: ProblemParams):
    if z.d != params.d:
        raise DomainError(f"difference vector has dimension {z.d}, expected {params.d}")
    if z.beta != params.beta:
        raise DomainError("difference vector and params disagree on beta")
    if params.d < 2:
        raise DomainError("the impedance correction is defined for d >= 2")


def _psi_integrand(z: DiffVector, params: ProblemParams, s: complex):
    two, lam = _lambda(params)
    beta = params.beta

    def f(y):
        t = t_of_y(z, y)
        m = mu(z.omega, t)
        w = s * m
        return np.exp(-s * y) * bessel_k_scaled(two, w) * w ** (1.0 - lam) / (t + beta * m)

    return f


def psi(z: DiffVector, params: ProblemParams, s, cfg: QuadratureConfig | None = None,
        breakpoints=None) -> QuadratureResult:
    """The core integral ``psi(z) = int_0^inf e^{-sy} e^{s mu~} K(s mu~) (s mu~)^(1/2-nu) / (t + beta mu~) dy``."""
    _check_z(z, params)
    freq = Frequency.coerce(s)
    s = freq.s
    if freq.regime is Regime.LIMITING_ABSORPTION and params.d <= 3:
        raise DomainError("the y-form integral does not exist for d <= 3 with Re s = 0; "
                          "use psi_regularized")
    qcfg = _integrand_cfg(cfg, s.real, abs(s.imag), z.r)
    return integrate_semi_infinite(_psi_integrand(z, params, s), qcfg, breakpoints=breakpoints)


def _bracket_and_derivative(z: DiffVector, params: ProblemParams, s: complex, y):
    """``B(y) = e^{w} K(w) w^(1-lam) / (t + beta mu~)`` with ``w = s mu~``, and ``dB/dy``."""
    two, lam = _lambda(params)
    beta = params.beta
    y = np.asarray(y, dtype=float)
    t = t_of_y(z, y)
    m = mu(z.omega, t)
    w = s * m
    ks = bessel_k_scaled(two, w)
    kd = bessel_k_scaled_diff(two, w)
    den = t + beta * m
    f_val = w ** (1.0 - lam) * ks
    # d/dw [e^w w^(1-lam) K_lam(w)] = w^-lam [(w + 1) K_lam - w K_{lam+1}] e^w
    f_der = w ** (-lam) * (ks - w * kd)
    b = f_val / den
    db = s * t * f_der / den ** 2 - f_val * (m + beta * t) / den ** 3
    return b, db


def q_nu(z: DiffVector, params: ProblemParams, s, y):
    """``d/dy`` of ``e^{s mu~} K_{nu+1/2}(s mu~) / ((t + beta mu~) (s mu~)^(nu-1/2))``."""
    _check_z(z, params)
    s = Frequency.coerce(s).s
    y_arr = np.asarray(y, dtype=float)
    if np.any(y_arr < 0):
        raise DomainError("y must be nonnegative")
    _, db = _bracket_and_derivative(z, params, s, y_arr)
    return complex(db) if np.ndim(db) == 0 else db


def psi_regularized(z: DiffVector, params: ProblemParams, s, cfg: QuadratureConfig | None = None,
                    breakpoints=None) -> QuadratureResult:
    """``psi`` after one integration by parts; also defined for ``Re s = 0``."""
    _check_z(z, params)
    s = Frequency.coerce(s).s
    two, lam = _lambda(params)
    sr = s * z.r
    boundary = bessel_k_scaled(two, sr) * sr ** (1.0 - lam) / (s * (z.z_d + params.beta * z.r))

    def f(y):
        _, db = _bracket_and_derivative(z, params, s, y)
        return np.exp(-s * y) * db

    qcfg = _integrand_cfg(cfg, s.real, abs(s.imag), z.r)
    res = integrate_semi_infinite(f, qcfg, breakpoints=breakpoints)
    value = boundary + res.value / s
    err = res.error_estimate / abs(s) + SPECIAL_FUNCTION_TOL * abs(boundary)
    return QuadratureResult(value, err, res.evaluations, res.truncation_point, res.converged,
                            res.method, res.breakpoints)


def g_imp(z: DiffVector, params: ProblemParams, s, cfg: QuadratureConfig | None = None,
          path=None, breakpoints=None) -> Evaluation:
    """Impedance correction ``-(beta/pi)(s^2/2pi)^(nu+1/2) e^{-s|z|} psi(z)``.

    ``path`` may force ``quadrature_y_form`` or ``regularized``; by default
    the y-form is used for ``Re s > 0`` and the regularized form otherwise.
    """
    _check_z(z, params)
    freq = Frequency.coerce(s)
    s = freq.s
    if path is None:
        path = Path.QUADRATURE_Y_FORM if freq.regime is Regime.STRICTLY_DISSIPATIVE else Path.REGULARIZED
    path = Path(path)
    if path is Path.QUADRATURE_Y_FORM:
        res = psi(z, params, freq, cfg, breakpoints)
    elif path is Path.REGULARIZED:
        res = psi_regularized(z, params, freq, cfg, breakpoints)
    else:
        raise DomainError(f"g_imp evaluates the y-form or regularized route, not {path.value}")
    factor = _impedance_prefactor(params, s) * np.exp(-s * z.r)
    return Evaluation(complex(factor * res.value), path, float(abs(factor) * res.error_estimate),
                      res.converged)


def g_imp_t_form(z: DiffVector, params: ProblemParams, s, cfg: QuadratureConfig | None = None) -> Evaluation:
    """``G_imp`` from the integral over ``t in [z_d, inf)``; an independent cross-check route."""
    _check_z(z, params)
    freq = Frequency.coerce(s)
    s = freq.s
    if freq.regime is not Regime.STRICTLY_DISSIPATIVE:
        raise DomainError("the t-form route needs Re s > 0")
    two, lam = _lambda(params)
    beta, zd, om, r = params.beta, z.z_d, z.omega, z.r

    def f(u):
        t = zd + u
        m = mu(om, t)
        # beta (t - z_d) + (mu - r), formed without cancellation
        expo = beta * u + u * (t + zd) / (m + r)
        return np.exp(-s * expo) * bessel_k_scaled(two, s * m) / m ** lam

    qcfg = _integrand_cfg(cfg, s.real * beta, abs(s.imag) * (1.0 + beta), r)
    res = integrate_semi_infinite(f, qcfg)
    factor = -2.0 * beta * (s / (2.0 * math.pi)) ** (params.d / 2.0) * np.exp(-s * r)
    return Evaluation(complex(factor * res.value), Path.QUADRATURE_T_FORM,
                      float(abs(factor) * res.error_estimate), res.converged)


def g_imp_closed_d3_beta1(z: DiffVector, s) -> Evaluation:
    """Closed form ``-(s/2pi) e^{-s|z|} U(1, 1, s(|z| + z_3))`` for ``d = 3``, ``beta = 1``."""
    if z.d != 3 or z.beta != 1.0:
        raise DomainError("the Tricomi closed form needs d = 3 and beta = 1")
    s = Frequency.coerce(s).s
    val = -(s / (2.0 * math.pi)) * np.exp(-s * z.r) * tricomi_u11(s * (z.r + z.z_d))
    return Evaluation(complex(val), Path.CLOSED_FORM_D3_BETA1, SPECIAL_FUNCTION_TOL * abs(val))


def _psi_closed_series(z: DiffVector, nu: int, s: complex, n: int):
    """Taylor coefficients in ``z_d`` of ``-s/(2pi)^(nu+1) e^{-s r} / ((r + z_d)^nu r)``."""
    zd = _taylor.variable(z.z_d, n)
    r2 = _taylor.mul(zd, zd)
    r2[0] += z.omega ** 2
    r = _taylor.power(r2, 0.5)
    e = _taylor.exp(-s * r)
    denom = _taylor.mul(_taylor.power(r + zd, -nu), _taylor.power(r, -1.0))
    return -s / (2.0 * math.pi) ** (nu + 1) * _taylor.mul(e, denom)


def g_imp_closed_odd_beta1(z: DiffVector, params: ProblemParams, s) -> Evaluation:
    """``(s - d/dz_d)^(nu-1)`` applied to the elementary ``Psi``, for odd ``d >= 5``, ``beta = 1``.

    The ``z_d`` derivatives are exact truncated-power-series derivatives.
    """
    if params.d % 2 == 0 or params.d < 5 or params.beta != 1.0:
        raise DomainError("the odd-dimensional closed form needs odd d >= 5 and beta = 1")
    _check_z(z, params)
    s = Frequency.coerce(s).s
    nu = (params.d - 3) // 2
    derivs = _taylor.derivatives(_psi_closed_series(z, nu, s, nu))
    m = nu - 1
    val = sum(math.comb(m, j) * s ** (m - j) * (-1) ** j * derivs[j] for j in range(m + 1))
    scale = sum(abs(math.comb(m, j) * s ** (m - j) * derivs[j]) for j in range(m + 1))
    return Evaluation(complex(val), Path.CLOSED_FORM_ODD_BETA1, SPECIAL_FUNCTION_TOL * scale)


def g_imp_boundary_source(params: ProblemParams, s, r):
    """``2 beta (s/2pi)^(nu+3/2) K_{nu+1/2}(s r) / r^(nu+1/2)``.

    Right-hand side of ``dG_imp/dz_d - s beta G_imp``; with ``beta = 1`` the
    inhomogeneity of the first-order ODE in ``z_d``.
    """
    s = Frequency.coerce(s).s
    two, lam = _lambda(params)
    r = np.asarray(r, dtype=float)
    val = (2.0 * params.beta * (s / (2.0 * math.pi)) ** (params.d / 2.0)
           * np.exp(-s * r) * bessel_k_scaled(two, s * r) / r ** lam)
    return complex(val) if np.ndim(val) == 0 else val


def green_1d(x: float, y: float, beta: float, s) -> complex:
    """``(1/2s) (e^{-s|x-y|} + (1-beta)/(1+beta) e^{-s(x+y)})``."""
    if not (x > 0 and y > 0):
        raise DomainError("d = 1 points must be positive")
    if not beta > 0:
        raise DomainError("beta must be positive")
    s = Frequency.coerce(s).s
    refl = (1.0 - beta) / (1.0 + beta)
    return complex((np.exp(-s * abs(x - y)) + refl * np.exp(-s * (x + y))) / (2.0 * s))


def default_path(params: ProblemParams, s) -> Path:
    """Route chosen by :func:`green` when none is forced."""
    freq = Frequency.coerce(s)
    if params.d == 1:
        return Path.CLOSED_FORM_D1
    if params.d % 2 == 1 and params.beta == 1.0:
        return Path.CLOSED_FORM_D3_BETA1 if params.d == 3 else Path.CLOSED_FORM_ODD_BETA1
    if freq.regime is Regime.STRICTLY_DISSIPATIVE:
        return Path.QUADRATURE_Y_FORM
    return Path.REGULARIZED


def g_imp_by_path(z: DiffVector, params: ProblemParams, s, path, cfg=None, breakpoints=None) -> Evaluation:
    path = Path(path)
    if path is Path.CLOSED_FORM_D3_BETA1:
        if params.d != 3:
            raise DomainError("closed_form_d3_beta1 needs d = 3")
        return g_imp_closed_d3_beta1(z, s)
    if path is Path.CLOSED_FORM_ODD_BETA1:
        return g_imp_closed_odd_beta1(z, params, s)
    if path is Path.QUADRATURE_T_FORM:
        return g_imp_t_form(z, params, s, cfg)
    if path in (Path.QUADRATURE_Y_FORM, Path.REGULARIZED):
        return g_imp(z, params, s, cfg, path, breakpoints)
    raise DomainError(f"path {path.value} does not evaluate G_imp directly")


def richardson_zero(eps, values):
    """Value at ``eps = 0`` of the polynomial interpolating ``(eps_i, values_i)`` (Neville)."""
    eps = [float(e) for e in eps]
    p = [complex(v) for v in values]
    n = len(p)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (eps[i + m] * p[i] - eps[i] * p[i + 1]) / (eps[i + m] - eps[i])
    return p[0]


def _coerce_point(p, d, allow_boundary):
    if isinstance(p, HalfSpacePoint):
        pt = p
        if pt.coords[-1] == 0 and not allow_boundary:
            raise DomainError("point must lie strictly inside the half-space")
    else:
        pt = HalfSpacePoint(p, allow_boundary=allow_boundary)
    if pt.d != d:
        raise DomainError(f"point has {pt.d} coordinates, expected d = {d}")
    return pt


def green(x, y, params: ProblemParams, s, cfg: QuadratureConfig | None = None, path=None, *,
          allow_boundary: bool = False, breakpoints=None) -> Evaluation:
    """Half-space impedance Green's function ``G(x, y)``.

    Parameters
    ----------
    x, y : sequence of float or HalfSpacePoint
        Target and source, both with positive last coordinate. ``x`` may lie
        on the boundary when ``allow_boundary`` is set.
    params : ProblemParams
    s : complex or Frequency
    cfg : QuadratureConfig, optional
        Tolerances for the quadrature routes.
    path : Path or str, optional
        Force a route; by default closed forms are preferred, then the
        y-form (``Re s > 0``) or the regularized form (``Re s = 0``).
        ``limit_absorption_extrapolated`` evaluates at ``s + eps`` for
        ``eps`` in 1e-2, 1e-3, 1e-4 and extrapolates to ``eps = 0``.

    Returns
    -------
    Evaluation
        Value, route and error estimate.
    """
    freq = Frequency.coerce(s)
    s = freq.s
    xp = _coerce_point(x, params.d, allow_boundary)
    yp = _coerce_point(y, params.d, False)
    xa, ya = xp.as_array(), yp.as_array()
    if params.d == 1:
        if path is not None and Path(path) is not Path.CLOSED_FORM_D1:
            raise DomainError("d = 1 has only the closed form")
        return Evaluation(green_1d(xa[0], ya[0], params.beta, freq), Path.CLOSED_FORM_D1,
                          SPECIAL_FUNCTION_TOL * abs(1.0 / s))
    dist = float(np.linalg.norm(xa - ya))
    if dist < 1e-12 * (np.linalg.norm(xa) + np.linalg.norm(ya) + 1.0):
        raise SingularPointError("coincident source and target")
    path = default_path(params, freq) if path is None else Path(path)
    if path is Path.LIMIT_ABSORPTION_EXTRAPOLATED:
        vals = []
        err = 0.0
        ok = True
        for eps in LIMIT_ABSORPTION_EPS:
            ev = green(xp, yp, params, s + eps, cfg, allow_boundary=allow_boundary)
            vals.append(ev.value)
            err += ev.error_estimate
            ok &= ev.converged
        val = richardson_zero(LIMIT_ABSORPTION_EPS, vals)
        # leading neglected term of the quadratic fit scales like eps1*eps2*eps3
        err += abs(val - richardson_zero(LIMIT_ABSORPTION_EPS[1:], vals[1:]))
        return Evaluation(val, path, err, ok)
    z = DiffVector.from_vector(xa - reflect(ya), params.beta)
    imp = g_imp_by_path(z, params, freq, path, cfg, breakpoints)
    g_direct = g_nu(params, freq, dist)
    g_image = g_nu(params, freq, z.r)
    val = g_direct + g_image + imp.value
    err = imp.error_estimate + SPECIAL_FUNCTION_TOL * (abs(g_direct) + abs(g_image))
    return Evaluation(complex(val), imp.path, float(err), imp.converged)
