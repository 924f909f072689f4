"""Adaptive quadrature of complex integrands over ``[0, inf)``.

Three strategies, picked from the :class:`QuadratureConfig`:

* exponential decay (``decay_rate > 0``) with a modest number of
  oscillations: truncate at ``Y = truncation_safety / decay_rate`` and run
  vectorised adaptive Gauss-Kronrod (7/15) bisection on ``[0, Y]``;
* oscillatory tail (``frequency > 0`` and either no decay or so little
  decay that ``[0, Y]`` would hold too many half-periods): adaptive on a
  head interval, then half-period panels whose partial sums are
  extrapolated with Wynn's epsilon algorithm;
* pure algebraic decay (no decay, no oscillation): map
  ``y = u / (1 - u)`` and integrate over ``u in (0, 1)``.

Integrands are vectorised: ``f(y)`` takes a 1-d float array and returns a
complex array of the same length.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError, IntegrandError

__all__ = [
    "QuadratureConfig",
    "QuadratureResult",
    "integrate_semi_infinite",
    "integrate_interval",
    "truncation_point",
    "wynn_epsilon",
]

# Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (QUADPACK qk15)
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_W_KRONROD = np.concatenate([_WGK[:-1], _WGK[::-1]])
_W_GAUSS = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod nodes (x_gk[1], x_gk[3], ...)
for _i, _wg in zip((1, 3, 5, 7), _WG):
    _W_GAUSS[_i] = _wg
    _W_GAUSS[14 - _i] = _wg
_EPMACH = np.finfo(float).eps

OSCILLATORY_PANEL_LIMIT = 400


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and tail policy.

    ``decay_rate`` is the known exponential decay rate of the integrand and
    sets the truncation point; ``frequency`` is its asymptotic angular
    oscillation rate (0 for non-oscillatory integrands); ``length_scale``
    is the scale of structure near ``y = 0`` used to grade the initial mesh.
    """

    rel_tol: float = 1e-11
    abs_tol: float = 1e-300
    max_subdivisions: int = 2000
    decay_rate: float = 0.0
    truncation_safety: float = 40.0
    frequency: float = 0.0
    length_scale: float = 1.0

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if self.abs_tol < 0:
            raise DomainError("abs_tol must be nonnegative")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")
        if not self.decay_rate >= 0:
            raise DomainError("decay_rate must be >= 0")
        if not self.frequency >= 0:
            raise DomainError("frequency must be >= 0")
        if not self.length_scale > 0:
            raise DomainError("length_scale must be positive")

    def replace(self, **changes) -> "QuadratureConfig":
        return replace(self, **changes)


@dataclass
class QuadratureResult:
    value: complex
    error_estimate: float
    evaluations: int
    truncation_point: float
    converged: bool
    method: str = "adaptive"
    breakpoints: np.ndarray = field(default=None, repr=False)


def truncation_point(cfg: QuadratureConfig, integrand_scale: float = 1.0) -> float:
    """Cut-off ``Y`` beyond which ``e^{-decay_rate Y} * integrand_scale`` is negligible."""
    if cfg.decay_rate <= 0:
        raise DomainError("truncation needs decay_rate > 0; use the algebraic-tail path")
    extra = math.log(integrand_scale) if integrand_scale > 1 else 0.0
    return (cfg.truncation_safety + extra) / cfg.decay_rate


def _call(f, y):
    vals = np.asarray(f(y), dtype=np.complex128)
    if vals.shape != y.shape:
        vals = np.broadcast_to(vals, y.shape).astype(np.complex128)
    bad = ~np.isfinite(vals)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise IntegrandError(float(y[i]), complex(vals[i]))
    return vals


def _gk15(f, lo, hi):
    """Kronrod values and QUADPACK-style error estimates on many panels at once."""
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    y = (center[:, None] + half[:, None] * _NODES[None, :]).ravel()
    fv = _call(f, y).reshape(lo.size, 15)
    res_k = fv @ _W_KRONROD * half
    res_g = fv @ _W_GAUSS * half
    absf = np.abs(fv)
    resabs = absf @ _W_KRONROD * np.abs(half)
    reskh = res_k / np.where(half != 0, half, 1.0)
    resasc = np.abs(fv - reskh[:, None]) @ _W_KRONROD * np.abs(half)
    err = np.abs(res_k - res_g)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc != 0) & (err != 0), scaled, err)
    floor = 50.0 * _EPMACH * resabs
    err = np.where(resabs > np.finfo(float).tiny / (50 * _EPMACH), np.maximum(err, floor), err)
    return res_k, err, y.size


def _adaptive(f, breakpoints, rel_tol, abs_tol, limit, tol_reference=None):
    """Vectorised adaptive bisection starting from the given partition.

    Each sweep bisects the smallest set of worst panels whose removal would
    bring the remaining error below half the tolerance.
    ``tol_reference`` replaces ``|value|`` in the relative tolerance, so a
    piece of a larger integral can be held to the tolerance of the whole.
    """
    edges = np.asarray(breakpoints, dtype=float)
    lo, hi = edges[:-1].copy(), edges[1:].copy()
    vals, errs, nev = _gk15(f, lo, hi)
    converged = False
    while True:
        total = vals.sum()
        err = errs.sum()
        ref = abs(total) if tol_reference is None else tol_reference
        tol = max(rel_tol * ref, abs_tol)
        if err <= tol:
            converged = True
            break
        if lo.size >= limit:
            break
        order = np.argsort(errs)[::-1]
        cum = np.cumsum(errs[order])
        need = np.searchsorted(cum, err - 0.5 * tol) + 1
        need = int(min(max(need, 1), limit - lo.size, lo.size))
        if need <= 0:
            break
        pick = order[:need]
        keep = np.ones(lo.size, dtype=bool)
        keep[pick] = False
        mid = 0.5 * (lo[pick] + hi[pick])
        if np.any((mid <= lo[pick]) | (mid >= hi[pick])):
            # panels at floating-point resolution; cannot refine further
            break
        new_lo = np.concatenate([lo[pick], mid])
        new_hi = np.concatenate([mid, hi[pick]])
        nv, ne, n = _gk15(f, new_lo, new_hi)
        nev += n
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        vals = np.concatenate([vals[keep], nv])
        errs = np.concatenate([errs[keep], ne])
    idx = np.argsort(lo)
    edges = np.append(lo[idx], hi[idx][-1])
    return complex(vals.sum()), float(errs.sum()), nev, converged, edges


def _graded_mesh(a, b, length_scale, frequency, min_panels=8):
    """Initial partition: geometric grading towards ``a`` plus uniform panels."""
    n_uniform = min_panels
    if frequency > 0:
        n_uniform = max(n_uniform, int(math.ceil((b - a) * frequency / math.pi)))
    pts = [np.linspace(a, b, n_uniform + 1)]
    scale = min(length_scale, b - a)
    grading = a + scale * 2.0 ** -np.arange(0, 12)
    pts.append(grading[grading < b])
    edges = np.unique(np.concatenate(pts))
    return edges


def integrate_interval(f, a, b, cfg: QuadratureConfig, breakpoints=None):
    """Adaptive integral over a finite interval ``[a, b]``.

    ``breakpoints`` fixes the starting partition; passing the
    ``breakpoints`` of an earlier result makes nearby integrands share a
    mesh, so their quadrature errors vary smoothly with the parameters.
    """
    if breakpoints is None:
        breakpoints = _graded_mesh(a, b, cfg.length_scale, cfg.frequency)
    limit = cfg.max_subdivisions + len(breakpoints)
    val, err, nev, ok, edges = _adaptive(f, breakpoints, cfg.rel_tol, cfg.abs_tol, limit)
    return QuadratureResult(val, err, nev, b, ok, "adaptive", edges)


def wynn_epsilon(seq):
    """Wynn's epsilon extrapolation of a sequence of partial sums.

    Returns ``(estimate, error)`` where the error compares the two best
    estimates of the last even columns.
    """
    s = [complex(v) for v in seq]
    n = len(s)
    if n < 3:
        return s[-1], abs(s[-1] - s[-2]) if n == 2 else float("inf")
    prev = [0j] * (n + 1)
    cur = list(s)
    best = [s[-1], s[-2]]
    k = 0
    while len(cur) > 1:
        nxt = []
        for i in range(len(cur) - 1):
            diff = cur[i + 1] - cur[i]
            if diff == 0:
                nxt = None
                break
            nxt.append(prev[i + 1] + 1.0 / diff)
        if nxt is None:
            break
        prev, cur = cur, nxt
        k += 1
        if k % 2 == 0:
            if len(cur) >= 2:
                best = [cur[-1], cur[-2]]
            else:
                best = [cur[-1], best[0]]
    return best[0], abs(best[0] - best[1])


def _oscillatory_tail(f, cfg: QuadratureConfig) -> QuadratureResult:
    period = math.pi / cfg.frequency
    head_end = max(8.0 * cfg.length_scale, 20.0 * period)
    head = integrate_interval(f, 0.0, head_end, cfg.replace(max_subdivisions=cfg.max_subdivisions))
    nev = head.evaluations
    err_sum = head.error_estimate
    partial = [head.value]
    start = head_end
    estimate, est_err = head.value, float("inf")
    prev_estimate = None
    converged = False
    batch = 16
    max_panels = max(cfg.max_subdivisions, 64)
    while len(partial) - 1 < max_panels:
        edges = start + period * np.arange(batch + 1)
        lo, hi = edges[:-1], edges[1:]
        # two Kronrod panels per half-period keep each piece near round-off
        mid = 0.5 * (lo + hi)
        plo = np.concatenate([lo, mid])
        phi = np.concatenate([mid, hi])
        v, e, n = _gk15(f, plo, phi)
        nev += n
        v = v[:batch] + v[batch:]
        e = e[:batch] + e[batch:]
        ref = max(abs(estimate), cfg.abs_tol / cfg.rel_tol)
        for j in np.flatnonzero(e > 0.01 * cfg.rel_tol * ref):
            val, er, n, _, _ = _adaptive(f, [lo[j], mid[j], hi[j]], cfg.rel_tol, cfg.abs_tol, 200,
                                         tol_reference=0.01 * ref)
            v[j], e[j] = val, er
            nev += n
        err_sum += float(e.sum())
        partial.extend((partial[-1] + np.cumsum(v)).tolist())
        start = float(edges[-1])
        window = partial[-min(len(partial), 41):]
        estimate, est_err = wynn_epsilon(window)
        if prev_estimate is not None:
            est_err = max(est_err, abs(estimate - prev_estimate))
            if est_err + err_sum <= max(cfg.rel_tol * abs(estimate), cfg.abs_tol):
                converged = True
                break
        prev_estimate = estimate
    return QuadratureResult(complex(estimate), float(est_err + err_sum), nev, start, converged,
                            "oscillatory_tail")


def _algebraic_tail(f, cfg: QuadratureConfig) -> QuadratureResult:
    def g(u):
        one_minus = 1.0 - u
        return _call(f, u / one_minus) / (one_minus * one_minus)

    ls = cfg.length_scale
    u_scale = ls / (1.0 + ls)
    edges = np.unique(np.concatenate([
        np.linspace(0.0, 1.0, 9),
        u_scale * 2.0 ** -np.arange(0, 10),
        1.0 - 2.0 ** -np.arange(4, 30),
    ]))
    limit = cfg.max_subdivisions + edges.size
    val, err, nev, ok, _ = _adaptive(g, edges, cfg.rel_tol, cfg.abs_tol, limit)
    return QuadratureResult(val, err, nev, math.inf, ok, "algebraic_map")


def integrate_semi_infinite(f, cfg: QuadratureConfig, breakpoints=None) -> QuadratureResult:
    """Integrate ``f`` over ``[0, inf)``.

    Non-convergence is reported through ``converged``; a non-finite
    integrand value raises :class:`IntegrandError` naming the abscissa.
    """
    if cfg.decay_rate > 0:
        y_max = truncation_point(cfg)
        half_periods = y_max * cfg.frequency / math.pi
        if half_periods <= OSCILLATORY_PANEL_LIMIT:
            if breakpoints is None:
                breakpoints = _graded_mesh(0.0, y_max, cfg.length_scale, cfg.frequency)
            # depth budget grows with the number of oscillations on [0, Y]
            limit = cfg.max_subdivisions + 4 * int(math.ceil(half_periods)) + len(breakpoints)
            val, err, nev, ok, edges = _adaptive(f, breakpoints, cfg.rel_tol, cfg.abs_tol, limit)
            return QuadratureResult(val, err, nev, y_max, ok, "adaptive", edges)
    if cfg.frequency > 0:
        return _oscillatory_tail(f, cfg)
    return _algebraic_tail(f, cfg)
