"""Executable checks of the Green's function against the PDE and its identities.

Each check returns a report with a machine-readable ``passed`` flag and the
raw residual sequence. Finite-difference steps are relative to the local
length scale, ``step = h * (1 + |x|)``, and the convergence order is the
least-squares slope of ``log(residual)`` against ``log(h)``.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, StencilError
from .geometry import DiffVector, ProblemParams
from .greens import (
    Frequency,
    Path,
    default_path,
    g_imp,
    g_imp_boundary_source,
    g_imp_by_path,
    g_imp_closed_d3_beta1,
    g_imp_closed_odd_beta1,
    g_imp_t_form,
    green,
    green_1d,
    richardson_zero,
)

__all__ = [
    "ResidualReport",
    "CheckReport",
    "observed_order",
    "helmholtz_residual",
    "impedance_bc_residual",
    "derivative_identity_check",
    "cross_representation_check",
    "limit_absorption_probe",
    "golden_check",
    "closed_form_check",
    "reciprocity_check",
    "green_1d_check",
    "decay_check",
    "run_suite",
    "write_report",
]

_TINY = 1e-300


def _complex_pair(v):
    return [float(np.real(v)), float(np.imag(v))]


def _params_dict(params: ProblemParams, s, **extra):
    out = {"d": params.d, "beta": params.beta, "s": _complex_pair(Frequency.coerce(s).s)}
    for k, v in extra.items():
        if isinstance(v, np.ndarray):
            v = v.tolist()
        out[k] = v
    return out


@dataclass
class ResidualReport:
    check_name: str
    h_values: list
    residuals: list
    observed_order: float
    passed: bool
    tolerance_used: float
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        h = self.h_values
        if any(b >= a for a, b in zip(h, h[1:])):
            raise DomainError("h_values must be strictly decreasing")
        if len(self.residuals) != len(h):
            raise DomainError("one residual per h value")

    def to_dict(self):
        return {
            "check": self.check_name,
            "params": self.params,
            "h": list(map(float, self.h_values)),
            "residual": list(map(float, self.residuals)),
            "order": float(self.observed_order),
            "pass": bool(self.passed),
        }


@dataclass
class CheckReport:
    """Outcome of a check that is not an h-refinement study."""

    check_name: str
    passed: bool
    params: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return {"check": self.check_name, "params": self.params, "pass": bool(self.passed),
                **self.details}


def observed_order(h_values, residuals) -> float:
    """Least-squares slope of ``log(residual)`` versus ``log(h)``."""
    h = np.asarray(h_values, dtype=float)
    r = np.asarray(residuals, dtype=float)
    if h.size < 2:
        return float("nan")
    if np.any(r <= 0):
        # an exactly-zero residual: treat as converged beyond measurement
        r = np.maximum(r, _TINY)
    slope = np.polyfit(np.log(h), np.log(r), 1)[0]
    return float(slope)


def _check_h_list(h_list):
    h = [float(v) for v in h_list]
    if len(h) < 3:
        raise DomainError("need at least 3 step sizes")
    if any(v <= 0 for v in h) or any(b >= a for a, b in zip(h, h[1:])):
        raise DomainError("h_list must be positive and strictly decreasing")
    return h


def helmholtz_residual(x, y, params: ProblemParams, s, h_list, cfg=None, path=None,
                       order_tol: float = 0.3, evaluator=None) -> ResidualReport:
    """Relative residual of ``(-Laplace_h + s^2) G(., y)`` at an interior ``x != y``.

    Uses the second-order central stencil, so the residual should vanish
    at order 2 (passes when ``|order - 2| <= order_tol``). ``evaluator``,
    a callable ``x -> complex``, replaces ``G(., y)``.
    """
    h_list = _check_h_list(h_list)
    s = Frequency.coerce(s).s
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    scale = 1.0 + float(np.linalg.norm(x))
    step_max = h_list[0] * scale
    if x[-1] - step_max <= 2.0 * step_max or np.linalg.norm(x - y) - step_max <= 2.0 * step_max:
        raise StencilError("stencil comes within 2h of the boundary or the source")
    if evaluator is None:
        def evaluator(pt):
            return green(pt, y, params, s, cfg, path).value
    residuals = []
    for h in h_list:
        step = h * scale
        g0 = evaluator(x)
        lap = 0j
        for i in range(params.d):
            e = np.zeros(params.d)
            e[i] = step
            lap += evaluator(x + e) + evaluator(x - e) - 2 * g0
        lap /= step * step
        residuals.append(abs(-lap + s * s * g0) / (abs(s) ** 2 * abs(g0) + _TINY))
    order = observed_order(h_list, residuals)
    passed = abs(order - 2.0) <= order_tol
    return ResidualReport("helmholtz_residual", h_list, residuals, order, passed, order_tol,
                          _params_dict(params, s, x=x.tolist(), y=y.tolist(),
                                       path=(Path(path) if path else default_path(params, s)).value))


# one-sided fourth-order first derivative, nodes 0..4
_ONE_SIDED = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0


def impedance_bc_residual(x_on_boundary, y, params: ProblemParams, s, h_list, cfg=None,
                          path=None, beta_test: float | None = None,
                          min_order: float = 3.0, normal_sign: float = -1.0) -> ResidualReport:
    """Relative residual of ``dG/dn + s beta G`` at a boundary point ``x_d = 0``.

    The outward normal is ``-e_d``, so ``dG/dn = -dG/dx_d``, taken with a
    one-sided fourth-order stencil into the domain. ``beta_test`` replaces
    ``beta`` in the boundary operator only and ``normal_sign = +1`` flips
    the normal (both negative controls). Passes when
    the residual decreases with ``h`` at order at least ``min_order``.
    """
    h_list = _check_h_list(h_list)
    s = Frequency.coerce(s).s
    x = np.asarray(x_on_boundary, dtype=float)
    y = np.asarray(y, dtype=float)
    if x[-1] != 0:
        raise StencilError("the boundary check needs x_d = 0")
    beta_bc = params.beta if beta_test is None else float(beta_test)
    scale = 1.0 + float(np.linalg.norm(x))
    step_max = h_list[0] * scale
    nodes = np.repeat(x[None, :], 5, axis=0)
    nodes[:, -1] = np.arange(5) * step_max
    if np.min(np.linalg.norm(nodes - y, axis=1)) <= 2.0 * step_max:
        raise StencilError("one-sided stencil comes within 2h of the source")
    residuals = []
    for h in h_list:
        step = h * scale
        vals = []
        for j in range(5):
            xj = x.copy()
            xj[-1] = j * step
            vals.append(green(xj, y, params, s, cfg, path, allow_boundary=True).value)
        dgdxd = np.dot(_ONE_SIDED, vals) / step
        bc = normal_sign * dgdxd + s * beta_bc * vals[0]
        residuals.append(abs(bc) / (abs(s * beta_bc * vals[0]) + _TINY))
    order = observed_order(h_list, residuals)
    decreasing = all(b < a for a, b in zip(residuals, residuals[1:]))
    passed = decreasing and order >= min_order
    return ResidualReport("impedance_bc_residual", h_list, residuals, order, passed, min_order,
                          _params_dict(params, s, x=x.tolist(), y=y.tolist(), beta_test=beta_bc,
                                       normal_sign=normal_sign))


def derivative_identity_check(z: DiffVector, params: ProblemParams, s, h_list, cfg=None,
                              path=None, order_tol: float = 0.2) -> ResidualReport:
    """Central-difference test of ``dG_imp/dz_d = source(r) + s beta G_imp``.

    With ``beta = 1`` this is the first-order ODE in ``z_d`` satisfied by
    ``G_imp`` and the report is named ``ode_beta1``.
    """
    h_list = _check_h_list(h_list)
    s = Frequency.coerce(s).s
    if path is None:
        path = default_path(params, s)
    scale = 1.0 + z.r
    if z.z_d - h_list[0] * scale <= 0:
        raise StencilError("central stencil crosses z_d = 0")
    g0 = g_imp_by_path(z, params, s, path, cfg).value
    rhs = g_imp_boundary_source(params, s, z.r) + s * params.beta * g0
    norm = abs(g_imp_boundary_source(params, s, z.r)) + abs(s * params.beta * g0)
    residuals = []
    for h in h_list:
        step = h * scale
        gp = g_imp_by_path(z.with_z_d(z.z_d + step), params, s, path, cfg).value
        gm = g_imp_by_path(z.with_z_d(z.z_d - step), params, s, path, cfg).value
        residuals.append(abs((gp - gm) / (2 * step) - rhs) / norm)
    order = observed_order(h_list, residuals)
    name = "ode_beta1" if params.beta == 1.0 else "derivative_identity"
    return ResidualReport(name, h_list, residuals, order, abs(order - 2.0) <= order_tol, order_tol,
                          _params_dict(params, s, z=[*z.z_prime, z.z_d], path=Path(path).value))


def cross_representation_check(z: DiffVector, params: ProblemParams, s, cfg=None,
                               rel_slack: float = 1e-10) -> CheckReport:
    """Pairwise agreement of the y-form, t-form, regularized and (if any) closed-form routes.

    Each pair must agree within the sum of its error estimates plus
    ``rel_slack`` times the magnitude.
    """
    freq = Frequency.coerce(s)
    if freq.s.real <= 0:
        raise DomainError("cross-representation check needs Re s > 0")
    routes = {
        Path.QUADRATURE_Y_FORM.value: g_imp(z, params, freq, cfg, Path.QUADRATURE_Y_FORM),
        Path.QUADRATURE_T_FORM.value: g_imp_t_form(z, params, freq, cfg),
        Path.REGULARIZED.value: g_imp(z, params, freq, cfg, Path.REGULARIZED),
    }
    if params.beta == 1.0 and params.d == 3:
        routes[Path.CLOSED_FORM_D3_BETA1.value] = g_imp_closed_d3_beta1(z, freq)
    elif params.beta == 1.0 and params.d % 2 == 1 and params.d >= 5:
        routes[Path.CLOSED_FORM_ODD_BETA1.value] = g_imp_closed_odd_beta1(z, params, freq)
    names = list(routes)
    pairs = []
    ok = all(ev.converged for ev in routes.values())
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            a, b = routes[names[i]], routes[names[j]]
            diff = abs(a.value - b.value)
            allowed = a.error_estimate + b.error_estimate + rel_slack * abs(a.value)
            pairs.append({"routes": [names[i], names[j]], "diff": diff, "allowed": allowed})
            ok &= diff <= allowed
    details = {"values": {k: _complex_pair(v.value) for k, v in routes.items()}, "pairs": pairs}
    return CheckReport("cross_representation", ok,
                       _params_dict(params, freq, z=[*z.z_prime, z.z_d]), details)


def limit_absorption_probe(x, y, params: ProblemParams, k: float, eps_list=(1e-2, 1e-3, 1e-4),
                           cfg=None, rel_tol: float = 1e-5) -> CheckReport:
    """Compare ``G`` at ``s = i k`` (regularized route) with the extrapolated limit ``eps -> 0+``.

    ``G`` is evaluated at ``s = eps + i k`` by the default route for each
    ``eps`` and extrapolated to ``eps = 0`` by polynomial interpolation.
    """
    k = float(k)
    if k == 0:
        raise DomainError("k must be nonzero")
    eps = [float(e) for e in eps_list]
    if len(eps) < 2 or any(e <= 0 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
        raise DomainError("eps_list must be positive and strictly decreasing")
    if params.d == 1:
        direct = green(x, y, params, 1j * k, cfg)
    else:
        direct = green(x, y, params, 1j * k, cfg, Path.REGULARIZED)
    seq = [green(x, y, params, e + 1j * k, cfg).value for e in eps]
    extrapolated = richardson_zero(eps, seq)
    rel = abs(extrapolated - direct.value) / abs(direct.value)
    details = {"direct": _complex_pair(direct.value), "extrapolated": _complex_pair(extrapolated),
               "eps": eps, "rel_diff": rel, "tol": rel_tol}
    return CheckReport("limit_absorption", rel <= rel_tol and direct.converged,
                       _params_dict(params, 1j * k, x=list(map(float, x)), y=list(map(float, y))),
                       details)


def golden_check(records=None) -> CheckReport:
    """Special-function layer against the frozen high-precision golden vectors."""
    from .golden import evaluate_record, load_golden

    records = load_golden() if records is None else records
    worst = 0.0
    failures = []
    for rec in records:
        got = evaluate_record(rec)
        want = complex(*rec["value"])
        rel = abs(got - want) / abs(want)
        worst = max(worst, rel / rec["tol"])
        if not rel <= rec["tol"]:
            failures.append({"fn": rec["fn"], "two_lambda": rec.get("two_lambda"), "z": rec["z"], "rel": rel})
    return CheckReport("special_functions_golden", not failures, {"records": len(records)},
                       {"worst_ratio_to_tol": worst, "failures": failures[:10]})


def closed_form_check(z: DiffVector, params: ProblemParams, s, cfg=None, rel_tol=1e-9) -> CheckReport:
    """Closed form for odd ``d``, ``beta = 1`` against y-form quadrature."""
    if params.d == 3:
        cf = g_imp_closed_d3_beta1(z, s)
    else:
        cf = g_imp_closed_odd_beta1(z, params, s)
    quad = g_imp(z, params, s, cfg, Path.QUADRATURE_Y_FORM)
    rel = abs(cf.value - quad.value) / abs(quad.value)
    return CheckReport(f"closed_form_d{params.d}", rel <= rel_tol and quad.converged,
                       _params_dict(params, s, z=[*z.z_prime, z.z_d]),
                       {"closed": _complex_pair(cf.value), "quadrature": _complex_pair(quad.value),
                        "rel_diff": rel, "tol": rel_tol})


def reciprocity_check(x, y, params: ProblemParams, s, cfg=None, rel_tol=1e-12) -> CheckReport:
    a = green(x, y, params, s, cfg).value
    b = green(y, x, params, s, cfg).value
    rel = abs(a - b) / abs(a)
    return CheckReport("reciprocity", rel <= rel_tol,
                       _params_dict(params, s, x=list(map(float, x)), y=list(map(float, y))),
                       {"rel_diff": rel, "tol": rel_tol})


def green_1d_check() -> CheckReport:
    """d = 1 closed form: a hand value, absence of reflection at beta = 1, symmetry, and the BC."""
    errs = {}
    errs["beta3_x1_y1"] = abs(green_1d(1.0, 1.0, 3.0, 1.0) - 0.5 * (1 - 0.5 * math.exp(-2.0)))
    errs["beta1_reflection_free"] = abs(green_1d(2.0, 1.0, 1.0, 1.0) - 0.5 * math.exp(-1.0))
    rng = np.random.default_rng(7)
    sym = 0.0
    bc = 0.0
    for _ in range(10):
        x, y = rng.uniform(0.1, 3.0, 2)
        beta = rng.uniform(0.2, 3.0)
        s = complex(rng.uniform(0.1, 2.0), rng.uniform(-2.0, 2.0))
        sym = max(sym, abs(green_1d(x, y, beta, s) - green_1d(y, x, beta, s)))
        # x = 1e-200 is the boundary to double precision; derivative of the
        # x < y branch taken analytically
        refl = (1 - beta) / (1 + beta)
        g0 = green_1d(1e-200, y, beta, s)
        dgdx = 0.5 * (1 - refl) * np.exp(-s * y)
        bc = max(bc, abs(-dgdx + s * beta * g0) / abs(s * beta * g0))
    errs["symmetry"] = sym
    errs["boundary_condition"] = bc
    passed = all(v <= 1e-14 for v in errs.values())
    return CheckReport("green_1d", passed, {}, {"errors": errs})


def decay_check(y, params: ProblemParams, s, direction, radii=(2.0, 4.0, 8.0, 16.0, 32.0),
                cfg=None) -> CheckReport:
    """``|G(r zeta, y)|`` decreases along a ray for ``Re s > 0``."""
    direction = np.asarray(direction, dtype=float)
    direction = direction / np.linalg.norm(direction)
    if direction[-1] <= 0:
        raise DomainError("ray direction must point into the half-space")
    mags = [abs(green(r * direction, y, params, s, cfg).value) for r in radii]
    passed = all(b < a for a, b in zip(mags, mags[1:]))
    return CheckReport("decay", passed, _params_dict(params, s, direction=direction.tolist()),
                       {"radii": list(radii), "abs_G": mags})


# ---------------------------------------------------------------- suites

H_PDE = (1e-2, 5e-3, 2.5e-3)
H_BC = (1e-1, 5e-2, 2.5e-2)


def _pde_draws():
    """Parameter draws for the PDE, boundary and derivative checks."""
    return [
        (ProblemParams(2, 1.0), 1.0 + 0.0j),
        (ProblemParams(2, 0.5), 2.0 + 1.0j),
        (ProblemParams(3, 1.0), 1.0 + 0.0j),
        (ProblemParams(3, 2.0), 1.0 + 0.5j),
        (ProblemParams(5, 1.0), 0.5 + 1.0j),
        (ProblemParams(5, 0.5), 1.5 + 0.0j),
    ]


def _interior_pair(d, rng):
    x = np.r_[rng.uniform(-0.5, 0.5, d - 1), rng.uniform(0.8, 1.5)]
    y = np.r_[rng.uniform(-0.5, 0.5, d - 1), rng.uniform(0.3, 0.6)]
    return x, y


def _draw_z(d, beta, rng):
    return DiffVector.from_vector(np.r_[rng.normal(0.0, 0.7, d - 1), rng.uniform(0.4, 2.0)], beta)


def _draw_s(rng):
    return complex(rng.uniform(0.2, 2.5), rng.uniform(-3.0, 3.0))


def suite_checks(suite: str = "quick"):
    """Yield ``(name, thunk)`` pairs making up a self-check suite."""
    if suite not in ("quick", "full"):
        raise DomainError(f"unknown suite {suite!r}")
    full = suite == "full"
    checks = []
    checks.append(("special_functions_golden", golden_check))
    checks.append(("green_1d", green_1d_check))

    n_cf = 20 if full else 4
    rng = np.random.default_rng(11)
    for d in (3, 5, 7):
        count = n_cf if d == 3 else (10 if full else 3)
        tol = 1e-9 if d == 3 else 1e-8
        for _ in range(count):
            z = _draw_z(d, 1.0, rng)
            s = _draw_s(rng)
            checks.append((f"closed_form_d{d}",
                           lambda z=z, d=d, s=s, tol=tol: closed_form_check(z, ProblemParams(d, 1.0), s,
                                                                            rel_tol=tol)))

    rng = np.random.default_rng(12)
    betas = (0.5, 1.0, 2.0)
    freqs = (1.0 + 0j, 2.0 + 1.0j, 0.1 + 3.0j) if full else (1.0 + 0j, 2.0 + 1.0j)
    for d in ((2, 3, 4, 5) if full else (2, 4)):
        for beta in (betas if full else (0.5, 2.0)):
            for s in freqs:
                z = _draw_z(d, beta, rng)
                checks.append(("cross_representation",
                               lambda z=z, d=d, beta=beta, s=s: cross_representation_check(
                                   z, ProblemParams(d, beta), s)))

    draws = _pde_draws() if full else _pde_draws()[::2]
    rng = np.random.default_rng(13)
    for params, s in draws:
        x, y = _interior_pair(params.d, rng)
        checks.append(("helmholtz_residual",
                       lambda x=x, y=y, p=params, s=s: helmholtz_residual(x, y, p, s, H_PDE)))
        # the one-sided stencil reaches 4h(1+|x|) into the domain, keep the source clear of it
        xb, yb = np.r_[x[:-1], 0.0], np.r_[y[:-1], y[-1] + 0.8]
        checks.append(("impedance_bc_residual",
                       lambda x=xb, y=yb, p=params, s=s: impedance_bc_residual(x, y, p, s, H_BC)))
        z = _draw_z(params.d, params.beta, rng)
        checks.append(("derivative_identity",
                       lambda z=z, p=params, s=s: derivative_identity_check(z, p, s, H_PDE)))
    # negative control: boundary operator with the wrong beta must fail
    params, s = _pde_draws()[1]
    x, y = _interior_pair(params.d, np.random.default_rng(14))
    checks.append(("negative_control_bc",
                   lambda x=np.r_[x[:-1], 0.0], y=np.r_[y[:-1], y[-1] + 0.8], p=params, s=s: _negate(
                       impedance_bc_residual(x, y, p, s, H_BC, beta_test=3.0 * p.beta),
                       "negative_control_bc")))
    checks.append(("negative_control_bc_sign",
                   lambda x=np.r_[x[:-1], 0.0], y=np.r_[y[:-1], y[-1] + 0.8], p=params, s=s: _negate(
                       impedance_bc_residual(x, y, p, s, H_BC, normal_sign=1.0),
                       "negative_control_bc_sign")))

    la_cases = [(ProblemParams(3, 1.0), 1.0), (ProblemParams(2, 1.0), 1.0)]
    if full:
        la_cases += [(ProblemParams(3, 0.5), 2.0), (ProblemParams(2, 2.0), 2.0)]
    rng = np.random.default_rng(15)
    for params, k in la_cases:
        x, y = _interior_pair(params.d, rng)
        checks.append(("limit_absorption",
                       lambda x=x, y=y, p=params, k=k: limit_absorption_probe(x, y, p, k)))

    rng = np.random.default_rng(16)
    for i in range(20 if full else 5):
        d = (2, 3, 4, 5)[i % 4]
        beta = (0.5, 1.0, 2.0)[i % 3]
        x, y = _interior_pair(d, rng)
        s = _draw_s(rng)
        checks.append(("reciprocity",
                       lambda x=x, y=y, d=d, beta=beta, s=s: reciprocity_check(x, y, ProblemParams(d, beta), s)))

    for params, s in ((ProblemParams(3, 2.0), 1.0), (ProblemParams(2, 0.5), 1.0 + 0.5j)):
        y = np.r_[np.zeros(params.d - 1), 0.5]
        direction = np.r_[np.full(params.d - 1, 0.6), 0.8]
        checks.append(("decay", lambda y=y, p=params, s=s, dr=direction: decay_check(y, p, s, dr)))
    return checks


def _negate(report, name):
    """A negative control passes when the wrapped check fails."""
    out = CheckReport(name, not report.passed, report.params,
                      {"wrapped": report.to_dict()})
    return out


def run_suite(suite: str = "quick", progress=None):
    """Run every check of ``suite``; returns ``(reports, failed_names, seconds)``."""
    start = time.perf_counter()
    reports = []
    failed = []
    for name, thunk in suite_checks(suite):
        try:
            rep = thunk().to_dict()
        except Exception as exc:  # a crashing check is a failed check
            rep = {"check": name, "params": {}, "pass": False, "error": f"{type(exc).__name__}: {exc}"}
        reports.append(rep)
        if not rep["pass"]:
            failed.append(rep["check"])
        if progress is not None:
            progress(rep)
    return reports, failed, time.perf_counter() - start


def write_report(reports, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(reports, fh, indent=1, default=_json_default)
        fh.write("\n")


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return _complex_pair(obj)
    raise TypeError(f"not JSON serialisable: {type(obj).__name__}")
