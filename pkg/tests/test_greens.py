import math
import os

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from impedance_green import (
    DiffVector,
    DomainError,
    Frequency,
    Path,
    ProblemParams,
    Regime,
    SingularPointError,
    g_imp,
    g_imp_closed_d3_beta1,
    g_imp_closed_odd_beta1,
    g_imp_t_form,
    g_nu,
    green,
    green_1d,
    psi,
    psi_regularized,
)
from impedance_green.greens import (
    default_path,
    g_imp_boundary_source,
    g_imp_by_path,
    q_nu,
    richardson_zero,
)


def rel(a, b):
    return abs(a - b) / abs(b)


# ---------------------------------------------------------------- kernel


def test_g_nu_d3_is_yukawa():
    p = ProblemParams(3, 1.0)
    for s, r in ((1.0, 1.0), (2 + 3j, 0.4), (0.5j, 7.0)):
        assert rel(g_nu(p, s, r), np.exp(-s * r) / (4 * math.pi * r)) <= 1e-14


@pytest.mark.parametrize("d,s,r", [(2, 1.0, 1.0), (5, 1.0, 1.0), (4, 2 - 1j, 0.3), (6, 3j, 2.5), (9, 0.2, 40.0)])
def test_g_nu_against_mpmath(d, s, r):
    assert rel(g_nu(ProblemParams(d, 1.0), s, r), oracles.g_nu(d, s, r)) <= 1e-13


def test_g_nu_reference_values():
    # mpmath: K_0(1)/(2 pi) and (2 pi)^(-5/2) K_{3/2}(1)
    assert g_nu(ProblemParams(2, 1.0), 1.0, 1.0) == pytest.approx(0.06700812050849714, rel=1e-14)
    assert g_nu(ProblemParams(5, 1.0), 1.0, 1.0) == pytest.approx(0.009318495104293076, rel=1e-14)


def test_g_nu_vectorized():
    p = ProblemParams(4, 1.0)
    r = np.array([0.5, 1.0, 2.0])
    np.testing.assert_allclose(g_nu(p, 1.5, r), [g_nu(p, 1.5, v) for v in r], rtol=1e-15)
    with pytest.raises(DomainError):
        g_nu(p, 1.0, 0.0)


# ---------------------------------------------------------------- impedance correction

ORACLE_CASES = [
    (2, 0.5, 1 + 0.5j, (0.4, 1.1)),
    (3, 2.0, 1.0, (0.3, -0.2, 0.7)),
    (4, 1.0, 0.7 - 0.3j, (1.0, 0.1, 0.2, 0.5)),
    (5, 1.0, 1.2 + 1j, (0.5, 0.0, 0.0, 0.0, 0.4)),
    (3, 1.0, 2.0, (0.0, 0.0, 1.0)),
    (6, 0.5, 1.5, (0.3, 0.3, 0.3, 0.3, 0.3, 1.0)),
]


@pytest.mark.parametrize("d,beta,s,z", ORACLE_CASES)
def test_g_imp_against_t_integral_oracle(d, beta, s, z):
    p = ProblemParams(d, beta)
    zv = DiffVector.from_vector(z, beta)
    ev = g_imp_by_path(zv, p, s, default_path(p, s))
    assert ev.converged
    assert rel(ev.value, oracles.g_imp(d, beta, s, z)) <= 1e-12


# s = i k, frozen from oracles.g_imp_imag_axis (20 digits, quadosc)
IMAG_AXIS_CASES = [
    (3, 0.5, 1.0, (0.3, 0.2, 0.9), -0.03829411129203913 + 0.022871502229254312j),
    (2, 2.0, 2.0, (0.4, 1.2), 0.16595217654032138 - 0.010793975060231916j),
    (2, 1.0, 1.0, (0.0, 1.0), -0.008007567371161083 + 0.1758968107646283j),
]


@pytest.mark.parametrize("d,beta,k,z,want", IMAG_AXIS_CASES)
def test_regularized_on_imaginary_axis(d, beta, k, z, want):
    ev = g_imp(DiffVector.from_vector(z, beta), ProblemParams(d, beta), 1j * k)
    assert ev.path is Path.REGULARIZED and ev.converged
    assert rel(ev.value, want) <= 1e-12


@pytest.mark.skipif(not os.environ.get("RUN_SLOW_ORACLES"), reason="minutes per value; set RUN_SLOW_ORACLES=1")
@pytest.mark.parametrize("d,beta,k,z,want", IMAG_AXIS_CASES)
def test_imaginary_axis_frozen_values(d, beta, k, z, want):
    assert rel(oracles.g_imp_imag_axis(d, beta, k, z), want) <= 1e-14


def test_d3_beta1_reference_value():
    # z = (0, 0, 1), s = 1: -(1/2pi) e^{-1} U(1, 1, 2)
    want = float(-mp.exp(-1) * mp.hyperu(1, 1, 2) / (2 * mp.pi))
    z = DiffVector((0.0, 0.0), 1.0, 1.0)
    assert g_imp_closed_d3_beta1(z, 1.0).value.real == pytest.approx(want, rel=1e-14)
    assert want == pytest.approx(-0.0211557296, abs=1e-10)
    res = psi(z, ProblemParams(3, 1.0), 1.0)
    assert res.value.real == pytest.approx(0.45285826, rel=1e-7)


def test_psi_unavailable_on_axis_for_low_d():
    z = DiffVector((0.3,), 1.0, 1.0)
    with pytest.raises(DomainError):
        psi(z, ProblemParams(2, 1.0), 2j)
    with pytest.raises(DomainError):
        g_imp_t_form(z, ProblemParams(2, 1.0), 2j)
    # the y-form integral converges for d >= 4 on the axis
    z4 = DiffVector((0.3, 0.1, 0.0), 1.0, 0.5)
    p4 = ProblemParams(4, 0.5)
    a = g_imp(z4, p4, 1.5j, path=Path.QUADRATURE_Y_FORM).value
    b = g_imp(z4, p4, 1.5j, path=Path.REGULARIZED).value
    assert rel(a, b) <= 1e-9


draw_z = st.builds(
    lambda zp, zd: (zp, zd),
    st.lists(st.floats(-2, 2), min_size=4, max_size=4),
    st.floats(0.2, 3.0),
)
draw_s = st.builds(complex, st.floats(0.1, 3.0), st.floats(-4, 4))


@settings(max_examples=30, deadline=None)
@given(zz=draw_z, s=draw_s, d=st.integers(2, 5), beta=st.sampled_from([0.25, 0.5, 1.0, 2.0, 5.0]))
def test_three_integral_routes_agree(zz, s, d, beta):
    zp, zd = zz
    z = DiffVector(tuple(zp[: d - 1]), zd, beta)
    p = ProblemParams(d, beta)
    y = g_imp(z, p, s, path=Path.QUADRATURE_Y_FORM)
    t = g_imp_t_form(z, p, s)
    r = g_imp(z, p, s, path=Path.REGULARIZED)
    scale = abs(y.value)
    assert abs(y.value - t.value) <= y.error_estimate + t.error_estimate + 1e-10 * scale
    assert abs(y.value - r.value) <= y.error_estimate + r.error_estimate + 1e-10 * scale


@settings(max_examples=25, deadline=None)
@given(zz=draw_z, s=draw_s, d=st.sampled_from([3, 5, 7, 9, 11]))
def test_closed_forms_match_quadrature(zz, s, d):
    zp, zd = zz
    zp = (zp * 3)[: d - 1]
    z = DiffVector(tuple(zp), zd, 1.0)
    p = ProblemParams(d, 1.0)
    cf = g_imp_closed_d3_beta1(z, s) if d == 3 else g_imp_closed_odd_beta1(z, p, s)
    quad = g_imp(z, p, s, path=Path.QUADRATURE_Y_FORM)
    assert rel(cf.value, quad.value) <= 1e-9


def test_closed_form_preconditions():
    z3 = DiffVector((0.1, 0.2), 1.0, 1.0)
    with pytest.raises(DomainError):
        g_imp_closed_d3_beta1(DiffVector((0.1, 0.2), 1.0, 2.0), 1.0)
    with pytest.raises(DomainError):
        g_imp_closed_odd_beta1(z3, ProblemParams(3, 1.0), 1.0)
    with pytest.raises(DomainError):
        g_imp_closed_odd_beta1(DiffVector((0.1, 0.2, 0.3), 1.0, 1.0), ProblemParams(4, 1.0), 1.0)


def test_regularized_integrand_is_derivative_of_bracket():
    # q_nu is d/dy of the bracket; compare against a central difference
    z = DiffVector((0.5, -0.3), 0.8, 0.7)
    p = ProblemParams(3, 0.7)
    s = 1.3 + 0.4j
    from impedance_green.greens import _bracket_and_derivative

    for y in (0.1, 1.0, 6.0):
        h = 1e-5
        fd = (_bracket_and_derivative(z, p, s, y + h)[0] - _bracket_and_derivative(z, p, s, y - h)[0]) / (2 * h)
        assert abs(q_nu(z, p, s, y) - fd) <= 1e-8 * abs(fd)


def test_boundary_source_identity_beta1_d3():
    # for d = 3 the source term is 2 (s/2pi)^(3/2) K_{1/2}(s r)/r^(1/2) = s e^{-sr}/(2 pi r)
    p = ProblemParams(3, 1.0)
    s, r = 1.7 - 0.2j, 0.9
    assert rel(g_imp_boundary_source(p, s, r), s * np.exp(-s * r) / (2 * math.pi * r)) <= 1e-14


def test_no_overflow_for_large_frequency():
    p = ProblemParams(2, 0.5)
    ev = green([0.0, 3.0], [0.5, 2.0], p, 150.0 + 20j)
    assert np.isfinite(ev.value) and ev.converged
    assert abs(ev.value) < 1e-50


def test_psi_regularized_matches_psi():
    z = DiffVector((0.2, 0.9, -0.4), 0.6, 1.5)
    p = ProblemParams(4, 1.5)
    a = psi(z, p, 0.8 + 0.6j)
    b = psi_regularized(z, p, 0.8 + 0.6j)
    assert rel(a.value, b.value) <= 1e-11


# ---------------------------------------------------------------- assembled G


@pytest.mark.parametrize("d,beta,s,x,y", [
    (2, 0.5, 1 + 0.5j, (0.3, 0.6), (-0.1, 0.5)),
    (3, 2.0, 1.0, (0.3, 0.1, 0.2), (0.0, 0.3, 0.5)),
    (5, 1.0, 0.8 - 0.4j, (0.1, 0.2, 0.3, 0.4, 0.5), (0.0, 0.0, 0.1, 0.0, 0.3)),
])
def test_green_against_oracle(d, beta, s, x, y):
    ev = green(x, y, ProblemParams(d, beta), s)
    assert rel(ev.value, oracles.green(d, beta, s, x, y)) <= 1e-12


def test_default_paths():
    assert default_path(ProblemParams(1, 2.0), 1.0) is Path.CLOSED_FORM_D1
    assert default_path(ProblemParams(3, 1.0), 1j) is Path.CLOSED_FORM_D3_BETA1
    assert default_path(ProblemParams(7, 1.0), 1.0) is Path.CLOSED_FORM_ODD_BETA1
    assert default_path(ProblemParams(3, 0.5), 1.0) is Path.QUADRATURE_Y_FORM
    assert default_path(ProblemParams(4, 1.0), 1.0) is Path.QUADRATURE_Y_FORM
    assert default_path(ProblemParams(2, 1.0), 2j) is Path.REGULARIZED


def test_forced_paths_agree():
    p = ProblemParams(3, 1.0)
    x, y, s = (0.3, 0.2, 1.0), (0.0, 0.0, 0.4), 1.1 + 0.3j
    vals = {path: green(x, y, p, s, path=path).value for path in
            ("closed_form_d3_beta1", "quadrature_y_form", "quadrature_t_form", "regularized")}
    base = vals["closed_form_d3_beta1"]
    for v in vals.values():
        assert rel(v, base) <= 1e-11


def test_limit_absorption_path():
    p = ProblemParams(2, 1.5)
    x, y = (0.4, 1.0), (0.0, 0.6)
    direct = green(x, y, p, 1j)
    extrap = green(x, y, p, 1j, path=Path.LIMIT_ABSORPTION_EXTRAPOLATED)
    assert extrap.path is Path.LIMIT_ABSORPTION_EXTRAPOLATED
    assert rel(extrap.value, direct.value) <= 1e-5


def test_singular_point_refused():
    with pytest.raises(SingularPointError, match="coincident"):
        green((0.0, 0.0, 1.0), (0.0, 0.0, 1.0), ProblemParams(3, 1.0), 1.0)


@pytest.mark.parametrize("bad", [
    dict(x=(0.0, -1.0)), dict(x=(0.0, 0.0)), dict(x=(0.0, 1.0, 1.0)), dict(s=-1.0), dict(s=0.0),
])
def test_domain_errors(bad):
    kw = dict(x=(0.0, 1.0), y=(0.5, 0.5), s=1.0)
    kw.update(bad)
    with pytest.raises(DomainError):
        green(kw["x"], kw["y"], ProblemParams(2, 1.0), kw["s"])


def test_boundary_target_allowed_on_request():
    p = ProblemParams(2, 0.5)
    v = green((0.1, 0.0), (0.0, 0.5), p, 1.0, allow_boundary=True)
    assert np.isfinite(v.value)


def test_frequency_regime():
    assert Frequency(1 + 1j).regime is Regime.STRICTLY_DISSIPATIVE
    assert Frequency(-0.0 + 2j).regime is Regime.LIMITING_ABSORPTION
    with pytest.raises(DomainError):
        Frequency(complex(math.nan, 1))


@settings(max_examples=30, deadline=None)
@given(
    x=st.lists(st.floats(-1, 1), min_size=3, max_size=3),
    y=st.lists(st.floats(-1, 1), min_size=3, max_size=3),
    xd=st.floats(0.1, 2), yd=st.floats(0.1, 2),
    s=draw_s, beta=st.sampled_from([0.5, 1.0, 3.0]), d=st.integers(2, 4),
)
def test_reciprocity(x, y, xd, yd, s, beta, d):
    xa = list(x[: d - 1]) + [xd]
    ya = list(y[: d - 1]) + [yd]
    if np.linalg.norm(np.subtract(xa, ya)) < 1e-3:
        return
    p = ProblemParams(d, beta)
    a = green(xa, ya, p, s).value
    b = green(ya, xa, p, s).value
    assert rel(a, b) <= 1e-12


# ---------------------------------------------------------------- d = 1


def test_green_1d_values():
    assert green_1d(2.0, 1.0, 1.0, 1.0) == pytest.approx(0.1839397206, rel=1e-10)
    assert green_1d(1.0, 1.0, 3.0, 1.0) == pytest.approx(0.5 * (1 - 0.5 * math.exp(-2)), rel=1e-15)
    # beta = 1: no reflected wave
    assert green_1d(0.3, 2.0, 1.0, 2 + 1j) == pytest.approx(np.exp(-(2 + 1j) * 1.7) / (2 * (2 + 1j)), rel=1e-15)
    ev = green((1.0,), (1.0,), ProblemParams(1, 2.0), 1.0)
    assert ev.path is Path.CLOSED_FORM_D1


def test_limit_absorption_extrapolation_is_exact_for_quadratics():
    eps = [1e-2, 1e-3, 1e-4]
    vals = [3 + 2j + 5 * e - 7j * e * e for e in eps]
    assert abs(richardson_zero(eps, vals) - (3 + 2j)) <= 1e-12


def test_closed_form_d5_reference_value():
    z = DiffVector((0.0, 0.0, 0.0, 0.0), 1.0, 1.0)
    v = g_imp_closed_odd_beta1(z, ProblemParams(5, 1.0), 1.0).value
    assert v == pytest.approx(-math.exp(-1) / (8 * math.pi ** 2), rel=1e-14)


def test_closed_form_d7_is_operator_applied_to_psi2():
    # d = 7: G_imp = s Psi_2 - dPsi_2/dz_d, derivative by central differences
    s = 0.9 + 0.4j
    zp = (0.3, -0.2, 0.1, 0.0, 0.5, 0.2)

    def psi2(zd):
        r = math.sqrt(sum(v * v for v in zp) + zd * zd)
        return -s / (2 * math.pi) ** 3 * np.exp(-s * r) / ((r + zd) ** 2 * r)

    zd = 0.8
    z = DiffVector(zp, zd, 1.0)
    cf = g_imp_closed_odd_beta1(z, ProblemParams(7, 1.0), s).value
    hs = np.array([1e-2, 5e-3, 2.5e-3])
    errs = [abs(s * psi2(zd) - (psi2(zd + h) - psi2(zd - h)) / (2 * h) - cf) for h in hs]
    assert np.polyfit(np.log(hs), np.log(errs), 1)[0] == pytest.approx(2.0, abs=0.2)


def test_psi_reference_and_regularized_consistency():
    z = DiffVector((0.0, 0.0), 1.0, 1.0)
    p = ProblemParams(3, 1.0)
    a = psi(z, p, 1.0)
    b = psi_regularized(z, p, 1.0)
    assert a.value.real == pytest.approx(0.4528, abs=1e-4)
    assert rel(b.value, a.value) <= 1e-9
    big = psi(z, p, 40.0)
    assert np.isfinite(big.value) and abs(big.value) > 0


def test_psi_d5_beta2_matches_t_form():
    z = DiffVector((0.0, 0.0, 0.0, 0.0), 1.0, 2.0)
    p = ProblemParams(5, 2.0)
    a, b = g_imp(z, p, 1.0), g_imp_t_form(z, p, 1.0)
    assert abs(a.value - b.value) <= a.error_estimate + b.error_estimate + 1e-14 * abs(a.value)


def test_q_nu_elementary_line():
    # d = 3, beta = 1, omega = 0: the bracket is sqrt(pi/2) / (2 z_d + y)
    zd, s = 0.7, 1.4 + 0.3j
    z = DiffVector((0.0, 0.0), zd, 1.0)
    y = np.array([0.0, 0.5, 3.0, 40.0])
    np.testing.assert_allclose(q_nu(z, ProblemParams(3, 1.0), s, y), -math.sqrt(math.pi / 2) / (2 * zd + y) ** 2,
                               rtol=1e-14)
    far = q_nu(DiffVector((0.3, 0.1), 0.5, 0.5), ProblemParams(3, 0.5), s, 1e6)
    assert abs(far) < 1e-9


def test_regularized_boundary_term_d4():
    # nu = 1/2, beta = 1: boundary term e^{sr} K_1(sr) / (s (z_d + r)); the rest is (1/s) int e^{-sy} q dy
    from impedance_green import QuadratureConfig, integrate_semi_infinite
    from impedance_green.special import bessel_k_scaled

    z = DiffVector((0.4, 0.0, 0.3), 0.6, 1.0)
    p = ProblemParams(4, 1.0)
    s = 1.2 + 0.5j
    boundary = bessel_k_scaled(2, s * z.r) / (s * (z.z_d + z.r))
    tail = integrate_semi_infinite(lambda y: np.exp(-s * y) * q_nu(z, p, s, y),
                                   QuadratureConfig(decay_rate=s.real, frequency=abs(s.imag)))
    assert rel(psi_regularized(z, p, s).value, boundary + tail.value / s) <= 1e-13
    assert rel(boundary + tail.value / s, psi(z, p, s).value) <= 1e-11


def test_g_imp_linear_in_small_beta():
    zp, zd, s = (0.3,), 0.8, 1.0 + 0.2j
    vals = [g_imp(DiffVector(zp, zd, b), ProblemParams(2, b), s).value for b in (1e-4, 2e-4, 4e-4)]
    assert rel(vals[1], 2 * vals[0]) <= 1e-3 and rel(vals[2], 4 * vals[0]) <= 2e-3

