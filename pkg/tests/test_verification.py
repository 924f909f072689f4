import json
import math

import numpy as np
import pytest

from impedance_green import DiffVector, DomainError, ProblemParams, StencilError, g_nu
from impedance_green import verification as ver

H = (1e-2, 5e-3, 2.5e-3)
H_BC = ver.H_BC


def test_helmholtz_closed_form_d3():
    rep = ver.helmholtz_residual((0.3, 0.2, 1.0), (0.0, 0.0, 1.0), ProblemParams(3, 1.0), 1.0, H,
                                 path="closed_form_d3_beta1")
    assert rep.passed
    assert rep.observed_order == pytest.approx(2.0, abs=0.05)
    assert rep.residuals[-1] < rep.residuals[0]


def test_helmholtz_full_space_kernel_alone():
    p = ProblemParams(3, 1.0)
    y = np.array([0.0, 0.0, 1.0])
    rep = ver.helmholtz_residual((0.3, 0.2, 1.0), y, p, 1.0, H,
                                 evaluator=lambda pt: g_nu(p, 1.0, np.linalg.norm(pt - y)))
    assert rep.passed and rep.observed_order == pytest.approx(2.0, abs=0.05)


def test_helmholtz_detects_wrong_frequency():
    p = ProblemParams(3, 1.0)
    y = np.array([0.0, 0.0, 1.0])
    rep = ver.helmholtz_residual((0.3, 0.2, 1.0), y, p, 1.0, H,
                                 evaluator=lambda pt: g_nu(p, 1.1, np.linalg.norm(pt - y)))
    assert not rep.passed


def test_helmholtz_stencil_out_of_domain():
    with pytest.raises(StencilError):
        ver.helmholtz_residual((0.3, 0.2, 0.02), (0.0, 0.0, 1.0), ProblemParams(3, 1.0), 1.0, H)
    with pytest.raises(StencilError):
        ver.helmholtz_residual((0.0, 0.0, 1.03), (0.0, 0.0, 1.0), ProblemParams(3, 1.0), 1.0, H)


def test_h_list_validation():
    with pytest.raises(DomainError):
        ver.helmholtz_residual((0.3, 1.0), (0.0, 0.5), ProblemParams(2, 1.0), 1.0, (1e-3, 1e-2, 1e-4))
    with pytest.raises(DomainError):
        ver.helmholtz_residual((0.3, 1.0), (0.0, 0.5), ProblemParams(2, 1.0), 1.0, (1e-2, 1e-3))


def test_bc_residual_d3_beta1():
    rep = ver.impedance_bc_residual((0.3, 0.2, 0.0), (0.0, 0.0, 1.0), ProblemParams(3, 1.0), 1.0, H_BC)
    assert rep.passed and rep.observed_order >= 3


def test_bc_residual_d2_complex():
    rep = ver.impedance_bc_residual((0.3, 0.0), (0.0, 1.0), ProblemParams(2, 0.5), 2 + 1j, H_BC)
    assert rep.passed


def test_bc_negative_controls():
    p = ProblemParams(2, 0.5)
    wrong_beta = ver.impedance_bc_residual((0.3, 0.0), (0.0, 1.0), p, 2 + 1j, H_BC, beta_test=1.0)
    wrong_sign = ver.impedance_bc_residual((0.3, 0.0), (0.0, 1.0), p, 2 + 1j, H_BC, normal_sign=1.0)
    assert not wrong_beta.passed and not wrong_sign.passed
    assert min(wrong_beta.residuals) > 0.1


def test_bc_needs_boundary_point():
    with pytest.raises(StencilError):
        ver.impedance_bc_residual((0.3, 0.1), (0.0, 1.0), ProblemParams(2, 0.5), 1.0, H_BC)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_derivative_identity_random_draws(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 6))
    beta = float(rng.choice([0.5, 1.0, 2.0]))
    z = DiffVector.from_vector(np.r_[rng.normal(0, 0.7, d - 1), rng.uniform(0.5, 2.0)], beta)
    s = complex(rng.uniform(0.3, 2.0), rng.uniform(-2.0, 2.0))
    rep = ver.derivative_identity_check(z, ProblemParams(d, beta), s, H)
    assert rep.passed, rep.to_dict()
    assert rep.check_name == ("ode_beta1" if beta == 1.0 else "derivative_identity")


@pytest.mark.parametrize("d", [2, 4])
@pytest.mark.parametrize("beta", [0.5, 2.0])
@pytest.mark.parametrize("s", [1.0, 1 + 2j])
def test_cross_representation_grid(d, beta, s):
    z = DiffVector.from_vector(np.r_[np.full(d - 1, 0.4), 0.9], beta)
    rep = ver.cross_representation_check(z, ProblemParams(d, beta), s)
    assert rep.passed, rep.details


def test_cross_representation_needs_dissipation():
    with pytest.raises(DomainError):
        ver.cross_representation_check(DiffVector((0.1,), 1.0, 1.0), ProblemParams(2, 1.0), 1j)


def test_limit_absorption_d3():
    rep = ver.limit_absorption_probe((0.3, 0.2, 1.0), (0.0, 0.0, 0.5), ProblemParams(3, 1.0), 1.0,
                                     rel_tol=1e-6)
    assert rep.passed, rep.details


def test_limit_absorption_d2():
    rep = ver.limit_absorption_probe((0.3, 1.0), (0.0, 0.5), ProblemParams(2, 0.5), 2.0)
    assert rep.passed, rep.details


@pytest.mark.parametrize("eps", [(1e-3, 1e-2, 1e-4), (1e-2, 1e-2, 1e-3), (1e-2, -1e-3), (1e-2,)])
def test_limit_absorption_eps_contract(eps):
    with pytest.raises(DomainError):
        ver.limit_absorption_probe((0.3, 1.0), (0.0, 0.5), ProblemParams(2, 0.5), 2.0, eps)


def test_observed_order():
    h = np.array([1e-2, 5e-3, 2.5e-3])
    assert ver.observed_order(h, 3 * h ** 2) == pytest.approx(2.0, abs=1e-12)
    assert ver.observed_order(h, [1e-3, 1e-3, 1e-3]) == pytest.approx(0.0, abs=1e-12)
    assert math.isnan(ver.observed_order([1e-2], [1.0]))


def test_report_invariants_and_schema():
    rep = ver.ResidualReport("x", [1e-2, 5e-3, 2.5e-3], [4.0, 1.0, 0.25], 2.0, True, 0.3)
    assert set(rep.to_dict()) == {"check", "params", "h", "residual", "order", "pass"}
    with pytest.raises(DomainError):
        ver.ResidualReport("x", [1e-2, 1e-2, 2.5e-3], [4.0, 1.0, 0.25], 2.0, True, 0.3)
    with pytest.raises(DomainError):
        ver.ResidualReport("x", [1e-2, 5e-3], [4.0, 1.0, 0.25], 2.0, True, 0.3)


def test_green_1d_and_golden_checks():
    assert ver.green_1d_check().passed
    assert ver.golden_check().passed


def test_golden_check_detects_corruption():
    from impedance_green.golden import load_golden

    recs = load_golden()[:20]
    recs[3] = dict(recs[3], value=[recs[3]["value"][0] * (1 + 1e-9), recs[3]["value"][1]])
    assert not ver.golden_check(recs).passed


def test_decay_along_ray():
    rep = ver.decay_check((0.0, 0.0, 0.5), ProblemParams(3, 2.0), 1.0, (0.6, 0.0, 0.8))
    assert rep.passed
    with pytest.raises(DomainError):
        ver.decay_check((0.0, 0.5), ProblemParams(2, 2.0), 1.0, (1.0, 0.0))


def test_quick_suite_is_deterministic_and_passes(tmp_path):
    a, failed, _ = ver.run_suite("quick")
    b, _, _ = ver.run_suite("quick")
    assert not failed
    assert json.dumps(a, default=ver._json_default) == json.dumps(b, default=ver._json_default)
    out = tmp_path / "r.json"
    ver.write_report(a, out)
    loaded = json.loads(out.read_text())
    assert len(loaded) == len(a) and all("check" in r and "pass" in r for r in loaded)
    names = {r["check"] for r in loaded}
    assert {"negative_control_bc", "negative_control_bc_sign", "limit_absorption"} <= names


def test_unknown_suite():
    with pytest.raises(DomainError):
        ver.run_suite("medium")
