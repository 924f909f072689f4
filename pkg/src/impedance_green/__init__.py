"""Helmholtz Green's function of the upper half-space with an impedance boundary condition."""
from .errors import DomainError, IntegrandError, SingularPointError, StencilError
from .geometry import DiffVector, HalfSpacePoint, ProblemParams, reflect
from .greens import (
    Evaluation,
    Frequency,
    Path,
    Regime,
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
from .quadrature import QuadratureConfig, QuadratureResult, integrate_semi_infinite
from .special import (
    BesselOrder,
    backend_name,
    bessel_k,
    bessel_k_scaled,
    bessel_k_scaled_diff,
    exp_integral_e1,
    exp_integral_e1_scaled,
    tricomi_u11,
)

__version__ = "0.1.0"

__all__ = [
    "BesselOrder",
    "DiffVector",
    "DomainError",
    "Evaluation",
    "Frequency",
    "HalfSpacePoint",
    "IntegrandError",
    "Path",
    "ProblemParams",
    "QuadratureConfig",
    "QuadratureResult",
    "Regime",
    "SingularPointError",
    "StencilError",
    "backend_name",
    "bessel_k",
    "bessel_k_scaled",
    "bessel_k_scaled_diff",
    "exp_integral_e1",
    "exp_integral_e1_scaled",
    "g_imp",
    "g_imp_closed_d3_beta1",
    "g_imp_closed_odd_beta1",
    "g_imp_t_form",
    "g_nu",
    "green",
    "green_1d",
    "integrate_semi_infinite",
    "psi",
    "psi_regularized",
    "reflect",
    "tricomi_u11",
]
