"""Stochastic Galerkin solver for the mRNA/microRNA kinetic model."""

from ._gpcsg import (
    ConfigError,
    IntegrationError,
    ModelParams,
    basis_values,
    cv_pair,
    integrate_galerkin,
    quadrature,
    run_check,
    run_converge,
    run_cv_sweep,
    run_decay,
    run_tensors,
    steady_state,
    triple_tensor,
    upsilon,
)

__all__ = [
    "ConfigError",
    "IntegrationError",
    "ModelParams",
    "basis_values",
    "cv_pair",
    "integrate_galerkin",
    "quadrature",
    "run_check",
    "run_converge",
    "run_cv_sweep",
    "run_decay",
    "run_tensors",
    "steady_state",
    "triple_tensor",
    "upsilon",
]
