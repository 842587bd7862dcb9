"""Opinion dynamics on signed networks and the wisdom of the crowd."""

from ._core import (
    SignedCrowdError,
    certify,
    ct_equilibrium,
    equilibrium,
    fj_propagator,
    gauge_transform,
    monte_carlo,
    optimal_social_power,
    signed_laplacian,
    simulate,
    wisdom_report,
)

__all__ = [
    "SignedCrowdError",
    "certify",
    "ct_equilibrium",
    "equilibrium",
    "fj_propagator",
    "gauge_transform",
    "monte_carlo",
    "optimal_social_power",
    "signed_laplacian",
    "simulate",
    "wisdom_report",
]
