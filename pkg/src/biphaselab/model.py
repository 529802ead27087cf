"""Problem parameters, derived constants, and the change of unknowns.

The two pressure phases (p_t, p_c) are coupled through the exchange terms
alpha^2/eps^2 and beta^2/eps^2.  The half-sum/half-difference unknowns

    q = (p_t - p_c) / 2,      p = (p_t + p_c) / 2

decouple the system: q satisfies a reaction-diffusion equation on its own
and feeds p as a source.  This module holds the parameter set, the derived
constants (decay rate gamma, coupling ratio kappa, transformed boundary
data) and the pointwise map between the two pairs of unknowns.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .grid import RadialField, require_same_grid


@dataclass(frozen=True)
class Parameters:
    """Physical and asymptotic constants of the biphase problem.

    alpha, beta : coupling constants (both > 0)
    eps         : asymptotic parameter, 0 < eps (the regime of interest is
                  eps -> 0; values above 1 are allowed with a warning)
    pi_t, pi_c  : Dirichlet boundary values of the two phases at r = 1
    e33         : scalar permeability (> 0)
    """

    alpha: float
    beta: float
    eps: float
    pi_t: float
    pi_c: float
    e33: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "beta", "eps", "e33"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0.0:
                raise ValueError(f"{name} must be a positive finite number, "
                                 f"got {name}={value!r}")
        for name in ("pi_t", "pi_c"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.eps > 1.0:
            warnings.warn(
                f"eps={self.eps} is outside the asymptotic regime (eps <= 1); "
                "the solver remains well defined but the expansion results "
                "lose meaning", UserWarning, stacklevel=3)


def make_parameters(alpha, beta, eps, pi_t, pi_c, e33=1.0) -> Parameters:
    """Validate and build a :class:`Parameters` set."""
    return Parameters(alpha=float(alpha), beta=float(beta), eps=float(eps),
                      pi_t=float(pi_t), pi_c=float(pi_c), e33=float(e33))


@dataclass(frozen=True)
class DerivedConstants:
    """Constants derived from a parameter set.

    gamma : decay rate, gamma^2 = (alpha^2 + beta^2) / e33
    kappa : coupling ratio (alpha^2 - beta^2) / (alpha^2 + beta^2), |kappa| < 1
    q_bc  : boundary value of q, (pi_t - pi_c) / 2
    p_bc  : boundary value of p, (pi_t + pi_c) / 2
    """

    gamma: float
    kappa: float
    q_bc: float
    p_bc: float


def derive_constants(params: Parameters) -> DerivedConstants:
    """Compute gamma, kappa and the transformed boundary data."""
    a2 = params.alpha * params.alpha
    b2 = params.beta * params.beta
    return DerivedConstants(
        gamma=math.sqrt((a2 + b2) / params.e33),
        kappa=(a2 - b2) / (a2 + b2),
        q_bc=(params.pi_t - params.pi_c) / 2.0,
        p_bc=(params.pi_t + params.pi_c) / 2.0,
    )


def to_phases(q_field: RadialField, p_field: RadialField):
    """Map (q, p) samples to the phase pressures (p_t, p_c) = (p + q, p - q)."""
    grid = require_same_grid(q_field, p_field)
    pt = RadialField(grid, p_field.values + q_field.values)
    pc = RadialField(grid, p_field.values - q_field.values)
    return pt, pc


def from_phases(pt_field: RadialField, pc_field: RadialField):
    """Inverse of :func:`to_phases`: (p_t, p_c) -> (q, p)."""
    grid = require_same_grid(pt_field, pc_field)
    q = RadialField(grid, (pt_field.values - pc_field.values) / 2.0)
    p = RadialField(grid, (pt_field.values + pc_field.values) / 2.0)
    return q, p
