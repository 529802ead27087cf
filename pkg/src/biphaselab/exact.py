"""Closed-form reference solutions on the unit sphere with constant data.

For constant Dirichlet data the radially symmetric problem

    q'' + (2/r) q' - (gamma/eps)^2 q = 0,   q(1) = q_bc,  q'(0) = 0

has the explicit solution

    q(r) = q_bc * sinh(gamma r / eps) / (r * sinh(gamma / eps)).

The denominator sinh(gamma/eps) is the unique normalization satisfying the
boundary condition q(1) = q_bc; a sinh(gamma*eps) denominator (which
occasionally appears in print) does not, so it is not implemented here.

Since kappa * q has exactly the Laplacian source of p, the combination
p - kappa*q is harmonic, radially symmetric and regular at the origin,
hence constant; this gives the closed form

    p(r) = p_bc - kappa*q_bc + kappa*q(r),

whose off-boundary limit p_bc - kappa*q_bc is the monophase value.

Everything is evaluated through factored exponentials, exp(-gamma(1-r)/eps)
times expm1 terms, so that nothing overflows even for gamma/eps ~ 1e4 where
sinh itself would.  At r = 0 the removable singularity is filled with its
limit q_bc * (gamma/eps) / sinh(gamma/eps), written in the same stable form.
"""

from __future__ import annotations

import numpy as np

from .model import Parameters, derive_constants


def _check_radius(r: np.ndarray):
    if np.any(r < 0.0) or np.any(r > 1.0):
        raise ValueError("radius must lie in [0, 1]")


def _stable_ratio(r: np.ndarray, lam: float) -> np.ndarray:
    """sinh(lam*r) / (r*sinh(lam)), overflow-free, with the r=0 limit filled in."""
    den = -np.expm1(-2.0 * lam)
    out = np.empty_like(r)
    interior = r > 0.0
    ri = r[interior]
    out[interior] = np.exp(-lam * (1.0 - ri)) * (-np.expm1(-2.0 * lam * ri)) / (ri * den)
    out[~interior] = np.exp(-lam) * (2.0 * lam) / den
    return out


def _stable_ratio_derivative(r: np.ndarray, lam: float) -> np.ndarray:
    """d/dr of :func:`_stable_ratio`; the derivative vanishes at r = 0."""
    den = -np.expm1(-2.0 * lam)
    out = np.zeros_like(r)
    interior = r > 0.0
    ri = r[interior]
    e = np.exp(-lam * (1.0 - ri))
    # bracket = lam*r*(1 + exp(-2 lam r)) - (1 - exp(-2 lam r))
    bracket = lam * ri * (1.0 + np.exp(-2.0 * lam * ri)) + np.expm1(-2.0 * lam * ri)
    out[interior] = e * bracket / (ri * ri * den)
    return out


def _as_array(r):
    arr = np.asarray(r, dtype=float)
    return arr, arr.ndim == 0


def exact_q(params: Parameters, r):
    """Exact q at radius ``r`` (scalar or array), 0 <= r <= 1."""
    arr, scalar = _as_array(r)
    _check_radius(arr)
    dc = derive_constants(params)
    vals = dc.q_bc * _stable_ratio(np.atleast_1d(arr), dc.gamma / params.eps)
    return float(vals[0]) if scalar else vals.reshape(arr.shape)


def exact_q_derivative(params: Parameters, r):
    """Exact dq/dr at radius ``r``; zero at r = 0 (symmetry)."""
    arr, scalar = _as_array(r)
    _check_radius(arr)
    dc = derive_constants(params)
    vals = dc.q_bc * _stable_ratio_derivative(np.atleast_1d(arr), dc.gamma / params.eps)
    return float(vals[0]) if scalar else vals.reshape(arr.shape)


def monophase_value(params: Parameters) -> float:
    """The constant value p_bc - kappa*q_bc that p approaches away from r = 1."""
    dc = derive_constants(params)
    return dc.p_bc - dc.kappa * dc.q_bc


def exact_p(params: Parameters, r):
    """Exact p at radius ``r``: monophase constant plus kappa * exact_q."""
    arr, scalar = _as_array(r)
    _check_radius(arr)
    dc = derive_constants(params)
    mono = dc.p_bc - dc.kappa * dc.q_bc
    vals = mono + dc.kappa * dc.q_bc * _stable_ratio(np.atleast_1d(arr), dc.gamma / params.eps)
    return float(vals[0]) if scalar else vals.reshape(arr.shape)


def exact_p_derivative(params: Parameters, r):
    """Exact dp/dr at radius ``r`` (kappa times dq/dr)."""
    dc = derive_constants(params)
    return dc.kappa * exact_q_derivative(params, r)
