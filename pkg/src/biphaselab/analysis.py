"""Error norms, convergence-slope fitting, and the decay/a-priori studies.

Norms are composite-trapezoid integrals over the grid; the default measure
is the plain 1D one on [0, 1], with an r^2-weighted spherical measure
available by flag.  For boundary-layer errors both give the same fitted
slopes to within 0.1 (the weight is ~1 near r = 1 where the error lives),
so the simpler measure is the default.  H1 norms of sampled fields
differentiate the samples with second-order central differences (one-sided
second-order at the endpoints); closed-form inputs can supply analytic
derivatives instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .exact import exact_p, exact_p_derivative, exact_q, exact_q_derivative
from .grid import Grid, GridMismatchError, RadialField, make_grid
from .model import Parameters, derive_constants
from .profiles import approximant, approximant_derivative, build_expansion
from .solver import (LayerResolutionError, layer_resolved, min_intervals,
                     solve_p_fd, solve_q_fd)


@dataclass(frozen=True)
class ErrorNorms:
    """L2, H1 and max norms of a difference of two fields."""

    l2: float
    h1: float
    linf: float
    weighted: bool


def _sample(obj, grid: Grid) -> np.ndarray:
    if isinstance(obj, RadialField):
        if obj.grid != grid:
            raise GridMismatchError("field sampled on a different grid")
        return obj.values
    if callable(obj):
        return np.asarray(obj(grid.nodes), dtype=float)
    raise TypeError("expected a RadialField or a callable of r")


def _central_derivative(values: np.ndarray, dr: float) -> np.ndarray:
    dv = np.empty_like(values)
    dv[1:-1] = (values[2:] - values[:-2]) / (2.0 * dr)
    dv[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * dr)
    dv[-1] = (3.0 * values[-1] - 4.0 * values[-2] + values[-3]) / (2.0 * dr)
    return dv


def error_norms(a, b, grid: Grid, weighted: bool = False,
                a_deriv=None, b_deriv=None) -> ErrorNorms:
    """Norms of a - b on the grid.

    ``a`` and ``b`` are RadialFields or callables of r.  When both
    ``a_deriv`` and ``b_deriv`` are given (callables of r), the H1 seminorm
    uses them; otherwise the sampled difference is differentiated by
    central differences.  ``weighted`` switches the integrals to the
    r^2-weighted spherical measure (the max norm is unweighted either way).
    """
    av = _sample(a, grid)
    bv = _sample(b, grid)
    diff = av - bv
    r = grid.nodes
    w = r * r if weighted else np.ones_like(r)

    l2sq = np.trapezoid(diff * diff * w, r)
    if a_deriv is not None and b_deriv is not None:
        ddiff = np.asarray(a_deriv(r), dtype=float) - np.asarray(b_deriv(r), dtype=float)
    else:
        ddiff = _central_derivative(diff, grid.dr)
    h1sq = l2sq + np.trapezoid(ddiff * ddiff * w, r)
    return ErrorNorms(l2=math.sqrt(l2sq), h1=math.sqrt(h1sq),
                      linf=float(np.max(np.abs(diff))), weighted=weighted)


def _fit_slope(x: np.ndarray, y: np.ndarray):
    """Least-squares slope of y against x plus the RMS fit residual."""
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return float(slope), float(np.sqrt(np.mean(resid * resid)))


def _loglog_slope(eps_values, norms):
    norms = np.asarray(norms)
    if np.any(norms == 0.0):
        return float("nan"), float("nan")  # undefined: exact agreement
    return _fit_slope(np.log(np.asarray(eps_values)), np.log(norms))


@dataclass(frozen=True)
class ConvergenceReport:
    """Per-eps error norms of the approximants plus fitted log-log slopes.

    ``slopes`` and ``residuals`` are keyed l2_q, h1_q, l2_p, h1_p;
    ``fit_window`` is the (start, stop) slice of eps_values used in the fit.
    """

    eps_values: tuple
    order: int
    q_norms: tuple
    p_norms: tuple
    slopes: dict
    residuals: dict
    fit_window: tuple
    weighted: bool


def _validate_sweep(eps_values, minimum: int = 4):
    eps_values = tuple(float(e) for e in eps_values)
    if len(eps_values) < minimum:
        raise ValueError(f"eps sweep needs at least {minimum} points, "
                         f"got {len(eps_values)}")
    if any(e2 >= e1 for e1, e2 in zip(eps_values, eps_values[1:])):
        raise ValueError("eps sweep must be strictly decreasing")
    if eps_values[-1] <= 0.0:
        raise ValueError("eps values must be positive")
    return eps_values


def convergence_study(params: Parameters, eps_values, order: int,
                      grid_n: int | None = None, reference: str = "exact",
                      weighted: bool = False, fit_window=None,
                      cutoff: float | None = None) -> ConvergenceReport:
    """Errors of the order-k approximants against the reference over a sweep.

    ``eps_values`` must be strictly decreasing with at least 4 points (a
    geometric sweep of 6+ is recommended for trustworthy slopes).  The
    single quadrature/solver grid must resolve the layer at the smallest
    eps; by default it is sized by that rule.  ``reference`` selects the
    closed forms ("exact", default, with analytic H1 derivatives) or the
    finite-difference solutions ("fd").
    """
    eps_values = _validate_sweep(eps_values)
    if reference not in ("exact", "fd"):
        raise ValueError("reference must be 'exact' or 'fd'")
    eps_min = eps_values[-1]
    if grid_n is None:
        grid_n = min_intervals(params, eps=eps_min)
    grid = make_grid(grid_n)
    if not layer_resolved(grid, params, eps=eps_min):
        raise LayerResolutionError(
            f"grid with dr={grid.dr:.3e} does not resolve the layer at "
            f"eps={eps_min} (need N >= {min_intervals(params, eps=eps_min)})")

    expansion = build_expansion(params, order)
    q_norms = []
    p_norms = []
    for eps in eps_values:
        pe = replace(params, eps=eps)
        if reference == "exact":
            ref_q = lambda r, pe=pe: exact_q(pe, r)
            ref_dq = lambda r, pe=pe: exact_q_derivative(pe, r)
            ref_p = lambda r, pe=pe: exact_p(pe, r)
            ref_dp = lambda r, pe=pe: exact_p_derivative(pe, r)
        else:
            qf = solve_q_fd(pe, grid)
            ref_q, ref_dq = qf, None
            ref_p, ref_dp = solve_p_fd(pe, grid, qf), None
        app_q = lambda r, pe=pe: approximant(expansion, pe, r, "q", cutoff)
        app_dq = lambda r, pe=pe: approximant_derivative(expansion, pe, r, "q", cutoff)
        app_p = lambda r, pe=pe: approximant(expansion, pe, r, "p", cutoff)
        app_dp = lambda r, pe=pe: approximant_derivative(expansion, pe, r, "p", cutoff)
        if ref_dq is None:
            q_norms.append(error_norms(ref_q, app_q, grid, weighted))
            p_norms.append(error_norms(ref_p, app_p, grid, weighted))
        else:
            q_norms.append(error_norms(ref_q, app_q, grid, weighted, ref_dq, app_dq))
            p_norms.append(error_norms(ref_p, app_p, grid, weighted, ref_dp, app_dp))

    window = (0, len(eps_values)) if fit_window is None else tuple(fit_window)
    lo, hi = window
    if hi - lo < 4:
        raise ValueError("fit window must keep at least 4 eps points")
    eps_fit = eps_values[lo:hi]

    slopes = {}
    residuals = {}
    for key, norms in (("q", q_norms), ("p", p_norms)):
        for norm_name in ("l2", "h1"):
            vals = [getattr(n, norm_name) for n in norms[lo:hi]]
            s, res = _loglog_slope(eps_fit, vals)
            slopes[f"{norm_name}_{key}"] = s
            residuals[f"{norm_name}_{key}"] = res

    return ConvergenceReport(eps_values=eps_values, order=order,
                             q_norms=tuple(q_norms), p_norms=tuple(p_norms),
                             slopes=slopes, residuals=residuals,
                             fit_window=window, weighted=weighted)


@dataclass(frozen=True)
class DecayReport:
    """Inner-domain norms of q over an eps sweep and the fitted decay slope.

    ``slope`` is the fitted coefficient of log||q||_{L2(0, 1-d)} against
    1/eps; for the closed-form solution it approaches -gamma*d (stored in
    ``reference_slope``).  ``exact_decay`` flags the degenerate case of an
    identically zero q.
    """

    eps_values: tuple
    margin: float
    inner_norms: tuple
    slope: float
    residual: float
    reference_slope: float
    exact_decay: bool


def decay_study(params: Parameters, eps_values, d: float,
                grid_n: int | None = None) -> DecayReport:
    """Fit the exponential decay rate of q away from the boundary.

    Computes ||q||_{L2(0, 1-d)} from the closed form for each eps and fits
    log-norm against 1/eps.  Requires 0 < d < 1 (at d = 0 the inner domain
    touches the boundary and nothing decays).
    """
    if not 0.0 < d < 1.0:
        raise ValueError("inner margin d must lie in (0, 1)")
    eps_values = _validate_sweep(eps_values)
    gamma = derive_constants(params).gamma
    if grid_n is None:
        # resolve the integrand scale eps/gamma at the smallest eps
        grid_n = max(8, math.ceil((1.0 - d) * 10.0 * gamma / eps_values[-1]))
    nodes = np.linspace(0.0, 1.0 - d, grid_n + 1)

    norms = []
    for eps in eps_values:
        pe = replace(params, eps=eps)
        qv = exact_q(pe, nodes)
        norms.append(math.sqrt(np.trapezoid(qv * qv, nodes)))

    if all(n == 0.0 for n in norms):
        return DecayReport(eps_values=eps_values, margin=d,
                           inner_norms=tuple(norms), slope=float("nan"),
                           residual=float("nan"), reference_slope=-gamma * d,
                           exact_decay=True)
    slope, resid = _fit_slope(1.0 / np.asarray(eps_values), np.log(norms))
    return DecayReport(eps_values=eps_values, margin=d, inner_norms=tuple(norms),
                       slope=slope, residual=resid, reference_slope=-gamma * d,
                       exact_decay=False)


@dataclass(frozen=True)
class AprioriReport:
    """Uniform-boundedness check of ||p_t - p_c||_{L2} across an eps sweep."""

    eps_values: tuple
    l2_norms: tuple
    ratios: tuple
    max_ratio: float
    decreasing: bool


def apriori_check(params: Parameters, grid: Grid, halvings: int = 4) -> AprioriReport:
    """Track ||p_t - p_c||_{L2} = ||2q||_{L2} while halving eps.

    With fixed boundary data the norm must stay bounded by a constant times
    |pi_t| + |pi_c| uniformly in eps (in fact it decreases like sqrt(eps));
    the report carries the norms, their ratios to |pi_t| + |pi_c|, and a
    monotonicity flag.
    """
    if halvings < 1:
        raise ValueError("need at least one halving")
    eps_values = tuple(params.eps * 0.5 ** j for j in range(halvings + 1))
    r = grid.nodes
    norms = []
    for eps in eps_values:
        pe = replace(params, eps=eps)
        diff = 2.0 * exact_q(pe, r)
        norms.append(math.sqrt(np.trapezoid(diff * diff, r)))
    denom = abs(params.pi_t) + abs(params.pi_c)
    ratios = tuple(n / denom if denom > 0.0 else 0.0 for n in norms)
    decreasing = all(n2 <= n1 for n1, n2 in zip(norms, norms[1:]))
    return AprioriReport(eps_values=eps_values, l2_norms=tuple(norms),
                         ratios=ratios, max_ratio=max(ratios),
                         decreasing=decreasing)
