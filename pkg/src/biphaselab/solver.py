"""Second-order finite differences for the radial problems on [0, 1].

Discretization.  Writing either equation with the radial Laplacian
f'' + (2/r) f' and multiplying by r gives (r f)'' on the left, which the
centered stencil

    (r_{i+1} f_{i+1} - 2 r_i f_i + r_{i-1} f_{i-1}) / dr^2

approximates to second order without any 1/r factor, so the origin causes
no instability.  Rows are stored scaled by 1/dr: on the uniform grid
r_i = i*dr the stencil coefficients then become the exact small integers
-(i-1), 2i, -(i+1), which keeps the elimination free of the slow rounding
drift a weakly dominant sweep otherwise accumulates over 1e4+ rows.

Boundary closure.  At r = 1 a Dirichlet identity row; at r = 0 the
r-multiplied equation degenerates (the row would read 0 = 0), so row 0
enforces the second-order decentered zero-flux condition

    (-3 f_0 + 4 f_1 - f_2) / (2 dr) = 0.

Its f_2 entry is kept as an explicit "corner" coefficient and eliminated
against row 1 before the sweep, restoring a strictly tridiagonal system.

Coupled route.  The original two-phase system is also discretized directly
as a block-tridiagonal system with 2x2 blocks and solved by block
elimination.  At fine resolution the per-row reaction coefficients
(dr*gamma/eps)^2 are ~1e-6: absorbing them into the O(i) diagonal in double
precision would perturb the operator enough for the discrete Green function
to amplify the error to ~1e-9 on the smooth pressure mode.  The block
system is therefore assembled and swept in extended (long double) working
precision and rounded to double at the end.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .grid import Grid, GridMismatchError, RadialField
from .model import Parameters, derive_constants

#: minimum number of grid intervals per boundary-layer e-folding eps/gamma
LAYER_RESOLUTION_FACTOR = 10.0


class SolverError(RuntimeError):
    """The elimination hit a zero pivot."""

    def __init__(self, row: int):
        super().__init__(f"zero pivot at row {row}")
        self.row = row


class LayerResolutionWarning(UserWarning):
    """The grid does not resolve the boundary layer (dr > eps/(10*gamma))."""


class LayerResolutionError(ValueError):
    """A run configuration requires a resolved layer but does not have one."""


def layer_resolved(grid: Grid, params: Parameters, eps: float | None = None) -> bool:
    """True if dr <= eps / (LAYER_RESOLUTION_FACTOR * gamma)."""
    gamma = derive_constants(params).gamma
    e = params.eps if eps is None else eps
    return grid.dr <= e / (LAYER_RESOLUTION_FACTOR * gamma)


def min_intervals(params: Parameters, eps: float | None = None) -> int:
    """Smallest grid size N satisfying the layer resolution rule."""
    gamma = derive_constants(params).gamma
    e = params.eps if eps is None else eps
    return max(8, math.ceil(LAYER_RESOLUTION_FACTOR * gamma / e))


def _warn_if_unresolved(grid: Grid, params: Parameters):
    if not layer_resolved(grid, params):
        gamma = derive_constants(params).gamma
        warnings.warn(
            f"dr={grid.dr:.3e} exceeds eps/(10*gamma)={params.eps / (10 * gamma):.3e}; "
            f"the boundary layer is under-resolved (need N >= {min_intervals(params)})",
            LayerResolutionWarning, stacklevel=3)


def _reaction_coefficients(params: Parameters, grid: Grid):
    """Per-row reaction coefficients (ma, mb) = dr^2 (alpha^2, beta^2)/(e33 eps^2).

    Shared by the decoupled and coupled assemblies so that the two routes
    discretize with bitwise identical scalars.
    """
    dr2 = grid.dr * grid.dr
    scale = params.e33 * params.eps * params.eps
    ma = dr2 * params.alpha * params.alpha / scale
    mb = dr2 * params.beta * params.beta / scale
    return ma, mb


@dataclass
class TridiagonalSystem:
    """Tridiagonal system, possibly with one extra corner entry in row 0.

    Row i reads sub[i]*x_{i-1} + diag[i]*x_i + sup[i]*x_{i+1} = rhs[i];
    ``corner`` (if not None) is the coefficient of x_2 in row 0.  After
    :func:`eliminate_corner` the system is strictly tridiagonal.
    """

    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    rhs: np.ndarray
    corner: float | None = None

    def __post_init__(self):
        n = self.diag.shape[0]
        for name in ("sub", "sup", "rhs"):
            if getattr(self, name).shape != (n,):
                raise ValueError(f"{name} has inconsistent length")


def eliminate_corner(system: TridiagonalSystem) -> TridiagonalSystem:
    """Fold the row-0 corner entry into row 0 using row 1; idempotent.

    Each correction term is computed as (corner * coefficient) / sup[1],
    division last, so that exactly matching coefficients cancel exactly.
    """
    if system.corner is None:
        return system
    c = system.corner
    if system.sup[1] == 0.0:
        raise SolverError(1)
    sub, diag, sup, rhs = (a.copy() for a in (system.sub, system.diag, system.sup, system.rhs))
    diag[0] -= (c * system.sub[1]) / system.sup[1]
    sup[0] -= (c * system.diag[1]) / system.sup[1]
    rhs[0] -= (c * system.rhs[1]) / system.sup[1]
    return TridiagonalSystem(sub=sub, diag=diag, sup=sup, rhs=rhs, corner=None)


def solve_tridiagonal(system: TridiagonalSystem) -> np.ndarray:
    """Solve by a single Thomas sweep; O(n).

    The caller guarantees the (corner-eliminated) system is irreducibly
    diagonally dominant; a zero pivot raises :class:`SolverError` with the
    failing row index.
    """
    sys2 = eliminate_corner(system)
    n = sys2.diag.shape[0]
    out = np.empty(n, dtype=np.float64)
    fail = _kernels.thomas_solve(
        np.ascontiguousarray(sys2.sub, dtype=np.float64),
        np.ascontiguousarray(sys2.diag, dtype=np.float64),
        np.ascontiguousarray(sys2.sup, dtype=np.float64),
        np.ascontiguousarray(sys2.rhs, dtype=np.float64),
        out)
    if fail >= 0:
        raise SolverError(fail)
    return out


def _assemble_radial(grid: Grid, reaction: float, rhs_values: np.ndarray,
                     bc_value: float) -> TridiagonalSystem:
    """Rows of (r f)'' - reaction * r f = r * rhs, scaled by 1/dr.

    Interior row i:  -(i-1) f_{i-1} + (2+reaction) i f_i - (i+1) f_{i+1} = i*rhs_i.
    Row N is the Dirichlet identity; row 0 the decentered zero-flux row
    3 f_0 - 4 f_1 + f_2 = 0 with the f_2 coefficient in ``corner``.
    """
    n = grid.n
    idx = np.arange(n + 1, dtype=np.float64)
    sub = np.zeros(n + 1)
    diag = np.zeros(n + 1)
    sup = np.zeros(n + 1)
    rhs = np.zeros(n + 1)
    sub[1:n] = -(idx[1:n] - 1.0)
    diag[1:n] = (2.0 + reaction) * idx[1:n]
    sup[1:n] = -(idx[1:n] + 1.0)
    rhs[1:n] = idx[1:n] * rhs_values[1:n]
    diag[0] = 3.0
    sup[0] = -4.0
    diag[n] = 1.0
    rhs[n] = bc_value
    return TridiagonalSystem(sub=sub, diag=diag, sup=sup, rhs=rhs, corner=1.0)


def assemble_q_system(params: Parameters, grid: Grid) -> TridiagonalSystem:
    """System for q: reaction (dr*gamma/eps)^2, zero source, q(1) = q_bc."""
    dc = derive_constants(params)
    ma, mb = _reaction_coefficients(params, grid)
    return _assemble_radial(grid, ma + mb, np.zeros(grid.n + 1), dc.q_bc)


def assemble_p_system(params: Parameters, grid: Grid,
                      q_source: RadialField) -> TridiagonalSystem:
    """System for p: no reaction, source (alpha^2-beta^2)/(e33 eps^2) * q."""
    if q_source.grid != grid:
        raise GridMismatchError("q_source is sampled on a different grid")
    dc = derive_constants(params)
    ma, mb = _reaction_coefficients(params, grid)
    rhs_values = -(ma - mb) * q_source.values
    return _assemble_radial(grid, 0.0, rhs_values, dc.p_bc)


def solve_q_fd(params: Parameters, grid: Grid) -> RadialField:
    """Finite-difference q field; warns when the layer is under-resolved."""
    _warn_if_unresolved(grid, params)
    return RadialField(grid, solve_tridiagonal(assemble_q_system(params, grid)))


def solve_p_fd(params: Parameters, grid: Grid, q_source: RadialField) -> RadialField:
    """Finite-difference p field driven by a discrete q source."""
    return RadialField(grid, solve_tridiagonal(assemble_p_system(params, grid, q_source)))


def _assemble_coupled(params: Parameters, grid: Grid):
    """Block-tridiagonal system for (p_t, p_c), assembled in long double.

    Returns (sub, diag, sup, rhs) with the row-0 corner block already
    eliminated against block row 1.
    """
    L = np.longdouble
    n = grid.n
    ma, mb = _reaction_coefficients(params, grid)
    ma = L(ma)
    mb = L(mb)
    idx = np.arange(n + 1, dtype=L)

    sub = np.zeros((n + 1, 2, 2), dtype=L)
    diag = np.zeros((n + 1, 2, 2), dtype=L)
    sup = np.zeros((n + 1, 2, 2), dtype=L)
    rhs = np.zeros((n + 1, 2), dtype=L)

    sub[1:n, 0, 0] = sub[1:n, 1, 1] = -(idx[1:n] - 1.0)
    sup[1:n, 0, 0] = sup[1:n, 1, 1] = -(idx[1:n] + 1.0)
    diag[1:n, 0, 0] = (2.0 + ma) * idx[1:n]
    diag[1:n, 0, 1] = -ma * idx[1:n]
    diag[1:n, 1, 0] = -mb * idx[1:n]
    diag[1:n, 1, 1] = (2.0 + mb) * idx[1:n]

    diag[n, 0, 0] = diag[n, 1, 1] = 1.0
    rhs[n, 0] = params.pi_t
    rhs[n, 1] = params.pi_c

    # decentered zero-flux row per phase: 3 u_0 - 4 u_1 + u_2 = 0,
    # corner block (the u_2 coefficient) eliminated against block row 1
    diag[0, 0, 0] = diag[0, 1, 1] = 3.0
    sup[0, 0, 0] = sup[0, 1, 1] = -4.0
    s1 = sup[1, 0, 0]  # sup[1] is a scalar multiple of the identity
    diag[0] -= sub[1] / s1
    sup[0] -= diag[1] / s1
    rhs[0] -= rhs[1] / s1
    return sub, diag, sup, rhs


def solve_coupled_fd(params: Parameters, grid: Grid):
    """Solve the coupled (p_t, p_c) block system directly.

    This is the expensive route the decoupled solves replace; it exists to
    cross-check them (the block system is an exact row recombination of the
    decoupled ones).  Returns the pair of phase fields.
    """
    _warn_if_unresolved(grid, params)
    sub, diag, sup, rhs = _assemble_coupled(params, grid)
    out = np.empty_like(rhs)
    fail = _kernels.block_thomas_solve(sub, diag, sup, rhs, out)
    if fail >= 0:
        raise SolverError(fail)
    x = out.astype(np.float64)
    return RadialField(grid, x[:, 0]), RadialField(grid, x[:, 1])
