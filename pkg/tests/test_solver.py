"""Finite-difference solver: assembly structure, accuracy, and properties."""

import numpy as np
import pytest

from biphaselab import (GridMismatchError, LayerResolutionWarning, RadialField,
                        SolverError, TridiagonalSystem, assemble_p_system,
                        assemble_q_system, derive_constants, exact_p, exact_q,
                        make_grid, make_parameters, solve_coupled_fd,
                        solve_p_fd, solve_q_fd, solve_tridiagonal)

PAPER = dict(alpha=1.0, beta=1.5, eps=0.1, pi_t=0.5, pi_c=1.0, e33=1.0)


def paper(eps=0.1, **kw):
    args = dict(PAPER, eps=eps, **kw)
    return make_parameters(**args)


def test_dirichlet_row_is_identity():
    grid = make_grid(8)
    sys_ = assemble_q_system(paper(), grid)
    assert sys_.diag[-1] == 1.0 and sys_.sub[-1] == 0.0
    assert sys_.rhs[-1] == -0.25


def test_neumann_row_structure():
    sys_ = assemble_q_system(paper(), make_grid(8))
    assert sys_.diag[0] == 3.0 and sys_.sup[0] == -4.0 and sys_.corner == 1.0


def test_equal_data_solves_to_zero():
    grid = make_grid(256)
    sys_ = assemble_q_system(paper(pi_t=0.8, pi_c=0.8), grid)
    assert np.all(sys_.rhs == 0.0)
    q = solve_q_fd(paper(pi_t=0.8, pi_c=0.8), grid)
    assert np.all(q.values == 0.0)


def test_boundary_node_exact():
    grid = make_grid(200)
    q = solve_q_fd(paper(), grid)
    assert q.values[-1] == -0.25


def test_q_second_order_accuracy():
    params = paper()
    errs = []
    for n in (250, 500, 1000):
        grid = make_grid(n)
        q = solve_q_fd(params, grid)
        errs.append(np.max(np.abs(q.values - exact_q(params, grid.nodes))))
    for coarse, fine in zip(errs, errs[1:]):
        assert 3.4 <= coarse / fine <= 4.6


def test_p_second_order_accuracy():
    params = paper()
    errs = []
    for n in (250, 500, 1000):
        grid = make_grid(n)
        q = solve_q_fd(params, grid)
        p = solve_p_fd(params, grid, q)
        errs.append(np.max(np.abs(p.values - exact_p(params, grid.nodes))))
    for coarse, fine in zip(errs, errs[1:]):
        assert 3.4 <= coarse / fine <= 4.6


def test_zero_source_reproduces_constant_exactly():
    # constants are in the discrete kernel of the interior and Neumann rows;
    # with integer stencil coefficients the sweep reproduces them bitwise
    params = paper(alpha=2.0, beta=2.0)
    for n in (512, 1000):
        grid = make_grid(n)
        zero_q = RadialField(grid, np.zeros(n + 1))
        p = solve_p_fd(params, grid, zero_q)
        assert np.all(p.values == 0.75)
    # alpha = beta kills the source even with a nonzero q
    grid = make_grid(400)
    q = solve_q_fd(params, grid)
    p = solve_p_fd(params, grid, q)
    assert np.all(p.values == 0.75)


def test_linearity_superposition():
    rng = np.random.default_rng(17)
    grid = make_grid(300)
    for _ in range(5):
        bt1, bc1, bt2, bc2 = rng.uniform(-2.0, 2.0, 4)
        q1 = solve_q_fd(paper(pi_t=bt1, pi_c=bc1), grid).values
        q2 = solve_q_fd(paper(pi_t=bt2, pi_c=bc2), grid).values
        q12 = solve_q_fd(paper(pi_t=bt1 + bt2, pi_c=bc1 + bc2), grid).values
        scale = max(np.max(np.abs(q12)), 1e-30)
        assert np.max(np.abs(q1 + q2 - q12)) / scale <= 1e-12


def test_sign_preservation():
    # pi_t > pi_c: the r-weighted system is an M-matrix, so q_i >= 0 for i >= 1
    params = paper(pi_t=1.0, pi_c=0.5)
    grid = make_grid(500)
    q = solve_q_fd(params, grid)
    assert np.all(q.values[1:] >= 0.0)


def test_resolution_warning():
    with pytest.warns(LayerResolutionWarning, match="under-resolved"):
        solve_q_fd(paper(eps=0.04), make_grid(100))


def test_grid_mismatch_rejected():
    q = solve_q_fd(paper(), make_grid(256))
    with pytest.raises(GridMismatchError):
        solve_p_fd(paper(), make_grid(512), q)


def test_solver_failure_reports_row():
    n = 4
    sys_ = TridiagonalSystem(sub=np.array([0.0, 1.0, 1.0, 0.0]),
                             diag=np.array([1.0, 1.0, 2.0, 1.0]),
                             sup=np.array([1.0, 0.0, 0.0, 0.0]),
                             rhs=np.ones(n))
    with pytest.raises(SolverError, match="row 1") as excinfo:
        solve_tridiagonal(sys_)
    assert excinfo.value.row == 1


def test_inconsistent_system_rejected():
    with pytest.raises(ValueError, match="inconsistent"):
        TridiagonalSystem(sub=np.zeros(3), diag=np.zeros(4),
                          sup=np.zeros(4), rhs=np.zeros(4))


def test_coupled_boundary_rows():
    params = paper()
    pt, pc = solve_coupled_fd(params, make_grid(200))
    assert pt.values[-1] == 0.5
    assert pc.values[-1] == 1.0


def test_coupled_equals_decoupled_recombination():
    params = paper()
    grid = make_grid(2000)
    q = solve_q_fd(params, grid)
    p = solve_p_fd(params, grid, q)
    pt, pc = solve_coupled_fd(params, grid)
    dq = np.max(np.abs((pt.values - pc.values) / 2.0 - q.values))
    dp = np.max(np.abs((pt.values + pc.values) / 2.0 - p.values))
    assert dq / np.max(np.abs(q.values)) <= 1e-10
    assert dp / np.max(np.abs(p.values)) <= 1e-10


def test_coupled_constant_case():
    params = paper(alpha=2.0, beta=2.0, pi_t=0.7, pi_c=0.7)
    pt, pc = solve_coupled_fd(params, make_grid(600))
    np.testing.assert_allclose(pt.values, 0.7, rtol=0, atol=1e-13)
    np.testing.assert_allclose(pc.values, 0.7, rtol=0, atol=1e-13)


@pytest.mark.parametrize("kwargs", [
    dict(alpha=2.5, beta=0.7, pi_t=1.2, pi_c=-0.4),   # alpha > beta, kappa > 0
    dict(alpha=1.0, beta=1.5, e33=2.0),               # non-unit permeability
    dict(alpha=0.3, beta=0.4, pi_t=-1.0, pi_c=2.0, e33=0.5),
])
def test_accuracy_and_equivalence_across_parameters(kwargs):
    params = paper(**kwargs)
    errs = []
    for n in (500, 1000, 2000):
        grid = make_grid(n)
        q = solve_q_fd(params, grid)
        p = solve_p_fd(params, grid, q)
        errs.append((np.max(np.abs(q.values - exact_q(params, grid.nodes))),
                     np.max(np.abs(p.values - exact_p(params, grid.nodes)))))
    for (cq, cp), (fq, fp) in zip(errs, errs[1:]):
        assert 3.4 <= cq / fq <= 4.6
        assert 3.4 <= cp / fp <= 4.6
    grid = make_grid(2000)
    q = solve_q_fd(params, grid)
    p = solve_p_fd(params, grid, q)
    pt, pc = solve_coupled_fd(params, grid)
    dq = np.max(np.abs((pt.values - pc.values) / 2 - q.values))
    dp = np.max(np.abs((pt.values + pc.values) / 2 - p.values))
    assert dq / np.max(np.abs(q.values)) <= 1e-10
    assert dp / np.max(np.abs(p.values)) <= 1e-10


def test_coupled_phases_against_exact():
    params = paper()
    grid = make_grid(4000)
    pt, pc = solve_coupled_fd(params, grid)
    dc = derive_constants(params)
    q_ex = exact_q(params, grid.nodes)
    p_ex = exact_p(params, grid.nodes)
    np.testing.assert_allclose(pt.values, p_ex + q_ex, atol=5e-7)
    np.testing.assert_allclose(pc.values, p_ex - q_ex, atol=5e-7)
    assert dc.gamma > 0  # sanity on fixture reuse
