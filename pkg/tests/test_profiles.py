"""Profile algebra, the expansion engine, and the assembled approximants."""

from fractions import Fraction

import numpy as np
import pytest

from biphaselab import (GammaValue, PolyExp, approximant,
                        approximant_derivative, apply_profile_operator,
                        build_expansion, exact_p, exact_q, make_parameters,
                        monophase_value, polyexp_derivative, polyexp_eval,
                        smoothstep_cutoff, solve_profile_ode, transport_rhs)
from biphaselab.profiles import smoothstep_cutoff_derivative

GAMMA = 1.8027756377319946


def paper(eps=0.1):
    return make_parameters(1.0, 1.5, eps, 0.5, 1.0, 1.0)


# ---------------------------------------------------------------- GammaValue

def test_gamma_value_field_arithmetic():
    gsq = Fraction(13, 4)
    g = GammaValue.gamma(gsq)
    x = GammaValue(Fraction(1, 3), Fraction(2, 5), gsq=gsq)
    y = GammaValue(Fraction(-2), Fraction(1, 7), gsq=gsq)
    assert (x * y) / y == x               # exact division round trip
    assert g * g == GammaValue(gsq, 0, gsq=gsq)
    assert x - x == 0 and not (x - x)
    assert float(g) == pytest.approx(GAMMA, rel=1e-15)
    with pytest.raises(ValueError, match="different fields"):
        x + GammaValue(1, 0, gsq=Fraction(2))
    with pytest.raises(ZeroDivisionError):
        x / GammaValue(0, 0, gsq=gsq)


# ------------------------------------------------------------------- PolyExp

def test_polyexp_eval_basics():
    pe = PolyExp(GAMMA, (1.0,))
    assert polyexp_eval(pe, 0.0) == 1.0
    assert pe(10.0) == pytest.approx(np.exp(-GAMMA * 10.0), rel=1e-14)
    with pytest.raises(ValueError, match="nonnegative"):
        pe(-0.5)


def test_polyexp_decays_to_zero():
    pe = PolyExp(2.0, (3.0, -1.0, 4.0))
    rho = np.linspace(0.0, 60.0, 7)
    vals = pe(rho)
    assert abs(vals[-1]) < 1e-40


def test_polyexp_derivative_product_rule():
    # d/drho [rho e^(-g rho)] = (1 - g rho) e^(-g rho)
    pe = PolyExp(GAMMA, (0.0, 1.0))
    d = polyexp_derivative(pe)
    assert d.coeffs == (1.0, -GAMMA)


def test_polyexp_derivative_matches_finite_differences():
    rng = np.random.default_rng(5)
    pe = PolyExp(GAMMA, tuple(rng.uniform(-2, 2, 5)))
    d = pe.derivative()
    h = 1e-6
    for rho in rng.uniform(0.1, 6.0, 20):
        fd = (pe(rho + h) - pe(rho - h)) / (2 * h)
        assert d(rho) == pytest.approx(fd, abs=1e-8, rel=1e-8)


def test_polyexp_canonical_zero_and_trailing_strip():
    pe = PolyExp(2.0, (1.0, 5.0, 0.0, 0.0))
    assert pe.coeffs == (1.0, 5.0) and pe.degree == 1
    z = PolyExp(2.0, (0.0, 0.0))
    assert z.is_zero and z.coeffs == (0.0,)
    with pytest.raises(ValueError, match="positive"):
        PolyExp(-1.0, (1.0,))


# ------------------------------------------------------------- profile ODE

def test_profile_ode_constant_rhs():
    # rhs = b0 e^(-g rho)  ->  u = (b0 / 2g) rho e^(-g rho)
    b0 = 3.0
    u = solve_profile_ode(PolyExp(GAMMA, (b0,)), GAMMA)
    assert u.coeffs[0] == 0.0
    assert u.coeffs[1] == pytest.approx(b0 / (2 * GAMMA), rel=1e-15)
    assert u.degree == 1


def test_profile_ode_linear_rhs():
    # rhs = b1 rho e^(-g rho) -> u = (b1/4g^2) rho e + (b1/4g) rho^2 e
    b1 = 2.0
    u = solve_profile_ode(PolyExp(GAMMA, (0.0, b1)), GAMMA)
    assert u.coeffs[0] == 0.0
    assert u.coeffs[1] == pytest.approx(b1 / (4 * GAMMA**2), rel=1e-14)
    assert u.coeffs[2] == pytest.approx(b1 / (4 * GAMMA), rel=1e-14)


def test_profile_ode_zero_rhs_and_gamma_mismatch():
    z = solve_profile_ode(PolyExp(GAMMA, (0.0,)), GAMMA)
    assert z.is_zero
    with pytest.raises(ValueError, match="gamma mismatch"):
        solve_profile_ode(PolyExp(2.0, (1.0,)), GAMMA)


def test_profile_ode_substitution_identity_float():
    # substituting the solution back reproduces the rhs (float algebra)
    rng = np.random.default_rng(8)
    rhs = PolyExp(GAMMA, tuple(rng.uniform(-1, 1, 4)))
    u = solve_profile_ode(rhs, GAMMA)
    back = apply_profile_operator(u)
    np.testing.assert_allclose(back.float_coeffs, rhs.float_coeffs, rtol=1e-12)


# --------------------------------------------------------------- expansion

def test_order_zero_profiles():
    ex = build_expansion(paper(), 0)
    q0 = ex.q_profiles[0]
    assert q0.degree == 0
    assert float(q0.coeffs[0]) == -0.25
    p0 = ex.p_profiles[0]
    assert p0.coeffs[0] == Fraction(-5, 13) * q0.coeffs[0]
    assert ex.monophase == pytest.approx(17.0 / 26.0, rel=1e-15)


def test_first_order_profile_coefficient():
    # Taylor-expanding the closed form about r = 1 forces the rho-coefficient
    # (pi_t - pi_c)/2 at order one on the unit sphere
    ex = build_expansion(paper(), 1)
    q1 = ex.q_profiles[1]
    assert q1.coeffs[0] == 0
    assert q1.coeffs[1] == Fraction(-1, 4)


def test_sphere_profiles_are_geometric():
    # exact_q = q_bc e^(-g rho) sum (eps rho)^l + exponentially small terms,
    # so the order-l profile must be exactly q_bc rho^l e^(-g rho)
    ex = build_expansion(paper(), 6)
    q_bc = ex.q_profiles[0].coeffs[0]
    for ell, prof in enumerate(ex.q_profiles):
        expected = (q_bc * 0,) * ell + (q_bc,)
        assert prof.coeffs == expected


def test_expansion_exactness_up_to_order_six():
    params = paper()
    ex = build_expansion(params, 6)
    kappa = Fraction(-5, 13)
    for j in range(7):
        # coefficient-wise coupling identity
        assert ex.p_profiles[j].coeffs == tuple(kappa * c for c in ex.q_profiles[j].coeffs)
        # degree growth and boundary traces
        assert ex.q_profiles[j].degree == j
        if j == 0:
            assert ex.q_profiles[j].coeffs[0] == Fraction(-1, 4)
        else:
            assert ex.q_profiles[j].coeffs[0] == 0
        # exact ODE residual in the PolyExp algebra
        if j >= 1:
            lhs = apply_profile_operator(ex.q_profiles[j])
            rhs = transport_rhs(ex.q_profiles, j)
            assert lhs.coeffs == rhs.coeffs
        else:
            assert apply_profile_operator(ex.q_profiles[0]).is_zero


def test_equal_data_zero_profiles():
    ex = build_expansion(make_parameters(1, 1.5, 0.1, 0.7, 0.7), 4)
    assert all(prof.is_zero for prof in ex.q_profiles)
    assert all(prof.is_zero for prof in ex.p_profiles)


def test_curvature_coefficients():
    ex = build_expansion(paper(), 3)
    assert ex.curvature == (2.0, 2.0, 2.0)


def test_expansion_order_validation():
    with pytest.raises(ValueError, match=">= 0"):
        build_expansion(paper(), -1)


# ------------------------------------------------------------- approximant

def test_approximant_boundary_values():
    params = paper()
    for order in (0, 1, 3, 5):
        ex = build_expansion(params, order)
        assert approximant(ex, params, 1.0, "q") == pytest.approx(-0.25, rel=1e-15)
        assert approximant(ex, params, 1.0, "p") == pytest.approx(0.75, rel=1e-15)


def test_approximant_far_field():
    params = paper(eps=0.04)
    ex = build_expansion(params, 1)
    r = np.linspace(0.0, 0.5, 64)
    assert np.max(np.abs(approximant(ex, params, r, "q"))) < 1e-6
    mono = monophase_value(params)
    assert np.max(np.abs(approximant(ex, params, r, "p") - mono)) < 1e-6


def test_uniform_error_order():
    # |exact - approximant_k| <= C_k eps^(k+1) uniformly: sup error must
    # shrink at least like eps^(k+1) along the sweep
    params0 = paper()
    eps_values = np.geomspace(0.1, 0.0125, 4)
    r = np.linspace(0.0, 1.0, 4001)
    for order in (0, 1, 2):
        ex = build_expansion(params0, order)
        sups = []
        for eps in eps_values:
            pe = paper(eps=eps)
            sups.append(np.max(np.abs(exact_q(pe, r) - approximant(ex, pe, r, "q"))))
        slope = np.polyfit(np.log(eps_values), np.log(sups), 1)[0]
        assert slope >= order + 0.9


def test_order_one_beats_order_zero():
    params = paper()
    r = np.linspace(0.0, 1.0, 2001)
    ex0 = build_expansion(params, 0)
    ex1 = build_expansion(params, 1)
    target = exact_p(params, r)
    err0 = np.sqrt(np.trapezoid((target - approximant(ex0, params, r, "p")) ** 2, r))
    err1 = np.sqrt(np.trapezoid((target - approximant(ex1, params, r, "p")) ** 2, r))
    assert err1 < err0


def test_approximant_validation():
    params = paper()
    ex = build_expansion(params, 1)
    with pytest.raises(ValueError, match="'q' or 'p'"):
        approximant(ex, params, 0.5, "x")
    with pytest.raises(ValueError, match=r"\[0, 1\]"):
        approximant(ex, params, 1.5, "q")


def test_approximant_rejects_mismatched_expansion():
    # only eps is free at evaluation time; other constants are baked into
    # the profiles and must match
    ex = build_expansion(paper(), 1)
    assert approximant(ex, paper(eps=0.05), 0.9, "q") != 0.0  # eps change is fine
    for bad in (make_parameters(1.0, 2.0, 0.1, 0.5, 1.0),      # beta changed
                make_parameters(1.0, 1.5, 0.1, 0.5, 2.0),      # pi_c changed
                make_parameters(1.0, 1.5, 0.1, 0.5, 1.0, 2.0)):  # e33 changed
        with pytest.raises(ValueError, match="different problem constants"):
            approximant(ex, bad, 0.9, "q")
        with pytest.raises(ValueError, match="different problem constants"):
            approximant_derivative(ex, bad, 0.9, "q")


def test_approximant_derivative_matches_finite_differences():
    params = paper()
    ex = build_expansion(params, 2)
    h = 1e-6
    for which in ("q", "p"):
        for cutoff in (None, 0.25):
            for r in (0.3, 0.6, 0.87, 0.95):
                fd = (approximant(ex, params, r + h, which, cutoff)
                      - approximant(ex, params, r - h, which, cutoff)) / (2 * h)
                an = approximant_derivative(ex, params, r, which, cutoff)
                assert an == pytest.approx(fd, rel=1e-6, abs=1e-9)


# ----------------------------------------------------------------- cutoff

def test_smoothstep_cutoff_shape():
    d = 0.25
    assert smoothstep_cutoff(1.0, d) == 1.0
    assert smoothstep_cutoff(1.0 - d, d) == 1.0
    assert smoothstep_cutoff(1.0 - 2 * d, d) == 0.0
    assert smoothstep_cutoff(0.0, d) == 0.0
    assert smoothstep_cutoff(1.0 - 1.5 * d, d) == pytest.approx(0.5)
    r = np.linspace(1.0 - 2 * d, 1.0 - d, 101)
    chi = smoothstep_cutoff(r, d)
    assert np.all(np.diff(chi) >= 0.0)
    # C2 joins: derivative vanishes at both ends of the blend
    assert smoothstep_cutoff_derivative(1.0 - d, d) == 0.0
    assert smoothstep_cutoff_derivative(1.0 - 2 * d, d) == 0.0
    with pytest.raises(ValueError, match="margin"):
        smoothstep_cutoff(0.5, 0.7)


def test_cutoff_localizes_the_layer_sum():
    params = paper()
    ex = build_expansion(params, 1)
    d = 0.25
    # inside the near-boundary band the cutoff changes nothing
    r_in = np.linspace(1.0 - d, 1.0, 33)
    np.testing.assert_array_equal(approximant(ex, params, r_in, "q", d),
                                  approximant(ex, params, r_in, "q"))
    # deep inside the domain the layer term is cut to exactly zero
    r_out = np.linspace(0.0, 1.0 - 2 * d, 33)
    assert np.all(approximant(ex, params, r_out, "q", d) == 0.0)
    mono = monophase_value(params)
    assert np.all(approximant(ex, params, r_out, "p", d) == mono)
