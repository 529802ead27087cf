"""Boundary-layer profile algebra and the order-k expansion engine.

In the stretched variable rho = (1 - r)/eps the radial operator expands as

    -d2/drho2 + gamma^2 - 2*eps/(1 - eps*rho) * d/drho,

and the geometric series 2/(1 - eps*rho) = 2 * sum_l (eps*rho)^l turns the
transport term into one first-order contribution per expansion order, with
spherical transport coefficient 2 at every order.  Collecting powers of eps
in the ansatz q = sum_k eps^k Q_k(rho) e^(-gamma*rho) yields, per order k,

    -u'' + gamma^2 u = rhs_k,   u(0) = 0,  u -> 0 at infinity,

where rhs_k = -2 * sum_{l=0}^{k-1} rho^l * d/drho[profile_{k-1-l}].

Every profile is a polynomial times exp(-gamma*rho) (:class:`PolyExp`).
Substituting u = Q(rho) e^(-gamma*rho) reduces the ODE to -Q'' + 2 gamma Q'
= R for the polynomial parts, solved coefficient-wise by the recursion

    c_k = b_{k-1} / (2 gamma k),
    c_l = ((l+1) l c_{l+1} + b_{l-1}) / (2 gamma l),   l = k-1, ..., 1,

where R = sum b_l rho^l (matching rho^{l-1} coefficients on both sides
forces the b index l-1, as direct substitution shows).

The engine runs this recursion in exact arithmetic: coefficients live in
the quadratic field Q(gamma) = {a + b*gamma : a, b rational}, closed under
all four operations because gamma^2 = (alpha^2 + beta^2)/e33 is rational.
Substituting a built profile back into its equation therefore reproduces
the right-hand side exactly, coefficient by coefficient, and the identity
p-profile = kappa * q-profile holds exactly as well.  Floating-point views
of the coefficients are precomputed for fast numpy evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exact import monophase_value
from .model import Parameters, derive_constants

#: spherical transport coefficient (coefficient of rho^l * d/drho per order)
SPHERE_TRANSPORT = 2


class GammaValue:
    """Exact element a + b*gamma of Q(gamma), with gamma^2 = gsq rational."""

    __slots__ = ("a", "b", "gsq")

    def __init__(self, a, b=0, *, gsq: Fraction):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.gsq = Fraction(gsq)

    @classmethod
    def rational(cls, value, gsq: Fraction) -> "GammaValue":
        return cls(value, 0, gsq=gsq)

    @classmethod
    def gamma(cls, gsq: Fraction) -> "GammaValue":
        return cls(0, 1, gsq=gsq)

    def _coerce(self, other):
        if isinstance(other, GammaValue):
            if other.gsq != self.gsq:
                raise ValueError("mixing values from different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return GammaValue(other, 0, gsq=self.gsq)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GammaValue(self.a + o.a, self.b + o.b, gsq=self.gsq)

    __radd__ = __add__

    def __neg__(self):
        return GammaValue(-self.a, -self.b, gsq=self.gsq)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GammaValue(self.a - o.a, self.b - o.b, gsq=self.gsq)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GammaValue(self.a * o.a + self.b * o.b * self.gsq,
                          self.a * o.b + self.b * o.a, gsq=self.gsq)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        den = o.a * o.a - o.b * o.b * self.gsq
        if den == 0:
            raise ZeroDivisionError("division by zero in Q(gamma)")
        inv = GammaValue(o.a / den, -o.b / den, gsq=self.gsq)
        return self * inv

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __eq__(self, other):
        if isinstance(other, GammaValue):
            return (self.gsq == other.gsq and self.a == other.a
                    and self.b == other.b)
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.gsq))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __float__(self):
        import math
        return float(self.a) + float(self.b) * math.sqrt(float(self.gsq))

    def __repr__(self):
        return f"GammaValue({self.a} + {self.b}*g, g^2={self.gsq})"


def _is_zero(c) -> bool:
    return not c if isinstance(c, GammaValue) else c == 0.0


@dataclass(frozen=True)
class PolyExp:
    """A profile (sum_l c_l rho^l) * exp(-gamma*rho), gamma > 0.

    Coefficients are ordered constant-term first and may be plain floats or
    exact :class:`GammaValue` elements; trailing zeros are stripped on
    construction (the zero profile keeps a single zero coefficient).
    """

    gamma: float
    coeffs: tuple

    def __post_init__(self):
        if not (self.gamma > 0.0):
            raise ValueError("decay rate gamma must be positive")
        coeffs = tuple(self.coeffs)
        if not coeffs:
            raise ValueError("need at least one coefficient")
        last = len(coeffs)
        while last > 1 and _is_zero(coeffs[last - 1]):
            last -= 1
        coeffs = coeffs[:last]
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "_fcoeffs",
                           np.array([float(c) for c in coeffs], dtype=float))

    @property
    def float_coeffs(self) -> np.ndarray:
        """Float view of the coefficients (constant term first)."""
        return self._fcoeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and _is_zero(self.coeffs[0])

    @property
    def is_exact(self) -> bool:
        return isinstance(self.coeffs[0], GammaValue)

    def evaluate(self, rho):
        """Value at rho >= 0 (scalar or array); decays to 0 as rho -> inf."""
        arr = np.asarray(rho, dtype=float)
        if np.any(arr < 0.0):
            raise ValueError("rho must be nonnegative")
        scalar = arr.ndim == 0
        a = np.atleast_1d(arr)
        acc = np.full_like(a, self._fcoeffs[-1])
        for c in self._fcoeffs[-2::-1]:
            acc = acc * a + c
        out = acc * np.exp(-self.gamma * a)
        return float(out[0]) if scalar else out.reshape(arr.shape)

    __call__ = evaluate

    def _gamma_scalar(self):
        if self.is_exact:
            return GammaValue.gamma(self.coeffs[0].gsq)
        return self.gamma

    def derivative(self) -> "PolyExp":
        """Exact d/drho: (Q' - gamma*Q) e^(-gamma*rho) in the same algebra."""
        g = self._gamma_scalar()
        c = self.coeffs
        n = len(c)
        new = []
        for j in range(n):
            term = -(g * c[j])
            if j + 1 < n:
                term = term + (j + 1) * c[j + 1]
            new.append(term)
        return PolyExp(self.gamma, tuple(new))

    def scaled(self, factor) -> "PolyExp":
        """Profile multiplied by a scalar (float, Fraction or GammaValue)."""
        return PolyExp(self.gamma, tuple(factor * c for c in self.coeffs))

    def shifted(self, powers: int) -> "PolyExp":
        """Profile multiplied by rho**powers."""
        if powers < 0:
            raise ValueError("powers must be nonnegative")
        if self.is_zero:
            return self
        zero = self.coeffs[0] * 0
        return PolyExp(self.gamma, (zero,) * powers + self.coeffs)

    def __add__(self, other: "PolyExp") -> "PolyExp":
        if not isinstance(other, PolyExp):
            return NotImplemented
        if other.gamma != self.gamma:
            raise ValueError("gamma mismatch between profiles")
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        summed = list(a)
        for j, c in enumerate(b):
            summed[j] = summed[j] + c
        return PolyExp(self.gamma, tuple(summed))


def polyexp_eval(profile: PolyExp, rho):
    """Evaluate ``profile`` at ``rho``."""
    return profile.evaluate(rho)


def polyexp_derivative(profile: PolyExp) -> PolyExp:
    """Exact derivative of ``profile`` with respect to rho."""
    return profile.derivative()


def apply_profile_operator(profile: PolyExp) -> PolyExp:
    """Apply the layer operator -d2/drho2 + gamma^2 to a profile.

    Closed in the PolyExp algebra: for u = Q e^(-gamma rho) the result is
    (-Q'' + 2 gamma Q') e^(-gamma rho); in exact mode the gamma^2 Q terms
    cancel exactly.
    """
    g = profile._gamma_scalar()
    d2 = profile.derivative().derivative()
    return d2.scaled(-1) + profile.scaled(g * g)


def solve_profile_ode(rhs: PolyExp, gamma: float) -> PolyExp:
    """Solve -u'' + gamma^2 u = rhs, u(0) = 0, u -> 0 at infinity.

    The solution is a PolyExp with zero constant coefficient whose
    polynomial degree is one more than the degree of ``rhs``; substituting
    it back through :func:`apply_profile_operator` reproduces ``rhs``
    exactly.
    """
    if rhs.gamma != gamma:
        raise ValueError(f"gamma mismatch: rhs has {rhs.gamma}, expected {gamma}")
    if rhs.is_zero:
        return PolyExp(gamma, (rhs.coeffs[0] * 0,))
    g = rhs._gamma_scalar()
    b = rhs.coeffs
    k = len(b)  # solution degree
    zero = b[0] * 0
    c = [zero] * (k + 1)
    c[k] = b[k - 1] / (2 * g * k)
    for ell in range(k - 1, 0, -1):
        c[ell] = ((ell + 1) * ell * c[ell + 1] + b[ell - 1]) / (2 * g * ell)
    return PolyExp(gamma, tuple(c))


def transport_rhs(q_profiles, k: int, transport=SPHERE_TRANSPORT) -> PolyExp:
    """Right-hand side of the order-k profile equation.

    rhs_k = -transport * sum_{l=0}^{k-1} rho^l * d/drho q_profiles[k-1-l].
    """
    if k < 1:
        raise ValueError("transport terms start at order 1")
    total = None
    for ell in range(k):
        term = q_profiles[k - 1 - ell].derivative().shifted(ell).scaled(-transport)
        total = term if total is None else total + term
    return total


@dataclass(frozen=True)
class ExpansionSet:
    """Profiles of the expansion up to a given order, plus the far-field data.

    q_profiles[j] and p_profiles[j] are the order-j layer profiles in the
    stretched variable; p_profiles[j] = kappa * q_profiles[j] exactly.
    ``monophase`` is the constant far-field pressure; ``curvature`` holds
    the spherical transport coefficient used at each order >= 1.
    """

    order: int
    q_profiles: tuple
    p_profiles: tuple
    monophase: float
    curvature: tuple


def build_expansion(params: Parameters, order: int) -> ExpansionSet:
    """Build all layer profiles up to ``order`` in exact arithmetic.

    The order-0 profile is q_bc * e^(-gamma rho); each further profile
    solves its transport equation via :func:`solve_profile_ode`.  The
    boundary traces are q_bc at order 0 and exactly zero above.
    """
    order = int(order)
    if order < 0:
        raise ValueError("expansion order must be >= 0")
    dc = derive_constants(params)

    a2 = Fraction(params.alpha) ** 2
    b2 = Fraction(params.beta) ** 2
    gsq = (a2 + b2) / Fraction(params.e33)
    q_bc = GammaValue((Fraction(params.pi_t) - Fraction(params.pi_c)) / 2, gsq=gsq)
    kappa = (a2 - b2) / (a2 + b2)

    qs = [PolyExp(dc.gamma, (q_bc,))]
    for k in range(1, order + 1):
        qs.append(solve_profile_ode(transport_rhs(qs, k), dc.gamma))
    ps = [q.scaled(kappa) for q in qs]

    return ExpansionSet(order=order,
                        q_profiles=tuple(qs),
                        p_profiles=tuple(ps),
                        monophase=monophase_value(params),
                        curvature=(float(SPHERE_TRANSPORT),) * order)


def _check_expansion_consistency(expansion: ExpansionSet, params: Parameters):
    """Profiles depend on alpha, beta, e33 and the boundary data; only eps
    is free at evaluation time.  Reject mismatched parameter sets instead
    of silently evaluating with the wrong decay rate."""
    dc = derive_constants(params)
    gamma = expansion.q_profiles[0].gamma
    mono = monophase_value(params)
    if (abs(dc.gamma - gamma) > 1e-12 * gamma
            or abs(expansion.monophase - mono) > 1e-12 * (1.0 + abs(mono))
            or abs(float(expansion.q_profiles[0].coeffs[0]) - dc.q_bc)
            > 1e-12 * (1.0 + abs(dc.q_bc))):
        raise ValueError("expansion was built for different problem constants; "
                         "rebuild it with build_expansion(params, order)")


def smoothstep_cutoff(r, d: float = 0.25):
    """C^2 cutoff: 1 for r >= 1-d, 0 for r <= 1-2d, quintic blend between."""
    if not 0.0 < d <= 0.5:
        raise ValueError("cutoff margin d must lie in (0, 0.5]")
    arr = np.asarray(r, dtype=float)
    scalar = arr.ndim == 0
    t = np.clip((np.atleast_1d(arr) - (1.0 - 2.0 * d)) / d, 0.0, 1.0)
    chi = t * t * t * (10.0 + t * (-15.0 + 6.0 * t))
    return float(chi[0]) if scalar else chi.reshape(arr.shape)


def smoothstep_cutoff_derivative(r, d: float = 0.25):
    """Derivative of :func:`smoothstep_cutoff` with respect to r."""
    if not 0.0 < d <= 0.5:
        raise ValueError("cutoff margin d must lie in (0, 0.5]")
    arr = np.asarray(r, dtype=float)
    scalar = arr.ndim == 0
    t = (np.atleast_1d(arr) - (1.0 - 2.0 * d)) / d
    inside = (t > 0.0) & (t < 1.0)
    t = np.clip(t, 0.0, 1.0)
    dchi = np.where(inside, 30.0 * t * t * (1.0 - t) ** 2 / d, 0.0)
    return float(dchi[0]) if scalar else dchi.reshape(arr.shape)


def _combined_float_coeffs(profiles, eps: float, order: int) -> np.ndarray:
    """Coefficients of sum_l eps^l * profile_l as one polynomial in rho."""
    width = max(p.degree for p in profiles[:order + 1]) + 1
    combined = np.zeros(width)
    scale = 1.0
    for ell in range(order + 1):
        fc = profiles[ell].float_coeffs
        combined[:fc.shape[0]] += scale * fc
        scale *= eps
    return combined


def _eval_poly_exp(coeffs: np.ndarray, gamma: float, rho: np.ndarray) -> np.ndarray:
    acc = np.full_like(rho, coeffs[-1])
    for c in coeffs[-2::-1]:
        acc = acc * rho + c
    return acc * np.exp(-gamma * rho)


def approximant(expansion: ExpansionSet, params: Parameters, r,
                which: str = "q", cutoff: float | None = None):
    """Evaluate the order-k layer approximant at radius r in [0, 1].

    For q: sum_l eps^l q_profiles[l]((1-r)/eps); for p the monophase
    constant plus the kappa-scaled layer sum.  With ``cutoff`` set, the
    layer sum is multiplied by the smoothstep cutoff of margin d = cutoff
    (the p approximant still equals p_bc at r = 1 at every order).
    """
    if which not in ("q", "p"):
        raise ValueError("which must be 'q' or 'p'")
    _check_expansion_consistency(expansion, params)
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("radius must lie in [0, 1]")
    scalar = arr.ndim == 0
    a = np.atleast_1d(arr)

    profiles = expansion.q_profiles if which == "q" else expansion.p_profiles
    gamma = profiles[0].gamma
    rho = (1.0 - a) / params.eps
    layer = _eval_poly_exp(_combined_float_coeffs(profiles, params.eps, expansion.order),
                           gamma, rho)
    if cutoff is not None:
        layer = layer * smoothstep_cutoff(a, cutoff)
    out = layer if which == "q" else expansion.monophase + layer
    return float(out[0]) if scalar else out.reshape(arr.shape)


def approximant_derivative(expansion: ExpansionSet, params: Parameters, r,
                           which: str = "q", cutoff: float | None = None):
    """d/dr of :func:`approximant` (analytic, via the PolyExp algebra)."""
    if which not in ("q", "p"):
        raise ValueError("which must be 'q' or 'p'")
    _check_expansion_consistency(expansion, params)
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("radius must lie in [0, 1]")
    scalar = arr.ndim == 0
    a = np.atleast_1d(arr)

    profiles = expansion.q_profiles if which == "q" else expansion.p_profiles
    gamma = profiles[0].gamma
    rho = (1.0 - a) / params.eps
    derivs = [p.derivative() for p in profiles[:expansion.order + 1]]
    dlayer_drho = _eval_poly_exp(
        _combined_float_coeffs(derivs, params.eps, expansion.order), gamma, rho)
    out = -dlayer_drho / params.eps  # d rho/dr = -1/eps
    if cutoff is not None:
        layer = _eval_poly_exp(
            _combined_float_coeffs(profiles, params.eps, expansion.order), gamma, rho)
        out = (out * smoothstep_cutoff(a, cutoff)
               + layer * smoothstep_cutoff_derivative(a, cutoff))
    return float(out[0]) if scalar else out.reshape(arr.shape)
