"""Liouvillian bases of the variational equation and the closed-form phi12.

For a basis {xi1, xi2} of xi'' + 2f(x_E(t), 0) xi = 0,

    phi12(t1) = (xi1(0) xi2(t1) - xi1(t1) xi2(0)) / D,
    D = xi1(0) xi2'(0) - xi1'(0) xi2(0),

which is the solution with xi(0) = 0, xi'(0) = 1. D is always computed from
the basis itself. Family-specific fast paths return the same quantity in
simplified form.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ClosedFormUnavailable, DomainError, FocalPointError, NotIntegrableError
from .galois import Status, classify
from .special import (
    bessel_half_pair,
    erfi,
    hermite_poly,
    integrate,
    legendre_p,
    legendre_p_deriv,
    legendre_q,
    legendre_q_deriv,
    wp_shifted,
    wp_shifted_deriv,
)
from .variational import (
    Bessel,
    Constant,
    EnergyLevel,
    Hermite,
    Lame,
    Legendre,
    check_path,
    level_for_path,
    path_energy,
    principal_index,
)

QUAD_TOL = 1e-13
FOCAL_TOL = 1e-12
# the elementary nu = 2 cross product cancels badly for small arguments
G_MIN_ARG = 0.1
_SQRT_PI_2 = math.sqrt(math.pi) / 2.0


@dataclass(frozen=True)
class BasisFunction:
    value: Callable[[float], float]
    deriv: Callable[[float], float]

    def __call__(self, t):
        return self.value(t)

    def scaled(self, c):
        return BasisFunction(lambda t: c * self.value(t), lambda t: c * self.deriv(t))


@dataclass(frozen=True)
class ClosedBasis:
    """A Liouvillian fundamental system, valid for t in ``window`` (open interval)."""

    first: BasisFunction
    second: BasisFunction
    window: tuple = (-math.inf, math.inf)

    def __iter__(self):
        return iter((self.first, self.second))

    def wronskian(self, t=0.0):
        return self.first(t) * self.second.deriv(t) - self.first.deriv(t) * self.second(t)


def phi12_from_basis(basis, t1):
    """phi12(t1) from any fundamental system (possibly complex-valued)."""
    lo, hi = basis.window
    if not (lo < 0.0 < hi and lo < t1 < hi):
        raise ClosedFormUnavailable(f"t1={t1} lies outside the basis window {basis.window}")
    x1, x2 = basis.first, basis.second
    d = basis.wronskian(0.0)
    if d == 0:
        raise DomainError("basis is degenerate (zero Wronskian)")
    return (x1(0.0) * x2(t1) - x1(t1) * x2(0.0)) / d


# ----------------------------------------------------------------------------- gating


def _resolve_level(family, level, path, rtol=1e-9):
    E_path = path_energy(path)
    if level is None:
        return level_for_path(family, path)
    if abs(level.E - E_path) > rtol * E_path:
        raise DomainError(
            f"level energy {level.E} does not match the path energy {E_path}; "
            "build the path with PathSpec.from_energy"
        )
    return level


def _require_integrable(family, E):
    verdict = classify(family, E)
    if verdict.status == Status.NON_INTEGRABLE:
        raise NotIntegrableError(
            f"no Liouvillian closed form: classifier verdict {verdict.status.value} "
            f"({verdict.case_id}) for {family.name} at E={E}",
            verdict,
        )
    if verdict.status == Status.CONDITIONAL:
        raise ClosedFormUnavailable(
            f"classifier verdict Conditional ({verdict.case_id}); side conditions are not decided"
        )
    return verdict


# ----------------------------------------------------------------------------- constant


def _constant_basis(omega):
    if omega > 0:
        w = math.sqrt(omega)
        return ClosedBasis(
            BasisFunction(lambda t: math.cos(w * t), lambda t: -w * math.sin(w * t)),
            BasisFunction(lambda t: math.sin(w * t), lambda t: w * math.cos(w * t)),
        )
    if omega < 0:
        w = math.sqrt(-omega)
        return ClosedBasis(
            BasisFunction(lambda t: math.cosh(w * t), lambda t: w * math.sinh(w * t)),
            BasisFunction(lambda t: math.sinh(w * t), lambda t: w * math.cosh(w * t)),
        )
    return ClosedBasis(BasisFunction(lambda t: 1.0, lambda t: 0.0), BasisFunction(lambda t: t, lambda t: 1.0))


def constant_phi12(omega, t1):
    if omega > 0:
        w = math.sqrt(omega)
        return math.sin(w * t1) / w
    if omega < 0:
        w = math.sqrt(-omega)
        return math.sinh(w * t1) / w
    return t1


# ----------------------------------------------------------------------------- Hermite


class _HermiteData:
    """Monic P_m with float helpers and its real zeros."""

    def __init__(self, m):
        self.m = m
        self.poly = hermite_poly(m)
        self.dpoly = self.poly.deriv()
        coeffs = [float(c) for c in self.poly.coeffs]
        self.zeros = sorted(r.real for r in np.roots(coeffs[::-1])) if m > 0 else []
        if m % 2 == 1:
            # P(s) = s Q(s), Q(0) = a1 and Q(s) - a1 = s^2 R(s)
            self.a1 = float(self.poly.coeffs[1])
            self.q = [float(c) for c in self.poly.coeffs[1:]]

    def p(self, s):
        return self.poly(s)

    def dp(self, s):
        return self.dpoly(s)

    @staticmethod
    def _horner(cs, s):
        acc = 0.0
        for c in reversed(cs):
            acc = acc * s + c
        return acc

    def q_val(self, s):
        return self._horner(self.q, s)

    def q_deriv(self, s):
        return self._horner([k * c for k, c in enumerate(self.q)][1:], s) if len(self.q) > 1 else 0.0

    def g_reg(self, z):
        """exp(z^2)/P(z)^2 - 1/(a1 z)^2, regular at 0 (odd m)."""
        z2 = z * z
        em1 = math.expm1(z2) / z2 if z2 > 0 else 1.0
        q = self.q_val(z)
        rr = self._r_val(z)
        a1 = self.a1
        return (a1 * a1 * em1 - rr * (q + a1)) / (a1 * a1 * q * q)

    def _r_val(self, z):
        # R(z) = (Q(z) - a1) / z^2 = sum_{k>=2} q_k z^(k-2)
        cs = self.q[2:]
        return self._horner(cs, z) if cs else 0.0

    def zero_window(self):
        """Open s-interval around 0 free of the zeros that matter for the basis."""
        if self.m % 2 == 0:
            pos = [z for z in self.zeros if z > 1e-12]
        else:
            pos = [z for z in self.zeros if z > 1e-8]
        first = min(pos) if pos else math.inf
        return (-first, first)


_HERMITE_CACHE = {}


def _hermite_data(m):
    if m not in _HERMITE_CACHE:
        _HERMITE_CACHE[m] = _HermiteData(m)
    return _HERMITE_CACHE[m]


def _hermite_m(family, level):
    if family.a <= 0:
        raise NotIntegrableError("Hermite family with a <= 0 has no admissible energies")
    lam = 1.0 / math.sqrt(2.0 * level.E * family.a)
    m = int(round((lam - 1.0) / 2.0))
    return m, (2.0 * level.E * family.a) ** 0.25


def _hermite_integral(hd, s0, s1):
    """int_{s0}^{s1} exp(z^2)/P(z)^2 dz on a zero-free interval."""
    if hd.m == 0:
        return _SQRT_PI_2 * (erfi(s1) - erfi(s0))
    p = hd.poly
    return integrate(lambda z: math.exp(z * z) / p(z) ** 2, s0, s1, tol=QUAD_TOL)


def _hermite_basis(family, level, path):
    m, kappa = _hermite_m(family, level)
    hd = _hermite_data(m)
    v = path.velocity
    s0 = kappa * path.x0 / v

    def s_of(t):
        return kappa * t + s0

    def xi1(t):
        s = s_of(t)
        return hd.p(s) * math.exp(-0.5 * s * s)

    def dxi1(t):
        s = s_of(t)
        return kappa * (hd.dp(s) - s * hd.p(s)) * math.exp(-0.5 * s * s)

    if m % 2 == 0:
        def big_i(s):
            return _hermite_integral(hd, 0.0, s)

        def xi2(t):
            s = s_of(t)
            return hd.p(s) * math.exp(-0.5 * s * s) * big_i(s)

        def dxi2(t):
            s = s_of(t)
            e = math.exp(-0.5 * s * s)
            return kappa * ((hd.dp(s) - s * hd.p(s)) * e * big_i(s) + 1.0 / (hd.p(s) * e))
    else:
        a1 = hd.a1

        def big_g(s):
            return integrate(hd.g_reg, 0.0, s, tol=QUAD_TOL) if s != 0.0 else 0.0

        def xi2(t):
            # xi1(s) * (G(s) - 1/(a1^2 s)), written without the removable singularity
            s = s_of(t)
            return math.exp(-0.5 * s * s) * (hd.p(s) * big_g(s) - hd.q_val(s) / (a1 * a1))

        def dxi2(t):
            s = s_of(t)
            g = big_g(s)
            inner = hd.p(s) * g - hd.q_val(s) / (a1 * a1)
            d_inner = hd.dp(s) * g + hd.p(s) * hd.g_reg(s) - hd.q_deriv(s) / (a1 * a1)
            return kappa * math.exp(-0.5 * s * s) * (d_inner - s * inner)

    zlo, zhi = hd.zero_window()
    # window in t: s(t) in (zlo, zhi)
    t_a, t_b = (zlo - s0) / kappa, (zhi - s0) / kappa
    return ClosedBasis(BasisFunction(xi1, dxi1), BasisFunction(xi2, dxi2), (t_a, t_b))


def hermite_phi12(family, level, path, t1):
    """phi12 for an admissible Hermite level.

    x0 = 0, odd m:  sqrt(2m+1) P(s1) exp(-s1^2/2) / P'(0)
    otherwise:      xi1(s0) xi1(s1) int_{s0}^{s1} exp(z^2)/P^2 dz / kappa, zero-free interval only
    """
    m, kappa = _hermite_m(family, level)
    hd = _hermite_data(m)
    v = path.velocity
    s0 = kappa * path.x0 / v
    s1 = kappa * t1 + s0
    if m % 2 == 1 and s0 == 0.0:
        return hd.p(s1) * math.exp(-0.5 * s1 * s1) / (kappa * hd.a1)
    lo, hi = sorted((s0, s1))
    blocking = [z for z in hd.zeros if lo - 1e-12 <= z <= hi + 1e-12]
    if blocking:
        raise ClosedFormUnavailable(
            f"Hermite m={m}: zero of P_m at s={blocking[0]:.6g} inside [{lo:.6g}, {hi:.6g}]; "
            "the quadrature representation of the second solution is singular there"
        )
    integral = _hermite_integral(hd, s0, s1)
    return hd.p(s0) * hd.p(s1) * math.exp(-0.5 * (s0 * s0 + s1 * s1)) * integral / kappa


def hermite_safe_window(family, level, x0=0.0):
    """Largest t1 for which the even-m quadrature representation stays regular (x0 = 0)."""
    m, kappa = _hermite_m(family, level)
    if m % 2 == 1 and x0 == 0.0:
        return math.inf
    hd = _hermite_data(m)
    pos = [z for z in hd.zeros if z > 1e-12]
    return min(pos) / kappa if pos else math.inf


# ----------------------------------------------------------------------------- Bessel / Euler-Cauchy


def _reflect(path):
    """Bessel coefficients are even in x: map a path on x < 0 to x > 0."""
    if path.x0 < 0:
        return -path.x0, -path.x1
    return path.x0, path.x1


def _bessel_index(family, E):
    nu = principal_index(family.a / (2.0 * E))
    return nu


def _bessel_basis(family, level, path):
    check_path(family, path)
    x0, x1 = _reflect(path)
    v = (x1 - x0) / path.t1
    E = level.E
    if family.b == 0.0:
        return _euler_cauchy_basis(family.a / (2.0 * E), x0, v)
    if family.b < 0:
        raise ClosedFormUnavailable("Bessel closed form implemented for b > 0 (real mu) only")
    nu = _bessel_index(family, E)
    n = int(round(nu.real if isinstance(nu, complex) else nu))
    mu = math.sqrt(family.b / (2.0 * E))

    def make(kind):
        def val(t):
            tau = x0 + v * t
            return math.sqrt(tau) * bessel_half_pair(kind, n, mu * tau)[1]

        def der(t):
            tau = x0 + v * t
            lower, c = bessel_half_pair(kind, n, mu * tau)
            order = n + 0.5
            dc = lower - order / (mu * tau) * c  # C'_v(x) = C_{v-1}(x) - (v/x) C_v(x)
            return v * (c / (2.0 * math.sqrt(tau)) + math.sqrt(tau) * mu * dc)

        return BasisFunction(val, der)

    return ClosedBasis(make("J"), make("Y"), _tau_window(x0, v))


def _tau_window(x0, v):
    # keep tau = x0 + v t > 0
    edge = -x0 / v
    return (edge, math.inf) if v > 0 else (-math.inf, edge)


def _euler_cauchy_basis(q, x0, v):
    gamma2 = 0.25 + q

    def tau(t):
        return x0 + v * t

    if gamma2 > 0:
        g = math.sqrt(gamma2)
        first = BasisFunction(lambda t: tau(t) ** (0.5 + g), lambda t: v * (0.5 + g) * tau(t) ** (g - 0.5))
        second = BasisFunction(lambda t: tau(t) ** (0.5 - g), lambda t: v * (0.5 - g) * tau(t) ** (-0.5 - g))
    elif gamma2 == 0:
        first = BasisFunction(lambda t: math.sqrt(tau(t)), lambda t: v * 0.5 / math.sqrt(tau(t)))
        second = BasisFunction(
            lambda t: math.sqrt(tau(t)) * math.log(tau(t)),
            lambda t: v * (0.5 * math.log(tau(t)) + 1.0) / math.sqrt(tau(t)),
        )
    else:
        beta = math.sqrt(-gamma2)

        def osc(fn, dfn):
            def val(t):
                tt = tau(t)
                return math.sqrt(tt) * fn(beta * math.log(tt))

            def der(t):
                tt = tau(t)
                arg = beta * math.log(tt)
                return v * (0.5 * fn(arg) + beta * dfn(arg)) / math.sqrt(tt)

            return BasisFunction(val, der)

        first = osc(math.cos, lambda x: -math.sin(x))
        second = osc(math.sin, math.cos)
    return ClosedBasis(first, second, _tau_window(x0, v))


def euler_cauchy_phi12(q, x0, x1, t1):
    """sqrt(x0 x1) S(ln(x1/x0)) / v with S(L) = sinh(gamma L)/gamma, gamma^2 = 1/4 + q.

    Equals (x1^(nu+1) x0^(-nu) - x0^(nu+1) x1^(-nu)) / ((2 nu + 1) v) for real nu != -1/2
    and sqrt(x0 x1) ln(x1/x0) / v for nu = -1/2.
    """
    v = (x1 - x0) / t1
    big_l = math.log(x1 / x0)
    gamma2 = 0.25 + q
    if gamma2 > 0:
        g = math.sqrt(gamma2)
        s = math.sinh(g * big_l) / g
    elif gamma2 == 0:
        s = big_l
    else:
        beta = math.sqrt(-gamma2)
        s = math.sin(beta * big_l) / beta
    return math.sqrt(x0 * x1) * s / v


def bessel_g_nu2(x0, x1):
    """J_{5/2}(x0) Y_{5/2}(x1) - J_{5/2}(x1) Y_{5/2}(x0) in elementary form."""
    d = x1 - x0
    num = (2 * x1 ** 2 * (x0 ** 2 - 3) + 18 * x1 * x0 - 6 * x0 ** 2 + 18) * math.sin(d) - 6 * d * (
        x1 * x0 + 3
    ) * math.cos(d)
    return num / (math.pi * (x1 * x0) ** 2.5)


def bessel_phi12(family, level, path, t1):
    """Integer-nu Bessel: (pi t1 / (2 (x1 - x0))) sqrt(x0 x1) [J(mu x0) Y(mu x1) - J(mu x1) Y(mu x0)].

    J, Y have order n + 1/2 and are evaluated at mu-scaled arguments.
    """
    check_path(family, path)
    x0, x1 = _reflect(path)
    v = (x1 - x0) / path.t1
    x1 = x0 + v * t1
    E = level.E
    if family.b == 0.0:
        return euler_cauchy_phi12(family.a / (2.0 * E), x0, x1, t1)
    if family.b < 0:
        raise ClosedFormUnavailable("Bessel closed form implemented for b > 0 (real mu) only")
    nu = _bessel_index(family, E)
    n = int(round(nu))
    mu = math.sqrt(family.b / (2.0 * E))
    if n == 2 and mu * min(x0, x1) >= G_MIN_ARG:
        cross = bessel_g_nu2(mu * x0, mu * x1)
    else:
        j0 = bessel_half_pair("J", n, mu * x0)[1]
        y0 = bessel_half_pair("Y", n, mu * x0)[1]
        j1 = bessel_half_pair("J", n, mu * x1)[1]
        y1 = bessel_half_pair("Y", n, mu * x1)[1]
        cross = j0 * y1 - j1 * y0
    return math.pi / (2.0 * v) * math.sqrt(x0 * x1) * cross


# ----------------------------------------------------------------------------- Legendre


def _legendre_n(family, E):
    return int(round(principal_index(family.a / (2.0 * E))))


def _legendre_basis(family, level, path):
    if family.b != 0.0:
        raise ClosedFormUnavailable("Legendre closed forms are implemented for b = 0 (mu = 0) only")
    n = _legendre_n(family, level.E)
    v = path.velocity
    x0 = path.x0

    def make(fn, dfn):
        def val(t):
            return fn(n, math.tanh(x0 + v * t))

        def der(t):
            tau = x0 + v * t
            c = math.cosh(tau)
            return v * dfn(n, math.tanh(tau)) / (c * c)

        return BasisFunction(val, der)

    return ClosedBasis(make(legendre_p, legendre_p_deriv), make(legendre_q, legendre_q_deriv))


def legendre_phi12(family, level, path, t1):
    """mu = 0: (P_n(z0) Q_n(z1) - P_n(z1) Q_n(z0)) / v with z = tanh(x)."""
    if family.b != 0.0:
        raise ClosedFormUnavailable("Legendre closed forms are implemented for b = 0 (mu = 0) only")
    n = _legendre_n(family, level.E)
    v = path.velocity
    z0 = math.tanh(path.x0)
    z1 = math.tanh(path.x0 + v * t1)
    return (legendre_p(n, z0) * legendre_q(n, z1) - legendre_p(n, z1) * legendre_q(n, z0)) / v


# ----------------------------------------------------------------------------- Lame


def _lame_setup(family, level, path):
    n = principal_index(family.a / (2.0 * level.E))
    if isinstance(n, complex) or abs(n - 1.0) > 1e-9:
        raise ClosedFormUnavailable("Lame closed form is implemented for n = 1 only")
    ed = family.ed
    big_b = family.b / (2.0 * level.E)
    if ed.e3 <= big_b <= ed.e2:
        raise DomainError(
            f"B={big_b} lies in [e3, e2] = [{ed.e3}, {ed.e2}]: B - wp(x + omega3) vanishes on the path"
        )
    hb = ed.h(big_b)
    if abs(hb) <= 1e-12 * max(1.0, abs(big_b) ** 3):
        raise DomainError("h(B) = 0: degenerate Lame case, the exponential pair collapses")
    return ed, big_b, hb


def _lame_theta_integral(ed, big_b, x0, v, t):
    return integrate(lambda s: 1.0 / (big_b - wp_shifted(x0 + v * s, ed)), 0.0, t, tol=QUAD_TOL)


def _lame_basis(family, level, path):
    ed, big_b, hb = _lame_setup(family, level, path)
    v = path.velocity
    x0 = path.x0
    c = 0.5 * cmath.sqrt(hb)

    def make(sign):
        def val(t):
            pi_t = big_b - wp_shifted(x0 + v * t, ed)
            theta = c * v * _lame_theta_integral(ed, big_b, x0, v, t)
            return cmath.sqrt(pi_t) * cmath.exp(sign * theta)

        def der(t):
            pi_t = big_b - wp_shifted(x0 + v * t, ed)
            dpi = -v * wp_shifted_deriv(x0 + v * t, ed)
            theta = c * v * _lame_theta_integral(ed, big_b, x0, v, t)
            return cmath.sqrt(pi_t) * cmath.exp(sign * theta) * (dpi / (2.0 * pi_t) + sign * c * v / pi_t)

        return BasisFunction(val, der)

    return ClosedBasis(make(1.0), make(-1.0))


def lame_phi12(family, level, path, t1, imag_tol=1e-9):
    """n = 1 Hermite-Halphen pair sqrt(B - wp) exp(+-theta); D taken from the basis Wronskian."""
    basis = _lame_basis(family, level, path)
    value = phi12_from_basis(basis, t1)
    if abs(value.imag) > imag_tol * max(1.0, abs(value)):
        raise DomainError(f"Lame closed form left an imaginary residue {value.imag:.3g}")
    return value.real


# ----------------------------------------------------------------------------- dispatch


def closed_form_basis(family, level=None, path=None):
    """Liouvillian basis {xi1, xi2} of the variational equation along ``path``."""
    if path is None:
        raise DomainError("a path is required")
    level = _resolve_level(family, level, path)
    if isinstance(family, Constant):
        return _constant_basis(family.omega)
    _require_integrable(family, level.E)
    if isinstance(family, Hermite):
        return _hermite_basis(family, level, path)
    if isinstance(family, Bessel):
        return _bessel_basis(family, level, path)
    if isinstance(family, Legendre):
        return _legendre_basis(family, level, path)
    if isinstance(family, Lame):
        return _lame_basis(family, level, path)
    raise TypeError(f"unsupported family {family!r}")


def phi12_closed(family, level=None, path=None, t1=None, focal_tol=FOCAL_TOL):
    """Closed-form phi12(t1); t1 defaults to the path's flight time.

    Raises NotIntegrableError when the classifier rejects the level,
    ClosedFormUnavailable when no safe closed form exists here (the caller
    should fall back to the oracle), and FocalPointError when phi12 vanishes.
    """
    if path is None:
        raise DomainError("a path is required")
    level = _resolve_level(family, level, path)
    t1 = path.t1 if t1 is None else float(t1)
    if t1 <= 0:
        raise DomainError("t1 must be positive")
    if isinstance(family, Constant):
        value = constant_phi12(family.omega, t1)
    else:
        _require_integrable(family, level.E)
        if isinstance(family, Hermite):
            value = hermite_phi12(family, level, path, t1)
        elif isinstance(family, Bessel):
            value = bessel_phi12(family, level, path, t1)
        elif isinstance(family, Legendre):
            value = legendre_phi12(family, level, path, t1)
        elif isinstance(family, Lame):
            value = lame_phi12(family, level, path, t1)
        else:
            raise TypeError(f"unsupported family {family!r}")
    if focal_tol is not None and abs(value) <= focal_tol * max(1.0, t1):
        raise FocalPointError(f"phi12({t1}) = {value:.3g} vanishes: focal point")
    return value


__all__ = [
    "BasisFunction",
    "ClosedBasis",
    "EnergyLevel",
    "bessel_g_nu2",
    "closed_form_basis",
    "constant_phi12",
    "euler_cauchy_phi12",
    "hermite_safe_window",
    "phi12_closed",
    "phi12_from_basis",
]
