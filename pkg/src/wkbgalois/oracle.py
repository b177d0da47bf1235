"""Numerical ground truth for the normal variational equation.

Integrates the 2x2 fundamental matrix of

    xi' = eta,    eta' = -2 f(x_E(t), 0) xi,    Phi(0) = Id

with an embedded Dormand-Prince 5(4) pair under PI step-size control. The
coefficient is only ever evaluated through ``family.two_f``; no closed form is
consulted, which keeps this path independent of :mod:`wkbgalois.closedform`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, SingularCoefficient
from .variational import check_path

DEFAULT_TOL = 1e-10

# Dormand-Prince 5(4) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
# fifth-order minus embedded fourth-order weights
_E = (
    71 / 57600,
    0.0,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)

_SAFETY = 0.9
_BETA1 = 0.7 / 5  # PI controller (Gustafsson)
_BETA2 = 0.4 / 5
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_MAX_STEPS = 2_000_000


@dataclass(frozen=True)
class FundamentalMatrix:
    t: float
    phi11: float
    phi12: float
    phi21: float
    phi22: float
    steps: int = 0

    @property
    def det(self):
        return self.phi11 * self.phi22 - self.phi12 * self.phi21

    def as_rows(self):
        return [[self.phi11, self.phi12], [self.phi21, self.phi22]]

    def matmul(self, other):
        return FundamentalMatrix(
            other.t,
            self.phi11 * other.phi11 + self.phi12 * other.phi21,
            self.phi11 * other.phi12 + self.phi12 * other.phi22,
            self.phi21 * other.phi11 + self.phi22 * other.phi21,
            self.phi21 * other.phi12 + self.phi22 * other.phi22,
        )


def wronskian_drift(fm):
    """|det Phi - 1|; zero for an exact fundamental matrix of a trace-free system."""
    return abs(fm.det - 1.0)


def _rhs(c, y):
    # y = (phi11, phi12, phi21, phi22); rows are (xi, eta)
    return (y[2], y[3], -c * y[0], -c * y[1])


def _solve(coef, t_start, t_outputs, tol, h0=None):
    """Integrate Phi' = [[0, 1], [-coef(t), 0]] Phi from Phi(t_start) = Id.

    ``t_outputs`` must be monotone in the direction of integration; the step is
    clipped to land on each of them exactly.
    """
    direction = 1.0
    if t_outputs and t_outputs[-1] < t_start:
        direction = -1.0
    y = (1.0, 0.0, 0.0, 1.0)
    t = t_start
    span = abs(t_outputs[-1] - t_start) if t_outputs else 0.0
    h = h0 if h0 is not None else min(0.05, 0.1 * span) if span else 0.0
    h = max(h, 1e-6)
    err_prev = 1.0
    steps = 0
    results = []
    try:
        c0 = coef(t)
    except SingularCoefficient:
        raise
    k_first = _rhs(c0, y)
    for target in t_outputs:
        while direction * (target - t) > 0.0:
            if steps > _MAX_STEPS:
                raise SingularCoefficient("step budget exhausted: coefficient too rough or singular")
            remaining = abs(target - t)
            last = h >= remaining
            hs = direction * (remaining if last else h)
            ks = [k_first]
            for i in range(1, 7):
                yi = tuple(
                    y[j] + hs * sum(_A[i][s] * ks[s][j] for s in range(i) if _A[i][s])
                    for j in range(4)
                )
                ti = t + _C[i] * hs
                if i == 6:
                    ti = t + hs
                ks.append(_rhs(coef(ti), yi))
            y_new = yi  # stage 7 is evaluated at the fifth-order solution (FSAL)
            err = 0.0
            for j in range(4):
                e = hs * sum(_E[s] * ks[s][j] for s in range(7) if _E[s])
                scale = tol + tol * max(abs(y[j]), abs(y_new[j]))
                err = max(err, abs(e) / scale)
            if not math.isfinite(err):
                err = 1e10
            if err <= 1.0:
                t = target if last else t + hs
                y = y_new
                k_first = ks[6]
                steps += 1
                err = max(err, 1e-10)
                factor = _SAFETY * err ** (-_BETA1) * err_prev ** _BETA2
                err_prev = err
                if not last:
                    h = abs(hs) * min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
            else:
                factor = _SAFETY * err ** (-1 / 5)
                h = abs(hs) * max(_MIN_FACTOR, factor)
                if h < 1e-14 * max(1.0, abs(t)):
                    raise SingularCoefficient(
                        f"step size underflow at t={t}: coefficient singular or too stiff"
                    )
        results.append(FundamentalMatrix(t, y[0], y[1], y[2], y[3], steps))
    return results


def _coef_function(family, E, path):
    if E <= 0:
        raise DomainError("E must be positive")
    check_path(family, path)
    v = math.copysign(math.sqrt(2.0 * E), path.x1 - path.x0)
    x0 = path.x0
    two_f = family.two_f
    return lambda t: two_f(x0 + v * t)


def integrate_fundamental(family, E, path, t_end=None, tol=DEFAULT_TOL, t_start=0.0):
    """Fundamental matrix Phi(t_end) with Phi(t_start) = Id.

    The path supplies x0 and the direction of motion; the speed is sqrt(2E).
    ``t_end < t_start`` integrates backward.
    """
    if t_end is None:
        t_end = path.t1
    if tol <= 0:
        raise DomainError("tol must be positive")
    coef = _coef_function(family, E, path)
    if t_end == t_start:
        return FundamentalMatrix(t_start, 1.0, 0.0, 0.0, 1.0)
    return _solve(coef, t_start, [t_end], tol)[0]


def integrate_fundamental_many(family, E, path, times, tol=DEFAULT_TOL):
    """Phi at each of ``times`` (all > 0) from a single forward integration.

    Results are returned in the order of ``times``.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    coef = _coef_function(family, E, path)
    order = sorted(range(len(times)), key=lambda i: times[i])
    ordered = [float(times[i]) for i in order]
    if ordered and ordered[0] < 0:
        raise DomainError("times must be nonnegative")
    positive = [t for t in ordered if t > 0]
    solved = iter(_solve(coef, 0.0, positive, tol)) if positive else iter(())
    out = [None] * len(times)
    for i, t in zip(order, ordered):
        out[i] = FundamentalMatrix(0.0, 1.0, 0.0, 0.0, 1.0) if t == 0 else next(solved)
    return out


def phi12_numeric(family, E, path, t1=None, tol=DEFAULT_TOL):
    """The (1,2) entry of Phi(t1): d xi(t1) / d eta(0)."""
    return integrate_fundamental(family, E, path, t1, tol).phi12
