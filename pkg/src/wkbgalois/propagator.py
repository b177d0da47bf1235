"""Semiclassical propagator around a constant-velocity path.

    K_WKB(x1, t1 | x0, 0) = 1/(2 pi i hbar) * (t1 phi12(t1))^(-1/2) * exp(i S / hbar),
    S = (x1 - x0)^2 / (2 t1).

Only paths free of focal points are handled: det J = t1 phi12 must be positive.
"""

from __future__ import annotations

import cmath
import math
import sys
from dataclasses import asdict, dataclass

from scipy.optimize import brentq

from .closedform import phi12_closed
from .errors import (
    ClosedFormUnavailable,
    DomainError,
    FocalPointCrossed,
    FocalPointError,
    NotIntegrableError,
    QuadratureError,
)
from .oracle import DEFAULT_TOL, integrate_fundamental_many, phi12_numeric
from .variational import PathSpec, level_for_path, path_energy

CLOSED = "ClosedForm"
ORACLE = "Oracle"


@dataclass(frozen=True)
class PropagatorValue:
    re: float
    im: float
    modulus: float
    phase: float
    action: float
    det_j: float
    hbar: float
    source: str = CLOSED

    @property
    def value(self):
        return complex(self.re, self.im)

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class Phi12Result:
    """phi12 with its provenance; ``closed`` is None when no closed form applied."""

    t1: float
    value: float
    source: str
    closed: float | None = None
    oracle: float | None = None
    note: str = ""


def action(path):
    return (path.x1 - path.x0) ** 2 / (2.0 * path.t1)


def van_vleck_det(t1, phi12):
    return t1 * phi12


def kwkb(path, phi12, hbar=1.0, source=CLOSED):
    """K_WKB for a focal-free path; raises FocalPointCrossed when t1 phi12 <= 0."""
    if not hbar > 0:
        raise DomainError("hbar must be positive")
    det_j = van_vleck_det(path.t1, phi12)
    if not math.isfinite(det_j):
        raise DomainError("det J is not finite")
    if det_j <= 0.0:
        raise FocalPointCrossed(
            f"det J = {det_j:.6g} <= 0 at t1={path.t1}: a focal point lies on (0, t1]"
        )
    s = action(path)
    modulus = 1.0 / (2.0 * math.pi * hbar * math.sqrt(det_j))
    # the 1/i factor is a fixed -pi/2; phase is reduced to (-pi, pi]
    phase = math.remainder(s / hbar - 0.5 * math.pi, 2.0 * math.pi)
    k = cmath.rect(modulus, phase)
    return PropagatorValue(k.real, k.imag, modulus, phase, s, det_j, hbar, source)


def evaluate_phi12(family, path, t1=None, tol=DEFAULT_TOL, both=False):
    """phi12 at t1, closed form first and the oracle as fallback.

    With ``both`` the oracle is always run, so the result carries both values.
    A vanishing closed form raises FocalPointError.
    """
    t1 = path.t1 if t1 is None else float(t1)
    closed = None
    note = ""
    try:
        closed = phi12_closed(family, level_for_path(family, path), path, t1=t1)
    except NotIntegrableError as exc:
        note = str(exc)
    except (ClosedFormUnavailable, QuadratureError) as exc:
        note = str(exc)
    oracle = None
    if closed is None or both:
        oracle = phi12_numeric(family, path_energy(path), path, t1, tol)
    if closed is not None:
        return Phi12Result(t1, closed, CLOSED, closed, oracle, note)
    return Phi12Result(t1, oracle, ORACLE, None, oracle, note)


def propagate(family, path, hbar=1.0, tol=DEFAULT_TOL):
    res = evaluate_phi12(family, path, tol=tol)
    return kwkb(path, res.value, hbar, res.source)


def _phi12_function(family, path, tol):
    level = level_for_path(family, path)
    E = path_energy(path)

    def phi(t):
        try:
            return phi12_closed(family, level, path, t1=t, focal_tol=None)
        except (NotIntegrableError, ClosedFormUnavailable, QuadratureError):
            return phi12_numeric(family, E, path, t, tol)

    return phi


def focal_points(family, level, path, t_max, grid=400, tol=1e-12):
    """Zeros of phi12 on (0, t_max], bracketed by sign changes on a uniform grid.

    Tangential (even-order) zeros without a sign change are not reported.
    """
    if not t_max > 0:
        raise DomainError("t_max must be positive")
    if level is not None and abs(level.E - path_energy(path)) > 1e-9 * level.E:
        raise DomainError("level energy does not match the path energy")
    ts = [t_max * k / grid for k in range(1, grid + 1)]
    values = [fm.phi12 for fm in integrate_fundamental_many(family, path_energy(path), path, ts, tol)]
    phi = _phi12_function(family, path, tol)
    roots = []
    prev_t, prev_v = 0.0, None
    for t, v in zip(ts, values):
        if v == 0.0:
            roots.append(t)
        elif prev_v is not None and prev_v * v < 0.0:
            lo, hi = prev_t, t
            f_lo, f_hi = phi(lo), phi(hi)
            if f_lo * f_hi < 0.0:
                roots.append(brentq(phi, lo, hi, xtol=1e-14, rtol=4 * sys.float_info.epsilon))
            else:
                roots.append(brentq(lambda s: phi12_numeric(family, path_energy(path), path, s, tol), lo, hi, xtol=1e-14))
        prev_t, prev_v = t, v
    return roots


__all__ = [
    "CLOSED",
    "ORACLE",
    "FocalPointError",
    "Phi12Result",
    "PropagatorValue",
    "PathSpec",
    "action",
    "evaluate_phi12",
    "focal_points",
    "kwkb",
    "propagate",
    "van_vleck_det",
]
