"""Weierstrass data for real lattices (discriminant > 0).

Only the shifted real line ``x + omega_3`` is needed, where

    wp(x + omega_3) = e3 + (e2 - e3) * sn^2(x * sqrt(e1 - e3), k),  k^2 = (e2 - e3)/(e1 - e3)

so everything reduces to one Jacobi function evaluated with the AGM.
"""

import math
from dataclasses import dataclass

from ..errors import DomainError
from ._checks import finite

_AGM_EPS = 1e-16


@dataclass(frozen=True)
class EllipticData:
    g2: float
    g3: float
    e1: float
    e2: float
    e3: float
    omega1: float
    omega3_im: float
    delta: float

    @property
    def modulus(self):
        """Parameter m = k^2 of the associated Jacobi functions."""
        return (self.e2 - self.e3) / (self.e1 - self.e3)

    def h(self, w):
        """The cubic 4 w^3 - g2 w - g3."""
        return 4.0 * w ** 3 - self.g2 * w - self.g3


def agm(a, b):
    # converges quadratically; the iterates can end up alternating one ulp apart
    for _ in range(64):
        if abs(a - b) <= 4.0 * _AGM_EPS * abs(a):
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def ellipk(m):
    """Complete elliptic integral of the first kind K(m), 0 <= m < 1."""
    if not 0.0 <= m < 1.0:
        raise DomainError(f"ellipk needs 0 <= m < 1, got {m}")
    return math.pi / (2.0 * agm(1.0, math.sqrt(1.0 - m)))


def jacobi_sncndn(u, m):
    """(sn, cn, dn)(u | m) for real u and 0 <= m < 1 via descending Landen/AGM."""
    if m == 0.0:
        return math.sin(u), math.cos(u), 1.0
    a = [1.0]
    c = [math.sqrt(m)]
    b = math.sqrt(1.0 - m)
    while abs(c[-1]) > 4.0 * _AGM_EPS * a[-1]:
        an, bn = a[-1], b
        a.append(0.5 * (an + bn))
        c.append(0.5 * (an - bn))
        b = math.sqrt(an * bn)
        if len(a) > 40:
            break
    n = len(a) - 1
    phi = (2.0 ** n) * a[n] * u
    prev = phi
    for k in range(n, 0, -1):
        prev = phi
        phi = 0.5 * (phi + math.asin(c[k] / a[k] * math.sin(phi)))
    sn, cn = math.sin(phi), math.cos(phi)
    dn = cn / math.cos(prev - phi) if n > 0 else 1.0
    return sn, cn, dn


def _polish(e, g2, g3):
    for _ in range(4):
        f = 4.0 * e ** 3 - g2 * e - g3
        df = 12.0 * e * e - g2
        if df == 0.0 or f == 0.0:
            break
        e -= f / df
    return e


def elliptic_setup(g2, g3):
    """Roots, half-periods and discriminant of the lattice with invariants g2, g3."""
    g2 = finite(g2, "g2")
    g3 = finite(g3, "g3")
    delta = g2 ** 3 - 27.0 * g3 ** 2
    if delta <= 0.0:
        raise DomainError(
            f"discriminant {delta} <= 0: only the real-lattice case (three real roots) is supported"
        )
    # trigonometric solution of e^3 - (g2/4) e - g3/4 = 0
    p = g2 / 4.0
    q = g3 / 4.0
    r = 2.0 * math.sqrt(p / 3.0)
    arg = max(-1.0, min(1.0, 3.0 * q / (p * r)))
    theta = math.acos(arg) / 3.0
    roots = sorted(
        (_polish(r * math.cos(theta - 2.0 * math.pi * k / 3.0), g2, g3) for k in range(3)),
        reverse=True,
    )
    e1, e2, e3 = roots
    m = (e2 - e3) / (e1 - e3)
    scale = math.sqrt(e1 - e3)
    omega1 = ellipk(m) / scale
    omega3_im = ellipk(1.0 - m) / scale
    return EllipticData(g2, g3, e1, e2, e3, omega1, omega3_im, delta)


def wp_shifted(x, ed):
    """wp(x + omega_3) for real x; real, regular and confined to [e3, e2]."""
    x = finite(x)
    sn, _, _ = jacobi_sncndn(x * math.sqrt(ed.e1 - ed.e3), ed.modulus)
    return ed.e3 + (ed.e2 - ed.e3) * sn * sn


def wp_shifted_deriv(x, ed):
    """d/dx wp(x + omega_3)."""
    x = finite(x)
    scale = math.sqrt(ed.e1 - ed.e3)
    sn, cn, dn = jacobi_sncndn(x * scale, ed.modulus)
    return 2.0 * (ed.e2 - ed.e3) * scale * sn * cn * dn
