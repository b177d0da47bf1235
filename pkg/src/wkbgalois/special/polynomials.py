"""Monic Hermite polynomials and Legendre functions of the first and second kind."""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ..errors import DomainError
from ._checks import finite


@dataclass(frozen=True)
class Polynomial:
    """Polynomial with exact rational coefficients in ascending degree."""

    coeffs: tuple

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, s):
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * s + float(c)
        return acc

    def deriv(self):
        if len(self.coeffs) == 1:
            return Polynomial((Fraction(0),))
        return Polynomial(tuple(k * c for k, c in enumerate(self.coeffs) if k > 0))

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Polynomial(tuple(x + y for x, y in zip(a, b))).trim()

    def scale(self, k):
        return Polynomial(tuple(k * c for c in self.coeffs))

    def shift_up(self):
        """Multiply by s."""
        return Polynomial((Fraction(0),) + self.coeffs)

    def trim(self):
        c = list(self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        return Polynomial(tuple(c))

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)


@lru_cache(maxsize=None)
def hermite_poly(m):
    """Monic solution of ``P'' - 2 s P' + 2 m P = 0`` of degree ``m``.

    Built from the monic recurrence ``P_{k+1} = s P_k - (k/2) P_{k-1}`` in exact
    rational arithmetic, so leading coefficient and parity are exact.
    """
    if int(m) != m or m < 0:
        raise DomainError(f"Hermite degree must be a nonnegative integer, got {m!r}")
    m = int(m)
    prev = Polynomial((Fraction(1),))
    if m == 0:
        return prev
    cur = Polynomial((Fraction(0), Fraction(1)))
    for k in range(1, m):
        prev, cur = cur, cur.shift_up() + prev.scale(Fraction(-k, 2))
    return cur


def hermite_residual(p, m):
    """Coefficients of ``P'' - 2 s P' + 2 m P`` (all zero for a solution)."""
    d1 = p.deriv()
    d2 = d1.deriv()
    return d2 + d1.shift_up().scale(-2) + p.scale(2 * m)


def _check_degree(n):
    if int(n) != n or n < 0:
        raise DomainError(f"Legendre degree must be a nonnegative integer, got {n!r}")
    return int(n)


def _bonnet(n, z, f0, f1):
    if n == 0:
        return f0, None
    prev, cur = f0, f1
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1) * z * cur - k * prev) / (k + 1)
    return cur, prev


def legendre_p(n, z):
    """Legendre polynomial P_n(z) by Bonnet's recursion."""
    n = _check_degree(n)
    z = finite(z, "z")
    return _bonnet(n, z, 1.0, z)[0]


def legendre_q(n, z):
    """Second-kind Legendre function Q_n(z) on (-1, 1), Q_0 = atanh(z)."""
    n = _check_degree(n)
    z = finite(z, "z")
    if abs(z) >= 1.0:
        raise DomainError("Q_n needs |z| < 1 (logarithmic singularity at z = +-1)")
    q0 = math.atanh(z)
    return _bonnet(n, z, q0, z * q0 - 1.0)[0]


def _deriv(n, z, value, lower):
    if n == 0:
        return None
    return n * (lower - z * value) / (1.0 - z * z)


def legendre_p_deriv(n, z):
    n = _check_degree(n)
    z = finite(z, "z")
    if n == 0:
        return 0.0
    if abs(z) == 1.0:
        return math.copysign(1.0, z) ** (n + 1) * n * (n + 1) / 2
    value, lower = _bonnet(n, z, 1.0, z)
    return _deriv(n, z, value, lower)


def legendre_q_deriv(n, z):
    n = _check_degree(n)
    z = finite(z, "z")
    if abs(z) >= 1.0:
        raise DomainError("Q_n needs |z| < 1 (logarithmic singularity at z = +-1)")
    if n == 0:
        return 1.0 / (1.0 - z * z)
    q0 = math.atanh(z)
    value, lower = _bonnet(n, z, q0, z * q0 - 1.0)
    return _deriv(n, z, value, lower)
