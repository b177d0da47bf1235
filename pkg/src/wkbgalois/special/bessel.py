"""Bessel functions of half-integer order ``n + 1/2``.

Seeds are the closed trigonometric forms of orders +-1/2; higher (or lower)
orders follow from ``C_{v+1}(x) = (2v/x) C_v(x) - C_{v-1}(x)``. The recurrence
is run upward for Y everywhere and for J when ``x`` exceeds the order; below
that J is obtained from the downward ratio recurrence normalised with the
Casoratian ``J_v Y_{v-1} - J_{v-1} Y_v = 2/(pi x)``.
"""

import math

from ..errors import DomainError
from ._checks import finite


def _seeds(x):
    amp = math.sqrt(2.0 / (math.pi * x))
    s, c = math.sin(x), math.cos(x)
    # orders -1/2 and +1/2
    return (amp * c, amp * s), (amp * s, -amp * c)


def _upward(n, x, c_minus, c_plus):
    """Return (C_{n-1/2}, C_{n+1/2}) for n >= 0 from the two seeds."""
    lo, hi = c_minus, c_plus
    for k in range(n):
        nu = k + 0.5
        lo, hi = hi, (2.0 * nu / x) * hi - lo
    return lo, hi


def _j_ratio(n, x):
    """J_{n+1/2}(x) / J_{n-1/2}(x) by the backward ratio recurrence."""
    top = n + 40 + int(x)
    r = 0.0
    for k in range(top, n - 1, -1):
        nu = k + 0.5
        r = 1.0 / (2.0 * nu / x - r)
    return r


def _pair_nonneg(kind, n, x):
    j_seed, y_seed = _seeds(x)
    if kind == "Y" or x > n + 0.5:
        return _upward(n, x, *(y_seed if kind == "Y" else j_seed))
    y_lo, y_hi = _upward(n, x, *y_seed)
    r = _j_ratio(n, x)
    j_lo = 2.0 / (math.pi * x * (r * y_lo - y_hi))
    return j_lo, r * j_lo


def _single(kind, n, x):
    if n >= 0:
        return _pair_nonneg(kind, n, x)[1]
    # order -(k+1/2): J_{-v} = (-1)^(k+1) Y_v and Y_{-v} = (-1)^k J_v
    k = -n - 1
    sign = 1.0 if k % 2 == 0 else -1.0
    if kind == "J":
        return -sign * _pair_nonneg("Y", k, x)[1]
    return sign * _pair_nonneg("J", k, x)[1]


def _pair(kind, n, x):
    if n >= 1:
        return _pair_nonneg(kind, n, x)
    return _single(kind, n - 1, x), _single(kind, n, x)


def bessel_half(kind, n, x):
    """J_{n+1/2}(x) or Y_{n+1/2}(x) for integer ``n`` and ``x > 0``."""
    if kind not in ("J", "Y"):
        raise DomainError(f"kind must be 'J' or 'Y', got {kind!r}")
    if int(n) != n:
        raise DomainError(f"order index must be an integer, got {n!r}")
    x = finite(x)
    if x <= 0.0:
        raise DomainError("half-integer Bessel functions need x > 0 (branch point at 0)")
    return _pair(kind, int(n), x)[1]


def bessel_half_pair(kind, n, x):
    """(C_{n-1/2}(x), C_{n+1/2}(x)), the two adjacent orders in one pass."""
    if kind not in ("J", "Y"):
        raise DomainError(f"kind must be 'J' or 'Y', got {kind!r}")
    x = finite(x)
    if x <= 0.0:
        raise DomainError("half-integer Bessel functions need x > 0 (branch point at 0)")
    return _pair(kind, int(n), x)
