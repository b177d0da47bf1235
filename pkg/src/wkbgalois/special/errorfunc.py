import math

from ._checks import finite

_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)
# erfi(x) ~ exp(x^2) / (x sqrt(pi)) exceeds the double range beyond this.
_OVERFLOW_X = 26.641747557046327
_SERIES_LIMIT = 6.0


def _erfi_series(x):
    # all terms positive: no cancellation
    x2 = x * x
    term = x
    total = x
    k = 0
    while True:
        k += 1
        term *= x2 / k
        contrib = term / (2 * k + 1)
        total += contrib
        if contrib <= 1e-17 * total:
            return _TWO_OVER_SQRT_PI * total


def _erfi_asymptotic(x):
    # exp(x^2)/(x sqrt(pi)) * sum_k (2k-1)!! / (2 x^2)^k, truncated at the smallest term
    inv = 1.0 / (2.0 * x * x)
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        nxt = term * (2 * k - 1) * inv
        if nxt >= term or nxt < 1e-17 * total:
            break
        term = nxt
        total += term
    return math.exp(x * x) / (x * math.sqrt(math.pi)) * total


def erfi(x):
    """Imaginary error function ``(2/sqrt(pi)) * int_0^x exp(s^2) ds``.

    Raises OverflowError when the result is not representable as a double.
    """
    x = finite(x)
    ax = abs(x)
    if ax > _OVERFLOW_X:
        raise OverflowError(f"erfi({x}) overflows double precision")
    if ax < 1e-9:
        # x^3/3 is below the last bit of x
        return _TWO_OVER_SQRT_PI * x
    val = _erfi_series(ax) if ax <= _SERIES_LIMIT else _erfi_asymptotic(ax)
    return math.copysign(val, x)
