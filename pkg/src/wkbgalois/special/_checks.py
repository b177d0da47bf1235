import math

from ..errors import DomainError


def finite(x, name="x"):
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x!r}")
    return x
