"""Potential families, free-particle paths and the normal variational equation.

Every family is described by the function ``2 f(x, 0)`` that multiplies the
transverse displacement in

    xi'' + 2 f(x_E(t), 0) xi = 0,    x_E(t) = x0 + v t,

where ``v = (x1 - x0) / t1`` is the signed velocity of the path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

from .errors import DomainError, SingularCoefficient
from .special import EllipticData, elliptic_setup, wp_shifted


def _real(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be a finite real number, got {value!r}")
    return value


@dataclass(frozen=True)
class Constant:
    """a = 0 reduction: xi'' + omega xi = 0."""

    omega: float
    name = "constant"

    def __post_init__(self):
        object.__setattr__(self, "omega", _real("omega", self.omega))

    def two_f(self, x):
        return self.omega


@dataclass(frozen=True)
class Hermite:
    """2f(x, 0) = 1 - a x^2 (Verhulst-type potentials)."""

    a: float
    name = "hermite"

    def __post_init__(self):
        object.__setattr__(self, "a", _real("a", self.a))
        if self.a == 0.0:
            raise DomainError("Hermite family needs a != 0 (a = 0 is the constant family)")

    def two_f(self, x):
        return 1.0 - self.a * x * x


@dataclass(frozen=True)
class Bessel:
    """2f(x, 0) = b - a / x^2."""

    a: float
    b: float = 0.0
    name = "bessel"

    def __post_init__(self):
        object.__setattr__(self, "a", _real("a", self.a))
        object.__setattr__(self, "b", _real("b", self.b))
        if self.a == 0.0:
            raise DomainError("Bessel family needs a != 0")

    def two_f(self, x):
        if x == 0.0:
            raise SingularCoefficient("Bessel coefficient is singular at x = 0")
        return self.b - self.a / (x * x)


@dataclass(frozen=True)
class Legendre:
    """2f(x, 0) = -b + a / cosh^2 x."""

    a: float
    b: float = 0.0
    name = "legendre"

    def __post_init__(self):
        object.__setattr__(self, "a", _real("a", self.a))
        object.__setattr__(self, "b", _real("b", self.b))
        if self.a == 0.0:
            raise DomainError("Legendre family needs a != 0")

    def two_f(self, x):
        if abs(x) > 350.0:
            return -self.b
        c = math.cosh(x)
        return -self.b + self.a / (c * c)


@dataclass(frozen=True)
class Lame:
    """2f(x, 0) = -b - a wp(x + omega_3) on a real lattice (g2, g3)."""

    a: float
    b: float
    g2: float
    g3: float
    ed: EllipticData = field(init=False, repr=False, compare=False)
    name = "lame"

    def __post_init__(self):
        for key in ("a", "b", "g2", "g3"):
            object.__setattr__(self, key, _real(key, getattr(self, key)))
        if self.a == 0.0:
            raise DomainError("Lame family needs a != 0")
        object.__setattr__(self, "ed", elliptic_setup(self.g2, self.g3))

    def two_f(self, x):
        return -self.b - self.a * wp_shifted(x, self.ed)


FamilySpec = Union[Constant, Hermite, Bessel, Legendre, Lame]

FAMILIES = {cls.name: cls for cls in (Constant, Hermite, Bessel, Legendre, Lame)}


def make_family(name, **params):
    """Build a family from its name and keyword parameters (unknown keys ignored)."""
    try:
        cls = FAMILIES[name.lower()]
    except KeyError:
        raise DomainError(f"unknown family {name!r}; expected one of {sorted(FAMILIES)}") from None
    wanted = {
        Constant: ("omega",),
        Hermite: ("a",),
        Bessel: ("a", "b"),
        Legendre: ("a", "b"),
        Lame: ("a", "b", "g2", "g3"),
    }[cls]
    kwargs = {k: params[k] for k in wanted if params.get(k) is not None}
    missing = [k for k in wanted if k not in kwargs and k != "b"]
    if cls is Lame:
        kwargs.setdefault("b", 0.0)
    if missing:
        raise DomainError(f"{name} family needs parameter(s): {', '.join(missing)}")
    return cls(**kwargs)


def family_params(family):
    """Inverse of make_family: a plain dict of the family's parameters."""
    keys = {
        Constant: ("omega",),
        Hermite: ("a",),
        Bessel: ("a", "b"),
        Legendre: ("a", "b"),
        Lame: ("a", "b", "g2", "g3"),
    }[type(family)]
    return {k: getattr(family, k) for k in keys}


@dataclass(frozen=True)
class PathSpec:
    """Constant-velocity path from (x0, 0) to (x1, t1) on the invariant line y = 0."""

    x0: float
    x1: float
    t1: float

    def __post_init__(self):
        for key in ("x0", "x1", "t1"):
            object.__setattr__(self, key, _real(key, getattr(self, key)))
        if self.t1 <= 0.0:
            raise DomainError("t1 must be positive")
        if self.x1 == self.x0:
            raise DomainError("x1 must differ from x0 (the path needs E > 0)")

    @classmethod
    def from_energy(cls, E, x0, t1, direction=1):
        """Path of energy E starting at x0, moving right (direction > 0) or left."""
        if E <= 0:
            raise DomainError("E must be positive")
        v = math.copysign(math.sqrt(2.0 * E), direction)
        return cls(x0, x0 + v * t1, t1)

    @property
    def velocity(self):
        return (self.x1 - self.x0) / self.t1

    @property
    def energy(self):
        return path_energy(self)

    def position(self, t):
        return self.x0 + self.velocity * t


def path_energy(path):
    """E = (1/2) ((x1 - x0) / t1)^2."""
    v = (path.x1 - path.x0) / path.t1
    return 0.5 * v * v


def check_path(family, path):
    """Reject paths the family cannot support (Bessel: the path must avoid x = 0)."""
    if isinstance(family, Bessel):
        lo, hi = sorted((path.x0, path.x1))
        if lo <= 0.0 <= hi:
            raise SingularCoefficient("Bessel path must not contain x = 0")


def coefficient(family, E, x0, t, direction=1):
    """2 f(x_E(t), 0) with x_E(t) = x0 + sign(direction) sqrt(2E) t."""
    v = math.copysign(math.sqrt(2.0 * E), direction)
    return family.two_f(x0 + v * t)


@dataclass(frozen=True)
class EnergyLevel:
    """An energy with its integer label and the family's reduced parameters."""

    E: float
    index: int | None
    reduced: dict = field(default_factory=dict, compare=False)


def principal_index(q):
    """Root nu >= -1/2 of nu (nu + 1) = q; complex when q < -1/4."""
    disc = 0.25 + q
    if disc >= 0:
        return -0.5 + math.sqrt(disc)
    return complex(-0.5, math.sqrt(-disc))


def reduced_parameters(family, E):
    """Family-specific reduced parameters at energy E.

    Hermite: lambda = 1/sqrt(2 E a). Bessel and Legendre: nu with
    nu(nu+1) = a/(2E) and mu2 = b/(2E). Lame: n with n(n+1) = a/(2E), B = b/(2E).
    """
    if E <= 0:
        raise DomainError("E must be positive")
    if isinstance(family, Constant):
        return {"omega": family.omega}
    if isinstance(family, Hermite):
        prod = 2.0 * E * family.a
        lam = 1.0 / math.sqrt(prod) if prod > 0 else complex(0.0, -1.0 / math.sqrt(-prod))
        return {"lambda": lam}
    q = family.a / (2.0 * E)
    if isinstance(family, (Bessel, Legendre)):
        return {"nu": principal_index(q), "mu2": family.b / (2.0 * E)}
    if isinstance(family, Lame):
        return {"n": principal_index(q), "B": family.b / (2.0 * E)}
    raise DomainError(f"unsupported family {family!r}")


def admissible_energies(family, count):
    """The first ``count`` Liouvillian energies, largest first.

    Families with a <= 0 have no real spectrum and yield an empty list.
    """
    if count <= 0:
        raise DomainError("count must be positive")
    if isinstance(family, Constant):
        raise DomainError("constant family: integrable for every E, there is no discrete spectrum")
    if family.a <= 0:
        return []
    levels = []
    if isinstance(family, Hermite):
        for m in range(count):
            E = 1.0 / (2.0 * family.a * (2 * m + 1) ** 2)
            levels.append(EnergyLevel(E, m, {"lambda": 2 * m + 1}))
        return levels
    for n in range(1, count + 1):
        E = family.a / (2.0 * n * (n + 1))
        if isinstance(family, Lame):
            reduced = {"n": n, "B": n * (n + 1) * family.b / family.a}
        else:
            reduced = {"nu": n, "mu2": family.b / (2.0 * E)}
        levels.append(EnergyLevel(E, n, reduced))
    return levels


@dataclass(frozen=True)
class AffineMap:
    """s = scale * t + offset (+ i * imag_offset)."""

    scale: float
    offset: float
    imag_offset: float = 0.0

    def __call__(self, t):
        return self.scale * t + self.offset


def time_rescale(family, level, x0, direction=1):
    """Affine substitution that turns the variational equation into the family's canonical ODE.

    Hermite: s = (2Ea)^(1/4) (t + x0/v), giving xi_ss = (s^2 - lambda) xi.
    Bessel/Legendre: tau = x_E(t). Lame: tau = x_E(t) + omega_3.
    """
    if isinstance(family, Constant):
        raise DomainError("the constant family has no canonical time change")
    E = level.E
    v = math.copysign(math.sqrt(2.0 * E), direction)
    if isinstance(family, Hermite):
        if family.a <= 0:
            raise DomainError("Hermite rescaling needs a > 0")
        kappa = (2.0 * E * family.a) ** 0.25
        return AffineMap(kappa, kappa * x0 / v)
    if isinstance(family, Lame):
        return AffineMap(v, x0, family.ed.omega3_im)
    return AffineMap(v, x0)


def level_for_path(family, path):
    """EnergyLevel bound to a path: E from the path, index from the reduced parameters."""
    E = path_energy(path)
    reduced = reduced_parameters(family, E)
    index = None
    key = {"hermite": "lambda", "bessel": "nu", "legendre": "nu", "lame": "n"}.get(family.name)
    if key is not None:
        val = reduced[key]
        if isinstance(val, float) and abs(val - round(val)) <= 1e-9 * max(1.0, abs(val)):
            index = int(round(val))
            if key == "lambda":
                index = (index - 1) // 2 if index % 2 == 1 and index > 0 else None
    return EnergyLevel(E, index, reduced)
