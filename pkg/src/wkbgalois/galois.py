"""Liouvillian (differential Galois) integrability of the variational equation.

Memberships are decided over exact rationals (``fractions.Fraction``). Floating
inputs are snapped to a rational with bounded denominator only when they lie
within a configurable tolerance of it; anything else is treated as irrational
and belongs to none of the rational sets.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

from .variational import Bessel, Constant, Hermite, Lame, Legendre, reduced_parameters

SNAP_TOL = 1e-12
SNAP_MAX_DEN = 1000


class Status(str, enum.Enum):
    INTEGRABLE = "Integrable"
    NON_INTEGRABLE = "NonIntegrable"
    CONDITIONAL = "Conditional"
    INTEGRABLE_ALL_E = "IntegrableAllE"


@dataclass(frozen=True)
class IntegrabilityVerdict:
    status: Status
    case_id: str
    spectrum: str | None = None
    note: str = ""
    params: dict = field(default_factory=dict, compare=False)
    snapped: dict = field(default_factory=dict, compare=False)

    @property
    def integrable(self):
        return self.status in (Status.INTEGRABLE, Status.INTEGRABLE_ALL_E)

    def to_dict(self):
        return {
            "status": self.status.value,
            "case_id": self.case_id,
            "spectrum": self.spectrum,
            "note": self.note,
            "params": {k: _jsonable(v) for k, v in self.params.items()},
            "snapped": {k: _jsonable(v) for k, v in self.snapped.items()},
        }


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else v.numerator
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    return v


def snap(x, tol=SNAP_TOL, max_den=SNAP_MAX_DEN):
    """Exact rational for ``x`` or None when x is complex or not near a small-denominator rational.

    Returns ``(value, was_snapped)``.
    """
    if isinstance(x, Rational):
        return Fraction(x), False
    if isinstance(x, complex):
        if abs(x.imag) > tol * max(1.0, abs(x)):
            return None, False
        x = x.real
    x = float(x)
    if not math.isfinite(x):
        return None, False
    frac = Fraction(x).limit_denominator(max_den)
    if abs(float(frac) - x) <= tol * max(1.0, abs(x)):
        return frac, Fraction(x) != frac
    return None, False


def parse_rational(text):
    """Parse ``p/q``, integers or decimals into an exact Fraction."""
    return Fraction(str(text).strip())


def is_integer(q):
    return q is not None and q.denominator == 1


def in_residues(q, modulus, residues):
    """q in (1/modulus)(modulus*Z + r) for some r in ``residues``."""
    if q is None:
        return False
    k = q * modulus
    if k.denominator != 1:
        return False
    return k.numerator % modulus in residues


# Rational sets appearing in the Legendre table, as (modulus, residues mod modulus).
HALF_ODD = (2, {1})                 # (1/2)(2Z+1)
THIRD_PM1 = (3, {1, 2})             # (1/3)(3Z+-1)
QUARTER_ODD = (4, {1, 3})           # (1/4)(2Z+1)
QUARTER_PM1 = (4, {1, 3})           # (1/4)(4Z+-1)
SIXTH_PM1 = (6, {1, 5})             # (1/6)(6Z+-1)
FIFTH_PM1 = (5, {1, 4})             # (1/5)(5Z+-1)
FIFTH_PM2 = (5, {2, 3})             # (1/5)(5Z+-2)
TENTH_PM3 = (10, {3, 7})            # (1/10)(10Z+-3)
TENTH_PM1 = (10, {1, 9})            # (1/10)(10Z+-1)

ANY = None

LEGENDRE_B_ROWS = (
    (1, HALF_ODD, ANY),
    (2, THIRD_PM1, QUARTER_ODD),
    (3, THIRD_PM1, SIXTH_PM1),
    (4, QUARTER_PM1, SIXTH_PM1),
    (5, THIRD_PM1, TENTH_PM3),
    (6, FIFTH_PM1, SIXTH_PM1),
    (7, FIFTH_PM2, TENTH_PM3),
    (8, FIFTH_PM1, TENTH_PM1),
)


def _member(q, rset):
    if rset is ANY:
        return True
    return in_residues(q, *rset)


def classify_hermite(lam, tol=SNAP_TOL):
    """xi_ss = (s^2 - lambda) xi is Liouvillian iff lambda = 2m + 1, m >= 0."""
    q, snapped = snap(lam, tol)
    params = {"lambda": q if q is not None else lam}
    snaps = {"lambda": q} if snapped else {}
    if is_integer(q) and q > 0 and q.numerator % 2 == 1:
        m = (q.numerator - 1) // 2
        return IntegrabilityVerdict(
            Status.INTEGRABLE,
            f"Hermite lambda=2m+1 (m={m})",
            spectrum="E_m = 1/(2a(2m+1)^2), m = 0, 1, 2, ...",
            params={**params, "m": m},
            snapped=snaps,
        )
    return IntegrabilityVerdict(
        Status.NON_INTEGRABLE,
        "Hermite lambda not odd positive integer",
        spectrum="E_m = 1/(2a(2m+1)^2), m = 0, 1, 2, ...",
        params=params,
        snapped=snaps,
    )


def classify_bessel(nu, mu_zero=False, tol=SNAP_TOL):
    """Normal-form Bessel xi'' = (nu(nu+1)/tau^2 - mu^2) xi.

    With mu != 0 it is Liouvillian iff nu is an integer; nu in {0, -1} is the
    constant-coefficient degenerate. With mu = 0 (Euler-Cauchy) it always is.
    """
    if mu_zero:
        q, snapped = snap(nu, tol)
        case = "Euler-Cauchy log (nu=-1/2)" if q == Fraction(-1, 2) else "Euler-Cauchy"
        return IntegrabilityVerdict(
            Status.INTEGRABLE_ALL_E,
            case,
            spectrum="every E > 0",
            params={"nu": q if q is not None else nu, "mu_zero": True},
            snapped={"nu": q} if snapped else {},
        )
    q, snapped = snap(nu, tol)
    params = {"nu": q if q is not None else nu, "mu_zero": False}
    snaps = {"nu": q} if snapped else {}
    if is_integer(q):
        if q in (0, -1):
            return IntegrabilityVerdict(
                Status.INTEGRABLE_ALL_E, "Bessel constant-coefficient (n=0,-1)",
                spectrum="every E > 0", params=params, snapped=snaps,
            )
        return IntegrabilityVerdict(
            Status.INTEGRABLE, f"Bessel nu=n (n={q.numerator})",
            spectrum="E_n = a/(2n(n+1)), n = 1, 2, ...", params=params, snapped=snaps,
        )
    return IntegrabilityVerdict(
        Status.NON_INTEGRABLE, "Bessel nu not integer",
        spectrum="E_n = a/(2n(n+1)), n = 1, 2, ...", params=params, snapped=snaps,
    )


def _snap_sum(x, y, sign, tol):
    if isinstance(x, Rational) and isinstance(y, Rational):
        return Fraction(x) + sign * Fraction(y)
    if x is None or y is None:
        return None
    return snap(complex(x) + sign * complex(y), tol)[0]


def classify_legendre(m, n, tol=SNAP_TOL):
    """Legendre equation with order m and degree n (Kimura-derived table).

    Case A: exactly one of (1) n in Z, (2) m+n in Z with m, n not in Z,
    (3) m-n in Z with m, n not in Z. Case B: eight paired memberships.
    """
    qm, sm = snap(m, tol)
    qn, sn = snap(n, tol)
    params = {"m": qm if qm is not None else m, "n": qn if qn is not None else n}
    snaps = {}
    if sm:
        snaps["m"] = qm
    if sn:
        snaps["n"] = qn
    m_int, n_int = is_integer(qm), is_integer(qn)
    a_items = [
        n_int,
        (not m_int) and (not n_int) and is_integer(_snap_sum(m, n, 1, tol)),
        (not m_int) and (not n_int) and is_integer(_snap_sum(m, n, -1, tol)),
    ]
    if sum(a_items) == 1:
        k = a_items.index(True) + 1
        return IntegrabilityVerdict(Status.INTEGRABLE, f"Kimura-A-{k}", params=params, snapped=snaps)
    for row, mset, nset in LEGENDRE_B_ROWS:
        if _member(qm, mset) and _member(qn, nset):
            return IntegrabilityVerdict(Status.INTEGRABLE, f"Kimura-B-{row}", params=params, snapped=snaps)
    note = ""
    case = "Kimura-none"
    if m_int and not n_int:
        case = "Kimura-none (A-boundary)"
        note = "m in Z, n not in Z: excluded by case A items 2-3 and by every case B row"
    return IntegrabilityVerdict(Status.NON_INTEGRABLE, case, note=note, params=params, snapped=snaps)


def classify_lame(n, B=None, ed=None, tol=SNAP_TOL):
    """Lame equation y'' = (n(n+1) wp + B) y.

    n in N: Lame/Hermite-Halphen (integrable). n + 1/2 in N: Brioschi-Halphen-
    Crawford, and n + 1/2 in (Z/3 u Z/4 u Z/5) minus Z: Baldassarri; the
    algebraic side conditions of the last two are not decided (Conditional).
    """
    q, snapped = snap(n, tol)
    if q is not None and q < Fraction(-1, 2):
        q = -q - 1  # n and -n-1 give the same equation
    params = {"n": q if q is not None else n}
    if B is not None:
        params["B"] = B
    snaps = {"n": q} if snapped else {}
    if is_integer(q) and q == 0:
        return IntegrabilityVerdict(Status.INTEGRABLE_ALL_E, "Lame n=0 constant-coefficient",
                                    params=params, snapped=snaps)
    if is_integer(q) and q >= 1:
        note = ""
        if q == 1 and B is not None and ed is not None:
            hB = ed.h(B)
            params["h(B)"] = hB
            if abs(hB) <= 1e-12 * max(1.0, abs(B) ** 3):
                note = "degenerate: h(B) = 0, the n=1 closed form does not apply"
        return IntegrabilityVerdict(
            Status.INTEGRABLE, "Lame-Hermite-Halphen",
            spectrum="E_n = a/(2n(n+1)), B_n = n(n+1) b/a", note=note, params=params, snapped=snaps,
        )
    half = q + Fraction(1, 2) if q is not None else None
    if is_integer(half) and half >= 1:
        return IntegrabilityVerdict(
            Status.CONDITIONAL, "Lame-Brioschi-Halphen-Crawford",
            note="n + 1/2 in N; the additional algebraic conditions are not decided here",
            params=params, snapped=snaps,
        )
    if half is not None and not is_integer(half) and any((half * d).denominator == 1 for d in (3, 4, 5)):
        return IntegrabilityVerdict(
            Status.CONDITIONAL, "Lame-Baldassarri",
            note="n + 1/2 in Z/3, Z/4 or Z/5 (not Z); the further conditions are not decided here",
            params=params, snapped=snaps,
        )
    return IntegrabilityVerdict(Status.NON_INTEGRABLE, "Lame none", params=params, snapped=snaps)


def classify(family, E, tol=SNAP_TOL):
    """Integrability of the variational equation of ``family`` at energy E."""
    if isinstance(family, Constant):
        return IntegrabilityVerdict(
            Status.INTEGRABLE_ALL_E, "constant-coefficient", spectrum="every E > 0",
            params={"omega": family.omega},
        )
    red = reduced_parameters(family, E)
    if isinstance(family, Hermite):
        if family.a < 0:
            return IntegrabilityVerdict(
                Status.NON_INTEGRABLE, "Hermite a<0 (empty spectrum)",
                note="lambda is imaginary for a < 0", params={"a": family.a},
            )
        return classify_hermite(red["lambda"], tol)
    if isinstance(family, Bessel):
        return classify_bessel(red["nu"], mu_zero=(family.b == 0.0), tol=tol)
    if isinstance(family, Legendre):
        mu2 = red["mu2"]
        mu = math.sqrt(mu2) if mu2 >= 0 else complex(0.0, math.sqrt(-mu2))
        return classify_legendre(mu, red["nu"], tol)
    if isinstance(family, Lame):
        return classify_lame(red["n"], red["B"], family.ed, tol)
    raise TypeError(f"unsupported family {family!r}")
