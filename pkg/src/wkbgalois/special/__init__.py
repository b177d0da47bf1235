"""Special functions used by the closed-form propagators."""

from .bessel import bessel_half, bessel_half_pair
from .elliptic import EllipticData, agm, ellipk, elliptic_setup, jacobi_sncndn, wp_shifted, wp_shifted_deriv
from .errorfunc import erfi
from .polynomials import (
    Polynomial,
    hermite_poly,
    hermite_residual,
    legendre_p,
    legendre_p_deriv,
    legendre_q,
    legendre_q_deriv,
)
from .quadrature import DEFAULT_TOL, integrate

__all__ = [
    "DEFAULT_TOL",
    "EllipticData",
    "Polynomial",
    "agm",
    "bessel_half",
    "bessel_half_pair",
    "ellipk",
    "elliptic_setup",
    "erfi",
    "hermite_poly",
    "hermite_residual",
    "integrate",
    "jacobi_sncndn",
    "legendre_p",
    "legendre_p_deriv",
    "legendre_q",
    "legendre_q_deriv",
    "wp_shifted",
    "wp_shifted_deriv",
]
