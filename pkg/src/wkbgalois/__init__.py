"""Semiclassical (WKB) propagators around free-particle paths, with closed forms
for the Liouvillian levels of four potential families and an independent ODE oracle."""

from .closedform import closed_form_basis, phi12_closed, phi12_from_basis
from .errors import (
    ClosedFormUnavailable,
    DomainError,
    FocalPointCrossed,
    FocalPointError,
    NotIntegrableError,
    QuadratureError,
    SingularCoefficient,
    WKBError,
)
from .galois import IntegrabilityVerdict, Status, classify
from .oracle import FundamentalMatrix, integrate_fundamental, integrate_fundamental_many, phi12_numeric
from .propagator import PropagatorValue, action, evaluate_phi12, focal_points, kwkb, propagate, van_vleck_det
from .variational import (
    Bessel,
    Constant,
    EnergyLevel,
    Hermite,
    Lame,
    Legendre,
    PathSpec,
    admissible_energies,
    coefficient,
    level_for_path,
    make_family,
    path_energy,
    time_rescale,
)

__version__ = "0.1.0"
