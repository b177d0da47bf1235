"""Exception hierarchy shared by every module of the package."""


class WKBError(Exception):
    """Base class for all package errors."""


class DomainError(WKBError, ValueError):
    """An argument lies outside the domain of the requested computation."""


class QuadratureError(WKBError):
    """Adaptive quadrature did not converge: singular or non-smooth integrand."""


class SingularCoefficient(WKBError):
    """The variational coefficient is singular on the integration interval."""


class NotIntegrableError(WKBError):
    """A closed form was requested for a level the classifier rejects.

    The offending verdict is kept on ``self.verdict``.
    """

    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict


class ClosedFormUnavailable(WKBError):
    """The level is integrable but no closed form is implemented (or safe) here."""


class FocalPointError(WKBError):
    """phi12 vanishes at t1: the semiclassical prefactor is undefined."""


class FocalPointCrossed(FocalPointError):
    """det J <= 0: the path has crossed a focal point (Maslov phase out of scope)."""
