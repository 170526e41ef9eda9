"""
Error types for the geometry package.

Every error raised by a geometric operation derives from ``GeometryError`` so
callers (CLI, API, classifier) can tell mathematical failures apart from
programming errors.
"""

from typing import Any, Dict


class GeometryError(ValueError):
    """Base class for all domain errors"""

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.details: Dict[str, Any] = details

    def to_dict(self) -> Dict[str, Any]:
        return {"error": type(self).__name__, "message": str(self), **self.details}


class OutsideDomain(GeometryError):
    """Point is not inside the model domain (rho0 <= 0 or |z| >= 1)"""


class PoleAtBoundary(GeometryError):
    """A rational map was evaluated on its polar set"""


class SingularJacobian(GeometryError):
    """Jacobian determinant vanishes where a biholomorphism was expected"""


class NotConstantNorm(GeometryError):
    """Sampled differential norms of a potential disagree"""

    def __init__(self, message: str, estimate: float, spread: float):
        super().__init__(message, estimate=estimate, spread=spread)
        self.estimate = estimate
        self.spread = spread


class NotPolynomial(GeometryError):
    """Sampled vector field is not a polynomial field of degree <= 2"""

    def __init__(self, message: str, residual: float):
        super().__init__(message, residual=residual)
        self.residual = residual


class DegreeOverflow(GeometryError):
    """A bracket produced cubic terms"""


class NotGraded(GeometryError):
    """Field is not an eigenvector of ad_D"""


class NotInAlgebra(GeometryError):
    """Field is not a real combination of the aut(H^n) basis"""

    def __init__(self, message: str, residual: float, imag_max: float = 0.0):
        super().__init__(message, residual=residual, imag_max=imag_max)
        self.residual = residual
        self.imag_max = imag_max


class SingularSystem(GeometryError):
    """The shift system has no unique solution (a = 0)"""


class UnsupportedTag(GeometryError):
    """No closed-form flow exists for this basis tag"""


class Degenerate(GeometryError):
    """Projective matrix is singular or cannot be normalized"""


__all__ = [
    "GeometryError",
    "OutsideDomain",
    "PoleAtBoundary",
    "SingularJacobian",
    "NotConstantNorm",
    "NotPolynomial",
    "DegreeOverflow",
    "NotGraded",
    "NotInAlgebra",
    "SingularSystem",
    "UnsupportedTag",
    "Degenerate",
]
