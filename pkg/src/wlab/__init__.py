"""Pointwise linear algebra of Weitzenboeck curvature terms on Kaehler and
Riemannian manifolds: exterior algebra, curvature operators, contraction
operators, Lefschetz decomposition, norm estimates and vanishing predictors."""

from .curvature import (BundleCurvature, CurvatureSymmetryError, KaehlerCurvature, RiemCurvature, Spectrum,
                        m_positivity_level)
from .exterior import AlgebraContext, ContextMismatch, DegreeError, PqForm
from .riemannian import RealForm

__all__ = ["AlgebraContext", "BundleCurvature", "ContextMismatch", "CurvatureSymmetryError", "DegreeError",
           "KaehlerCurvature", "PqForm", "RealForm", "RiemCurvature", "Spectrum", "m_positivity_level"]

__version__ = "0.1.0"
