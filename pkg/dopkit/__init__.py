# dopkit/__init__.py
"""
dopkit: herramientas exactas (racionales) y numéricas para polinomios
ortogonales de difusión en dos variables con pesos (w1, w2).
"""

from .algdop import BoundarySpec, Cometric, check_A1, check_A2_A3, solve_metric, verify
from .catalog import Bundle, curvature, instantiate, list_entries, singular_points
from .density import DensitySpec, density_family, integrability_constraints
from .errors import DopkitError
from .poly import RatPoly2, Weights
from .spectral import eigenstructure, filtration_invariance, gram_schmidt, spectral_report

__version__ = "1.0.0"

__all__ = [
    "BoundarySpec",
    "Bundle",
    "Cometric",
    "DensitySpec",
    "DopkitError",
    "RatPoly2",
    "Weights",
    "check_A1",
    "check_A2_A3",
    "curvature",
    "density_family",
    "eigenstructure",
    "filtration_invariance",
    "gram_schmidt",
    "instantiate",
    "integrability_constraints",
    "list_entries",
    "singular_points",
    "solve_metric",
    "spectral_report",
    "verify",
]
