"""Exact flag Hilbert-Poincare series, zeta functions and Coxeter tree formulas
for hyperplane arrangements."""

from __future__ import annotations

from .algebra import GeometricSeries, MultiPoly, PoleError
from .arrangement import Arrangement, Field, LinearForm, parse_text, read_arrangement
from .catalogue import by_name, poset_by_name
from .flagseries import analytic_zeta, cfhp, fhp, reciprocity_check
from .poset import IntersectionPoset, build_poset
from .topzeta import top_zeta_multivariate, top_zeta_univariate

__version__ = "0.1.0"

__all__ = [
    "Arrangement",
    "Field",
    "GeometricSeries",
    "IntersectionPoset",
    "LinearForm",
    "MultiPoly",
    "PoleError",
    "analytic_zeta",
    "build_poset",
    "by_name",
    "cfhp",
    "fhp",
    "parse_text",
    "poset_by_name",
    "read_arrangement",
    "reciprocity_check",
    "top_zeta_multivariate",
    "top_zeta_univariate",
]
