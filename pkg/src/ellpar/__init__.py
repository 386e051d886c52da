"""Computational models for moduli of rank-3 trivial-determinant parabolic
bundles on elliptic curves: Jacobian arithmetic, the Weierstrass plane model,
the six-type bundle classification, monodromy normal forms, the parabolic
stability oracle, moduli-space charts, and the order-18 modular automorphism
group, plus a JSON command-line interface.
"""

from .jaclattice import CurveSpec, JacPoint
from .weierstrass import PlaneLine, PlanePoint
from .bundles import BundleClass
from .parabolic import Flag, ProjScalar, Verdict, Weights

__all__ = [
    "CurveSpec", "JacPoint", "PlaneLine", "PlanePoint",
    "BundleClass", "Flag", "ProjScalar", "Verdict", "Weights",
]

__version__ = "0.1.0"
