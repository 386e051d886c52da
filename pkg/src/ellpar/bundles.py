"""Six-type classification of semistable rank-3 trivial-determinant bundles.

A bundle class is encoded by a type label T1, T21, T22, T31, T32, T33 plus
the defining Jacobian data: a zero-sum triple of distinct points for T1, a
point z with 3z != 0 for T21/T22 (the graded triple is {-2z, z, z}), and a
3-torsion point for T31/T32/T33.

S-equivalence classes are canonically represented by the T1/T21/T31
representative, the one admitting stable parabolic structures; T22/T32/T33
are constructible explicitly for never-stable testing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import jaclattice as jl
from .jaclattice import CurveSpec, JacPoint
from .weierstrass import PlaneLine, PlanePoint, line_through

LABELS = ("T1", "T21", "T22", "T31", "T32", "T33")

# fiber-plane normalization shared by all types (coordinates Z1, Z2, Z3)
E1 = PlanePoint.of(1, 0, 0)
E2 = PlanePoint.of(0, 1, 0)
E3 = PlanePoint.of(0, 0, 1)
LINE_Z1 = PlaneLine.of(1, 0, 0)
LINE_Z2 = PlaneLine.of(0, 1, 0)
LINE_Z3 = PlaneLine.of(0, 0, 1)


@dataclass(frozen=True)
class BundleClass:
    label: str
    # T1: canonical (sorted) zero-sum triple; others: single defining point
    triple: Optional[tuple[JacPoint, JacPoint, JacPoint]] = None
    point: Optional[JacPoint] = None

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"unknown label {self.label}")
        if self.label == "T1":
            if self.triple is None or self.point is not None:
                raise ValueError("T1 carries a triple")
        else:
            if self.point is None or self.triple is not None:
                raise ValueError(f"{self.label} carries a single point")

    @property
    def curve(self) -> CurveSpec:
        return (self.triple[0] if self.triple else self.point).curve

    def __repr__(self):
        data = self.triple if self.triple else self.point
        return f"BundleClass({self.label}, {data})"


@dataclass(frozen=True)
class PointLocus:
    """A family of degree-0 line subbundles seen in the fiber plane.

    dim 0: the isolated point; dim 1: a pencil of points sweeping ``sweep``;
    dim 2: every point of the plane.
    """

    dim: int
    point: Optional[PlanePoint] = None
    sweep: Optional[PlaneLine] = None


@dataclass(frozen=True)
class LineLocus:
    """A family of degree-0 rank-2 subbundles seen as lines in the fiber plane.

    dim 0: the isolated line; dim 1: the pencil of lines through ``pencil``;
    dim 2: every line.
    """

    dim: int
    line: Optional[PlaneLine] = None
    pencil: Optional[PlanePoint] = None


@dataclass(frozen=True)
class SubbundleConfig:
    rank1: tuple[PointLocus, ...]
    rank2: tuple[LineLocus, ...]


def classify_triple(z1: JacPoint, z2: JacPoint, z3: JacPoint,
                    tol: float = 1e-6) -> BundleClass:
    """Classify a zero-sum triple of Jacobian points into T1 / T21 / T31.

    The representative convention picks the class admitting stable parabolic
    structures: all distinct -> T1, exactly two equal -> T21, all equal -> T31.
    """
    total = jl.add(jl.add(z1, z2), z3)
    if not total.is_zero(tol=tol):
        raise ValueError("triple does not sum to zero in the Jacobian")
    pts = [jl.canon(z, z1.curve) for z in (z1, z2, z3)]
    e12 = jl.equal(pts[0], pts[1], tol=tol)
    e13 = jl.equal(pts[0], pts[2], tol=tol)
    e23 = jl.equal(pts[1], pts[2], tol=tol)
    neq = sum((e12, e13, e23))
    if neq == 0:
        return BundleClass("T1", triple=tuple(jl.canonical_sort(pts)))
    if neq >= 2:
        # numerically, all three coincide; snap to the nearest 3-torsion class
        z = pts[0]
        if not jl.mul(3, z).is_zero(tol=1e-4):
            raise ValueError("coincident triple is not 3-torsion")
        z = _snap_to_torsion(z, 3)
        return BundleClass("T31", point=z)
    if e12:
        z = pts[0]
    elif e13:
        z = pts[0]
    else:
        z = pts[1]
    return BundleClass("T21", point=z)


def _snap_to_torsion(p: JacPoint, n: int) -> JacPoint:
    from fractions import Fraction
    s, t = p.coords()
    return JacPoint(p.curve, s=Fraction(round(s * n) % n, n), t=Fraction(round(t * n) % n, n))


def make_t1(z1: JacPoint, z2: JacPoint, z3: JacPoint) -> BundleClass:
    return classify_triple(z1, z2, z3)


def make_t21(z: JacPoint) -> BundleClass:
    if jl.mul(3, z).is_zero():
        raise ValueError("T21 requires 3z != 0")
    return BundleClass("T21", point=jl.canon(z, z.curve))


def make_t22(z: JacPoint) -> BundleClass:
    if jl.mul(3, z).is_zero():
        raise ValueError("T22 requires 3z != 0")
    return BundleClass("T22", point=jl.canon(z, z.curve))


def make_t3x(label: str, z: JacPoint) -> BundleClass:
    if not jl.mul(3, z).is_zero(tol=1e-6):
        raise ValueError(f"{label} requires a 3-torsion point")
    return BundleClass(label, point=_snap_to_torsion(z, 3))


def graded(cls: BundleClass) -> tuple[JacPoint, JacPoint, JacPoint]:
    """The Jordan-Hoelder graded triple; always sums to 0."""
    if cls.label == "T1":
        return cls.triple
    z = cls.point
    if cls.label in ("T21", "T22"):
        return tuple(jl.canonical_sort([jl.neg(jl.mul(2, z)), z, z]))
    return (z, z, z)


def tu_line(cls: BundleClass, curve: CurveSpec) -> PlaneLine:
    """The line in the dual plane attached to the S-class by Tu's bijection."""
    g = graded(cls)
    return line_through(g[0], g[1], g[2], curve)


def subbundle_config(cls: BundleClass) -> SubbundleConfig:
    """Degree-0 subbundle loci in the normalized fiber plane, per type."""
    lab = cls.label
    if lab == "T1":
        return SubbundleConfig(
            rank1=(PointLocus(0, point=E1), PointLocus(0, point=E2), PointLocus(0, point=E3)),
            rank2=(LineLocus(0, line=LINE_Z1), LineLocus(0, line=LINE_Z2), LineLocus(0, line=LINE_Z3)),
        )
    if lab == "T21":
        # L^{-2} at [0:0:1], L at [1:0:0]; E2 x L is {Z3=0}, L^{-2}+L is {Z2=0}
        return SubbundleConfig(
            rank1=(PointLocus(0, point=E3), PointLocus(0, point=E1)),
            rank2=(LineLocus(0, line=LINE_Z3), LineLocus(0, line=LINE_Z2)),
        )
    if lab == "T22":
        # the two equal factors sweep the line {Z3=0}; L^{-2} sits at [0:0:1]
        return SubbundleConfig(
            rank1=(PointLocus(0, point=E3), PointLocus(1, sweep=LINE_Z3)),
            rank2=(LineLocus(0, line=LINE_Z3), LineLocus(1, pencil=E3)),
        )
    if lab == "T31":
        return SubbundleConfig(
            rank1=(PointLocus(0, point=E1),),
            rank2=(LineLocus(0, line=LINE_Z3),),
        )
    if lab == "T32":
        return SubbundleConfig(
            rank1=(PointLocus(1, sweep=LINE_Z3),),
            rank2=(LineLocus(0, line=LINE_Z3), LineLocus(1, pencil=E1)),
        )
    # T33
    return SubbundleConfig(
        rank1=(PointLocus(2),),
        rank2=(LineLocus(2),),
    )


_ENDO_DIM = {"T1": 3, "T21": 3, "T22": 5, "T31": 3, "T32": 4, "T33": 9}
_SIGMA_COUNT = {"T1": 3, "T21": 2, "T31": 1}


def type_facts(label: str) -> tuple[int, bool, Optional[int]]:
    """(endomorphism dimension, admits stable parabolic structure, Sigma fiber count)."""
    if label not in LABELS:
        raise ValueError(f"unknown label {label}")
    return (_ENDO_DIM[label], label in _SIGMA_COUNT, _SIGMA_COUNT.get(label))
