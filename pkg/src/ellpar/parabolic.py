"""Parabolic stability: weights, chambers, flags, the stability oracle,
the Sigma/U-generic locus classifier, flag normalization and the flip map.

A parabolic structure on a rank-3 bundle is a full flag (point P on line L)
in the normalized fiber plane plus a descending weight triple summing to 0.
Stability is decided by brute force over the class's degree-0 subbundle
configuration: each subbundle induces a parabolic degree determined purely by
the incidence of its fiber locus with the flag, and the bundle is stable iff
the maximum induced degree is negative.  Weight triples given exactly
(int / Fraction / decimal string) are processed in exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Optional, Union

import numpy as np

from .bundles import BundleClass, LineLocus, PointLocus, subbundle_config
from .weierstrass import PlaneLine, PlanePoint, lines_meet

Scalar = Union[Fraction, float]

INCIDENCE_TOL = 1e-9


class InadmissibleWeightsError(ValueError):
    pass


class FlagIncidenceError(ValueError):
    pass


class NotStableError(ValueError):
    """The flag is not stable in the requested chamber; no gauge exists."""


def _exactify(x) -> Scalar:
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return x
    return Fraction(x)


@dataclass(frozen=True)
class Weights:
    mu1: Scalar
    mu2: Scalar
    mu3: Scalar

    def __post_init__(self):
        if not (self.mu1 >= self.mu2 >= self.mu3):
            raise InadmissibleWeightsError("weights must be sorted descending")
        if self.mu1 - self.mu3 >= 1:
            raise InadmissibleWeightsError("weight spread must be < 1")
        s = self.mu1 + self.mu2 + self.mu3
        if abs(s) > 1e-12:
            raise InadmissibleWeightsError(f"weights must sum to 0, got {s}")

    def as_tuple(self) -> tuple[Scalar, Scalar, Scalar]:
        return (self.mu1, self.mu2, self.mu3)


CHAMBER_MINUS = "Pminus"
CHAMBER_PLUS = "Pplus"
CHAMBER_WALL = "Wall"

# fixed probe weights, rational and comfortably interior to each chamber
PROBE_MINUS = Weights(Fraction(2, 10), Fraction(-1, 10), Fraction(-1, 10))
PROBE_PLUS = Weights(Fraction(2, 10), Fraction(1, 10), Fraction(-3, 10))
PROBE_WALL = Weights(Fraction(1, 3), Fraction(0), Fraction(-1, 3))


def chamber_of(w: Weights) -> str:
    if w.mu2 > 0:
        return CHAMBER_PLUS
    if w.mu2 < 0:
        return CHAMBER_MINUS
    return CHAMBER_WALL


def make_weights(raw1, raw2, raw3) -> tuple[Weights, str]:
    """Shift by the mean so the sum is 0, sort descending, classify the chamber."""
    vals = [_exactify(raw1), _exactify(raw2), _exactify(raw3)]
    shift = sum(vals) / 3
    vals = sorted((v - shift for v in vals), reverse=True)
    w = Weights(*vals)
    return w, chamber_of(w)


@dataclass(frozen=True)
class Flag:
    P: PlanePoint
    L: PlaneLine

    def __post_init__(self):
        if not _on(self.P, self.L):
            raise FlagIncidenceError(f"flag point {self.P} not on flag line {self.L}")


@dataclass(frozen=True)
class Witness:
    """Destabilizing / equalizing degree-0 subbundle, by its fiber locus."""

    rank: int
    locus: Union[PlanePoint, PlaneLine]
    pardeg: Scalar


@dataclass(frozen=True)
class Verdict:
    status: str  # Stable | StrictlySemistable | Unstable
    witness: Optional[Witness] = None


def _on(p: PlanePoint, l: PlaneLine, tol: float = INCIDENCE_TOL) -> bool:
    val = p.x * l.u + p.y * l.v + p.z * l.w
    scale = max(abs(p.x), abs(p.y), abs(p.z)) * max(abs(l.u), abs(l.v), abs(l.w))
    return abs(val) <= tol * max(scale, 1e-30)


def induced_pardeg(sub: Union[PlanePoint, PlaneLine], flag: Flag, w: Weights) -> Scalar:
    """Parabolic degree induced on a degree-0 subbundle by flag incidence."""
    if isinstance(sub, PlanePoint):
        if sub.close_to(flag.P):
            return w.mu1
        if _on(sub, flag.L):
            return w.mu2
        return w.mu3
    if isinstance(sub, PlaneLine):
        if sub.close_to(flag.L):
            return w.mu1 + w.mu2
        if _on(flag.P, sub):
            return w.mu1 + w.mu3
        return w.mu2 + w.mu3
    raise TypeError(f"sub must be a fiber point or line, got {type(sub)}")


def _line_through_pair(p: PlanePoint, q: PlanePoint) -> PlaneLine:
    a = np.cross(np.array([p.x, p.y, p.z]), np.array([q.x, q.y, q.z]))
    return PlaneLine.of(*a)


def _worst_point_member(loc: PointLocus, flag: Flag) -> PlanePoint:
    if loc.dim == 0:
        return loc.point
    if loc.dim == 1:
        # members sweep loc.sweep; the worst one is P itself if available,
        # otherwise the member sitting on the flag line
        if _on(flag.P, loc.sweep):
            return flag.P
        return lines_meet(loc.sweep, flag.L)
    return flag.P  # dim 2: every fiber point occurs


def _worst_line_member(loc: LineLocus, flag: Flag) -> PlaneLine:
    if loc.dim == 0:
        return loc.line
    if loc.dim == 1:
        # members form the pencil through loc.pencil
        if _on(loc.pencil, flag.L):
            return flag.L
        return _line_through_pair(loc.pencil, flag.P)
    return flag.L  # dim 2: every line occurs


def stability(cls: BundleClass, flag: Flag, w: Weights) -> Verdict:
    """Brute-force maximum of induced parabolic degree over all degree-0 subbundles."""
    cfg = subbundle_config(cls)
    best: Optional[Witness] = None
    for loc in cfg.rank1:
        member = _worst_point_member(loc, flag)
        d = induced_pardeg(member, flag, w)
        if best is None or d > best.pardeg:
            best = Witness(1, member, d)
    for loc in cfg.rank2:
        member = _worst_line_member(loc, flag)
        d = induced_pardeg(member, flag, w)
        if d > best.pardeg:
            best = Witness(2, member, d)
    if best.pardeg < 0:
        return Verdict("Stable")
    if best.pardeg == 0:
        return Verdict("StrictlySemistable", best)
    return Verdict("Unstable", best)


LOCUS_UGEN = "Ugen"
LOCUS_SIGMA_MINUS = "SigmaMinus"
LOCUS_SIGMA_PLUS = "SigmaPlus"
LOCUS_NEITHER = "Neither"


def locus(cls: BundleClass, flag: Flag) -> str:
    """Ugen / SigmaMinus / SigmaPlus / Neither, by probing both chambers."""
    minus = stability(cls, flag, PROBE_MINUS).status == "Stable"
    plus = stability(cls, flag, PROBE_PLUS).status == "Stable"
    if minus and plus:
        return LOCUS_UGEN
    if minus:
        return LOCUS_SIGMA_MINUS
    if plus:
        return LOCUS_SIGMA_PLUS
    return LOCUS_NEITHER


@dataclass(frozen=True)
class ProjScalar:
    """A point of P^1 as a (num, den) pair; den = 0 encodes infinity."""

    num: complex
    den: complex

    def __post_init__(self):
        n, d = complex(self.num), complex(self.den)
        if n == 0 and d == 0:
            raise ValueError("(0, 0) is not a projective scalar")
        # canonical scale: den = 1 when finite, (1, 0) at infinity
        if d == 0:
            n, d = 1.0 + 0j, 0j
        else:
            n, d = n / d, 1.0 + 0j
        object.__setattr__(self, "num", n)
        object.__setattr__(self, "den", d)

    @property
    def is_inf(self) -> bool:
        return self.den == 0

    def value(self) -> complex:
        if self.is_inf:
            raise ZeroDivisionError("infinite projective scalar")
        return self.num

    def close_to(self, other: "ProjScalar", tol: float = 1e-9) -> bool:
        # chordal comparison, well-behaved at infinity
        cross = self.num * other.den - other.num * self.den
        na = abs(self.num) ** 2 + abs(self.den) ** 2
        nb = abs(other.num) ** 2 + abs(other.den) ** 2
        return abs(cross) <= tol * np.sqrt(na * nb)

    def __repr__(self):
        return "ProjScalar(inf)" if self.is_inf else f"ProjScalar({self.num:.6g})"


PROJ_INF = ProjScalar(1, 0)


def flip(t: ProjScalar) -> ProjScalar:
    """The fiberwise involution lambda = t/(t-1); fixes 0 and 2, swaps 1 and inf."""
    return ProjScalar(t.num, t.num - t.den)


# gauge groups preserving the subbundle configuration, per class type:
# T1: diagonal; T21: upper-triangular 2-block + scalar; T31: unipotent Toeplitz.


def _gauge_to_standard_point(cls: BundleClass, P: PlanePoint) -> np.ndarray:
    """Element of the class's gauge group sending P to [1:1:1]."""
    p1, p2, p3 = P.x, P.y, P.z
    lab = cls.label
    if lab == "T1":
        if abs(p1 * p2 * p3) < 1e-12:
            raise NotStableError("flag point on a coordinate line; no diagonal gauge")
        return np.diag([1 / p1, 1 / p2, 1 / p3]).astype(complex)
    if lab == "T21":
        if abs(p2 * p3) < 1e-12:
            raise NotStableError("flag point on a preserved line; no gauge")
        a = 1 / p2
        c = 1 / p3
        b = (1 - a * p1) / p2
        return np.array([[a, b, 0], [0, a, 0], [0, 0, c]], dtype=complex)
    if lab == "T31":
        if abs(p3) < 1e-12:
            raise NotStableError("flag point on the preserved line; no gauge")
        a = 1 / p3
        b = (1 - a * p2) / p3
        c = (1 - a * p1 - b * p2) / p3
        return np.array([[a, b, c], [0, a, b], [0, 0, a]], dtype=complex)
    raise NotStableError(f"type {lab} admits no stable parabolic structure")


def _gauge_to_standard_line(cls: BundleClass, L: PlaneLine) -> np.ndarray:
    """Element g of the gauge group with (1,1,-1) . g proportional to L."""
    u, v, w = L.u, L.v, L.w
    lab = cls.label
    if lab == "T1":
        if abs(u * v * w) < 1e-12:
            raise NotStableError("flag line through a fixed point; no diagonal gauge")
        return np.diag([u, v, -w]).astype(complex)
    if lab == "T21":
        if abs(u * w) < 1e-12:
            raise NotStableError("flag line through a fixed point; no gauge")
        a, b, c = u, v - u, -w
        return np.array([[a, b, 0], [0, a, 0], [0, 0, c]], dtype=complex)
    if lab == "T31":
        if abs(u) < 1e-12:
            raise NotStableError("flag line through the fixed point; no gauge")
        a, b, c = u, v - u, w - v + 2 * u
        return np.array([[a, b, c], [0, a, b], [0, 0, a]], dtype=complex)
    raise NotStableError(f"type {lab} admits no stable parabolic structure")


def apply_gauge(g: np.ndarray, flag: Flag) -> Flag:
    """Transform a flag by a fiber gauge: points by g, lines by g^{-1} on the right."""
    gi = np.linalg.inv(g)
    P = PlanePoint.of(*(g @ np.array([flag.P.x, flag.P.y, flag.P.z])))
    L = PlaneLine.of(*(np.array([flag.L.u, flag.L.v, flag.L.w]) @ gi))
    return Flag(P, L)


def normalize_flag(cls: BundleClass, flag: Flag, chamber: str) -> tuple[ProjScalar, np.ndarray]:
    """Fiber coordinate of a stable flag in the given chamber, plus the gauge used.

    Pminus: the gauge moves P to [1:1:1]; the coordinate is the slope t of the
    image line written as {Z2 - t Z1 = (1 - t) Z3}.  Pplus: the gauge moves L
    to {Z1 + Z2 = Z3}; the coordinate is lambda with image P = [lambda : 1-lambda : 1].
    """
    probe = PROBE_MINUS if chamber == CHAMBER_MINUS else PROBE_PLUS
    if chamber not in (CHAMBER_MINUS, CHAMBER_PLUS):
        raise ValueError(f"chamber must be {CHAMBER_MINUS} or {CHAMBER_PLUS}")
    if stability(cls, flag, probe).status != "Stable":
        raise NotStableError(f"flag is not stable in chamber {chamber}")
    if chamber == CHAMBER_MINUS:
        g = _gauge_to_standard_point(cls, flag.P)
        img = apply_gauge(g, flag)
        # image line has coefficient sum 0 (it passes through [1:1:1]);
        # {Z2 - t Z1 = (1-t) Z3} has coefficients (-t, 1, t-1)
        t = ProjScalar(-img.L.u, img.L.v)
        return t, g
    g = _gauge_to_standard_line(cls, flag.L)
    img = apply_gauge(g, flag)
    lam = ProjScalar(img.P.x, img.P.z)
    return lam, g
