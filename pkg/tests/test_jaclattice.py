import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellpar import jaclattice as jl
from ellpar.jaclattice import CurveSpec, JacPoint

from conftest import TAU, exact

fractions = st.fractions(min_value=-3, max_value=3, max_denominator=24)
small_complex = st.builds(complex,
                          st.floats(-2, 2, allow_nan=False),
                          st.floats(-2, 2, allow_nan=False))


def test_curve_requires_upper_half_plane():
    with pytest.raises(ValueError):
        CurveSpec(1.0 - 0.5j)
    with pytest.raises(ValueError):
        CurveSpec(2.0)
    assert CurveSpec(TAU).tau == TAU


def test_point_representation_is_exclusive(curve):
    with pytest.raises(ValueError):
        JacPoint(curve, s=Fraction(1, 2))
    with pytest.raises(ValueError):
        JacPoint(curve, s=Fraction(1, 2), t=Fraction(0), z=0.1 + 0.1j)
    with pytest.raises(ValueError):
        JacPoint(curve)


def test_canon_reduces_to_fundamental_domain(curve):
    p = jl.canon((Fraction(7, 5), Fraction(-1, 7)), curve)
    assert p.s == Fraction(2, 5) and p.t == Fraction(6, 7)
    q = jl.canon(3.7 + 2.9 * curve.tau, curve)
    s, t = q.coords()
    assert 0 <= s < 1 and 0 <= t < 1


@given(s1=fractions, t1=fractions, s2=fractions, t2=fractions)
def test_group_law_exact_commutative_associative(s1, t1, s2, t2):
    curve = CurveSpec(TAU)
    p = jl.canon((s1, t1), curve)
    q = jl.canon((s2, t2), curve)
    assert jl.equal(jl.add(p, q), jl.add(q, p))
    assert jl.add(p, jl.neg(p)).is_zero()
    assert jl.equal(jl.sub(jl.add(p, q), q), p)


@given(s=fractions, t=fractions, k=st.integers(-5, 5))
def test_mul_matches_repeated_addition(s, t, k):
    curve = CurveSpec(TAU)
    p = jl.canon((s, t), curve)
    acc = jl.zero(curve)
    for _ in range(abs(k)):
        acc = jl.add(acc, p)
    if k < 0:
        acc = jl.neg(acc)
    assert jl.equal(jl.mul(k, p), acc)


@given(z=small_complex)
def test_exact_and_approx_agree(z):
    curve = CurveSpec(TAU)
    p = jl.canon(z, curve)
    s, t = p.coords()
    q = jl.canon(complex(s + t * curve.tau), curve)
    assert jl.equal(p, q, tol=1e-9)


def test_equal_handles_wraparound(curve):
    a = jl.canon(1e-12 + 0j, curve)
    b = jl.canon((1 - 1e-12) + 0j, curve)
    assert jl.equal(a, b, tol=1e-9)
    assert jl.equal(a, jl.zero(curve).approx(), tol=1e-9)


def test_torsion_points_count_and_exactness(curve):
    pts = jl.torsion_points(3, curve)
    assert len(pts) == 9
    assert all(p.is_exact for p in pts)
    assert all(jl.mul(3, p).is_zero() for p in pts)
    # pairwise distinct
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            assert not jl.equal(p, q)


def test_curve_mismatch_raises(curve):
    other = CurveSpec(2j)
    with pytest.raises(jl.CurveMismatchError):
        jl.add(jl.zero(curve), jl.zero(other))


def test_from_holonomy_known_values(curve):
    # b = e^{2 pi i / 3}, a = 1 -> the 3-torsion point (1/3, 0)
    p = jl.from_holonomy(1.0, cmath.exp(2j * math.pi / 3), curve)
    assert jl.equal(p, exact(curve, Fraction(1, 3), 0), tol=1e-12)
    # a = e^{-2 pi i t}, b = e^{2 pi i s} -> (s, t)
    target = exact(curve, Fraction(1, 5), Fraction(1, 7))
    a = cmath.exp(-2j * math.pi / 7)
    b = cmath.exp(2j * math.pi / 5)
    assert jl.equal(jl.from_holonomy(a, b, curve), target, tol=1e-12)


@given(z1=small_complex, z2=small_complex)
@settings(max_examples=50)
def test_from_holonomy_is_multiplicative(z1, z2):
    curve = CurveSpec(TAU)
    a1, b1 = cmath.exp(z1), cmath.exp(z2)
    a2, b2 = cmath.exp(0.3 * z2 - 0.1), cmath.exp(0.7 * z1 + 0.2j)
    lhs = jl.from_holonomy(a1 * a2, b1 * b2, curve)
    rhs = jl.add(jl.from_holonomy(a1, b1, curve), jl.from_holonomy(a2, b2, curve))
    assert jl.equal(lhs, rhs, tol=1e-9)


def test_canonical_sort_is_deterministic(curve):
    pts = [exact(curve, Fraction(1, 2), 0), exact(curve, 0, Fraction(1, 2)),
           exact(curve, Fraction(1, 4), Fraction(3, 4))]
    assert jl.canonical_sort(list(reversed(pts))) == jl.canonical_sort(pts)
    coords = [p.coords() for p in jl.canonical_sort(pts)]
    assert coords == sorted(coords)
