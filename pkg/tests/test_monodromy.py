import cmath
from fractions import Fraction

import numpy as np
import pytest

from ellpar import jaclattice as jl
from ellpar import monodromy as mo
from ellpar.jaclattice import CurveSpec

from conftest import TAU, exact, holonomy_scalars, random_unimodular


def conj_pair(pair, Q):
    Qi = np.linalg.inv(Q)
    return mo.CommutingPair(Q @ pair.A @ Qi, Q @ pair.B @ Qi)


def diag_pair(curve, pts):
    hA = [holonomy_scalars(p)[0] for p in pts]
    hB = [holonomy_scalars(p)[1] for p in pts]
    return mo.CommutingPair(np.diag(hA), np.diag(hB))


def block_pair(a, b, sA, sB):
    A = np.diag([a**-2, a, a]).astype(complex)
    A[1, 2] = sA
    B = np.diag([b**-2, b, b]).astype(complex)
    B[1, 2] = sB
    return mo.CommutingPair(A, B)


def jordan_pair(a, b, b1, b2):
    N = np.zeros((3, 3), complex)
    N[0, 1] = N[1, 2] = 1
    return mo.CommutingPair(a * np.eye(3) + N, b * np.eye(3) + b1 * N + b2 * (N @ N))


def test_validate_rejects_bad_pairs(curve):
    with pytest.raises(mo.NotUnimodularError):
        mo.validate(mo.CommutingPair(2 * np.eye(3), np.eye(3)))
    A = np.diag([1.0, 2.0, 0.5]).astype(complex)
    B = np.eye(3, dtype=complex)
    B[0, 1] = 1.0
    with pytest.raises(mo.NotCommutingError):
        mo.validate(mo.CommutingPair(A, B))


def test_case_i_classification(curve):
    pts = [exact(curve, Fraction(1, 5), 0), exact(curve, 0, Fraction(1, 7))]
    pts.append(jl.neg(jl.add(pts[0], pts[1])))
    pair = conj_pair(diag_pair(curve, pts), random_unimodular(np.random.RandomState(0)))
    cls = mo.classify_bundle(pair, curve)
    assert cls.label == "T1"
    for z in pts:
        assert any(jl.equal(z, q, tol=1e-6) for q in cls.triple)


def test_case_i_repeated_point_is_t22(curve):
    z = exact(curve, Fraction(1, 5), Fraction(1, 7))
    pts = [z, z, jl.neg(jl.mul(2, z))]
    pair = conj_pair(diag_pair(curve, pts), random_unimodular(np.random.RandomState(1)))
    cls = mo.classify_bundle(pair, curve)
    assert cls.label == "T22"
    assert jl.equal(cls.point, z, tol=1e-6)


def test_case_i_torsion_triple_is_t33(curve):
    z = exact(curve, Fraction(1, 3), 0)
    pair = conj_pair(diag_pair(curve, [z, z, z]), random_unimodular(np.random.RandomState(2)))
    cls = mo.classify_bundle(pair, curve)
    assert cls.label == "T33"
    assert jl.equal(cls.point, z, tol=1e-6)


def test_case_ii_all_four_outcomes(curve):
    tau = curve.tau
    Q = random_unimodular(np.random.RandomState(3))
    z = exact(curve, Fraction(1, 5), Fraction(1, 7))
    a, b = holonomy_scalars(z)
    # nilpotent parts not proportional to (1, tau): indecomposable
    cls = mo.classify_bundle(conj_pair(block_pair(a, b, 1.0, 0.37), Q), curve)
    assert cls.label == "T21" and jl.equal(cls.point, z, tol=1e-6)
    # proportional to (1, tau): decomposable
    sB = tau * 0.5 / a * b
    assert mo.classify_bundle(conj_pair(block_pair(a, b, 0.5, sB), Q), curve).label == "T22"
    z3 = exact(curve, Fraction(1, 3), 0)
    a3, b3 = holonomy_scalars(z3)
    assert mo.classify_bundle(conj_pair(block_pair(a3, b3, 1.0, 0.37), Q), curve).label == "T32"
    sB3 = tau * 0.5 / a3 * b3
    assert mo.classify_bundle(conj_pair(block_pair(a3, b3, 0.5, sB3), Q), curve).label == "T33"


def test_case_ii_block_only_in_second_matrix(curve):
    # A diagonalizable, B carries the Jordan block: the normal form swaps slots
    z3 = exact(curve, Fraction(1, 3), 0)
    a3, b3 = holonomy_scalars(z3)
    pair = conj_pair(block_pair(a3, b3, 0.0, 0.5), random_unimodular(np.random.RandomState(4)))
    nf, _, swapped = mo.normal_form(pair)
    assert nf.case == "ii" and swapped
    assert mo.classify_bundle(pair, curve).label == "T32"


def test_case_iii_trichotomy(curve):
    tau = curve.tau
    Q = random_unimodular(np.random.RandomState(5))
    z = exact(curve, Fraction(1, 3), Fraction(1, 3))
    a, b = holonomy_scalars(z)
    cls = mo.classify_bundle(conj_pair(jordan_pair(a, b, 0.4, 0.1), Q), curve)
    assert cls.label == "T31" and jl.equal(cls.point, z, tol=1e-6)
    b1 = tau * b / a
    assert mo.classify_bundle(conj_pair(jordan_pair(a, b, b1, 0.1), Q), curve).label == "T32"
    b2 = b * (b1**2 / (2 * b**2) - tau / (2 * a**2))
    assert mo.classify_bundle(conj_pair(jordan_pair(a, b, b1, b2), Q), curve).label == "T33"


def test_case_iii_block_only_in_second_matrix(curve):
    N = np.diag([1.0, 1.0], 1).astype(complex)
    pair = conj_pair(mo.CommutingPair(np.eye(3, dtype=complex), np.eye(3) + N),
                     random_unimodular(np.random.RandomState(6)))
    nf, _, swapped = mo.normal_form(pair)
    assert nf.case == "iii" and swapped
    assert mo.classify_bundle(pair, curve).label == "T31"


def test_exotic_pair_raises_then_classifies_t32(curve):
    E12 = np.zeros((3, 3), complex)
    E12[0, 1] = 1
    E13 = np.zeros((3, 3), complex)
    E13[0, 2] = 1
    pair = mo.CommutingPair(np.eye(3) + E12, np.eye(3) + E13)
    with pytest.raises(mo.ExoticPairError):
        mo.normal_form(pair)
    cls = mo.classify_bundle(pair, curve)
    assert cls.label == "T32" and cls.point.is_zero()


def test_normal_form_conjugator_reproduces_matrices(curve):
    z = exact(curve, Fraction(1, 5), Fraction(1, 7))
    a, b = holonomy_scalars(z)
    pair = conj_pair(block_pair(a, b, 1.0, 0.37), random_unimodular(np.random.RandomState(7)))
    nf, P, swapped = mo.normal_form(pair)
    M1, M2 = (pair.A, pair.B) if not swapped else (pair.B, pair.A)
    N1, N2 = nf.matrices()
    Pi = np.linalg.inv(P)
    assert np.abs(Pi @ M1 @ P - N1).max() < 1e-7
    assert np.abs(Pi @ M2 @ P - N2).max() < 1e-7


def test_conjugation_invariance_all_types(curve):
    tau = curve.tau
    z = exact(curve, Fraction(1, 5), Fraction(1, 7))
    z3 = exact(curve, Fraction(1, 3), 0)
    a, b = holonomy_scalars(z)
    a3, b3 = holonomy_scalars(z3)
    pts = [exact(curve, Fraction(1, 5), 0), exact(curve, 0, Fraction(1, 7))]
    pts.append(jl.neg(jl.add(pts[0], pts[1])))
    reps = {
        "T1": diag_pair(curve, pts),
        "T21": block_pair(a, b, 1.0, 0.37),
        "T22": block_pair(a, b, 0.5, tau * 0.5 / a * b),
        "T31": jordan_pair(a3, b3, 0.4, 0.1),
        "T32": block_pair(a3, b3, 1.0, 0.37),
        "T33": jordan_pair(a3, b3, tau * b3 / a3,
                           b3 * ((tau * b3 / a3) ** 2 / (2 * b3**2) - tau / (2 * a3**2))),
    }
    rng = np.random.RandomState(11)
    for label, pair in reps.items():
        for _ in range(10):
            got = mo.classify_bundle(conj_pair(pair, random_unimodular(rng)), curve)
            assert got.label == label, f"{label} misclassified as {got.label}"


def test_universal_pair_validates_and_classifies(curve):
    pair = mo.universal_pair(0.7 + 0.2j, 1.3 - 0.1j, "generic")
    mo.validate(pair)
    assert mo.classify_bundle(pair, curve).label == "T1"
    dec = mo.universal_pair(0.7 + 0.2j, 1.3 - 0.1j, "decomposable")
    mo.validate(dec)
    assert mo.classify_bundle(dec, curve).label == "T1"
    with pytest.raises(ValueError):
        mo.universal_pair(0, 1)
    with pytest.raises(ValueError):
        mo.universal_pair(1, 1, "weird")


def test_universal_config_is_a_triangle_of_eigenlines():
    b1, b2 = 0.7 + 0.2j, 1.3 - 0.1j
    b3 = 1 / (b1 * b2)
    cfg = mo.universal_config(b1, b2)
    pts = [np.array([p.point.x, p.point.y, p.point.z]) for p in cfg.rank1]
    lns = [np.array([l.line.u, l.line.v, l.line.w]) for l in cfg.rank2]
    B = mo.universal_pair(b1, b2, "generic").B
    for p, lam in zip(pts, (b1, b2, b3)):
        assert np.linalg.norm(B @ p - lam * p) < 1e-12 * np.linalg.norm(p)
    incidence = [[abs(p @ l) < 1e-10 for l in lns] for p in pts]
    assert [sum(row) for row in incidence] == [2, 2, 2]
    assert [sum(col) for col in zip(*incidence)] == [2, 2, 2]
    with pytest.raises(ValueError):
        mo.universal_config(1.0, 1.0)
