"""Classification of flat rank-3 trivial-determinant bundles from monodromy.

A flat bundle is given by the commuting pair (A, B) in SL(3, C) of monodromy
matrices along the two lattice loops (1, tau).  The pair is reduced to one of
three normal forms (simultaneously diagonal; a 1+2 block with a rank-1
Jordan block; a full rank-3 Jordan block) and the bundle type is read off the
parameters via the rank-1 Riemann-Hilbert map.

Commuting pairs in which A and B carry non-proportional rank-1 nilpotent
parts (shared image but different kernels, or vice versa) fall outside the
three normal forms; they are surfaced via ExoticPairError and classified
directly as type T32 from their section count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import jaclattice as jl
from .bundles import BundleClass, classify_triple, make_t21, make_t22, make_t3x
from .jaclattice import CurveSpec, JacPoint

DEFAULT_TOL = 1e-8
EIG_SEP = 1e-7


class NotCommutingError(ValueError):
    def __init__(self, residual):
        super().__init__(f"monodromy matrices do not commute (residual {residual:.3g})")
        self.residual = residual


class NotUnimodularError(ValueError):
    def __init__(self, which, residual):
        super().__init__(f"matrix {which} is not unimodular (|det - 1| = {residual:.3g})")
        self.which = which
        self.residual = residual


class EigenvalueSeparationError(ValueError):
    """Eigenvalues too close to decide the Jordan structure reliably."""


class ExoticPairError(ValueError):
    """Commuting pair with non-aligned rank-1 nilpotent parts.

    Such pairs are not covered by the three normal-form cases; the underlying
    bundle has two independent holomorphic sections after twisting, i.e. it
    is of type T32.
    """

    def __init__(self, a: complex, b: complex):
        super().__init__("commuting pair outside the three normal forms "
                         "(non-aligned rank-1 nilpotents); bundle type T32")
        self.a = a
        self.b = b


@dataclass(frozen=True, eq=False)
class CommutingPair:
    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "A", np.asarray(self.A, dtype=complex).reshape(3, 3))
        object.__setattr__(self, "B", np.asarray(self.B, dtype=complex).reshape(3, 3))


@dataclass(frozen=True)
class NormalForm:
    case: str  # "i", "ii", "iii"
    params: tuple

    def matrices(self) -> tuple[np.ndarray, np.ndarray]:
        if self.case == "i":
            a1, a2, a3, b1, b2, b3 = self.params
            return np.diag([a1, a2, a3]).astype(complex), np.diag([b1, b2, b3]).astype(complex)
        if self.case == "ii":
            a, b, b1 = self.params
            A = np.array([[a**-2, 0, 0], [0, a, 1], [0, 0, a]], dtype=complex)
            B = np.array([[b**-2, 0, 0], [0, b, b1], [0, 0, b]], dtype=complex)
            return A, B
        a, b, b1, b2 = self.params
        A = np.array([[a, 1, 0], [0, a, 1], [0, 0, a]], dtype=complex)
        B = np.array([[b, b1, b2], [0, b, b1], [0, 0, b]], dtype=complex)
        return A, B


def validate(pair: CommutingPair, tol: float = DEFAULT_TOL) -> CommutingPair:
    """Check |det - 1| and the commutator at tolerance."""
    scale = max(np.abs(pair.A).max(), np.abs(pair.B).max(), 1.0)
    for which, M in (("A", pair.A), ("B", pair.B)):
        r = abs(np.linalg.det(M) - 1.0)
        if r > tol * scale**3:
            raise NotUnimodularError(which, r)
    comm = np.abs(pair.A @ pair.B - pair.B @ pair.A).max()
    if comm > tol * scale**2:
        raise NotCommutingError(comm)
    return pair


def _eig_clusters(M: np.ndarray, sep: float = EIG_SEP) -> list[tuple[complex, int]]:
    vals = sorted(np.linalg.eigvals(M), key=lambda v: (round(v.real, 12), round(v.imag, 12)))
    # roundoff splits a defective triple eigenvalue by ~eps^(1/3) ~ 1e-5, so the
    # merge radius must sit well above that; inputs are assumed to have genuinely
    # distinct eigenvalues separated by more than this.
    thr = max(500 * sep, 1e-4) * max(1.0, max(abs(v) for v in vals))
    clusters: list[list[complex]] = []
    for v in vals:
        for c in clusters:
            if abs(v - sum(c) / len(c)) < thr:
                c.append(v)
                break
        else:
            clusters.append([v])
    return [(sum(c) / len(c), len(c)) for c in clusters]


def _nullspace(M: np.ndarray, rtol: float = 1e-7) -> np.ndarray:
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    _, s, vh = np.linalg.svd(M)
    n = M.shape[1]
    scale = max(s[0], 1.0) if len(s) else 1.0
    k = int(np.sum(s <= rtol * scale)) + (n - len(s))
    return vh.conj().T[:, n - k:]


def _is_diagonalizable(M: np.ndarray, sep: float = EIG_SEP) -> bool:
    for lam, mult in _eig_clusters(M, sep):
        geo = _nullspace(M - lam * np.eye(3)).shape[1]
        if geo < mult:
            return False
    return True


def _joint_eigenlines(A: np.ndarray, B: np.ndarray) -> list[np.ndarray]:
    """Unit vectors spanning the common eigenlines of the pair."""
    lines = []
    for lam, _ in _eig_clusters(A):
        V = _nullspace(A - lam * np.eye(3))
        if V.shape[1] == 0:
            continue
        # restrict B to the eigenspace and split further
        BV = np.linalg.lstsq(V, B @ V, rcond=None)[0]
        vals, vecs = np.linalg.eig(BV)
        for k in range(V.shape[1]):
            v = V @ vecs[:, k]
            v = v / np.linalg.norm(v)
            resB = np.linalg.norm(B @ v - (v.conj() @ B @ v) * v)
            resA = np.linalg.norm(A @ v - (v.conj() @ A @ v) * v)
            if resA < 1e-6 and resB < 1e-6:
                if not any(abs(abs(v.conj() @ w)) > 1 - 1e-8 for w in lines):
                    lines.append(v)
    return lines


def _block_data(M2: np.ndarray) -> tuple[complex, np.ndarray]:
    """Split a 2x2 matrix known to be scalar + nilpotent into (scalar, nilpotent)."""
    lam = np.trace(M2) / 2.0
    return lam, M2 - lam * np.eye(2)


def _restrict(M: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Matrix of M on the invariant subspace spanned by the columns of W."""
    return np.linalg.lstsq(W, M @ W, rcond=None)[0]


def _unimodular(P: np.ndarray) -> np.ndarray:
    d = np.linalg.det(P)
    return P / d ** (1.0 / 3.0)


def normal_form(pair: CommutingPair, tol: float = DEFAULT_TOL,
                sep: float = EIG_SEP) -> tuple[NormalForm, np.ndarray, bool]:
    """Reduce a valid commuting pair to its normal form.

    Returns (form, conjugator P, swapped) with
    inv(P) @ M1 @ P and inv(P) @ M2 @ P reproducing the normal-form matrices,
    where (M1, M2) = (A, B), or (B, A) when swapped.
    """
    validate(pair, tol=max(tol, 1e-7))
    A, B = pair.A, pair.B

    diagA = _is_diagonalizable(A, sep)
    diagB = _is_diagonalizable(B, sep)

    if diagA and diagB:
        cols = []
        for lam, _ in _eig_clusters(A, sep):
            V = _nullspace(A - lam * np.eye(3))
            BV = _restrict(B, V)
            _, vecs = np.linalg.eig(BV)
            for k in range(V.shape[1]):
                v = V @ vecs[:, k]
                cols.append(v / np.linalg.norm(v))
        if len(cols) != 3:
            raise EigenvalueSeparationError("could not separate joint eigenlines")
        P = _unimodular(np.column_stack(cols))
        Pi = np.linalg.inv(P)
        Ad = Pi @ A @ P
        Bd = Pi @ B @ P
        params = (*np.diag(Ad), *np.diag(Bd))
        return NormalForm("i", tuple(params)), P, False

    def _full_jordan(M):
        clusters = _eig_clusters(M, sep)
        if len(clusters) != 1:
            return None
        lam = clusters[0][0]
        N = M - lam * np.eye(3)
        if np.abs(N @ N).max() > 1e-6:
            return lam
        return None

    lamA = _full_jordan(A)
    lamB = _full_jordan(B) if lamA is None else None
    if lamA is not None or lamB is not None:
        swapped = lamA is None
        M1, M2 = (A, B) if not swapped else (B, A)
        lam = lamA if lamA is not None else lamB
        N = M1 - lam * np.eye(3)
        N2 = N @ N
        # cyclic vector maximizing |N^2 v|
        idx = int(np.argmax(np.linalg.norm(N2, axis=0)))
        v = np.eye(3)[:, idx]
        P = _unimodular(np.column_stack([N2 @ v, N @ v, v]))
        Pi = np.linalg.inv(P)
        M1n = Pi @ M1 @ P
        M2n = Pi @ M2 @ P
        a = lam
        b = np.trace(M2n) / 3.0
        b1 = (M2n[0, 1] + M2n[1, 2]) / 2.0
        b2 = M2n[0, 2]
        # rescale the basis so M1's superdiagonal is exactly 1
        s = (M1n[0, 1] + M1n[1, 2]) / 2.0
        D = np.diag([1.0, s, s**2]).astype(complex)
        P = _unimodular(P @ D)
        b1, b2 = b1 * s, b2 * s**2
        return NormalForm("iii", (a, b, b1, b2)), P, swapped

    # case (ii): a 1+2 joint splitting with an aligned rank-1 Jordan block
    eigenlines = _joint_eigenlines(A, B)
    planes = _joint_eigenlines(A.T, B.T)  # left eigenvectors = invariant planes
    for u in eigenlines:
        for ell in planes:
            if abs(ell @ u) < 1e-6:
                continue  # u lies in the plane
            W = _nullspace(ell.reshape(1, 3))
            if W.shape[1] != 2:
                continue
            AW = _restrict(A, W)
            BW = _restrict(B, W)
            lamA2, NA = _block_data(AW)
            lamB2, NB = _block_data(BW)
            nA, nB = np.abs(NA).max(), np.abs(NB).max()
            if nA < 1e-9 and nB < 1e-9:
                continue  # plane carries no Jordan block
            swapped = nA < 1e-9  # normal form needs a genuine block in the A slot
            Nlead = NB if swapped else NA
            idx = int(np.argmax(np.linalg.norm(Nlead, axis=0)))
            w2 = np.eye(2)[:, idx]
            w1 = Nlead @ w2
            P = _unimodular(np.column_stack([u, W @ w1, W @ w2]))
            Pi = np.linalg.inv(P)
            M1, M2 = (A, B) if not swapped else (B, A)
            M1n = Pi @ M1 @ P
            M2n = Pi @ M2 @ P
            a = (M1n[1, 1] + M1n[2, 2]) / 2.0
            b = (M2n[1, 1] + M2n[2, 2]) / 2.0
            b1 = M2n[1, 2] / M1n[1, 2]
            # rescale so M1's block superdiagonal is exactly 1
            s = M1n[1, 2]
            D = np.diag([1.0, s, 1.0]).astype(complex)
            P = _unimodular(P @ D)
            return NormalForm("ii", (a, b, b1)), P, swapped

    # non-diagonalizable, no full Jordan block, no compatible 1+2 splitting
    a = np.trace(A) / 3.0
    b = np.trace(B) / 3.0
    raise ExoticPairError(a, b)


def _nilpotent_log_coeffs(m0: complex, m1: complex, m2: complex) -> tuple[complex, complex]:
    """(N, N^2) coefficients of log((m0 I + m1 N + m2 N^2)/m0) for N^3 = 0."""
    p = m1 / m0
    q = m2 / m0
    return p, q - p * p / 2.0


def classify_bundle(pair: CommutingPair, curve: CurveSpec,
                    tol: float = 1e-6) -> BundleClass:
    """Bundle type of the flat bundle with monodromy (A, B) along (1, tau)."""
    tau = curve.tau
    try:
        nf, _, swapped = normal_form(pair)
    except ExoticPairError as exc:
        z = jl.from_holonomy(exc.a, exc.b, curve)
        return make_t3x("T32", z)

    if nf.case == "i":
        a1, a2, a3, b1, b2, b3 = nf.params
        pts = [jl.from_holonomy(a, b, curve) for a, b in ((a1, b1), (a2, b2), (a3, b3))]
        distinct: list[JacPoint] = []
        for p in pts:
            if not any(jl.equal(p, q, tol=tol) for q in distinct):
                distinct.append(p)
        if len(distinct) == 3:
            return classify_triple(*pts, tol=tol)
        if len(distinct) == 2:
            # the repeated class is the L of L^{-2} + L + L
            for p in distinct:
                if sum(jl.equal(p, q, tol=tol) for q in pts) == 2:
                    return make_t22(p)
        return make_t3x("T33", distinct[0])

    if nf.case == "ii":
        a, b, b1 = nf.params
        if not swapped:
            aA, sA = a, 1.0 + 0j
            aB, sB = b, b1
        else:
            aA, sA = b, b1
            aB, sB = a, 1.0 + 0j
        z = jl.from_holonomy(aA, aB, curve)
        # the rank-2 part is the trivial bundle (twisted) iff the nilpotent
        # log parts are proportional to (1, tau)
        decomposable = abs(sB / aB - tau * sA / aA) < tol * max(1.0, abs(tau))
        torsion3 = jl.mul(3, z).is_zero(tol=tol)
        if decomposable:
            return make_t3x("T33", z) if torsion3 else make_t22(z)
        return make_t3x("T32", z) if torsion3 else make_t21(z)

    # case iii
    a, b, b1, b2 = nf.params
    if not swapped:
        cA = (a, 1.0 + 0j, 0j)
        cB = (b, b1, b2)
    else:
        cA = (b, b1, b2)
        cB = (a, 1.0 + 0j, 0j)
    sig1, sig2 = _nilpotent_log_coeffs(*cA)
    bet1, bet2 = _nilpotent_log_coeffs(*cB)
    z = jl.from_holonomy(cA[0], cB[0], curve)
    scale = max(1.0, abs(tau))
    if abs(bet1 - tau * sig1) > tol * scale:
        return make_t3x("T31", z)
    if abs(bet2 - tau * sig2) > tol * scale:
        return make_t3x("T32", z)
    return make_t3x("T33", z)


def universal_pair(b1: complex, b2: complex, kind: str = "generic") -> CommutingPair:
    """The two explicit universal families: A = I and B diagonal or triangular."""
    b1, b2 = complex(b1), complex(b2)
    if b1 == 0 or b2 == 0:
        raise ValueError("b1, b2 must be nonzero")
    b3 = 1.0 / (b1 * b2)
    A = np.eye(3, dtype=complex)
    if kind == "decomposable":
        B = np.diag([b1, b2, b3]).astype(complex)
    elif kind == "generic":
        B = np.array([[b1, 1, 0], [0, b2, 1], [0, 0, b3]], dtype=complex)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return CommutingPair(A, B)


def universal_config(b1: complex, b2: complex):
    """Fiber-plane loci of the degree-0 subbundles of the generic universal family."""
    from .bundles import LineLocus, PointLocus, SubbundleConfig
    from .weierstrass import PlaneLine, PlanePoint

    b1, b2 = complex(b1), complex(b2)
    b3 = 1.0 / (b1 * b2)
    if min(abs(b1 - b2), abs(b1 - b3), abs(b2 - b3)) < 1e-9:
        raise ValueError("coincident eigenvalues: the configuration degenerates")
    L1 = PlanePoint.of(1, 0, 0)
    L2 = PlanePoint.of(1, b2 - b1, 0)
    L3 = PlanePoint.of((b1 * b2) ** 2,
                       b1 * b2 * (1 - b1**2 * b2),
                       (1 - b1**2 * b2) * (1 - b1 * b2**2))
    l12 = PlaneLine.of(0, 0, 1)
    l13 = PlaneLine.of(0, 1, -b1 * b2 / (1 - b1 * b2**2))
    l23 = PlaneLine.of(-(b2 - b1), 1, -b1 * b2 / (1 - b1**2 * b2))
    return SubbundleConfig(
        rank1=tuple(PointLocus(0, point=p) for p in (L1, L2, L3)),
        rank2=tuple(LineLocus(0, line=l) for l in (l12, l13, l23)),
    )
