"""Linear generalised structures on V + V*: B-fields, metrics, complex and
Kähler structures, Calabi-Yau and SU(m) pairs.

Endomorphisms of V + V* are 2n x 2n matrices acting on column vectors in
the coordinates of :class:`~gengeo.clifford.GenVector`, i.e. in blocks
[[V->V, V*->V], [V->V*, V*->V*]].  A 2-form B enters a block as the
matrix of X -> X _| B (see :func:`two_form_matrix`).
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import List, Optional, Sequence, Tuple

from . import linalg
from .clifford import (
    GenVector,
    Subspace,
    annihilator,
    is_isotropic,
    lowest_degree,
    split_pairing,
    subspace_conj,
    subspace_meet,
    type_of,
)
from .exterior import Multivector, contract, exp_even, grade_project, mukai, popcount, wedge
from .linalg import Matrix
from .report import StructureReport
from .scalar import I, ONE, ZERO, Scalar, as_scalar

__all__ = [
    "GenEndo",
    "MetricData",
    "two_form_matrix",
    "matrix_two_form",
    "b_endo",
    "gen_metric_build",
    "gen_metric_split",
    "validate_gen_metric",
    "gcs_from_J",
    "gcs_from_omega",
    "gcs_from_pure",
    "conjugate_by",
    "eigenbundle",
    "validate_gcs",
    "gen_kahler_check",
    "gcy_check",
    "su_check",
    "cy_pair",
    "cy_lambda_sign",
    "induced_complex_structure",
    "interpolation_family",
    "theorem4_build",
    "direct_sum",
]

HALF = Scalar(1) / 2


# -- endomorphisms --------------------------------------------------------

@dataclass(frozen=True)
class GenEndo:
    n: int
    matrix: Matrix

    def __post_init__(self):
        m = linalg.matrix(self.matrix)
        if len(m) != 2 * self.n or any(len(r) != 2 * self.n for r in m):
            raise ValueError(f"expected a {2 * self.n}x{2 * self.n} matrix")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_blocks(cls, tl, tr, bl, br) -> "GenEndo":
        return cls(len(tl), linalg.block(linalg.matrix(tl), linalg.matrix(tr), linalg.matrix(bl), linalg.matrix(br)))

    @classmethod
    def identity(cls, n: int) -> "GenEndo":
        return cls(n, linalg.identity(2 * n))

    def blocks(self) -> Tuple[Matrix, Matrix, Matrix, Matrix]:
        return linalg.split_blocks(self.matrix)

    def _same(self, other: "GenEndo") -> None:
        if not isinstance(other, GenEndo):
            raise TypeError(f"expected GenEndo, got {type(other).__name__}")
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __matmul__(self, other: "GenEndo") -> "GenEndo":
        self._same(other)
        return GenEndo(self.n, linalg.matmul(self.matrix, other.matrix))

    def __add__(self, other: "GenEndo") -> "GenEndo":
        self._same(other)
        return GenEndo(self.n, linalg.mat_add(self.matrix, other.matrix))

    def __sub__(self, other: "GenEndo") -> "GenEndo":
        self._same(other)
        return GenEndo(self.n, linalg.mat_sub(self.matrix, other.matrix))

    def __neg__(self) -> "GenEndo":
        return GenEndo(self.n, linalg.mat_scale(self.matrix, -1))

    def scale(self, s) -> "GenEndo":
        return GenEndo(self.n, linalg.mat_scale(self.matrix, s))

    def __call__(self, z: GenVector) -> GenVector:
        if z.dim != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {z.dim}")
        return GenVector.from_coords(linalg.matvec(self.matrix, z.coords))

    def inverse(self) -> "GenEndo":
        return GenEndo(self.n, linalg.inverse(self.matrix))

    def is_real(self) -> bool:
        return all(x.is_real() for r in self.matrix for x in r)

    def to_json(self):
        return [[str(x) for x in r] for r in self.matrix]

    def __str__(self) -> str:
        return "\n".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.matrix)


def _pairing_matrix(n: int) -> Matrix:
    z = linalg.zeros(n, n)
    h = linalg.mat_scale(linalg.identity(n), HALF)
    return linalg.block(z, h, h, z)


def _basis(n: int, k: int) -> GenVector:
    return GenVector.from_coords([ONE if i == k else ZERO for i in range(2 * n)])


def two_form_matrix(B: Multivector) -> Matrix:
    """Matrix M with X _| B = M X, so M[j][i] = B(e_i, e_j)."""
    bad = [g for g in B.grades() if g != 2]
    if bad:
        raise ValueError(f"expected a 2-form, found grade(s) {bad}")
    n = B.dim
    rows = [[ZERO] * n for _ in range(n)]
    for blade, c in B.items():
        i, j = [k for k in range(n) if blade >> k & 1]
        rows[j][i] = c
        rows[i][j] = -c
    return tuple(tuple(r) for r in rows)


def matrix_two_form(M: Sequence[Sequence]) -> Multivector:
    """Inverse of :func:`two_form_matrix`; M must be skew."""
    M = linalg.matrix(M)
    n = len(M)
    if linalg.transpose(M) != linalg.mat_scale(M, -1):
        raise ValueError("matrix is not skew-symmetric")
    terms = {}
    for i in range(n):
        for j in range(i + 1, n):
            if M[j][i]:
                terms[(1 << i) | (1 << j)] = M[j][i]
    return Multivector(n, terms)


def _skew_matrix(B) -> Matrix:
    if isinstance(B, Multivector):
        return two_form_matrix(B)
    M = linalg.matrix(B)
    if linalg.transpose(M) != linalg.mat_scale(M, -1):
        raise ValueError("B-field matrix is not skew-symmetric")
    return M


def b_endo(B) -> GenEndo:
    """e^B : X + xi -> X + (X _| B + xi).  ``B`` is a 2-form or a skew matrix."""
    M = _skew_matrix(B)
    n = len(M)
    return GenEndo(n, linalg.block(linalg.identity(n), linalg.zeros(n, n), M, linalg.identity(n)))


def conjugate_by(E: GenEndo, B) -> GenEndo:
    """e^B E e^{-B}."""
    M = _skew_matrix(B)
    if len(M) != E.n:
        raise ValueError(f"dimension mismatch: {E.n} vs {len(M)}")
    return b_endo(M) @ E @ b_endo(linalg.mat_scale(M, -1))


# -- generalised metrics --------------------------------------------------

@dataclass(frozen=True)
class MetricData:
    """g symmetric positive definite, B skew (as the matrix of X -> X _| B)."""

    g: Matrix
    B: Matrix

    def __post_init__(self):
        g = linalg.matrix(self.g)
        B = linalg.matrix(self.B) if self.B else linalg.zeros(len(g), len(g))
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "B", B)
        n = len(g)
        if len(B) != n:
            raise ValueError("g and B must have the same size")
        if any(not x.is_real() for r in g + B for x in r):
            raise ValueError("g and B must be real")
        if linalg.transpose(g) != g:
            raise ValueError("g is not symmetric")
        if linalg.transpose(B) != linalg.mat_scale(B, -1):
            raise ValueError("B is not skew-symmetric")
        if linalg.hermitian_definiteness_witness(g) is not None:
            raise ValueError("g is not positive definite")

    @classmethod
    def flat(cls, n: int, B=None) -> "MetricData":
        Bm = linalg.zeros(n, n) if B is None else _skew_matrix(B)
        return cls(linalg.identity(n), Bm)

    @property
    def n(self) -> int:
        return len(self.g)

    def two_form(self) -> Multivector:
        return matrix_two_form(self.B)


def gen_metric_build(d: MetricData) -> GenEndo:
    """G_{g,B} = [[-g^-1 B, g^-1], [g - B g^-1 B, B g^-1]] = e^B G_g e^-B."""
    gi = linalg.inverse(d.g)
    B = d.B
    tl = linalg.mat_scale(linalg.matmul(gi, B), -1)
    bl = linalg.mat_sub(d.g, linalg.matmul(linalg.matmul(B, gi), B))
    br = linalg.matmul(B, gi)
    return GenEndo(d.n, linalg.block(tl, gi, bl, br))


def validate_gen_metric(G: GenEndo) -> StructureReport:
    rep = StructureReport("generalised metric")
    n = G.n
    if not G.is_real():
        return rep.fail("G is not real")
    sq = G @ G
    for k in range(2 * n):
        if sq(_basis(n, k)) != _basis(n, k):
            return rep.fail("G^2 != Id", _basis(n, k))
    # (GZ, Z) = Z^T S Z with S the symmetric part of G^T P
    P = _pairing_matrix(n)
    GtP = linalg.matmul(linalg.transpose(G.matrix), P)
    S = linalg.mat_scale(linalg.mat_add(GtP, linalg.transpose(GtP)), HALF)
    w = linalg.hermitian_definiteness_witness(S)
    if w is not None:
        z = GenVector.from_coords(w)
        return rep.fail("(G Z, Z) > 0 fails", z)
    return rep


def gen_metric_split(G: GenEndo) -> Tuple[Subspace, Subspace, MetricData]:
    """V+, V- and the (g, B) with V+ = {X + (g + B) X}."""
    rep = validate_gen_metric(G)
    if not rep:
        raise ValueError(f"not a generalised metric: {rep.failures[0]}")
    n = G.n
    eye = linalg.identity(2 * n)
    vp = Subspace.span(n, linalg.nullspace(linalg.mat_sub(G.matrix, eye)))
    vm = Subspace.span(n, linalg.nullspace(linalg.mat_add(G.matrix, eye)))
    xm = tuple(r[:n] for r in vp.basis)
    am = tuple(r[n:] for r in vp.basis)
    # rows are X_r + A X_r, so am = xm A^T
    A = linalg.transpose(linalg.matmul(linalg.inverse(xm), am))
    At = linalg.transpose(A)
    g = linalg.mat_scale(linalg.mat_add(A, At), HALF)
    B = linalg.mat_scale(linalg.mat_sub(A, At), HALF)
    return vp, vm, MetricData(g, B)


# -- generalised complex structures ---------------------------------------

def gcs_from_J(J: Sequence[Sequence]) -> GenEndo:
    """J_J = [[-J, 0], [0, J^T]]; its +i-eigenbundle is T^{0,1} + T^{1,0*}."""
    J = linalg.matrix(J)
    n = len(J)
    if linalg.matmul(J, J) != linalg.mat_scale(linalg.identity(n), -1):
        raise ValueError("J^2 != -Id")
    z = linalg.zeros(n, n)
    return GenEndo(n, linalg.block(linalg.mat_scale(J, -1), z, z, linalg.transpose(J)))


def gcs_from_omega(omega) -> GenEndo:
    """J_w = [[0, M^-1], [-M, 0]] with X _| w = M X.

    Squares to -Id and has +i-eigenbundle {X + i X _| w}, the annihilator
    of exp(i w).
    """
    M = _skew_matrix(omega)
    try:
        Mi = linalg.inverse(M)
    except ZeroDivisionError:
        raise ValueError("omega is degenerate") from None
    n = len(M)
    z = linalg.zeros(n, n)
    return GenEndo(n, linalg.block(z, Mi, linalg.mat_scale(M, -1), z))


def _complex_structure_from(w: Subspace) -> Matrix:
    """Matrix equal to +i on w and -i on conj(w)."""
    wb = subspace_conj(w)
    cols = list(w.basis) + list(wb.basis)
    T = linalg.transpose(tuple(cols))
    D = tuple(
        tuple((I if i < w.rank else -I) if i == j else ZERO for j in range(len(cols)))
        for i in range(len(cols))
    )
    return linalg.matmul(linalg.matmul(T, D), linalg.inverse(T))


def gcs_from_pure(rho: Multivector) -> GenEndo:
    """The generalised complex structure with +i-eigenbundle W_rho."""
    w, pure = annihilator(rho)
    if not pure:
        raise ValueError("form is not pure")
    if subspace_meet(w, subspace_conj(w)).rank:
        raise ValueError("W_rho meets its conjugate; no generalised complex structure")
    return GenEndo(rho.dim, _complex_structure_from(w))


def eigenbundle(J: GenEndo, value: Scalar = I) -> Subspace:
    n = J.n
    shifted = linalg.mat_sub(J.matrix, linalg.mat_scale(linalg.identity(2 * n), value))
    return Subspace.span(n, linalg.nullspace(shifted))


def validate_gcs(J: GenEndo) -> StructureReport:
    rep = StructureReport("generalised complex structure")
    n = J.n
    if not J.is_real():
        return rep.fail("J is not real")
    sq = J @ J
    for k in range(2 * n):
        e = _basis(n, k)
        if sq(e) != -e:
            rep.fail("J^2 != -Id", e)
            break
    done = False
    for a in range(2 * n):
        for b in range(a, 2 * n):
            ea, eb = _basis(n, a), _basis(n, b)
            if split_pairing(J(ea), J(eb)) != split_pairing(ea, eb):
                rep.fail("J is not an isometry", [ea, eb])
                done = True
                break
        if done:
            break
    if rep.failures:
        return rep
    w = eigenbundle(J)
    rep.data["W"] = w
    rep.data["isotropic"] = is_isotropic(w.vectors())
    rep.data["type"] = type_of(w)
    return rep


# -- generalised Kähler ---------------------------------------------------

def _hermitian_gram(vectors: List[GenVector]) -> Matrix:
    return tuple(tuple(split_pairing(a, b.conj()) for b in vectors) for a in vectors)


def _definite(vectors: List[GenVector], sign: int) -> Optional[GenVector]:
    """None if sign * (Z, conj Z) > 0 on the span, else a witness Z."""
    if not vectors:
        return None
    H = linalg.mat_scale(_hermitian_gram(vectors), sign)
    w = linalg.hermitian_definiteness_witness(H)
    if w is None:
        return None
    z = GenVector.zero(vectors[0].dim)
    for c, v in zip(w, vectors):
        z = z + v * c.conj()
    return z


def _pullback_structure(J0: GenEndo, d: MetricData, sign: int) -> Matrix:
    """J_+- = -pi_T . J0 . pi_+-, pi_+-(X) = X + (+-g + B) X."""
    n = d.n
    A = linalg.mat_add(linalg.mat_scale(d.g, sign), d.B)
    cols = []
    for k in range(n):
        x = [ONE if i == k else ZERO for i in range(n)]
        z = GenVector(tuple(x), linalg.matvec(A, x))
        cols.append([-c for c in J0(z).tangent])
    return linalg.transpose(tuple(tuple(c) for c in cols))


def gen_kahler_check(J0: GenEndo, J1: GenEndo) -> StructureReport:
    rep = StructureReport("generalised Kähler structure")
    if J0.n != J1.n:
        raise ValueError(f"dimension mismatch: {J0.n} vs {J1.n}")
    n = J0.n
    for name, J in (("J0", J0), ("J1", J1)):
        rep.absorb(validate_gcs(J), name)
    if rep.failures:
        return rep
    c01, c10 = J0 @ J1, J1 @ J0
    for k in range(2 * n):
        e = _basis(n, k)
        if c01(e) != c10(e):
            return rep.fail("J0 J1 != J1 J0", e)
    G = -(J0 @ J1)
    mrep = validate_gen_metric(G)
    if not mrep:
        rep.absorb(mrep, "G = -J0 J1")
        return rep
    rep.data["G"] = G
    w0, w1 = eigenbundle(J0), eigenbundle(J1)
    wp = subspace_meet(w0, w1)
    wm = subspace_meet(w0, subspace_conj(w1))
    rep.data["rank W0+"] = wp.rank
    rep.data["rank W0-"] = wm.rank
    vp, vm = wp.vectors(), wm.vectors()
    if not is_isotropic(vp) or not is_isotropic(vm):
        rep.fail("W0+- not isotropic")
    for a in vp:
        for b in vm:
            if split_pairing(a, b) or split_pairing(a, b.conj()):
                rep.fail("W0+ not orthogonal to W0- and conj(W0-)", [a, b])
                break
    for label, vecs, sign in (("W0+", vp, 1), ("W0-", vm, -1)):
        z = _definite(vecs, sign)
        if z is not None:
            rep.fail(f"{'+' if sign > 0 else '-'}(Z, conj Z) > 0 on {label}", z)
    if rep.failures:
        return rep
    _, _, d = gen_metric_split(G)
    rep.data["g"] = d.g
    rep.data["B"] = d.B
    rep.data["J+"] = _pullback_structure(J0, d, 1)
    rep.data["J-"] = _pullback_structure(J0, d, -1)
    return rep


# -- generalised Calabi-Yau and SU(m) --------------------------------------

def gcy_check(rho: Multivector) -> StructureReport:
    rep = StructureReport("generalised Calabi-Yau")
    if not rho:
        return rep.fail("rho = 0")
    if not (rho.is_even() or rho.is_odd()):
        rep.fail("rho has mixed parity", rho.grades())
    w, pure = annihilator(rho)
    rep.data["rank W"] = w.rank
    if not pure:
        return rep.fail("rho is not pure", w)
    c = mukai(rho, rho.conj())
    rep.data["<rho, conj rho>"] = c
    if not c:
        rep.fail("<rho, conj rho> = 0", c)
        return rep
    rep.data["type"] = type_of(w)
    return rep


def cy_lambda_sign(m: int) -> Scalar:
    """(-1)^(m(m+1)/2) i^m, the factor with Omega ^ conj(Omega) = lambda * factor * omega^m, lambda > 0."""
    s = I ** m
    return -s if (m * (m + 1) // 2) % 2 else s


def induced_complex_structure(Omega: Multivector) -> Matrix:
    """J with T^{0,1} = {X : X _| Omega = 0} (so Omega is of type (m, 0))."""
    n = Omega.dim
    cols = []
    for k in range(n):
        x = [ONE if i == k else ZERO for i in range(n)]
        cols.append(contract(x, Omega).to_vector())
    A = linalg.transpose(tuple(tuple(c) for c in cols))
    kernel = linalg.nullspace(A)
    if 2 * len(kernel) != n:
        raise ValueError("Omega is not decomposable of middle degree")
    w = Subspace.span(n, kernel, ambient=n)
    # +i on conj(T^{0,1}) = T^{1,0}
    return _complex_structure_from(subspace_conj(w))


def cy_pair(omega: Multivector, Omega: Multivector, strict: bool = False) -> StructureReport:
    """Calabi-Yau compatibility of (omega, Omega) up to a positive scale lambda."""
    rep = StructureReport("Calabi-Yau pair")
    n = omega.dim
    if n % 2:
        raise ValueError("Calabi-Yau pairs need even dimension")
    m = n // 2
    if omega.grades() != (2,) or any(not c.is_real() for _, c in omega.items()):
        return rep.fail("omega is not a real 2-form", omega)
    if Omega.grades() != (m,):
        return rep.fail(f"Omega is not a homogeneous {m}-form", Omega.grades())
    w, pure = annihilator(Omega)
    if not pure:
        return rep.fail("Omega is not decomposable", w)
    top = omega
    for _ in range(m - 1):
        top = wedge(top, omega)
    if not top:
        return rep.fail("omega is degenerate")
    mixed = wedge(Omega, omega)
    if mixed:
        rep.fail("Omega ^ omega != 0", mixed)
    vol = wedge(Omega, Omega.conj()).top_coeff()
    if not vol:
        return rep.fail("Omega ^ conj(Omega) = 0")
    lam = vol / (cy_lambda_sign(m) * top.top_coeff())
    rep.data["lambda"] = lam
    if not lam.is_real() or lam.re <= 0:
        rep.fail("lambda is not a positive real", lam)
    elif strict and lam != ONE:
        rep.fail("strict normalization requires lambda = 1", lam)
    J = induced_complex_structure(Omega)
    rep.data["J"] = J
    W = two_form_matrix(omega)
    # g(X, Y) = omega(X, J Y)
    S = tuple(
        tuple(_omega_eval(W, [ONE if t == i else ZERO for t in range(n)], [J[t][j] for t in range(n)]) for j in range(n))
        for i in range(n)
    )
    if linalg.transpose(S) != S:
        rep.fail("omega is not J-invariant", S)
    else:
        wit = linalg.hermitian_definiteness_witness(S)
        if wit is not None:
            rep.fail("omega(X, JX) > 0 fails", list(wit))
        else:
            rep.data["g"] = S
    if rep.accepted:
        rep.data["pair"] = [exp_even(omega * I), Omega]
    return rep


def _omega_eval(W: Matrix, X, Y) -> Scalar:
    # omega(X, Y) = (X _| omega)(Y) = (W X) . Y
    WX = linalg.matvec(W, X)
    s = ZERO
    for a, b in zip(WX, Y):
        if a and b:
            s = s + a * b
    return s


def _extract_b_omega(rho0: Multivector) -> Optional[Tuple[Multivector, Multivector]]:
    """(B, omega) with rho0 = rho0_0 * exp(B + i omega), if rho0 has that shape."""
    c0 = rho0.scalar_part()
    if not c0:
        return None
    two = grade_project(rho0 / c0, 2)
    if not two:
        return None
    if exp_even(two) * c0 != rho0:
        return None
    B = Multivector(two.dim, {b: c.re for b, c in two.items() if c.re})
    omega = Multivector(two.dim, {b: c.im for b, c in two.items() if c.im})
    return B, omega


def su_check(rho0: Multivector, rho1: Multivector, strict: bool = False) -> StructureReport:
    rep = StructureReport("generalised SU(m) structure")
    rho0._check(rho1)
    n = rho0.dim
    if n % 2:
        raise ValueError("generalised SU(m) structures need even dimension")
    m = n // 2
    r0, r1 = gcy_check(rho0), gcy_check(rho1)
    rep.absorb(r0, "rho0")
    rep.absorb(r1, "rho1")
    if rep.failures:
        return rep
    p0, p1 = r0.data["<rho, conj rho>"], r1.data["<rho, conj rho>"]
    c = p0 / p1
    rep.data["c"] = c
    if not c.is_real() or c.re <= 0:
        rep.fail("<rho0, conj rho0> = c <rho1, conj rho1> with c > 0 fails", c)
    rep.data["type rho0"] = r0.data["type"]
    rep.data["type rho1"] = r1.data["type"]
    d_plus = lowest_degree(rho0, rho1, cross_check=True)
    d_minus = lowest_degree(rho0, rho1.conj(), cross_check=True)
    rep.data["lowest degree (rho0, rho1)"] = d_plus
    rep.data["lowest degree (rho0, conj rho1)"] = d_minus
    if d_plus < m:
        rep.fail(f"lowest degree of rho0 x rho1 is {d_plus} < {m}", d_plus)
    if d_minus < m:
        rep.fail(f"lowest degree of rho0 x conj(rho1) is {d_minus} < {m}", d_minus)
    w0, _ = annihilator(rho0)
    w1, _ = annihilator(rho1)
    wp = subspace_meet(w0, w1)
    wm = subspace_meet(w0, subspace_conj(w1))
    rep.data["rank W0+"] = wp.rank
    rep.data["rank W0-"] = wm.rank
    if wp.rank != m:
        rep.fail(f"rank W0+ = {wp.rank} != {m}", wp.rank)
    if wm.rank != m:
        rep.fail(f"rank W0- = {wm.rank} != {m}", wm.rank)
    for label, sub, sign in (("W0+", wp, 1), ("W0-", wm, -1)):
        z = _definite(sub.vectors(), sign)
        if z is not None:
            rep.fail(f"{'+' if sign > 0 else '-'}(Z, conj Z) > 0 on {label}", z)
    if rep.failures:
        return rep
    kr = gen_kahler_check(gcs_from_pure(rho0), gcs_from_pure(rho1))
    rep.absorb(kr, "induced pair")
    for key in ("g", "B", "J+", "J-"):
        if key in kr.data:
            rep.data[key] = kr.data[key]
    rep.notes.append(
        "definiteness uses +(Z, conj Z) > 0 on W0+ and -(Z, conj Z) > 0 on W0-; "
        "the sign '< 0 on both' is not used"
    )
    split = _extract_b_omega(rho0)
    if split is not None:
        B, omega = split
        Omega = wedge(exp_even(-B) if B else Multivector.scalar(n), rho1)
        if Omega.grades() == (m,):
            cy = cy_pair(omega, Omega, strict=strict)
            rep.data["lambda"] = cy.data.get("lambda")
            rep.absorb(cy, "underlying Calabi-Yau pair")
    elif strict:
        rep.notes.append("strict normalization only applies to B-transformed Calabi-Yau pairs")
    return rep


# -- constructors ---------------------------------------------------------

def interpolation_family(omega_c: Multivector, t, k: Optional[int] = None) -> Multivector:
    """t^k exp(omega_c / t) = sum_j t^(k-j) omega_c^j / j!, needing omega_c^(k+1) = 0.

    ``t = 0`` returns the coefficientwise limit omega_c^k / k!.
    """
    if omega_c.grades() != (2,):
        raise ValueError("omega_c must be a 2-form")
    powers = [Multivector.scalar(omega_c.dim)]
    while powers[-1]:
        powers.append(wedge(powers[-1], omega_c))
    kmin = len(powers) - 2
    if k is None:
        k = kmin
    if k < kmin:
        raise ValueError(f"omega_c^{k + 1} != 0; truncation order must be at least {kmin}")
    t = as_scalar(t)
    out = Multivector(omega_c.dim)
    for j in range(k + 1):
        if j >= len(powers) - 1:
            break
        coeff = (t ** (k - j) if t else (ONE if j == k else ZERO)) / factorial(j)
        out = out + powers[j] * coeff
    return out


def theorem4_build(d: MetricData, s, psi_plus, psi_minus) -> Tuple[Multivector, Multivector]:
    """rho0 = s e^B ^ (A(psi+) x psi-), rho1 = s e^B ^ (psi+ x psi-) on the flat model."""
    from .tm_spinor import charge_conj, tm_fierz

    n = d.n
    if n % 2 or d.g != linalg.identity(n):
        raise ValueError("theorem4_build needs the flat model g = Id on R^{2m}")
    if psi_plus.m * 2 != n or psi_minus.m * 2 != n:
        raise ValueError("spinors and metric live on different models")
    s = as_scalar(s)
    if not s.is_real() or s.re <= 0:
        raise ValueError("the scale s must be a positive rational")
    B = d.two_form()
    eB = exp_even(B) if B else Multivector.scalar(n)
    rho0 = wedge(eB, tm_fierz(charge_conj(psi_plus), psi_minus)) * s
    rho1 = wedge(eB, tm_fierz(psi_plus, psi_minus)) * s
    return rho0, rho1


def direct_sum(J1: GenEndo, J2: GenEndo) -> GenEndo:
    """J1 + J2 on R^{n1+n2}, coordinates (X^1, X^2, xi^1, xi^2)."""
    n1, n2 = J1.n, J2.n
    n = n1 + n2

    def idx(which: int, k: int) -> int:
        # position of coordinate k of factor ``which`` in the product
        if which == 1:
            return k if k < n1 else n + (k - n1)
        return n1 + k if k < n2 else n + n1 + (k - n2)

    rows = [[ZERO] * (2 * n) for _ in range(2 * n)]
    for which, J, size in ((1, J1, n1), (2, J2, n2)):
        for a in range(2 * size):
            for b in range(2 * size):
                rows[idx(which, a)][idx(which, b)] = J.matrix[a][b]
    return GenEndo(n, tuple(tuple(r) for r in rows))
