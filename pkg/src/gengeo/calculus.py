"""Exterior calculus and Courant-bracket integrability on a single chart R^n."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import linalg
from .poly import Coeff, Poly, PolyForm, PolySection, RatFunc, coerce
from .report import StructureReport
from .scalar import I, ONE, ZERO, Scalar, as_scalar

__all__ = [
    "d",
    "lie_derivative",
    "vector_bracket",
    "courant",
    "courant_twisted",
    "b_transform",
    "b_naturality_check",
    "jacobiator",
    "nijenhuis_classical",
    "EndoField",
    "gen_nijenhuis",
    "graph_frame",
    "courant_closure",
    "integrability_report",
    "sample_points",
]


def d(alpha: PolyForm) -> PolyForm:
    """Exterior derivative: sum_k dx_k ^ d(alpha)/dx_k."""
    n = alpha.dim
    out = PolyForm(n)
    for k in range(n):
        part = alpha.diff(k)
        if part:
            out = out + PolyForm.basis(n, k + 1).wedge(part)
    return out


def _vec(X: Sequence, n: int) -> Tuple[Coeff, ...]:
    if len(X) != n:
        raise ValueError(f"vector field needs {n} components, got {len(X)}")
    return tuple(coerce(x, n) for x in X)


def lie_derivative(X: Sequence, alpha: PolyForm) -> PolyForm:
    """Cartan: L_X = d i_X + i_X d."""
    X = _vec(X, alpha.dim)
    return d(alpha.contract(X)) + d(alpha).contract(X)


def _apply_field(X: Sequence[Coeff], f: Coeff) -> Coeff:
    out = coerce(0, len(X))
    for k, x in enumerate(X):
        if not x.is_zero():
            df = f.diff(k)
            if not df.is_zero():
                out = out + x * df
    return out


def vector_bracket(X: Sequence, Y: Sequence) -> Tuple[Coeff, ...]:
    n = len(X)
    X, Y = _vec(X, n), _vec(Y, n)
    return tuple(_apply_field(X, Y[k]) - _apply_field(Y, X[k]) for k in range(n))


def courant(Z: PolySection, W: PolySection) -> PolySection:
    """[X+xi, Y+eta] = [X,Y] + L_X eta - L_Y xi - 1/2 d(X _| eta - Y _| xi)."""
    if Z.dim != W.dim:
        raise ValueError(f"dimension mismatch: {Z.dim} vs {W.dim}")
    X, Y = Z.tangent, W.tangent
    xi, eta = Z.xi_form(), W.xi_form()
    form = lie_derivative(X, eta) - lie_derivative(Y, xi)
    form = form - d(eta.contract(X) - xi.contract(Y)) * Fraction(1, 2)
    return PolySection.from_form(vector_bracket(X, Y), form)


def _three_form_term(H: PolyForm, X: Sequence, Y: Sequence) -> PolyForm:
    # H(X, Y, .)
    return H.contract(X).contract(Y)


def courant_twisted(Z: PolySection, W: PolySection, H: PolyForm) -> PolySection:
    """courant(Z, W) + H(X, Y, .) for a closed 3-form H."""
    if H.grades() not in ((), (3,)):
        raise ValueError("H must be a 3-form")
    dH = d(H)
    if dH:
        raise ValueError(f"H is not closed: dH = {dH}")
    base = courant(Z, W)
    extra = _three_form_term(H, Z.tangent, W.tangent)
    return base + PolySection.from_form([0] * Z.dim, extra)


def b_transform(B: PolyForm, Z: PolySection) -> PolySection:
    """e^B (X + xi) = X + (X _| B + xi)."""
    return PolySection.from_form(Z.tangent, Z.xi_form() + B.contract(Z.tangent))


def b_naturality_check(Z: PolySection, W: PolySection, B: PolyForm) -> PolySection:
    """e^-B [e^B Z, e^B W] - [Z, W]; equals 0 + dB(X, Y, .)."""
    if B.grades() not in ((), (2,)):
        raise ValueError("B must be a 2-form")
    lhs = b_transform(-B, courant(b_transform(B, Z), b_transform(B, W)))
    return lhs - courant(Z, W)


def jacobiator(a: PolySection, b: PolySection, c: PolySection) -> PolySection:
    return courant(courant(a, b), c) + courant(courant(b, c), a) + courant(courant(c, a), b)


# -- classical Nijenhuis --------------------------------------------------

def _matvec(M: Sequence[Sequence[Coeff]], X: Sequence[Coeff]) -> Tuple[Coeff, ...]:
    n = X[0].n
    out = []
    for row in M:
        s = coerce(0, n)
        for a, x in zip(row, X):
            if not a.is_zero() and not x.is_zero():
                s = s + a * x
        out.append(s)
    return tuple(out)


def _field_matrix(M: Sequence[Sequence], n: int) -> Tuple[Tuple[Coeff, ...], ...]:
    return tuple(tuple(coerce(x, n) for x in row) for row in M)


def _matmul(A, B, n: int):
    bt = list(zip(*B))
    return tuple(tuple(_dot(row, col, n) for col in bt) for row in A)


def _dot(u, v, n):
    s = coerce(0, n)
    for a, b in zip(u, v):
        if not a.is_zero() and not b.is_zero():
            s = s + a * b
    return s


def nijenhuis_classical(J: Sequence[Sequence], X: Sequence, Y: Sequence) -> Tuple[Coeff, ...]:
    """N(X,Y) = [X,Y] - [JX,JY] + J([JX,Y] + [X,JY])."""
    n = len(J)
    J = _field_matrix(J, n)
    sq = _matmul(J, J, n)
    for i in range(n):
        for j in range(n):
            target = -1 if i == j else 0
            if not (sq[i][j] - target).is_zero():
                raise ValueError("J^2 != -Id")
    X, Y = _vec(X, n), _vec(Y, n)
    JX, JY = _matvec(J, X), _matvec(J, Y)
    inner = [a + b for a, b in zip(vector_bracket(JX, Y), vector_bracket(X, JY))]
    first = [a - b for a, b in zip(vector_bracket(X, Y), vector_bracket(JX, JY))]
    return tuple(a + b for a, b in zip(first, _matvec(J, inner)))


# -- generalised structures as fields -------------------------------------

@dataclass(frozen=True)
class EndoField:
    """2n x 2n matrix of coefficient functions acting on sections of T + T*."""

    n: int
    matrix: Tuple[Tuple[Coeff, ...], ...]

    def __post_init__(self):
        m = _field_matrix(self.matrix, self.n)
        if len(m) != 2 * self.n or any(len(r) != 2 * self.n for r in m):
            raise ValueError(f"expected a {2 * self.n}x{2 * self.n} matrix")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def constant(cls, E) -> "EndoField":
        """From a constant GenEndo."""
        return cls(E.n, tuple(tuple(Poly.const(E.n, x) for x in r) for r in E.matrix))

    @classmethod
    def from_omega(cls, omega: PolyForm) -> "EndoField":
        """J_w = [[0, M^-1], [-M, 0]] with X _| w = M X, inverted over rational functions."""
        n = omega.dim
        M = [[coerce(0, n) for _ in range(n)] for _ in range(n)]
        for blade, c in omega.items():
            idx = [k for k in range(n) if blade >> k & 1]
            if len(idx) != 2:
                raise ValueError("omega must be a 2-form")
            i, j = idx
            M[j][i] = c
            M[i][j] = -c
        Mi = _inverse(M, n)
        z = coerce(0, n)
        rows = []
        for i in range(n):
            rows.append(tuple([z] * n) + tuple(Mi[i]))
        for i in range(n):
            rows.append(tuple(-M[i][j] for j in range(n)) + tuple([z] * n))
        return cls(n, tuple(rows))

    @classmethod
    def from_J(cls, J: Sequence[Sequence]) -> "EndoField":
        """J_J = [[-J, 0], [0, J^T]]."""
        n = len(J)
        J = _field_matrix(J, n)
        z = coerce(0, n)
        rows = [tuple(-J[i][j] for j in range(n)) + (z,) * n for i in range(n)]
        rows += [(z,) * n + tuple(J[j][i] for j in range(n)) for i in range(n)]
        return cls(n, tuple(rows))

    def __call__(self, Z: PolySection) -> PolySection:
        v = _matvec(self.matrix, Z.components)
        return PolySection(v[: self.n], v[self.n :])

    def at(self, point: Sequence) -> linalg.Matrix:
        return tuple(tuple(c.at(point) for c in r) for r in self.matrix)


def _inverse(M, n: int):
    """Gauss-Jordan over the coefficient field; pivots are chosen among nonzero entries."""
    aug = [list(M[i]) + [coerce(1 if i == j else 0, n) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if not aug[r][c].is_zero()), None)
        if piv is None:
            raise ZeroDivisionError("matrix field is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [_div(x, p, n) for x in aug[c]]
        for r in range(n):
            if r != c and not aug[r][c].is_zero():
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def _div(a: Coeff, b: Coeff, n: int) -> Coeff:
    if a.is_zero():
        return coerce(0, n)
    if isinstance(b, Poly) and b.is_const():
        return a * b.const_value().inverse()
    return RatFunc(a.num if isinstance(a, RatFunc) else a, a.den if isinstance(a, RatFunc) else None) / b


def gen_nijenhuis(J: EndoField, Z0: PolySection, Z1: PolySection, check_points: int = 3) -> PolySection:
    """N(Z0,Z1) = [Z0,Z1] - [JZ0,JZ1] + J([Z0,JZ1] + [JZ0,Z1])."""
    for pt in sample_points(J.n, check_points, seed=0, avoid=J):
        from .structures import GenEndo, validate_gcs

        rep = validate_gcs(GenEndo(J.n, J.at(pt)))
        if not rep:
            raise ValueError(f"not a generalised complex structure at {list(map(str, pt))}: {rep.failures[0]}")
    JZ0, JZ1 = J(Z0), J(Z1)
    inner = courant(Z0, JZ1) + courant(JZ0, Z1)
    return courant(Z0, Z1) - courant(JZ0, JZ1) + J(inner)


def graph_frame(beta: PolyForm) -> List[PolySection]:
    """{e_i + e_i _| beta}: the annihilator frame of exp(beta) for a complex 2-form beta."""
    n = beta.dim
    out = []
    for i in range(n):
        X = [1 if k == i else 0 for k in range(n)]
        out.append(PolySection.from_form(X, beta.contract(X)))
    return out


def sample_points(n: int, count: int, seed: int = 0, avoid=None) -> List[Tuple[Scalar, ...]]:
    """Deterministic pseudo-random rational points, skipping poles of ``avoid``."""
    rng = random.Random(seed)
    pts = []
    while len(pts) < count:
        pt = tuple(as_scalar(Fraction(rng.randint(-9, 9), rng.randint(1, 5))) for _ in range(n))
        if avoid is not None:
            try:
                avoid.at(pt)
            except ZeroDivisionError:
                continue
        pts.append(pt)
    return pts


def courant_closure(frame: Sequence[PolySection], points: int = 5, seed: int = 0) -> StructureReport:
    """Pointwise test that brackets of frame elements stay in the span."""
    rep = StructureReport("Courant closure")
    if not frame:
        raise ValueError("empty frame")
    n = frame[0].dim
    pts = sample_points(n, points, seed)
    rep.data["sample points"] = [list(p) for p in pts]
    brackets = {}
    for a in range(len(frame)):
        for b in range(a + 1, len(frame)):
            brackets[(a, b)] = courant(frame[a], frame[b])
    for pt in pts:
        rows = [tuple(z.at(pt).coords) for z in frame]
        r = linalg.rank(rows)
        if r < len(frame):
            raise ValueError(f"frame is degenerate at {[str(x) for x in pt]}")
        for (a, b), br in brackets.items():
            v = tuple(br.at(pt).coords)
            if linalg.rank(rows + [v]) != r:
                return rep.fail(
                    f"[W_{a + 1}, W_{b + 1}] leaves the span",
                    {"point": list(pt), "pair": [a + 1, b + 1], "bracket": br.at(pt)},
                )
    rep.data["pairs checked"] = len(brackets)
    return rep


def _frame_sections(n: int) -> List[PolySection]:
    return [PolySection.e(n, i) for i in range(1, n + 1)] + [PolySection.dx(n, i) for i in range(1, n + 1)]


def integrability_report(kind: str, *data, points: int = 5, seed: int = 0) -> StructureReport:
    """Integrability of a structure field.

    kind = "gcy" (rho), "su" (rho0, rho1), "gcs" (EndoField), "symplectic"
    (omega), "complex" (J matrix field).
    """
    rep = StructureReport(f"integrability ({kind})")
    if kind in ("gcy", "su"):
        for name, rho in zip(("rho0", "rho1") if kind == "su" else ("rho",), data):
            dr = d(rho)
            if dr:
                rep.fail(f"d{name} != 0", dr)
        return rep
    if kind == "symplectic":
        (omega,) = data
        dw = d(omega)
        if dw:
            rep.fail("d omega != 0", dw)
        return rep
    if kind == "complex":
        (J,) = data
        n = len(J)
        for a in range(n):
            for b in range(a + 1, n):
                X = [1 if k == a else 0 for k in range(n)]
                Y = [1 if k == b else 0 for k in range(n)]
                N = nijenhuis_classical(J, X, Y)
                if any(not c.is_zero() for c in N):
                    return rep.fail(f"N^J(e_{a + 1}, e_{b + 1}) != 0", [str(c) for c in N])
        return rep
    if kind == "gcs":
        (J,) = data
        n = J.n
        frame = _frame_sections(n)
        for a in range(2 * n):
            for b in range(a + 1, 2 * n):
                N = gen_nijenhuis(J, frame[a], frame[b])
                if not N.is_zero():
                    rep.fail(f"N(f_{a + 1}, f_{b + 1}) != 0", str(N))
                    return rep
        # tensoriality spot check with function-multiplied frames
        rng = random.Random(seed)
        anomalies = []
        for _ in range(points):
            a, b = rng.sample(range(2 * n), 2)
            k = rng.randrange(n)
            f = Poly.const(n, 1) + Poly.var(n, k + 1) * rng.randint(1, 3)
            N = gen_nijenhuis(J, frame[a] * f, frame[b])
            if not N.is_zero():
                anomalies.append(f"N(f*f_{a + 1}, f_{b + 1}) = {N}")
        rep.data["tensoriality samples"] = points
        if anomalies:
            rep.notes.extend(anomalies)
        return rep
    raise ValueError(f"unknown structure kind {kind!r}")
