import sympy as sp
import pytest

from gengeo import linalg
from gengeo.calculus import (
    EndoField,
    b_naturality_check,
    b_transform,
    courant,
    courant_closure,
    courant_twisted,
    d,
    gen_nijenhuis,
    graph_frame,
    integrability_report,
    jacobiator,
    lie_derivative,
    nijenhuis_classical,
    vector_bracket,
)
from gengeo.exterior import Multivector, exp_even
from gengeo.poly import Poly, PolyForm, PolySection
from gengeo.scalar import I, Scalar
from gengeo.structures import gcs_from_J, gcs_from_omega
from gengeo.tm_spinor import HermitianModel

import oracle
from strategies import rand_poly, rand_poly_form, rand_section, seeded


def x(n, k):
    return Poly.var(n, k)


def to_sympy(p, xs):
    if p.is_zero():
        return sp.Integer(0)
    out = 0
    for e, c in p.terms.items():
        coeff = sp.Rational(c.re.numerator, c.re.denominator) + sp.I * sp.Rational(c.im.numerator, c.im.denominator)
        out += coeff * sp.prod([v ** k for v, k in zip(xs, e)])
    return sp.expand(out)


def section_to_sympy(z, xs):
    return [to_sympy(c, xs) for c in z.tangent], [to_sympy(c, xs) for c in z.cotangent]


def omega_bad():
    # dx1^dy1 + (1 + x1) dx2^dy2 in coordinates (x1, y1, x2, y2)
    return PolyForm.basis(4, 1, 2) + PolyForm.basis(4, 3, 4, coeff=x(4, 1) + 1)


# -- d and Lie derivative ---------------------------------------------------

def test_d_examples():
    assert d(PolyForm.basis(2, 2, coeff=x(2, 1))) == PolyForm.basis(2, 1, 2)
    assert d(omega_bad()) == PolyForm.basis(4, 1, 3, 4)


def test_d_squared_vanishes():
    rng = seeded(40)
    for k in range(500):
        n = 2 + k % 3
        alpha = rand_poly_form(rng, n, degree=3)
        assert not d(d(alpha))


def test_leibniz():
    rng = seeded(41)
    for _ in range(40):
        a = rand_poly_form(rng, 3, grades={1})
        b = rand_poly_form(rng, 3)
        assert d(a ^ b) == (d(a) ^ b) - (a ^ d(b))


def test_lie_derivative():
    assert lie_derivative([1, 0], PolyForm.basis(2, 2, coeff=x(2, 1))) == PolyForm.basis(2, 2)
    rng = seeded(42)
    for _ in range(100):
        X = [rand_poly(rng, 3) for _ in range(3)]
        alpha = rand_poly_form(rng, 3)
        f = rand_poly(rng, 3)
        assert lie_derivative(X, d(alpha)) == d(lie_derivative(X, alpha))
        expected = sum((X[k] * f.diff(k) for k in range(3)), Poly(3))
        assert lie_derivative(X, PolyForm.function(f)) == PolyForm.function(expected)


# -- Courant bracket ------------------------------------------------------

def test_courant_examples():
    n = 2
    assert courant(PolySection.e(n, 1), PolySection.dx(n, 2, x(n, 1))) == PolySection.dx(n, 2)
    assert courant(PolySection.e(n, 1), PolySection.e(n, 2)).is_zero()
    X = [x(n, 2), x(n, 1) * x(n, 1)]
    Y = [1, x(n, 2)]
    br = courant(PolySection(X, [0, 0]), PolySection(Y, [0, 0]))
    assert br == PolySection(vector_bracket(X, Y), [0, 0])


def test_courant_skew_and_matches_oracle():
    rng = seeded(43)
    xs = oracle.coords(3)
    for k in range(200):
        a, b = rand_section(rng, 3), rand_section(rng, 3)
        ab = courant(a, b)
        assert ab == -courant(b, a)
        assert courant(a, a).is_zero()
        if k < 30:
            want = oracle.courant(section_to_sympy(a, xs), section_to_sympy(b, xs), xs)
            got = section_to_sympy(ab, xs)
            assert all(sp.expand(p - q) == 0 for p, q in zip(got[0] + got[1], want[0] + want[1]))


def test_jacobiator_witness():
    n = 2
    a = PolySection.e(n, 1)
    b = PolySection.e(n, 2, x(n, 1))
    c = PolySection.dx(n, 1, x(n, 2))
    assert jacobiator(a, b, c) == PolySection.dx(n, 1, Scalar(1) / 4)
    xs = oracle.coords(2)
    want = oracle.jacobiator(*(section_to_sympy(s, xs) for s in (a, b, c)), xs)
    assert want == ([0, 0], [sp.Rational(1, 4), 0])


def test_jacobiator_stays_in_closed_frame():
    frame = graph_frame(PolyForm.from_multivector(HermitianModel(2).omega()) * Poly.const(4, I))
    span_rows = [tuple(z.at((0, 0, 0, 0)).coords) for z in frame]
    for i in range(4):
        for j in range(i + 1, 4):
            f = frame[i] * (x(4, 1) + 1)
            J = jacobiator(f, frame[j], frame[(j + 1) % 4])
            for pt in [(Scalar(1), Scalar(2), Scalar(0), Scalar(-1)), (Scalar(3), Scalar(0), Scalar(1), Scalar(1))]:
                rows = [tuple(z.at(pt).coords) for z in frame]
                assert linalg.rank(rows + [tuple(J.at(pt).coords)]) == linalg.rank(rows)


def test_twisted_bracket():
    n = 3
    H = PolyForm.basis(n, 1, 2, 3, coeff=2)
    br = courant_twisted(PolySection.e(n, 1), PolySection.e(n, 2), H)
    assert br == PolySection.dx(n, 3, 2)
    with pytest.raises(ValueError):
        courant_twisted(PolySection.e(n, 1), PolySection.e(n, 2), PolyForm.basis(n, 1, 2, coeff=x(n, 3)))
    with pytest.raises(ValueError):
        courant_twisted(PolySection.e(4, 1), PolySection.e(4, 2), PolyForm.basis(4, 1, 2, 3, coeff=x(4, 4)))


def test_b_naturality():
    n = 3
    B = PolyForm.basis(n, 2, 3, coeff=x(n, 1))
    res = b_naturality_check(PolySection.e(n, 2), PolySection.e(n, 3), B)
    assert res == PolySection.dx(n, 1)
    assert b_naturality_check(PolySection.dx(n, 1, x(n, 2)), PolySection.e(n, 3), B).is_zero()
    assert b_naturality_check(PolySection.e(n, 1), PolySection.e(n, 3), PolyForm.basis(n, 1, 3, coeff=5)).is_zero()


def test_b_naturality_residual_is_dB_contracted():
    rng = seeded(44)
    for k in range(100):
        n = 3 + k % 2
        B = rand_poly_form(rng, n, degree=2, terms=3, grades={2})
        Z, W = rand_section(rng, n, degree=1), rand_section(rng, n, degree=1)
        res = b_naturality_check(Z, W, B)
        expected = d(B).contract(Z.tangent).contract(W.tangent)
        assert res == PolySection.from_form([0] * n, expected)
        if not d(B):
            assert res.is_zero()


def test_b_transform_round_trip():
    rng = seeded(45)
    B = rand_poly_form(rng, 3, grades={2})
    Z = rand_section(rng, 3)
    assert b_transform(-B, b_transform(B, Z)) == Z


# -- Nijenhuis tensors ----------------------------------------------------

def _frame_pairs(n):
    for a in range(n):
        for b in range(a + 1, n):
            yield [int(k == a) for k in range(n)], [int(k == b) for k in range(n)]


def nonintegrable_J():
    """P J0 P^-1 with P = Id + x3 E_12: pointwise conjugation, not a coordinate change."""
    n = 4
    J0 = HermitianModel(2).J()
    P = [[Poly.const(n, int(i == j)) for j in range(n)] for i in range(n)]
    Pi = [row[:] for row in P]
    P[0][1], Pi[0][1] = x(n, 3), -x(n, 3)
    return _conj(P, J0, Pi)


def pushed_forward_J():
    """J0 pushed forward by (x1, y1, x2, y2) -> (x1, y1, x2 + x1^2, y2)."""
    n = 4
    J0 = HermitianModel(2).J()
    P = [[Poly.const(n, int(i == j)) for j in range(n)] for i in range(n)]
    Pi = [row[:] for row in P]
    P[2][0], Pi[2][0] = x(n, 1) * 2, x(n, 1) * -2
    return _conj(P, J0, Pi)


def _conj(P, J0, Pi):
    n = len(P)
    PJ = [[sum((P[i][k] * J0[k][j] for k in range(n)), Poly(n)) for j in range(n)] for i in range(n)]
    return [[sum((PJ[i][k] * Pi[k][j] for k in range(n)), Poly(n)) for j in range(n)] for i in range(n)]


def test_classical_nijenhuis():
    J0 = HermitianModel(2).J()
    for X, Y in _frame_pairs(4):
        assert all(c.is_zero() for c in nijenhuis_classical(J0, X, Y))
    assert integrability_report("complex", pushed_forward_J())
    rep = integrability_report("complex", nonintegrable_J())
    assert not rep and rep.failing() == ["N^J(e_1, e_3) != 0"]
    N = nijenhuis_classical(nonintegrable_J(), [1, 0, 0, 0], [0, 0, 1, 0])
    assert N == (-x(4, 3), Poly.const(4, -1), Poly(4), Poly(4))
    with pytest.raises(ValueError):
        nijenhuis_classical(linalg.identity(2), [1, 0], [0, 1])


def _frame(n):
    return [PolySection.e(n, i) for i in range(1, n + 1)] + [PolySection.dx(n, i) for i in range(1, n + 1)]


def test_gen_nijenhuis_constant_structures():
    mod = HermitianModel(2)
    for J in (EndoField.constant(gcs_from_omega(mod.omega())), EndoField.constant(gcs_from_J(mod.J()))):
        f = _frame(4)
        for a in range(8):
            for b in range(a + 1, 8):
                assert gen_nijenhuis(J, f[a], f[b]).is_zero()


def test_gen_nijenhuis_detects_non_closed_omega():
    J = EndoField.from_omega(omega_bad())
    f = _frame(4)
    nonzero = [(a, b) for a in range(8) for b in range(a + 1, 8) if not gen_nijenhuis(J, f[a], f[b]).is_zero()]
    assert nonzero and nonzero[0] == (0, 2)
    assert EndoField.from_J(HermitianModel(2).J()).at((0, 0, 0, 0)) == gcs_from_J(HermitianModel(2).J()).matrix


def test_gen_nijenhuis_rejects_non_structures():
    J = EndoField.constant(gcs_from_omega(HermitianModel(1).omega()).scale(2))
    with pytest.raises(ValueError):
        gen_nijenhuis(J, PolySection.e(2, 1), PolySection.e(2, 2))


def test_courant_closure():
    n = 4
    cot = [PolySection.dx(n, i) for i in range(1, n + 1)]
    assert courant_closure(cot)
    good = graph_frame(PolyForm.from_multivector(HermitianModel(2).omega()) * Poly.const(n, I))
    assert courant_closure(good)
    rep = courant_closure(graph_frame(omega_bad() * Poly.const(n, I)))
    assert not rep
    w = rep.failures[0].witness
    assert set(w) == {"point", "pair", "bracket"}
    with pytest.raises(ValueError):
        courant_closure([PolySection.e(n, 1), PolySection.e(n, 1)])


def test_integrability_reports():
    mod = HermitianModel(2)
    rho0 = PolyForm.from_multivector(exp_even(mod.omega() * I))
    rho1 = PolyForm.from_multivector(mod.Omega())
    assert integrability_report("su", rho0, rho1)
    # on R^4, dB ^ Omega has degree 5, so the non-closed example needs m = 3
    Omega3 = PolyForm.from_multivector(HermitianModel(3).Omega())
    B = PolyForm.basis(6, 3, 5, coeff=x(6, 1))
    eB = PolyForm.function(Poly.const(6)) + B
    rep = integrability_report("gcy", eB ^ Omega3)
    assert not rep and rep.failures[0].witness == d(B) ^ eB ^ Omega3
    assert not integrability_report("symplectic", omega_bad())
    assert integrability_report("symplectic", PolyForm.from_multivector(mod.omega()))
    assert integrability_report("gcs", EndoField.constant(gcs_from_omega(mod.omega())))
    assert not integrability_report("gcs", EndoField.from_omega(omega_bad()))
    with pytest.raises(ValueError):
        integrability_report("spin", rho0)


def test_nijenhuis_agrees_with_courant_closure():
    corpus = [
        PolyForm.from_multivector(HermitianModel(2).omega()),
        omega_bad(),
        PolyForm.basis(4, 1, 2, coeff=x(4, 3) + 2) + PolyForm.basis(4, 3, 4),
        PolyForm.basis(4, 1, 2, coeff=x(4, 2) + 2) + PolyForm.basis(4, 3, 4, coeff=x(4, 4) + 1),
    ]
    for om in corpus:
        nij = integrability_report("gcs", EndoField.from_omega(om))
        closed = courant_closure(graph_frame(om * Poly.const(4, I)))
        assert nij.accepted == closed.accepted == (not d(om))
