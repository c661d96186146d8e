import pytest

from gengeo.exterior import blade_indices
from gengeo.poly import Poly, PolyForm
from gengeo.scalar import I, Scalar
from gengeo.super_ops import (
    OPERATOR_NAMES,
    TABLES,
    Model,
    build_operator,
    spanning_set,
    supercommutator,
    table,
    verify_table,
)

from strategies import rand_poly_form, seeded


def op(name, kind="kahler", m=1):
    return build_operator(name, Model.of(kind, m))


def x(n, k):
    return Poly.var(n, k)


def form_of(n, key):
    e, b = key
    return PolyForm(n, {b: Poly.monomial(e)})


def test_examples():
    assert not op("Pi", "symplectic")(PolyForm.basis(2, 1))
    assert op("Pi", "symplectic")(PolyForm.basis(2, 1, 2)) == PolyForm.basis(2, 1, 2)
    assert op("dtilde*", "symplectic")(PolyForm.basis(2, 1, 2, coeff=x(2, 1))) == -PolyForm.basis(2, 1)
    assert op("Lambda", "symplectic")(PolyForm.basis(2, 1, 2)) == PolyForm.function(Poly.const(2))
    assert op("L", "symplectic")(PolyForm.function(Poly.const(2))) == PolyForm.basis(2, 1, 2)
    assert op("d*", "riemannian", 2)(PolyForm.basis(2, 1, coeff=x(2, 1))) == PolyForm.function(Poly.const(2, -1))


def test_incompatible_names_raise():
    with pytest.raises(ValueError):
        op("del", "symplectic")
    with pytest.raises(ValueError):
        op("nonsense")
    with pytest.raises(ValueError):
        Model("kahler", 3)
    with pytest.raises(ValueError):
        supercommutator(op("d", "kahler", 1), op("d", "kahler", 2))


@pytest.mark.parametrize("kind", ["riemannian", "kahler", "symplectic"])
def test_linearity_and_parity(kind):
    rng = seeded(50)
    model = Model.of(kind, 2)
    n = model.n
    for name in sorted(OPERATOR_NAMES[kind]):
        A = build_operator(name, model)
        for _ in range(3):
            a, b = rand_poly_form(rng, n), rand_poly_form(rng, n)
            c = Scalar(2, -1)
            assert A(a + b * Poly.const(n, c)) == A(a) + A(b) * Poly.const(n, c)
        for key in spanning_set(n, 1)[:: 7]:
            out = A(form_of(n, key))
            k = len(blade_indices(key[1]))
            for g in out.grades():
                assert (g - k) % 2 == A.parity


def test_laplacian_and_squares():
    for kind in ("riemannian", "kahler"):
        model = Model.of(kind, 2)
        Q_L, Q_R, Delta = (build_operator(k, model) for k in ("Q_L", "Q_R", "Delta"))
        for key in spanning_set(model.n, 2):
            f = form_of(model.n, key)
            out = Delta(f)
            assert out.grades() in ((), (len(blade_indices(key[1])),))
            assert Q_L(Q_L(f)) == out == Q_R(Q_R(f))
            assert not supercommutator(Q_L, Q_R)(f)


def test_d_and_dtilde_square_to_zero():
    for name, kind in (("d", "riemannian"), ("dtilde*", "symplectic"), ("del", "kahler"), ("delbar*", "kahler")):
        model = Model.of(kind, 2)
        A = build_operator(name, model)
        assert all(not A(A(form_of(model.n, k))) for k in spanning_set(model.n, 2))


def test_laplacians_agree_on_kahler_model():
    model = Model.of("kahler", 2)
    a, b = build_operator("Delta_del", model), build_operator("Delta_delbar", model)
    delta = build_operator("Delta", model)
    for key in spanning_set(model.n, 2):
        f = form_of(model.n, key)
        assert a(f) == b(f)
        assert delta(f) == a(f) * Poly.const(model.n, 2)


def test_contraction_adjoint_to_wedge():
    # <dx_j ^ a, b> = <a, i_j b> with the orthonormal blade inner product
    from gengeo.exterior import Multivector, contract

    n = 4

    for j in range(n):
        e = [int(k == j) for k in range(n)]
        for a in range(1 << n):
            for b in range(1 << n):
                lhs = (Multivector.basis(n, j + 1) ^ Multivector(n, {a: 1})).coeff(b)
                rhs = contract(e, Multivector(n, {b: 1})).coeff(a)
                assert lhs == rhs


@pytest.mark.parametrize("name", sorted(TABLES))
@pytest.mark.parametrize("m", [1, 2])
def test_tables_pass(name, m):
    rep = verify_table(table(name, m), degree=2)
    assert rep, rep
    assert set(rep.data["identities"].values()) == {"pass"}


def test_verify_table_reports_failures():
    from gengeo.super_ops import CommutatorTable, Identity

    bogus = CommutatorTable("bogus", Model.of("symplectic", 1), (Identity("Pi", "L", "L", Scalar(3)),))
    rep = verify_table(bogus, 1)
    assert not rep
    assert rep.failing() == ["[Pi,L] = 3L"]
    assert rep.failures[0].witness == "1*1"


def test_table_model_checks():
    with pytest.raises(ValueError):
        table("N=(2,2)", 1, "symplectic")
    with pytest.raises(ValueError):
        table("missing", 1)
    assert table("sl2", 1, "kahler").model == Model("kahler", 2)
