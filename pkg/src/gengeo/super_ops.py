"""Graded operators on polynomial forms of flat models and their supercommutators.

Forms are handled internally as sparse maps (exponents, blade) -> Scalar.
Every operator memoises its action on basis elements, so composites and
commutator tables only ever evaluate each primitive once per basis form.

Models: ``riemannian`` (R^n with the Euclidean metric), ``kahler`` and
``symplectic`` (R^{2m} with coordinates x_1, y_1, ..., x_m, y_m,
omega = sum dx_j ^ dy_j, z_j = x_j + i y_j).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from typing import Callable, Dict, List, Sequence, Tuple

from .exterior import blade_indices, blade_sign, contract_sign, popcount
from .poly import Poly, PolyForm
from .report import StructureReport
from .scalar import I, ONE, ZERO, Scalar, as_scalar

__all__ = [
    "Model",
    "GradedOperator",
    "build_operator",
    "supercommutator",
    "CommutatorTable",
    "Identity",
    "table",
    "TABLES",
    "verify_table",
    "spanning_set",
]

Key = Tuple[Tuple[int, ...], int]
Terms = Dict[Key, Scalar]

HALF = Scalar(1) / 2


@dataclass(frozen=True)
class Model:
    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in ("riemannian", "kahler", "symplectic"):
            raise ValueError(f"unknown model {self.kind!r}")
        if not 1 <= self.n <= 8:
            raise ValueError("model dimension must be in 1..8")
        if self.kind != "riemannian" and self.n % 2:
            raise ValueError(f"the {self.kind} model needs even real dimension")

    @classmethod
    def of(cls, kind: str, m: int) -> "Model":
        """Complex dimension m for kahler/symplectic, real dimension for riemannian."""
        return cls(kind, m if kind == "riemannian" else 2 * m)

    @property
    def m(self) -> int:
        return self.n // 2

    def __str__(self) -> str:
        if self.kind == "riemannian":
            return f"flat riemannian R^{self.n}"
        return f"flat {self.kind} R^{self.n} (m={self.m})"


# -- sparse primitives ----------------------------------------------------

def _add_into(acc: Terms, key: Key, v: Scalar) -> None:
    if key in acc:
        s = acc[key] + v
        if s:
            acc[key] = s
        else:
            del acc[key]
    elif v:
        acc[key] = v


def _partial(k: int) -> Callable[[Key], Terms]:
    def act(key: Key) -> Terms:
        e, b = key
        p = e[k]
        if not p:
            return {}
        return {(e[:k] + (p - 1,) + e[k + 1 :], b): Scalar(p)}

    return act


def _wedge_dx(k: int) -> Callable[[Key], Terms]:
    bit = 1 << k

    def act(key: Key) -> Terms:
        e, b = key
        if b & bit:
            return {}
        return {(e, b | bit): ONE if blade_sign(bit, b) > 0 else -ONE}

    return act


def _iota(k: int) -> Callable[[Key], Terms]:
    def act(key: Key) -> Terms:
        e, b = key
        s = contract_sign(k, b)
        if not s:
            return {}
        return {(e, b ^ (1 << k)): ONE if s > 0 else -ONE}

    return act


def _degree_shift(model: Model) -> Callable[[Key], Terms]:
    def act(key: Key) -> Terms:
        k = popcount(key[1]) - model.m
        return {key: Scalar(k)} if k else {}

    return act


# -- operators ------------------------------------------------------------

class GradedOperator:
    """Linear operator on polynomial forms with a Z/2 parity."""

    def __init__(self, name: str, parity: int, model: Model, basis_action: Callable[[Key], Terms]):
        self.name = name
        self.parity = parity % 2
        self.model = model
        self._basis_action = basis_action
        self._cache: Dict[Key, Terms] = {}

    def on_basis(self, key: Key) -> Terms:
        out = self._cache.get(key)
        if out is None:
            out = self._basis_action(key)
            self._cache[key] = out
        return out

    def apply_terms(self, terms: Terms) -> Terms:
        out: Terms = {}
        for key, c in terms.items():
            for k2, v in self.on_basis(key).items():
                _add_into(out, k2, v * c)
        return out

    def __call__(self, alpha: PolyForm) -> PolyForm:
        if alpha.dim != self.model.n:
            raise ValueError(f"form on R^{alpha.dim} given to an operator on R^{self.model.n}")
        terms: Terms = {}
        for b, c in alpha.items():
            if not isinstance(c, Poly):
                raise TypeError("graded operators act on polynomial coefficients only")
            for e, s in c.terms.items():
                _add_into(terms, (e, b), s)
        return _to_form(self.model.n, self.apply_terms(terms))

    def _same(self, other: "GradedOperator") -> None:
        if other.model != self.model:
            raise ValueError(f"model mismatch: {self.model} vs {other.model}")

    def __matmul__(self, other: "GradedOperator") -> "GradedOperator":
        self._same(other)
        return GradedOperator(
            f"{self.name}{other.name}",
            self.parity + other.parity,
            self.model,
            lambda key: self.apply_terms(other.on_basis(key)),
        )

    def _combine(self, other: "GradedOperator", s: Scalar, sym: str) -> "GradedOperator":
        self._same(other)
        if self.parity != other.parity:
            raise ValueError(f"cannot add operators of different parity: {self.name}, {other.name}")

        def act(key: Key) -> Terms:
            out = dict(self.on_basis(key))
            for k2, v in other.on_basis(key).items():
                _add_into(out, k2, v * s)
            return out

        return GradedOperator(f"({self.name} {sym} {other.name})", self.parity, self.model, act)

    def __add__(self, other: "GradedOperator") -> "GradedOperator":
        return self._combine(other, ONE, "+")

    def __sub__(self, other: "GradedOperator") -> "GradedOperator":
        return self._combine(other, -ONE, "-")

    def scale(self, s, name: str | None = None) -> "GradedOperator":
        s = as_scalar(s)
        return GradedOperator(
            name or f"{s}*{self.name}",
            self.parity,
            self.model,
            lambda key: {k2: v * s for k2, v in self.on_basis(key).items() if v * s},
        )

    def __neg__(self) -> "GradedOperator":
        return self.scale(-1, f"-{self.name}")

    def __repr__(self) -> str:
        return f"GradedOperator({self.name}, parity={self.parity}, {self.model})"


def _to_form(n: int, terms: Terms) -> PolyForm:
    by_blade: Dict[int, Dict[Tuple[int, ...], Scalar]] = {}
    for (e, b), c in terms.items():
        by_blade.setdefault(b, {})[e] = c
    return PolyForm(n, {b: Poly(n, t) for b, t in by_blade.items()})


def _sum_of(model: Model, name: str, parity: int, parts: Sequence[Tuple[Scalar, List[Callable]]]) -> GradedOperator:
    """Operator sum_i c_i * f_i1 o f_i2 o ... built from basis-level primitives."""

    def act(key: Key) -> Terms:
        out: Terms = {}
        for c, word in parts:
            cur: Terms = {key: c}
            for f in reversed(word):
                nxt: Terms = {}
                for k2, v in cur.items():
                    for k3, w in f(k2).items():
                        _add_into(nxt, k3, v * w)
                cur = nxt
                if not cur:
                    break
            for k2, v in cur.items():
                _add_into(out, k2, v)
        return out

    return GradedOperator(name, parity, model, act)


_RIEMANNIAN = {"d", "d*", "Delta", "Q_L", "Q_R"}
_SYMPLECTIC = {"d", "L", "Lambda", "Pi", "dtilde*"}
_KAHLER = _RIEMANNIAN | _SYMPLECTIC | {
    "del", "delbar", "del*", "delbar*", "G1", "G1*", "G2", "G2*", "Delta_del", "Delta_delbar", "L*",
}
OPERATOR_NAMES = {"riemannian": _RIEMANNIAN, "kahler": _KAHLER, "symplectic": _SYMPLECTIC}

_ODD = {"d", "d*", "Q_L", "Q_R", "del", "delbar", "del*", "delbar*", "G1", "G1*", "G2", "G2*", "dtilde*"}


def _primitive(name: str, model: Model) -> GradedOperator:
    n = model.n
    P = [_partial(k) for k in range(n)]
    E = [_wedge_dx(k) for k in range(n)]
    C = [_iota(k) for k in range(n)]
    if name == "d":
        return _sum_of(model, "d", 1, [(ONE, [E[k], P[k]]) for k in range(n)])
    if name == "d*":
        return _sum_of(model, "d*", 1, [(-ONE, [C[k], P[k]]) for k in range(n)])
    m = model.m
    xs = [2 * j for j in range(m)]
    ys = [2 * j + 1 for j in range(m)]
    if name == "L":
        return _sum_of(model, "L", 0, [(ONE, [E[x], E[y]]) for x, y in zip(xs, ys)])
    if name in ("Lambda", "L*"):
        return _sum_of(model, name, 0, [(ONE, [C[y], C[x]]) for x, y in zip(xs, ys)])
    if name == "Pi":
        return GradedOperator("Pi", 0, model, _degree_shift(model))
    parts = []
    if name in ("del", "delbar"):
        # dz ^ d/dz with d/dz = (d/dx - i d/dy)/2, dz = dx + i dy
        s = ONE if name == "del" else -ONE
        for x, y in zip(xs, ys):
            for ce, ex in ((ONE, E[x]), (I * s, E[y])):
                for cp, px in ((HALF, P[x]), (-I * s * HALF, P[y])):
                    parts.append((ce * cp, [ex, px]))
        return _sum_of(model, name, 1, parts)
    if name in ("del*", "delbar*"):
        # del* = -sum d/dzbar o iota(d/dx - i d/dy); delbar* with i -> -i
        s = ONE if name == "del*" else -ONE
        for x, y in zip(xs, ys):
            for cp, px in ((HALF, P[x]), (I * s * HALF, P[y])):
                for ci, ix in ((ONE, C[x]), (-I * s, C[y])):
                    parts.append((-cp * ci, [px, ix]))
        return _sum_of(model, name, 1, parts)
    raise KeyError(name)


def build_operator(name: str, model: Model, _memo: Dict | None = None) -> GradedOperator:
    allowed = OPERATOR_NAMES[model.kind]
    if name not in allowed:
        raise ValueError(f"operator {name!r} is not available on the {model.kind} model")
    memo = _MEMO.setdefault(model, {})
    if name in memo:
        return memo[name]
    b = lambda nm: build_operator(nm, model)
    if name in ("d", "d*", "L", "Lambda", "L*", "Pi", "del", "delbar", "del*", "delbar*"):
        op = _primitive(name, model)
    elif name == "Delta":
        op = b("d") @ b("d*") + b("d*") @ b("d")
    elif name == "Q_L":
        op = b("d") + b("d*")
    elif name == "Q_R":
        op = (b("d") - b("d*")).scale(I)
    elif name == "G1":
        op = b("del")
    elif name == "G1*":
        op = b("del*")
    elif name == "G2":
        op = b("delbar*").scale(I)
    elif name == "G2*":
        op = b("delbar").scale(-I)
    elif name == "Delta_del":
        op = b("del") @ b("del*") + b("del*") @ b("del")
    elif name == "Delta_delbar":
        op = b("delbar") @ b("delbar*") + b("delbar*") @ b("delbar")
    elif name == "dtilde*":
        op = b("Lambda") @ b("d") - b("d") @ b("Lambda")
    else:  # pragma: no cover - guarded by OPERATOR_NAMES
        raise KeyError(name)
    op.name = name
    memo[name] = op
    return op


_MEMO: Dict[Model, Dict[str, GradedOperator]] = {}


def supercommutator(A: GradedOperator, B: GradedOperator) -> GradedOperator:
    """[A, B] = A B - (-1)^{|A||B|} B A."""
    A._same(B)
    sign = -ONE if A.parity * B.parity else ONE

    def act(key: Key) -> Terms:
        out = dict(A.apply_terms(B.on_basis(key)))
        for k2, v in B.apply_terms(A.on_basis(key)).items():
            _add_into(out, k2, -sign * v)
        return out

    return GradedOperator(f"[{A.name},{B.name}]", A.parity + B.parity, A.model, act)


def zero_operator(model: Model, parity: int = 0) -> GradedOperator:
    return GradedOperator("0", parity, model, lambda key: {})


# -- tables ---------------------------------------------------------------

@dataclass(frozen=True)
class Identity:
    """[A, B] = c * R  (R = None means the right-hand side is 0)."""

    a: str
    b: str
    rhs: str | None
    coeff: Scalar = ONE
    kind: str = "bracket"  # or "equal": A = B, or "square": A A = c R

    @property
    def label(self) -> str:
        if self.rhs is None:
            rhs = "0"
        elif self.coeff in (ONE, -ONE):
            rhs = self.rhs if self.coeff == ONE else f"-{self.rhs}"
        else:
            rhs = f"{self.coeff}{self.rhs}"
        if self.kind == "equal":
            return f"{self.a} = {self.b}"
        if self.kind == "square":
            return f"{self.a}{self.a} = {rhs}"
        return f"[{self.a},{self.b}] = {rhs}"


@dataclass(frozen=True)
class CommutatorTable:
    name: str
    model: Model
    identities: Tuple[Identity, ...]


def _id(a, b, rhs, coeff=1, kind="bracket") -> Identity:
    return Identity(a, b, rhs, as_scalar(coeff), kind)


TABLES = {
    "N=(1,1)": ("riemannian", (
        _id("Q_L", "Q_L", "Delta", 2),
        _id("Q_R", "Q_R", "Delta", 2),
        _id("Q_L", "Q_R", None),
        _id("Q_L", None, "Delta", kind="square"),
        _id("Q_R", None, "Delta", kind="square"),
    )),
    "sl2": ("symplectic", (
        _id("Pi", "L", "L", 2),
        _id("Pi", "Lambda", "Lambda", -2),
        _id("L", "Lambda", "Pi"),
    )),
    "sl2-adjoint": ("kahler", (
        _id("Pi", "L", "L", 2),
        _id("Pi", "L*", "L*", -2),
        _id("L", "L*", "Pi"),
    )),
    "kahler": ("kahler", (
        _id("Pi", "G1", "G1"),
        _id("Pi", "G2", "G2", -1),
        _id("L", "G1", None),
        _id("L", "G2", "G1"),
        _id("L*", "G1", "G2"),
        _id("L*", "G2", None),
    )),
    "kahler-adjoint": ("kahler", (
        _id("Pi", "G1*", "G1*", -1),
        _id("Pi", "G2*", "G2*"),
        _id("L", "G1*", "G2*", -1),
        _id("L", "G2*", None),
        _id("L*", "G1*", None),
        _id("L*", "G2*", "G1*", -1),
    )),
    "N=(2,2)": ("kahler", (
        _id("G1", "G1", None),
        _id("G1", "G2", None),
        _id("G2", "G2", None),
        _id("G1*", "G1*", None),
        _id("G1*", "G2*", None),
        _id("G2*", "G2*", None),
        _id("G1", "G1*", "Delta_del"),
        _id("G2", "G2*", "Delta_del"),
        _id("G1", "G2*", None),
        _id("G2", "G1*", None),
        _id("Delta_del", "Delta_delbar", None, kind="equal"),
    )),
    "symplectic": ("symplectic", (
        _id("Pi", "d", "d"),
        _id("Pi", "dtilde*", "dtilde*", -1),
        _id("L", "d", None),
        _id("L", "dtilde*", "d"),
        _id("Lambda", "d", "dtilde*"),
        _id("Lambda", "dtilde*", None),
        _id("dtilde*", "dtilde*", None),
    )),
}


def table(name: str, m: int, model_kind: str | None = None) -> CommutatorTable:
    """A named table on the flat model of complex dimension m (real dimension m for riemannian)."""
    if name not in TABLES:
        raise ValueError(f"unknown table {name!r}; choose from {sorted(TABLES)}")
    kind, ids = TABLES[name]
    if model_kind is not None:
        if kind != model_kind and not (model_kind == "kahler" and kind in ("riemannian", "symplectic")):
            raise ValueError(f"table {name!r} does not live on the {model_kind} model")
        kind = model_kind
    return CommutatorTable(name, Model.of(kind, m), ids)


def spanning_set(n: int, degree: int) -> List[Key]:
    """All x^a dx_I with |a| <= degree."""
    monos = []
    for total in range(degree + 1):
        for combo in combinations_with_replacement(range(n), total):
            e = [0] * n
            for k in combo:
                e[k] += 1
            monos.append(tuple(e))
    return [(e, b) for e in monos for b in range(1 << n)]


def _key_text(key: Key) -> str:
    e, b = key
    mono = "*".join(f"x{k + 1}" for k, p in enumerate(e) for _ in range(p)) or "1"
    blade = "^".join(f"dx{k + 1}" for k in blade_indices(b)) or "1"
    return f"{mono}*{blade}"


def _identity_ops(ident: Identity, model: Model) -> Tuple[GradedOperator, GradedOperator]:
    A = build_operator(ident.a, model)
    if ident.kind == "equal":
        return A, build_operator(ident.b, model)
    lhs = A @ A if ident.kind == "square" else supercommutator(A, build_operator(ident.b, model))
    rhs = zero_operator(model, lhs.parity) if ident.rhs is None else build_operator(ident.rhs, model).scale(ident.coeff)
    return lhs, rhs


def verify_table(tbl: CommutatorTable, degree: int = 3) -> StructureReport:
    rep = StructureReport(f"table {tbl.name} on {tbl.model}")
    basis = spanning_set(tbl.model.n, degree)
    rep.data["spanning set size"] = len(basis)
    results = {}
    for ident in tbl.identities:
        lhs, rhs = _identity_ops(ident, tbl.model)
        bad = None
        for key in basis:
            if lhs.on_basis(key) != rhs.on_basis(key):
                bad = key
                break
        results[ident.label] = "pass" if bad is None else "fail"
        if bad is not None:
            rep.fail(ident.label, _key_text(bad))
    rep.data["identities"] = results
    return rep
