"""Polynomial (and, where unavoidable, rational-function) coefficients on R^n.

``Poly`` is a sparse map from exponent tuples to :class:`Scalar`.
``RatFunc`` is a bare numerator/denominator pair with no gcd reduction;
it only appears when a structure field has to be inverted (e.g. J_omega
for non-constant omega).  Both expose the same small interface used by
the calculus layer: ring operations, ``diff``, ``at`` and ``is_zero``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Mapping, Sequence, Tuple, Union

from .exterior import Multivector, blade_indices, blade_sign, contract_sign, popcount
from .scalar import ONE, ZERO, Scalar, as_scalar

__all__ = ["Poly", "RatFunc", "PolyForm", "PolySection", "coerce", "Coeff"]

Exps = Tuple[int, ...]


class Poly:
    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Mapping[Exps, object] | None = None):
        self.n = n
        clean: Dict[Exps, Scalar] = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n or any(k < 0 for k in e):
                raise ValueError(f"bad exponent {e} for {n} variables")
            c = as_scalar(c)
            if c:
                clean[e] = clean[e] + c if e in clean else c
        self._terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def _raw(cls, n: int, terms: Dict[Exps, Scalar]) -> "Poly":
        p = object.__new__(cls)
        p.n = n
        p._terms = {e: c for e, c in terms.items() if c}
        return p

    @classmethod
    def const(cls, n: int, c=1) -> "Poly":
        return cls(n, {(0,) * n: c})

    @classmethod
    def var(cls, n: int, k: int) -> "Poly":
        """x_k, 1-based."""
        e = [0] * n
        e[k - 1] = 1
        return cls(n, {tuple(e): 1})

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1) -> "Poly":
        return cls(len(exps), {tuple(exps): c})

    @property
    def terms(self) -> Dict[Exps, Scalar]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def is_const(self) -> bool:
        return all(not any(e) for e in self._terms)

    def const_value(self) -> Scalar:
        return self._terms.get((0,) * self.n, ZERO)

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.n != self.n:
                raise ValueError(f"variable count mismatch: {self.n} vs {other.n}")
            return other
        if isinstance(other, (int, Fraction, Scalar)):
            return Poly.const(self.n, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in o._terms.items():
            out[e] = out[e] + c if e in out else c
        return Poly._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.n, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            s = as_scalar(other)
            return Poly._raw(self.n, {e: c * s for e, c in self._terms.items()})
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: Dict[Exps, Scalar] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in o._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = c1 * c2
                out[e] = out[e] + v if e in out else v
        return Poly._raw(self.n, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self * as_scalar(other).inverse()
        return RatFunc(self, other)

    def __rtruediv__(self, other):
        return RatFunc(Poly.const(self.n, other), self)

    def __pow__(self, k: int) -> "Poly":
        out = Poly.const(self.n)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, RatFunc):
            return other == self
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def conj(self) -> "Poly":
        return Poly._raw(self.n, {e: c.conj() for e, c in self._terms.items()})

    def diff(self, k: int) -> "Poly":
        """d/dx_{k+1} (``k`` zero-based)."""
        out: Dict[Exps, Scalar] = {}
        for e, c in self._terms.items():
            p = e[k]
            if p:
                ne = e[:k] + (p - 1,) + e[k + 1 :]
                out[ne] = c * p
        return Poly._raw(self.n, out)

    def at(self, point: Sequence) -> Scalar:
        pt = [as_scalar(x) for x in point]
        total = ZERO
        for e, c in self._terms.items():
            v = c
            for x, p in zip(pt, e):
                if p:
                    v = v * x ** p
            total = total + v
        return total

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e in sorted(self._terms, key=lambda e: (sum(e), tuple(-k for k in e))):
            c = self._terms[e]
            mono = "*".join(f"x{k + 1}" for k, p in enumerate(e) for _ in range(p))
            cs = str(c)
            if not mono:
                parts.append(f"({cs})" if ("+" in cs[1:] or "-" in cs[1:]) else cs)
            elif c == ONE:
                parts.append(mono)
            elif c == -ONE:
                parts.append("-" + mono)
            elif "+" in cs[1:] or "-" in cs[1:] or cs.endswith("i"):
                parts.append(f"({cs})*{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"Poly({self})"


class RatFunc:
    """num / den with den != 0; no cancellation is attempted."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, Poly):
            raise TypeError("numerator must be a Poly")
        den = Poly.const(num.n) if den is None else den
        if not isinstance(den, Poly):
            den = Poly.const(num.n, den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if den.is_const():
            num, den = num * den.const_value().inverse(), Poly.const(num.n)
        self.num = num
        self.den = den

    @property
    def n(self) -> int:
        return self.num.n

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(other)
        if isinstance(other, (int, Fraction, Scalar)):
            return RatFunc(Poly.const(self.n, other))
        return None

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num * o.den == o.num * self.den

    __hash__ = None

    def conj(self) -> "RatFunc":
        return RatFunc(self.num.conj(), self.den.conj())

    def diff(self, k: int) -> "RatFunc":
        return RatFunc(self.num.diff(k) * self.den - self.num * self.den.diff(k), self.den * self.den)

    def at(self, point: Sequence) -> Scalar:
        d = self.den.at(point)
        if not d:
            raise ZeroDivisionError("denominator vanishes at the sample point")
        return self.num.at(point) / d

    def __str__(self) -> str:
        if self.den.is_const():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RatFunc({self})"


Coeff = Union[Poly, RatFunc]


def coerce(x, n: int) -> Coeff:
    if isinstance(x, (Poly, RatFunc)):
        if x.n != n:
            raise ValueError(f"variable count mismatch: {x.n} vs {n}")
        return x
    return Poly.const(n, x)


class PolyForm:
    """Differential form on R^n with Poly or RatFunc coefficients."""

    __slots__ = ("dim", "_terms")

    def __init__(self, dim: int, terms: Mapping[int, object] | None = None):
        self.dim = dim
        clean = {}
        for b, c in (terms or {}).items():
            if not 0 <= b < (1 << dim):
                raise ValueError(f"blade {b:#b} does not fit in dimension {dim}")
            c = coerce(c, dim)
            if not c.is_zero():
                clean[b] = c
        self._terms = clean

    @classmethod
    def _raw(cls, dim: int, terms: Dict[int, Coeff]) -> "PolyForm":
        f = object.__new__(cls)
        f.dim = dim
        f._terms = {b: c for b, c in terms.items() if not c.is_zero()}
        return f

    @classmethod
    def from_multivector(cls, a: Multivector) -> "PolyForm":
        return cls(a.dim, {b: Poly.const(a.dim, c) for b, c in a.items()})

    @classmethod
    def function(cls, f) -> "PolyForm":
        return cls(f.n, {0: f})

    @classmethod
    def basis(cls, dim: int, *indices: int, coeff=1) -> "PolyForm":
        return cls.from_multivector(Multivector.basis(dim, *indices, coeff=1)) * coerce(coeff, dim)

    @property
    def terms(self) -> Dict[int, Coeff]:
        return dict(self._terms)

    def items(self):
        return iter(self._terms.items())

    def coeff(self, blade: int) -> Coeff:
        return self._terms.get(blade, Poly(self.dim))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def grades(self) -> Tuple[int, ...]:
        return tuple(sorted({popcount(b) for b in self._terms}))

    def _check(self, other: "PolyForm") -> None:
        if not isinstance(other, PolyForm):
            raise TypeError(f"expected PolyForm, got {type(other).__name__}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "PolyForm") -> "PolyForm":
        if isinstance(other, Multivector):
            other = PolyForm.from_multivector(other)
        self._check(other)
        out = dict(self._terms)
        for b, c in other._terms.items():
            out[b] = out[b] + c if b in out else c
        return PolyForm._raw(self.dim, out)

    def __neg__(self) -> "PolyForm":
        return PolyForm._raw(self.dim, {b: -c for b, c in self._terms.items()})

    def __sub__(self, other: "PolyForm") -> "PolyForm":
        if isinstance(other, Multivector):
            other = PolyForm.from_multivector(other)
        return self + (-other)

    def __mul__(self, other) -> "PolyForm":
        if isinstance(other, (PolyForm, Multivector)):
            return self.wedge(other)
        f = coerce(other, self.dim)
        return PolyForm._raw(self.dim, {b: c * f for b, c in self._terms.items()})

    __rmul__ = __mul__

    def __xor__(self, other) -> "PolyForm":
        return self.wedge(other)

    def wedge(self, other) -> "PolyForm":
        if isinstance(other, Multivector):
            other = PolyForm.from_multivector(other)
        self._check(other)
        out: Dict[int, Coeff] = {}
        for ba, ca in self._terms.items():
            for bb, cb in other._terms.items():
                if ba & bb:
                    continue
                v = ca * cb
                if blade_sign(ba, bb) < 0:
                    v = -v
                key = ba | bb
                out[key] = out[key] + v if key in out else v
        return PolyForm._raw(self.dim, out)

    def contract(self, X: Sequence) -> "PolyForm":
        """X _| self for a vector field with n coefficient components."""
        if len(X) != self.dim:
            raise ValueError("dimension mismatch in contraction")
        comps = [(k, coerce(x, self.dim)) for k, x in enumerate(X)]
        comps = [(k, x) for k, x in comps if not x.is_zero()]
        out: Dict[int, Coeff] = {}
        for blade, c in self._terms.items():
            for k, x in comps:
                s = contract_sign(k, blade)
                if not s:
                    continue
                v = c * x
                if s < 0:
                    v = -v
                key = blade ^ (1 << k)
                out[key] = out[key] + v if key in out else v
        return PolyForm._raw(self.dim, out)

    def diff(self, k: int) -> "PolyForm":
        """Coefficientwise d/dx_{k+1}."""
        return PolyForm._raw(self.dim, {b: c.diff(k) for b, c in self._terms.items()})

    def conj(self) -> "PolyForm":
        return PolyForm._raw(self.dim, {b: c.conj() for b, c in self._terms.items()})

    def at(self, point: Sequence) -> Multivector:
        return Multivector(self.dim, {b: c.at(point) for b, c in self._terms.items()})

    def grade(self, k: int) -> "PolyForm":
        return PolyForm._raw(self.dim, {b: c for b, c in self._terms.items() if popcount(b) == k})

    def __eq__(self, other) -> bool:
        if isinstance(other, Multivector):
            other = PolyForm.from_multivector(other)
        if not isinstance(other, PolyForm):
            return NotImplemented
        if self.dim != other.dim:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for b in sorted(self._terms, key=lambda b: (popcount(b), blade_indices(b))):
            c = self._terms[b]
            name = "^".join(f"dx{k + 1}" for k in blade_indices(b))
            cs = str(c)
            if not name:
                parts.append(f"({cs})")
            elif c == Poly.const(self.dim):
                parts.append(name)
            else:
                parts.append(f"({cs})*{name}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"PolyForm({self})"


class PolySection:
    """Section X + xi of (T + T*) (x) C with Poly/RatFunc components."""

    __slots__ = ("dim", "tangent", "cotangent")

    def __init__(self, tangent: Sequence, cotangent: Sequence):
        if len(tangent) != len(cotangent):
            raise ValueError("tangent and cotangent parts must have the same length")
        n = len(tangent)
        self.dim = n
        self.tangent = tuple(coerce(x, n) for x in tangent)
        self.cotangent = tuple(coerce(x, n) for x in cotangent)

    @classmethod
    def zero(cls, n: int) -> "PolySection":
        return cls([0] * n, [0] * n)

    @classmethod
    def e(cls, n: int, i: int, coeff=1) -> "PolySection":
        t = [0] * n
        t[i - 1] = coeff
        return cls(t, [0] * n)

    @classmethod
    def dx(cls, n: int, i: int, coeff=1) -> "PolySection":
        c = [0] * n
        c[i - 1] = coeff
        return cls([0] * n, c)

    @classmethod
    def from_form(cls, X: Sequence, xi: PolyForm) -> "PolySection":
        """X + xi with xi given as a 1-form."""
        bad = [g for g in xi.grades() if g != 1]
        if bad:
            raise ValueError("cotangent part must be a 1-form")
        n = xi.dim
        return cls(X, [xi.coeff(1 << k) for k in range(n)])

    @classmethod
    def constant(cls, z) -> "PolySection":
        return cls(list(z.tangent), list(z.cotangent))

    @property
    def components(self) -> Tuple[Coeff, ...]:
        return self.tangent + self.cotangent

    def xi_form(self) -> PolyForm:
        return PolyForm(self.dim, {1 << k: c for k, c in enumerate(self.cotangent)})

    def __add__(self, other: "PolySection") -> "PolySection":
        return PolySection(
            [a + b for a, b in zip(self.tangent, other.tangent)],
            [a + b for a, b in zip(self.cotangent, other.cotangent)],
        )

    def __neg__(self) -> "PolySection":
        return PolySection([-a for a in self.tangent], [-a for a in self.cotangent])

    def __sub__(self, other: "PolySection") -> "PolySection":
        return self + (-other)

    def __mul__(self, f) -> "PolySection":
        f = coerce(f, self.dim)
        return PolySection([a * f for a in self.tangent], [a * f for a in self.cotangent])

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def conj(self) -> "PolySection":
        return PolySection([a.conj() for a in self.tangent], [a.conj() for a in self.cotangent])

    def at(self, point: Sequence):
        from .clifford import GenVector

        return GenVector(tuple(c.at(point) for c in self.tangent), tuple(c.at(point) for c in self.cotangent))

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolySection):
            return NotImplemented
        return self.dim == other.dim and (self - other).is_zero()

    __hash__ = None

    def __str__(self) -> str:
        t = ", ".join(map(str, self.tangent))
        return f"({t}) + {self.xi_form()}"

    def __repr__(self) -> str:
        return f"PolySection({self})"
