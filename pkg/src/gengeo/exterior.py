"""Exterior algebra of R^n with Gaussian-rational coefficients.

Blades are bitmasks: bit ``k`` set means ``dx_{k+1}`` is a factor, and the
factors of a blade are always taken in ascending order.  Every sign in the
package that comes from reordering 1-forms goes through :func:`blade_sign`
or :func:`contract_sign`.
"""
from __future__ import annotations

from math import factorial
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple

from .scalar import ONE, ZERO, Scalar, as_scalar

__all__ = [
    "MAX_DIM",
    "Multivector",
    "blade_sign",
    "contract_sign",
    "blade_indices",
    "popcount",
    "wedge",
    "contract",
    "hat",
    "mukai",
    "exp_even",
    "grade_project",
]

MAX_DIM = 12


def popcount(x: int) -> int:
    return bin(x).count("1")


def blade_indices(blade: int) -> Tuple[int, ...]:
    """Zero-based indices of the factors of ``blade``, ascending."""
    out = []
    k = 0
    while blade:
        if blade & 1:
            out.append(k)
        blade >>= 1
        k += 1
    return tuple(out)


def blade_sign(a: int, b: int) -> int:
    """Sign of dx_a ^ dx_b relative to the ascending blade a|b (0 if they share a factor)."""
    if a & b:
        return 0
    swaps = 0
    bb = b
    while bb:
        low = bb & -bb
        swaps += popcount(a & ~((low << 1) - 1))
        bb ^= low
    return -1 if swaps & 1 else 1


def contract_sign(k: int, blade: int) -> int:
    """Sign of e_k _| dx_blade (0 if dx_k is not a factor); ``k`` is zero-based."""
    if not (blade >> k) & 1:
        return 0
    return -1 if popcount(blade & ((1 << k) - 1)) & 1 else 1


def _hat_sign(p: int) -> int:
    return -1 if (p * (p + 1) // 2) & 1 else 1


class Multivector:
    """Sparse element of Lambda^* (R^n)^* (x) C with exact coefficients."""

    __slots__ = ("dim", "_terms", "_hash")

    def __init__(self, dim: int, terms: Mapping[int, object] | None = None):
        if not isinstance(dim, int) or dim < 1 or dim > MAX_DIM:
            raise ValueError(f"dimension must be an integer in 1..{MAX_DIM}, got {dim!r}")
        self.dim = dim
        clean: Dict[int, Scalar] = {}
        top = 1 << dim
        for blade, c in (terms or {}).items():
            if not 0 <= blade < top:
                raise ValueError(f"blade {blade:#b} does not fit in dimension {dim}")
            s = as_scalar(c)
            if s:
                clean[blade] = s
        self._terms = clean
        self._hash = None

    @classmethod
    def _trusted(cls, dim: int, terms: Dict[int, Scalar]) -> "Multivector":
        mv = object.__new__(cls)
        mv.dim = dim
        mv._terms = {b: c for b, c in terms.items() if c}
        mv._hash = None
        return mv

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, dim: int) -> "Multivector":
        return cls(dim)

    @classmethod
    def scalar(cls, dim: int, value=1) -> "Multivector":
        return cls(dim, {0: value})

    @classmethod
    def basis(cls, dim: int, *indices: int, coeff=1) -> "Multivector":
        """dx_{i1} ^ ... ^ dx_{ik} with 1-based indices, in the given order."""
        out = cls.scalar(dim, coeff)
        for i in indices:
            if not 1 <= i <= dim:
                raise ValueError(f"index {i} out of range for dimension {dim}")
            out = out ^ cls(dim, {1 << (i - 1): 1})
        return out

    @classmethod
    def top(cls, dim: int, coeff=1) -> "Multivector":
        return cls(dim, {(1 << dim) - 1: coeff})

    # -- mapping-ish access ----------------------------------------------
    @property
    def terms(self) -> Mapping[int, Scalar]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[int, Scalar]]:
        return iter(self._terms.items())

    def coeff(self, blade: int) -> Scalar:
        return self._terms.get(blade, ZERO)

    def __getitem__(self, indices: Iterable[int]) -> Scalar:
        """Coefficient of the ascending blade given by 1-based indices."""
        blade = 0
        for i in indices:
            blade |= 1 << (i - 1)
        return self.coeff(blade)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def grades(self) -> Tuple[int, ...]:
        return tuple(sorted({popcount(b) for b in self._terms}))

    def is_even(self) -> bool:
        return all(popcount(b) % 2 == 0 for b in self._terms)

    def is_odd(self) -> bool:
        return all(popcount(b) % 2 == 1 for b in self._terms)

    def top_coeff(self) -> Scalar:
        return self.coeff((1 << self.dim) - 1)

    def scalar_part(self) -> Scalar:
        return self.coeff(0)

    # -- linear structure ------------------------------------------------
    def _check(self, other: "Multivector") -> None:
        if not isinstance(other, Multivector):
            raise TypeError(f"expected Multivector, got {type(other).__name__}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "Multivector") -> "Multivector":
        if not isinstance(other, Multivector):
            other = Multivector.scalar(self.dim, other)
        self._check(other)
        out = dict(self._terms)
        for b, c in other._terms.items():
            out[b] = out[b] + c if b in out else c
        return Multivector._trusted(self.dim, out)

    __radd__ = __add__

    def __neg__(self) -> "Multivector":
        return Multivector._trusted(self.dim, {b: -c for b, c in self._terms.items()})

    def __sub__(self, other: "Multivector") -> "Multivector":
        if not isinstance(other, Multivector):
            other = Multivector.scalar(self.dim, other)
        return self + (-other)

    def __rsub__(self, other) -> "Multivector":
        return (-self) + other

    def __mul__(self, s) -> "Multivector":
        if isinstance(s, Multivector):
            return wedge(self, s)
        s = as_scalar(s)
        if not s:
            return Multivector(self.dim)
        return Multivector._trusted(self.dim, {b: c * s for b, c in self._terms.items()})

    def __rmul__(self, s) -> "Multivector":
        return self * s

    def __truediv__(self, s) -> "Multivector":
        return self * as_scalar(s).inverse()

    def __xor__(self, other: "Multivector") -> "Multivector":
        return wedge(self, other)

    def conj(self) -> "Multivector":
        return Multivector._trusted(self.dim, {b: c.conj() for b, c in self._terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.dim == other.dim and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dim, frozenset(self._terms.items())))
        return self._hash

    # -- vector view -----------------------------------------------------
    def to_vector(self) -> list:
        """Dense coefficient list indexed by blade bitmask (length 2^n)."""
        return [self._terms.get(b, ZERO) for b in range(1 << self.dim)]

    @classmethod
    def from_vector(cls, dim: int, values: Sequence) -> "Multivector":
        return cls(dim, {b: v for b, v in enumerate(values)})

    def __repr__(self) -> str:
        return f"Multivector(dim={self.dim}, {format_form(self)})"

    def __str__(self) -> str:
        return format_form(self)


def format_form(a: Multivector, symbol: str = "dx") -> str:
    if not a._terms:
        return "0"
    parts = []
    for b in sorted(a._terms, key=lambda b: (popcount(b), blade_indices(b))):
        c = a._terms[b]
        name = "^".join(f"{symbol}{k + 1}" for k in blade_indices(b))
        cs = str(c)
        if not name:
            parts.append(f"({cs})" if "+" in cs[1:] or "-" in cs[1:] else cs)
        elif c == ONE:
            parts.append(name)
        elif c == -ONE:
            parts.append(f"-{name}")
        else:
            parts.append(f"({cs})*{name}")
    return " + ".join(parts).replace("+ -", "- ")


# -- operations ------------------------------------------------------------

def wedge(a: Multivector, b: Multivector) -> Multivector:
    a._check(b)
    out: Dict[int, Scalar] = {}
    for ba, ca in a._terms.items():
        for bb, cb in b._terms.items():
            if ba & bb:
                continue
            sign = blade_sign(ba, bb)
            key = ba | bb
            v = ca * cb if sign > 0 else -(ca * cb)
            out[key] = out[key] + v if key in out else v
    return Multivector._trusted(a.dim, out)


def contract(X: Sequence, a: Multivector) -> Multivector:
    """Interior product X _| a for a tangent vector X given by n components."""
    if len(X) != a.dim:
        raise ValueError(f"dimension mismatch: vector of length {len(X)} vs forms on R^{a.dim}")
    comps = [(k, as_scalar(x)) for k, x in enumerate(X)]
    comps = [(k, x) for k, x in comps if x]
    out: Dict[int, Scalar] = {}
    for blade, c in a._terms.items():
        for k, x in comps:
            s = contract_sign(k, blade)
            if not s:
                continue
            key = blade ^ (1 << k)
            v = c * x if s > 0 else -(c * x)
            out[key] = out[key] + v if key in out else v
    return Multivector._trusted(a.dim, out)


def hat(a: Multivector) -> Multivector:
    """Multiply the degree-p part by (-1)^(p(p+1)/2)."""
    return Multivector._trusted(
        a.dim, {b: (c if _hat_sign(popcount(b)) > 0 else -c) for b, c in a._terms.items()}
    )


def mukai(a: Multivector, b: Multivector) -> Scalar:
    """Top-degree coefficient of a ^ hat(b)."""
    a._check(b)
    top = (1 << a.dim) - 1
    total = ZERO
    for ba, ca in a._terms.items():
        bb = top ^ ba
        cb = b._terms.get(bb)
        if cb is None:
            continue
        sign = blade_sign(ba, bb) * _hat_sign(popcount(bb))
        total = total + (ca * cb if sign > 0 else -(ca * cb))
    return total


def exp_even(B: Multivector) -> Multivector:
    """1 + B + B^B/2! + ... for B with only even grades >= 2 (the sum terminates)."""
    bad = [g for g in B.grades() if g == 0 or g % 2]
    if bad:
        raise ValueError(f"exp_even needs even grades >= 2, found grade(s) {bad}")
    out = Multivector.scalar(B.dim)
    power = Multivector.scalar(B.dim)
    k = 0
    while True:
        k += 1
        power = wedge(power, B)
        if not power:
            return out
        out = out + power * Scalar(1) / factorial(k)


def grade_project(a: Multivector, k: int) -> Multivector:
    if not 0 <= k <= a.dim:
        raise ValueError(f"grade {k} out of range 0..{a.dim}")
    return Multivector._trusted(a.dim, {b: c for b, c in a._terms.items() if popcount(b) == k})
