"""Spinors of the flat hermitian model C^m = R^{2m}.

Real coordinates are ordered (x_1, y_1, ..., x_m, y_m), so dz_j =
dx_{2j-1} + i dx_{2j} in the numbering used by :class:`Multivector`.
Spinors live in Lambda^{0,*}: a TMSpinor is a sparse map from bitmasks
over {dzbar_1..dzbar_m} to coefficients.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Mapping, Optional, Sequence

from .exterior import Multivector, blade_sign, contract_sign, popcount
from .scalar import I, ONE, ZERO, Scalar, as_scalar

__all__ = [
    "TMSpinor",
    "HermitianModel",
    "tm_clifford_act",
    "charge_conj",
    "charge_conj_square_sign",
    "tm_fierz",
    "spinor_pairing",
]


@dataclass(frozen=True)
class HermitianModel:
    """Flat g, J, omega, Omega on R^{2m}."""

    m: int

    def __post_init__(self):
        if not 1 <= self.m <= 6:
            raise ValueError("complex dimension must be in 1..6")

    @property
    def n(self) -> int:
        return 2 * self.m

    def metric(self):
        from .linalg import identity

        return identity(self.n)

    def J(self):
        """J d/dx_j = d/dy_j, J d/dy_j = -d/dx_j, as a matrix acting on column vectors."""
        n = self.n
        rows = [[ZERO] * n for _ in range(n)]
        for j in range(self.m):
            x, y = 2 * j, 2 * j + 1
            rows[y][x] = ONE
            rows[x][y] = -ONE
        return tuple(tuple(r) for r in rows)

    def omega(self) -> Multivector:
        out = Multivector(self.n)
        for j in range(self.m):
            out = out + Multivector.basis(self.n, 2 * j + 1, 2 * j + 2)
        return out

    def dz(self, j: int) -> Multivector:
        return Multivector.basis(self.n, 2 * j - 1) + Multivector.basis(self.n, 2 * j) * I

    def Omega(self) -> Multivector:
        out = Multivector.scalar(self.n)
        for j in range(1, self.m + 1):
            out = out ^ self.dz(j)
        return out


@dataclass(frozen=True)
class TMSpinor:
    m: int
    coeffs: Mapping[int, Scalar] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for b, c in dict(self.coeffs).items():
            if not 0 <= b < (1 << self.m):
                raise ValueError("monomial outside Lambda^{0,*}")
            c = as_scalar(c)
            if c:
                clean[b] = c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def one(cls, m: int) -> "TMSpinor":
        return cls(m, {0: ONE})

    @classmethod
    def monomial(cls, m: int, *indices: int, coeff=1) -> "TMSpinor":
        blade = 0
        for j in indices:
            blade |= 1 << (j - 1)
        return cls(m, {blade: coeff})

    def chirality(self) -> Optional[str]:
        """'+' for Lambda^{0,ev}, '-' for Lambda^{0,od}, None if mixed or zero."""
        par = {popcount(b) % 2 for b in self.coeffs}
        if par == {0}:
            return "+"
        if par == {1}:
            return "-"
        return None

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "TMSpinor") -> "TMSpinor":
        out = dict(self.coeffs)
        for b, c in other.coeffs.items():
            out[b] = out.get(b, ZERO) + c
        return TMSpinor(self.m, out)

    def __neg__(self) -> "TMSpinor":
        return TMSpinor(self.m, {b: -c for b, c in self.coeffs.items()})

    def __sub__(self, other: "TMSpinor") -> "TMSpinor":
        return self + (-other)

    def __mul__(self, s) -> "TMSpinor":
        s = as_scalar(s)
        return TMSpinor(self.m, {b: c * s for b, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for b in sorted(self.coeffs, key=lambda b: (popcount(b), b)):
            name = "^".join(f"dzb{j + 1}" for j in range(self.m) if b >> j & 1) or "1"
            parts.append(f"({self.coeffs[b]})*{name}")
        return " + ".join(parts)


def _wedge_dzbar(j: int, coeffs: Dict[int, Scalar]) -> Dict[int, Scalar]:
    bit = 1 << j
    out = {}
    for b, c in coeffs.items():
        if not b & bit:
            out[b | bit] = c if blade_sign(bit, b) > 0 else -c
    return out


def _contract_dzbar(j: int, coeffs: Dict[int, Scalar]) -> Dict[int, Scalar]:
    out = {}
    for b, c in coeffs.items():
        s = contract_sign(j, b)
        if s:
            out[b ^ (1 << j)] = c if s > 0 else -c
    return out


def _accumulate(acc: Dict[int, Scalar], part: Dict[int, Scalar], factor: Scalar) -> None:
    for b, c in part.items():
        v = c * factor
        acc[b] = acc[b] + v if b in acc else v


def tm_clifford_act(X: Sequence, psi: TMSpinor) -> TMSpinor:
    """mu(X, psi) = sum_j dz_j(X) dzbar_j ^ psi - dzbar_j(X) (d/dzbar_j) _| psi.

    Complex-linear in X; for real X, Y the anticommutator is -2 g(X, Y).
    """
    m = psi.m
    if len(X) != 2 * m:
        raise ValueError(f"tangent vector needs {2 * m} components, got {len(X)}")
    X = [as_scalar(x) for x in X]
    out: Dict[int, Scalar] = {}
    for j in range(m):
        a, b = X[2 * j], X[2 * j + 1]
        dz = a + b * I
        dzb = a - b * I
        if dz:
            _accumulate(out, _wedge_dzbar(j, psi.coeffs), dz)
        if dzb:
            _accumulate(out, _contract_dzbar(j, psi.coeffs), -dzb)
    return TMSpinor(m, out)


def charge_conj(psi: TMSpinor) -> TMSpinor:
    """A = P_1 ... P_m o K, P_j = dzbar_j ^ + (d/dzbar_j) _|, K = coefficient conjugation.

    A is conjugate linear, A mu(X) = (-1)^m mu(X) A for real X, and
    A(1) = dzbar_1 ^ ... ^ dzbar_m exactly.
    """
    coeffs = {b: c.conj() for b, c in psi.coeffs.items()}
    for j in reversed(range(psi.m)):
        w = _wedge_dzbar(j, coeffs)
        _accumulate(w, _contract_dzbar(j, coeffs), ONE)
        coeffs = w
    return TMSpinor(psi.m, coeffs)


def charge_conj_square_sign(m: int) -> int:
    """A o A = (-1)^(m(m-1)/2) Id."""
    return -1 if (m * (m - 1) // 2) % 2 else 1


def spinor_pairing(psi: TMSpinor, phi: TMSpinor) -> Scalar:
    """Bilinear pairing: top coefficient of psi ^ hat(phi) in Lambda^{0,*}."""
    m = psi.m
    top = (1 << m) - 1
    total = ZERO
    for b, c in psi.coeffs.items():
        d = phi.coeffs.get(top ^ b)
        if d is None:
            continue
        p = popcount(top ^ b)
        sign = blade_sign(b, top ^ b) * (-1 if (p * (p + 1) // 2) % 2 else 1)
        total = total + (c * d if sign > 0 else -(c * d))
    return total


def tm_fierz(psi: TMSpinor, phi: TMSpinor) -> Multivector:
    """psi (x) phi as a complex form on R^{2m}.

    The coefficient of dx_I is spinor_pairing(e_I . psi, phi), where
    e_I . psi applies mu(e_i) for i in I with the largest index first.
    With this normalisation 1 (x) 1 = Omega and A(1) (x) 1 = exp(i omega).
    """
    if psi.m != phi.m:
        raise ValueError("spinors of different models")
    m = psi.m
    n = 2 * m
    basis = [[ONE if i == k else ZERO for i in range(n)] for k in range(n)]
    out: Dict[int, Scalar] = {}
    if psi.is_zero() or phi.is_zero():
        return Multivector(n)
    for k in range(n + 1):
        for idx in combinations(range(n), k):
            v = psi
            for i in reversed(idx):
                v = tm_clifford_act(basis[i], v)
            c = spinor_pairing(v, phi)
            if c:
                out[sum(1 << i for i in idx)] = c
    return Multivector(n, out)
