"""V + V* with its split pairing, acting on forms by Clifford multiplication.

Coordinates on V + V* are ordered (X_1..X_n, xi_1..xi_n).  The Clifford
generators are indexed 0..2n-1 in the same order: generator k < n is the
tangent vector e_{k+1}, generator n + k is the covector dx_{k+1}.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from . import linalg
from .exterior import (
    Multivector,
    blade_indices,
    blade_sign,
    contract_sign,
    mukai,
    popcount,
)
from .scalar import ONE, ZERO, Scalar, as_scalar

__all__ = [
    "GenVector",
    "Subspace",
    "GenMultivector",
    "split_pairing",
    "clifford_act",
    "generator_act",
    "self_adjointness_check",
    "annihilator",
    "is_pure",
    "type_of",
    "subspace_meet",
    "subspace_conj",
    "spinor_outer",
    "spinor_lowest_degree",
    "lowest_degree",
    "uk_decompose",
    "uk_dimensions",
    "is_isotropic",
    "skew_act",
]

HALF = Scalar(1, 0) / 2


@dataclass(frozen=True)
class GenVector:
    """Z = X + xi in (V + V*) (x) C."""

    tangent: Tuple[Scalar, ...]
    cotangent: Tuple[Scalar, ...]

    def __post_init__(self):
        if len(self.tangent) != len(self.cotangent):
            raise ValueError("tangent and cotangent parts must have the same length")
        object.__setattr__(self, "tangent", tuple(as_scalar(x) for x in self.tangent))
        object.__setattr__(self, "cotangent", tuple(as_scalar(x) for x in self.cotangent))

    @property
    def dim(self) -> int:
        return len(self.tangent)

    @classmethod
    def from_coords(cls, coords: Sequence) -> "GenVector":
        n = len(coords) // 2
        return cls(tuple(coords[:n]), tuple(coords[n:]))

    @classmethod
    def zero(cls, n: int) -> "GenVector":
        return cls((ZERO,) * n, (ZERO,) * n)

    @classmethod
    def e(cls, n: int, i: int) -> "GenVector":
        """Tangent basis vector e_i (1-based)."""
        t = [ZERO] * n
        t[i - 1] = ONE
        return cls(tuple(t), (ZERO,) * n)

    @classmethod
    def dx(cls, n: int, i: int) -> "GenVector":
        """Cotangent basis vector dx_i (1-based)."""
        c = [ZERO] * n
        c[i - 1] = ONE
        return cls((ZERO,) * n, tuple(c))

    @property
    def coords(self) -> Tuple[Scalar, ...]:
        return self.tangent + self.cotangent

    def conj(self) -> "GenVector":
        return GenVector(tuple(x.conj() for x in self.tangent), tuple(x.conj() for x in self.cotangent))

    def __add__(self, other: "GenVector") -> "GenVector":
        return GenVector.from_coords([a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: "GenVector") -> "GenVector":
        return GenVector.from_coords([a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "GenVector":
        return GenVector.from_coords([-a for a in self.coords])

    def __mul__(self, s) -> "GenVector":
        s = as_scalar(s)
        return GenVector.from_coords([a * s for a in self.coords])

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(not x for x in self.coords)

    def __str__(self) -> str:
        t = ", ".join(map(str, self.tangent))
        c = ", ".join(map(str, self.cotangent))
        return f"({t}) + ({c})"


def split_pairing(z: GenVector, w: GenVector) -> Scalar:
    """(X + xi, Y + eta) = (xi(Y) + eta(X)) / 2; bilinear, not Hermitian."""
    if z.dim != w.dim:
        raise ValueError(f"dimension mismatch: {z.dim} vs {w.dim}")
    s = ZERO
    for x, eta in zip(z.tangent, w.cotangent):
        if x and eta:
            s = s + x * eta
    for xi, y in zip(z.cotangent, w.tangent):
        if xi and y:
            s = s + xi * y
    return s * HALF


def is_isotropic(vectors: Sequence[GenVector]) -> bool:
    return all(not split_pairing(a, b) for a in vectors for b in vectors)


# -- Clifford action ------------------------------------------------------

def _gen_act_terms(k: int, n: int, terms: Dict[int, Scalar]) -> Dict[int, Scalar]:
    out: Dict[int, Scalar] = {}
    if k < n:
        bit = 1 << k
        for blade, c in terms.items():
            s = contract_sign(k, blade)
            if s:
                out[blade ^ bit] = c if s < 0 else -c
    else:
        bit = 1 << (k - n)
        for blade, c in terms.items():
            if blade & bit:
                continue
            s = blade_sign(bit, blade)
            out[blade | bit] = c if s > 0 else -c
    return out


def generator_act(k: int, rho: Multivector) -> Multivector:
    """Action of Clifford generator k (0-based, see module docstring) on a form."""
    return Multivector._trusted(rho.dim, _gen_act_terms(k, rho.dim, rho._terms))


def clifford_act(z: GenVector, rho: Multivector) -> Multivector:
    """(X + xi) . rho = -X _| rho + xi ^ rho."""
    n = rho.dim
    if z.dim != n:
        raise ValueError(f"dimension mismatch: GenVector on R^{z.dim}, form on R^{n}")
    out: Dict[int, Scalar] = {}
    for k, c in enumerate(z.coords):
        if not c:
            continue
        for blade, v in _gen_act_terms(k, n, rho._terms).items():
            v = v * c
            out[blade] = out[blade] + v if blade in out else v
    return Multivector._trusted(n, out)


def self_adjointness_check(z: GenVector, rho: Multivector, tau: Multivector) -> bool:
    if rho.dim % 2:
        raise ValueError("self-adjointness of Clifford multiplication needs even n")
    return mukai(clifford_act(z, rho), tau) == mukai(rho, clifford_act(z, tau))


# -- subspaces ------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """Complex subspace of C^ambient stored by its reduced row-echelon basis.

    For subspaces of (V + V*) (x) C, ``ambient == 2 * n``.
    """

    n: int
    basis: Tuple[Tuple[Scalar, ...], ...]
    ambient: int

    @classmethod
    def span(cls, n: int, vectors: Iterable, ambient: Optional[int] = None) -> "Subspace":
        ambient = 2 * n if ambient is None else ambient
        rows = []
        for v in vectors:
            row = tuple(v.coords) if isinstance(v, GenVector) else tuple(as_scalar(x) for x in v)
            if len(row) != ambient:
                raise ValueError(f"vector of length {len(row)} in ambient dimension {ambient}")
            rows.append(row)
        red, _ = linalg.rref(rows) if rows else ((), ())
        return cls(n, red, ambient)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def vectors(self) -> List[GenVector]:
        if self.ambient != 2 * self.n:
            raise ValueError("not a subspace of V + V*")
        return [GenVector.from_coords(r) for r in self.basis]

    def contains(self, v) -> bool:
        row = tuple(v.coords) if isinstance(v, GenVector) else tuple(as_scalar(x) for x in v)
        return linalg.rank(list(self.basis) + [row]) == self.rank

    def tangent_rank(self) -> int:
        return linalg.rank([r[: self.n] for r in self.basis]) if self.basis else 0

    def __str__(self) -> str:
        if self.ambient == 2 * self.n:
            return "span{" + ", ".join(str(v) for v in self.vectors()) + "}"
        return f"<rank {self.rank} subspace of C^{self.ambient}>"


def subspace_meet(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient != b.ambient:
        raise ValueError(f"dimension mismatch: {a.ambient} vs {b.ambient}")
    if not a.basis or not b.basis:
        return Subspace(a.n, (), a.ambient)
    rows = list(a.basis) + list(b.basis)
    # coefficient vectors (c, d) with sum c_i a_i + sum d_j b_j = 0
    coeffs = linalg.nullspace(linalg.transpose(tuple(rows)))
    ka = len(a.basis)
    vecs = []
    for c in coeffs:
        v = [ZERO] * a.ambient
        for ci, row in zip(c[:ka], a.basis):
            if ci:
                v = [x + ci * y for x, y in zip(v, row)]
        vecs.append(v)
    return Subspace.span(a.n, vecs, a.ambient)


def subspace_conj(a: Subspace) -> Subspace:
    return Subspace.span(a.n, [[x.conj() for x in r] for r in a.basis], a.ambient)


# -- annihilators ---------------------------------------------------------

def _action_matrix(rho: Multivector) -> linalg.Matrix:
    n = rho.dim
    cols = [generator_act(k, rho) for k in range(2 * n)]
    blades = sorted({b for c in cols for b in c._terms})
    return tuple(tuple(c.coeff(b) for c in cols) for b in blades)


def annihilator(rho: Multivector) -> Tuple[Subspace, bool]:
    """W_rho = {Z : Z . rho = 0} and whether it has the maximal rank n."""
    if not rho:
        raise ValueError("the zero form has no annihilator of interest")
    n = rho.dim
    mat = _action_matrix(rho)
    kernel = linalg.nullspace(mat) if mat else linalg.nullspace((), 2 * n)
    w = Subspace.span(n, kernel)
    return w, w.rank == n


def is_pure(rho: Multivector) -> bool:
    return bool(rho) and annihilator(rho)[1]


def type_of(x: Union[Multivector, Subspace]) -> int:
    """Complex codimension of the projection of a maximal isotropic subspace onto V (x) C.

    0 for graphs over V such as the annihilator of exp(i*omega), m for
    T^{0,1} + T^{1,0*} in real dimension 2m.
    """
    if isinstance(x, Multivector):
        w, pure = annihilator(x)
        if not pure:
            raise ValueError("type is only defined for pure forms")
    else:
        w = x
        if w.rank != w.n or not is_isotropic(w.vectors()):
            raise ValueError("type needs a maximal isotropic subspace")
    return w.n - w.tangent_rank()


# -- spinor outer product -------------------------------------------------

def _grouped_order(n: int, blade: int) -> Tuple[int, List[int], List[int]]:
    """Sign of regrouping a generator blade, its paired indices and its single generators."""
    gens = blade_indices(blade)
    paired = [k for k in gens if k < n and (blade >> (k + n)) & 1]
    pset = set(paired) | {k + n for k in paired}
    singles = [k for k in gens if k not in pset]
    grouped = [g for k in paired for g in (k, k + n)] + singles
    pos = {g: i for i, g in enumerate(gens)}
    perm = [pos[g] for g in grouped]
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return (-1 if inv & 1 else 1), paired, singles


def skew_act(n: int, blade: int, rho: Multivector) -> Multivector:
    """Action of the skew-symmetrised Clifford monomial of a generator blade.

    A pair e_k, dx_k contributes (e_k dx_k - dx_k e_k)/2 = e_k dx_k + 1/2;
    all other generators anticommute, so the rest is an ordered product.
    """
    sign, paired, singles = _grouped_order(n, blade)
    terms = dict(rho._terms)
    for k in reversed(singles):
        terms = _gen_act_terms(k, n, terms)
    for k in paired:
        inner = _gen_act_terms(k, n, _gen_act_terms(k + n, n, terms))
        for b, c in terms.items():
            v = c * HALF
            inner[b] = inner[b] + v if b in inner else v
        terms = inner
    out = Multivector._trusted(n, terms)
    return out if sign > 0 else -out


def _dual_blade(n: int, blade: int) -> Tuple[int, int]:
    """Swap e_k <-> dx_k in a generator blade; returns (sign, swapped blade)."""
    low = blade & ((1 << n) - 1)
    high = blade >> n
    gens = [k + n for k in blade_indices(low)] + list(blade_indices(high))
    swapped = sorted(gens)
    pos = {g: i for i, g in enumerate(swapped)}
    perm = [pos[g] for g in gens]
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return (-1 if inv & 1 else 1), (low << n) | high


class GenMultivector(Multivector):
    """Element of Lambda^*(V + V*) (x) C: generators e_1..e_n then eps_1..eps_n."""

    __slots__ = ()

    @property
    def n(self) -> int:
        return self.dim // 2

    def degree_parts(self) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for b in self._terms:
            counts[popcount(b)] = counts.get(popcount(b), 0) + 1
        return counts

    def lowest_degree(self) -> Optional[int]:
        return min((popcount(b) for b in self._terms), default=None)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        n = self.n
        names = [f"e{k + 1}" for k in range(n)] + [f"eps{k + 1}" for k in range(n)]
        parts = []
        for b in sorted(self._terms, key=lambda b: (popcount(b), blade_indices(b))):
            label = "^".join(names[k] for k in blade_indices(b)) or "1"
            parts.append(f"({self._terms[b]})*{label}")
        return " + ".join(parts)


def spinor_outer(rho: Multivector, tau: Multivector, max_degree: Optional[int] = None) -> GenMultivector:
    """Image of rho (x) tau in Lambda^*(V + V*) (x) C.

    The coefficient on a generator blade A is mukai(E_A . rho, tau), with
    E_A the skew Clifford monomial of A, placed on the blade obtained by
    swapping e_k <-> eps_k.  Hence spinor_outer(1, 1) = e_1^...^e_n and the
    degree-0 part is mukai(rho, tau).  ``max_degree`` truncates the result.
    """
    rho._check(tau)
    n = rho.dim
    if 2 * n > 12:
        raise ValueError("spinor_outer needs 2n <= 12")
    top = 2 * n if max_degree is None else min(max_degree, 2 * n)
    out: Dict[int, Scalar] = {}
    for k in range(top + 1):
        for gens in combinations(range(2 * n), k):
            blade = sum(1 << g for g in gens)
            c = mukai(skew_act(n, blade, rho), tau)
            if c:
                s, dual = _dual_blade(n, blade)
                out[dual] = c if s > 0 else -c
    return GenMultivector._trusted(2 * n, out)


def spinor_lowest_degree(rho: Multivector, tau: Multivector) -> Optional[int]:
    """Lowest degree with a nonzero component in spinor_outer(rho, tau), found degree by degree."""
    rho._check(tau)
    n = rho.dim
    for k in range(2 * n + 1):
        for gens in combinations(range(2 * n), k):
            if mukai(skew_act(n, sum(1 << g for g in gens), rho), tau):
                return k
    return None


def lowest_degree(rho: Multivector, tau: Multivector, cross_check: bool = False) -> int:
    """rank(W_rho cap W_tau) for pure rho, tau.

    With ``cross_check`` the value is compared against the grading of
    spinor_outer(rho, tau), and a mismatch raises AssertionError.
    """
    w1, p1 = annihilator(rho)
    w2, p2 = annihilator(tau)
    if not (p1 and p2):
        raise ValueError("lowest_degree needs pure forms")
    r = subspace_meet(w1, w2).rank
    if cross_check:
        s = spinor_lowest_degree(rho, tau)
        if s != r:
            raise AssertionError(f"spinor grading gives {s}, intersection rank is {r}")
    return r


def uk_decompose(rho: Multivector) -> List[Subspace]:
    """U_0 = span(rho), U_k = Lambda^k conj(W_rho) . rho, as subspaces of C^(2^n)."""
    w, pure = annihilator(rho)
    if not pure:
        raise ValueError("U_k decomposition needs a pure form")
    if not mukai(rho, rho.conj()):
        raise ValueError("U_k decomposition needs <rho, conj(rho)> != 0")
    n = rho.dim
    wbar = subspace_conj(w).vectors()
    parts = []
    for k in range(n + 1):
        vecs = []
        for idx in combinations(range(n), k):
            v = rho
            for j in reversed(idx):
                v = clifford_act(wbar[j], v)
            vecs.append(v.to_vector())
        parts.append(Subspace.span(n, vecs, 1 << n))
    return parts


def uk_dimensions(rho: Multivector) -> List[int]:
    return [u.rank for u in uk_decompose(rho)]


def expected_uk_dimensions(n: int) -> List[int]:
    return [comb(n, k) for k in range(n + 1)]
