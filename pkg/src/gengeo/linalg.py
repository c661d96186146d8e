"""Dense exact linear algebra over the Gaussian rationals.

Matrices are tuples of row tuples of :class:`Scalar`.  Nothing here is
clever; the matrices involved are at most 64x64 (forms on R^6) or 24x24
(V + V* for n = 12).
"""
from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from .scalar import ONE, ZERO, Scalar, as_scalar

Matrix = Tuple[Tuple[Scalar, ...], ...]
Vector = Tuple[Scalar, ...]

__all__ = [
    "Matrix",
    "Vector",
    "matrix",
    "identity",
    "zeros",
    "matmul",
    "matvec",
    "transpose",
    "conj_matrix",
    "mat_add",
    "mat_sub",
    "mat_scale",
    "block",
    "split_blocks",
    "rref",
    "rank",
    "nullspace",
    "inverse",
    "det",
    "leading_minors",
    "hermitian_definiteness_witness",
    "is_zero_matrix",
]


def matrix(rows: Sequence[Sequence]) -> Matrix:
    out = tuple(tuple(as_scalar(x) for x in row) for row in rows)
    if out and len({len(r) for r in out}) != 1:
        raise ValueError("ragged matrix")
    return out


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def zeros(r: int, c: int) -> Matrix:
    return tuple(tuple(ZERO for _ in range(c)) for _ in range(r))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m)) if m else ()


def conj_matrix(m: Matrix) -> Matrix:
    return tuple(tuple(x.conj() for x in row) for row in m)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if a and len(a[0]) != len(b):
        raise ValueError(f"shape mismatch: {len(a)}x{len(a[0])} times {len(b)}x?")
    bt = transpose(b)
    out = []
    for row in a:
        nz = [(k, x) for k, x in enumerate(row) if x]
        out.append(tuple(_dot_sparse(nz, col) for col in bt))
    return tuple(out)


def _dot_sparse(nz, col) -> Scalar:
    s = ZERO
    for k, x in nz:
        y = col[k]
        if y:
            s = s + x * y
    return s


def matvec(a: Matrix, v: Sequence[Scalar]) -> Vector:
    if a and len(a[0]) != len(v):
        raise ValueError("shape mismatch in matvec")
    nz = [(k, as_scalar(x)) for k, x in enumerate(v) if x]
    return tuple(_dot_sparse(nz, row) for row in a)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(a: Matrix, s) -> Matrix:
    s = as_scalar(s)
    return tuple(tuple(x * s for x in row) for row in a)


def is_zero_matrix(a: Matrix) -> bool:
    return all(not x for row in a for x in row)


def block(tl: Matrix, tr: Matrix, bl: Matrix, br: Matrix) -> Matrix:
    top = tuple(r1 + r2 for r1, r2 in zip(tl, tr))
    bottom = tuple(r1 + r2 for r1, r2 in zip(bl, br))
    return top + bottom


def split_blocks(m: Matrix) -> Tuple[Matrix, Matrix, Matrix, Matrix]:
    n = len(m) // 2
    tl = tuple(row[:n] for row in m[:n])
    tr = tuple(row[n:] for row in m[:n])
    bl = tuple(row[:n] for row in m[n:])
    br = tuple(row[n:] for row in m[n:])
    return tl, tr, bl, br


def rref(rows: Sequence[Sequence[Scalar]]) -> Tuple[Matrix, Tuple[int, ...]]:
    """Reduced row echelon form; zero rows are dropped. Returns (rows, pivot columns)."""
    m: List[List[Scalar]] = [[as_scalar(x) for x in r] for r in rows]
    if not m:
        return (), ()
    ncols = len(m[0])
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        prow = m[r]
        nz = [(k, x) for k, x in enumerate(prow) if x]
        for i in range(len(m)):
            if i != r:
                f = m[i][c]
                if f:
                    row = m[i]
                    for k, x in nz:
                        row[k] = row[k] - f * x
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return tuple(tuple(row) for row in m[:r]), tuple(pivots)


def rank(rows: Sequence[Sequence[Scalar]]) -> int:
    return len(rref(rows)[0])


def nullspace(a: Sequence[Sequence[Scalar]], ncols: Optional[int] = None) -> List[Vector]:
    """Basis of {x : a x = 0}, one vector per free column."""
    if not a:
        if ncols is None:
            raise ValueError("ncols required for an empty matrix")
        return [tuple(ONE if i == j else ZERO for i in range(ncols)) for j in range(ncols)]
    ncols = len(a[0])
    red, pivots = rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(row) + list(e) for row, e in zip(a, identity(n))]
    red, pivots = rref(aug)
    if len(red) < n or pivots[n - 1] != n - 1:
        raise ZeroDivisionError("matrix is singular")
    return tuple(tuple(row[n:]) for row in red)


def det(a: Matrix) -> Scalar:
    m = [list(r) for r in a]
    n = len(m)
    d = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return ZERO
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d = d * m[c][c]
        inv = m[c][c].inverse()
        for i in range(c + 1, n):
            f = m[i][c] * inv
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def leading_minors(a: Matrix) -> List[Scalar]:
    return [det(tuple(row[:k] for row in a[:k])) for k in range(1, len(a) + 1)]


def hermitian_definiteness_witness(h: Matrix) -> Optional[Vector]:
    """None if the Hermitian matrix ``h`` is positive definite, else v with v^* h v <= 0.

    Symmetric Gaussian elimination (LDL^*) without pivoting.  Its pivots are
    ratios of consecutive leading principal minors, so all pivots positive is
    exactly the leading-minor criterion.  When pivot k fails, solving
    L^* v = e_k gives v^* h v = d_k.
    """
    n = len(h)
    for i in range(n):
        for j in range(n):
            if h[i][j] != h[j][i].conj():
                raise ValueError("matrix is not Hermitian")
    m = [list(r) for r in h]
    lower = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    for k in range(n):
        d = m[k][k]
        if not d.is_real():
            raise ValueError("non-real diagonal pivot in Hermitian elimination")
        if d.re <= 0:
            v = [ZERO] * n
            v[k] = ONE
            for i in range(k - 1, -1, -1):
                s = ZERO
                for j in range(i + 1, k + 1):
                    s = s + lower[j][i].conj() * v[j]
                v[i] = -s
            return tuple(v)
        inv = d.inverse()
        for i in range(k + 1, n):
            lower[i][k] = m[i][k] * inv
        for i in range(k + 1, n):
            li = lower[i][k]
            if not li:
                continue
            for j in range(k + 1, n):
                m[i][j] = m[i][j] - li * m[k][j]
    return None
