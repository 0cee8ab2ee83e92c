"""Dense linear algebra over an arbitrary field of scalars.

Matrices are tuples of row tuples.  Exact scalars (``Fraction`` or elements of
the formal period field) use ``x == 0`` as the zero test; numeric scalars
(mpc) pass a tolerance-based predicate built by :func:`numeric_zero`.
Subspaces are represented by the row-reduced echelon form of a spanning set
of row vectors, so equality of subspaces is equality of tuples.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

import mpmath

IsZero = Callable[[object], bool]


def exact_zero(x) -> bool:
    return x == 0


def numeric_zero(tol) -> IsZero:
    tol = mpmath.mpf(tol)

    def is_zero(x) -> bool:
        return abs(x) <= tol

    return is_zero


def _one_like(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(1)
    return x**0


def mat(rows) -> tuple:
    return tuple(tuple(r) for r in rows)


def identity(n: int, one=Fraction(1)) -> tuple:
    zero = one * 0
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def zeros(n: int, m: int, zero=Fraction(0)) -> tuple:
    return tuple(tuple(zero for _ in range(m)) for _ in range(n))


def transpose(A) -> tuple:
    return tuple(zip(*A))


def matmul(A, B) -> tuple:
    Bt = transpose(B)
    out = []
    for row in A:
        out.append(tuple(_dot(row, col) for col in Bt))
    return tuple(out)


def matvec(A, v) -> tuple:
    return tuple(_dot(row, v) for row in A)


def vecmat(v, A) -> tuple:
    return tuple(_dot(v, col) for col in transpose(A))


def _dot(a, b):
    acc = a[0] * b[0]
    for x, y in zip(a[1:], b[1:]):
        acc = acc + x * y
    return acc


def matadd(A, B) -> tuple:
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(A, B))


def matsub(A, B) -> tuple:
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(A, B))


def matscale(A, c) -> tuple:
    return tuple(tuple(x * c for x in r) for r in A)


def matmap(A, fn) -> tuple:
    return tuple(tuple(fn(x) for x in r) for r in A)


def matpow(A, k: int) -> tuple:
    n = len(A)
    out = identity(n, _one_like(A[0][0]))
    for _ in range(k):
        out = matmul(out, A)
    return out


def is_zero_matrix(A, is_zero: IsZero = exact_zero) -> bool:
    return all(is_zero(x) for r in A for x in r)


def rref(rows: Sequence[Sequence], is_zero: IsZero = exact_zero) -> tuple[tuple, tuple]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns).

    For numeric scalars the pivot is chosen by largest modulus.
    """
    M = [list(r) for r in rows]
    if not M:
        return (), ()
    ncols = len(M[0])
    pivots = []
    r = 0
    numeric = is_zero is not exact_zero
    for c in range(ncols):
        if r >= len(M):
            break
        if numeric:
            best = max(range(r, len(M)), key=lambda i: abs(M[i][c]))
            if is_zero(M[best][c]):
                continue
            piv = best
        else:
            piv = next((i for i in range(r, len(M)) if not is_zero(M[i][c])), None)
            if piv is None:
                continue
        M[r], M[piv] = M[piv], M[r]
        # zero entries and unit pivots are skipped: field arithmetic is the dominant cost
        if not (M[r][c] == 1):
            inv = 1 / M[r][c]
            M[r] = [x * inv if x != 0 else x for x in M[r]]
        for i in range(len(M)):
            if i != r and not (M[i][c] == 0):
                f = M[i][c]
                M[i] = [x - f * y if y != 0 else x for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    if numeric:
        # clean tiny entries so the echelon form is canonical
        M = [[(x * 0 if is_zero(x) else x) for x in row] for row in M]
    return tuple(tuple(row) for row in M[:r]), tuple(pivots)


def rank(A, is_zero: IsZero = exact_zero) -> int:
    return len(rref(A, is_zero)[0])


def inverse(A, is_zero: IsZero = exact_zero) -> tuple:
    n = len(A)
    one = _one_like(A[0][0]) if not isinstance(A[0][0], (int,)) else Fraction(1)
    aug = [list(A[i]) + [one if i == j else one * 0 for j in range(n)] for i in range(n)]
    R, piv = rref(aug, is_zero)
    if len(piv) < n or piv[n - 1] != n - 1:
        raise ZeroDivisionError("matrix is singular")
    return tuple(tuple(row[n:]) for row in R)


def det(A):
    """Determinant by Gaussian elimination over the scalar field."""
    M = [list(r) for r in A]
    n = len(M)
    d = _one_like(M[0][0])
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            return d * 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = -d
        d = d * M[c][c]
        inv = 1 / M[c][c]
        for i in range(c + 1, n):
            if M[i][c] != 0:
                f = M[i][c] * inv
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return d


def nullspace(A, is_zero: IsZero = exact_zero) -> tuple:
    """Basis (rows) of {x : A x = 0}."""
    if not A:
        raise ValueError("empty matrix")
    ncols = len(A[0])
    R, piv = rref(A, is_zero)
    one = _one_like(A[0][0])
    zero = one * 0
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for i, p in enumerate(piv):
            v[p] = -R[i][f]
        basis.append(tuple(v))
    return tuple(basis)


# -- subspaces --------------------------------------------------------------


def span(vectors, is_zero: IsZero = exact_zero, dim: int | None = None) -> tuple:
    """Canonical echelon basis of the span of ``vectors``."""
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return ()
    if is_zero is exact_zero and _is_rref(vectors):
        return tuple(vectors)
    return rref(vectors, is_zero)[0]


def _is_rref(rows) -> bool:
    """Exact check that ``rows`` already are a reduced row echelon form without zero rows."""
    last = -1
    for row in rows:
        c = next((j for j, x in enumerate(row) if not (x == 0)), None)
        if c is None or c <= last or not (row[c] == 1):
            return False
        if any(not (other[c] == 0) for other in rows if other is not row):
            return False
        last = c
    return True


def span_sum(U, V, is_zero: IsZero = exact_zero) -> tuple:
    return span(list(U) + list(V), is_zero)


def contains(U, v, is_zero: IsZero = exact_zero) -> bool:
    """Whether vector ``v`` lies in span(U)."""
    if all(is_zero(x) for x in v):
        return True
    S = span(U, is_zero)
    if S and len(S) == len(v):
        return True
    return rank(list(S) + [tuple(v)], is_zero) == len(S)


def is_subspace(U, V, is_zero: IsZero = exact_zero) -> bool:
    return all(contains(V, u, is_zero) for u in U)


def intersection(U, V, n: int, is_zero: IsZero = exact_zero, one=Fraction(1)) -> tuple:
    """span(U) ∩ span(V) inside a space of dimension ``n``."""
    U = span(U, is_zero)
    V = span(V, is_zero)
    if not U or not V:
        return ()
    if len(U) == n:
        return V
    if len(V) == n:
        return U
    # solve a U - b V = 0: kernel of the stacked transpose
    rows = [tuple(U[i][k] for i in range(len(U))) + tuple(-V[j][k] for j in range(len(V))) for k in range(n)]
    ker = nullspace(rows, is_zero)
    vecs = []
    for sol in ker:
        a = sol[: len(U)]
        vecs.append(tuple(_dot(a, tuple(U[i][k] for i in range(len(U)))) for k in range(n)))
    return span(vecs, is_zero)


def annihilator(U, n: int, is_zero: IsZero = exact_zero, one=Fraction(1)) -> tuple:
    """{phi in dual : phi(u) = 0 for all u in U}, in dual coordinates."""
    U = span(U, is_zero)
    if not U:
        return identity(n, one)
    return span(nullspace(U, is_zero), is_zero)


def preimage(A, U, n: int, is_zero: IsZero = exact_zero, one=Fraction(1)) -> tuple:
    """{x : A x in span(U)} for a square matrix A acting on column vectors."""
    # x in preimage iff A x is annihilated by every functional killing U
    ann = annihilator(U, n, is_zero, one)
    if not ann:
        return identity(n, one)
    rows = [tuple(_dot(phi, tuple(A[r][c] for r in range(n))) for c in range(n)) for phi in ann]
    ker = nullspace(rows, is_zero)
    return span(ker, is_zero)


def image(A, U, is_zero: IsZero = exact_zero) -> tuple:
    """span{A u : u in U} (A acts on column vectors)."""
    return span([matvec(A, u) for u in U], is_zero)
