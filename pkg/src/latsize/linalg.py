"""Exact integer and rational linear algebra on small dense matrices.

Matrices are sequences of rows; entries are Python ints (or Fractions where
noted). Nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Sequence

Matrix = Sequence[Sequence[int]]


def det(rows: Matrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination.

    The empty matrix has determinant 1.
    """
    n = len(rows)
    if n == 0:
        return 1
    a = [list(map(int, r)) for r in rows]
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def cross(rows: Matrix, n: int) -> tuple[int, ...]:
    """Generalized cross product of ``n - 1`` vectors in Z^n.

    Returns ``c`` with ``det(rows + [x]) == <c, x>`` for every x.
    """
    rows = [list(r) for r in rows]
    if len(rows) != n - 1:
        raise ValueError(f"need {n - 1} rows, got {len(rows)}")
    out = []
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows]
        out.append((-1) ** (n - 1 + j) * det(minor))
    return tuple(out)


def adjugate(rows: Matrix) -> tuple[list[list[int]], int]:
    """Return ``(adj, d)`` with ``adj @ rows == d * I`` and ``d = det(rows)``."""
    n = len(rows)
    a = [list(r) for r in rows]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for k, r in enumerate(a) if k != i]
            # adj is the transpose of the cofactor matrix
            adj[j][i] = (-1) ** (i + j) * det(minor)
    return adj, det(a)


def rref(rows: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(rows: Matrix) -> int:
    return len(rref(rows)[1])


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries (zero stays zero)."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        return tuple(v)
    return tuple(x // g for x in v)


def integer_kernel(rows: Matrix, n: int) -> list[tuple[int, ...]]:
    """Primitive integer vectors spanning the rational kernel of ``rows``."""
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        den = 1
        for x in v:
            den = den * x.denominator // gcd(den, x.denominator)
        basis.append(primitive([int(x * den) for x in v]))
    return basis


def maximal_minors_gcd(rows: Matrix) -> int:
    """gcd of all j x j minors of a j x n integer matrix.

    The rows extend to a unimodular matrix exactly when this is 1.
    """
    j = len(rows)
    if j == 0:
        return 1
    n = len(rows[0])
    g = 0
    for cols in combinations(range(n), j):
        g = gcd(g, det([[r[c] for c in cols] for r in rows]))
        if g == 1:
            return 1
    return g


def lattice_index(vectors: Sequence[Sequence[int]], n: int) -> int:
    """Index in Z^n of the lattice generated by ``vectors``; 0 if not full rank.

    Runs integer row reduction with extended-gcd steps, so the row lattice is
    preserved exactly.
    """
    basis: list[list[int]] = []
    work = [list(v) for v in vectors if any(v)]
    for c in range(n):
        col = [r for r in work if r[c] != 0]
        rest = [r for r in work if r[c] == 0]
        if not col:
            return 0
        # Euclid on column c until a single row keeps a nonzero entry
        while len(col) > 1:
            col.sort(key=lambda r: abs(r[c]))
            pivot = col[0]
            nxt = [pivot]
            for r in col[1:]:
                q = r[c] // pivot[c]
                r = [x - q * y for x, y in zip(r, pivot)]
                if r[c] != 0:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            col = nxt
        basis.append(col[0])
        work = rest
    d = 1
    for i, r in enumerate(basis):
        d *= r[i]
    return abs(d)
