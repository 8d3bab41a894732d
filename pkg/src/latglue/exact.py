"""Exact linear algebra over Z and Q.

Everything here works on tuples-of-tuples of Python ints (or Fractions for
the rational routines); no floating point is used anywhere.  Conventions
are pinned so that every caller sees deterministic output:

* Hermite normal form is row-style with positive pivots and entries above
  a pivot reduced into [0, pivot).
* Smith normal form has nonnegative diagonal d1 | d2 | ... .
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Sequence

IntMatrix = tuple[tuple[int, ...], ...]
IntVector = tuple[int, ...]
FracMatrix = tuple[tuple[Fraction, ...], ...]
FracVector = tuple[Fraction, ...]


def freeze(rows) -> tuple:
    return tuple(tuple(row) for row in rows)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(a):
    return tuple(zip(*a)) if a else ()


def mat_mul(a, b):
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(a, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def vec_content(v: Sequence[int]) -> int:
    """gcd of the entries (0 for the zero vector)."""
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def det(a) -> Fraction | int:
    """Exact determinant by fraction-free Gaussian elimination (Bareiss)."""
    n = len(a)
    if n == 0:
        return 1
    m = [[Fraction(x) for x in row] for row in a]
    sign = 1
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot_row is None:
            return 0
        if pivot_row != col:
            m[col], m[pivot_row] = m[pivot_row], m[col]
            sign = -sign
        for r in range(col + 1, n):
            factor = m[r][col] / m[col][col]
            for c in range(col, n):
                m[r][c] -= factor * m[col][c]
    result = Fraction(sign)
    for i in range(n):
        result *= m[i][i]
    if result.denominator == 1:
        return int(result)
    return result


def frac_inverse(a) -> FracMatrix:
    """Inverse of a nonsingular square matrix, as Fractions."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot_row is None:
            raise ZeroDivisionError("matrix is singular")
        m[col], m[pivot_row] = m[pivot_row], m[col]
        pivot = m[col][col]
        m[col] = [x / pivot for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return freeze(row[n:] for row in m)


def int_inverse(a) -> IntMatrix:
    """Inverse of a unimodular integer matrix, as ints."""
    inv = frac_inverse(a)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return freeze(tuple(int(x) for x in row) for row in inv)


def hnf(a) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns (H, U) with H = U*a, U unimodular, pivots positive, entries
    above each pivot reduced into [0, pivot), zero rows at the bottom.
    """
    rows = [list(row) for row in a]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    u = [list(row) for row in identity(nrows)]
    pivot_row = 0
    for col in range(ncols):
        if pivot_row == nrows:
            break
        # Euclidean reduction: shrink the column below pivot_row to one entry.
        while True:
            nonzero = [i for i in range(pivot_row, nrows) if rows[i][col] != 0]
            if not nonzero:
                break
            i_min = min(nonzero, key=lambda i: (abs(rows[i][col]), i))
            if i_min != pivot_row:
                rows[pivot_row], rows[i_min] = rows[i_min], rows[pivot_row]
                u[pivot_row], u[i_min] = u[i_min], u[pivot_row]
            if len(nonzero) == 1 and i_min == nonzero[0]:
                break
            for i in range(pivot_row + 1, nrows):
                if rows[i][col] != 0:
                    q = rows[i][col] // rows[pivot_row][col]
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[pivot_row])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[pivot_row])]
        if rows[pivot_row][col] == 0:
            continue
        if rows[pivot_row][col] < 0:
            rows[pivot_row] = [-x for x in rows[pivot_row]]
            u[pivot_row] = [-x for x in u[pivot_row]]
        p = rows[pivot_row][col]
        for i in range(pivot_row):
            q = rows[i][col] // p
            if q:
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[pivot_row])]
                u[i] = [x - q * y for x, y in zip(u[i], u[pivot_row])]
        pivot_row += 1
    return freeze(rows), freeze(u)


def snf(a) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form.

    Returns (D, U, V) with U*a*V = D, U and V unimodular, and D diagonal
    with nonnegative entries satisfying d1 | d2 | ... .
    """
    d = [list(row) for row in a]
    nrows = len(d)
    ncols = len(d[0]) if d else 0
    u = [list(row) for row in identity(nrows)]
    v = [list(row) for row in identity(ncols)]

    def row_op(i, j, q):  # row i -= q * row j
        d[i] = [x - q * y for x, y in zip(d[i], d[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, q):  # col i -= q * col j
        for row in d:
            row[i] -= q * row[j]
        for row in v:
            row[i] -= q * row[j]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    k = 0
    while k < min(nrows, ncols):
        # Find a pivot of least absolute value in the remaining block.
        entries = [(abs(d[i][j]), i, j) for i in range(k, nrows)
                   for j in range(k, ncols) if d[i][j] != 0]
        if not entries:
            break
        _, pi, pj = min(entries)
        swap_rows(k, pi)
        swap_cols(k, pj)
        dirty = False
        for i in range(k + 1, nrows):
            if d[i][k] != 0:
                row_op(i, k, d[i][k] // d[k][k])
                dirty = dirty or d[i][k] != 0
        for j in range(k + 1, ncols):
            if d[k][j] != 0:
                col_op(j, k, d[k][j] // d[k][k])
                dirty = dirty or d[k][j] != 0
        if dirty:
            continue
        # Enforce divisibility: d[k][k] must divide everything below-right.
        bad = next(((i, j) for i in range(k + 1, nrows) for j in range(k + 1, ncols)
                    if d[i][j] % d[k][k] != 0), None)
        if bad is not None:
            row_op(k, bad[0], -1)
            continue
        if d[k][k] < 0:
            d[k] = [-x for x in d[k]]
            u[k] = [-x for x in u[k]]
        k += 1
    return freeze(d), freeze(u), freeze(v)


def right_kernel(a) -> IntMatrix:
    """Basis (as rows) of the integer solutions x of a*x = 0."""
    ncols = len(a[0]) if a else 0
    if not a:
        return identity(ncols)
    d, _u, v = snf(a)
    rank = sum(1 for i in range(min(len(d), ncols)) if d[i][i] != 0)
    cols = [tuple(v[i][j] for i in range(ncols)) for j in range(rank, ncols)]
    if not cols:
        return ()
    h, _ = hnf(cols)
    return tuple(row for row in h if any(row))


def saturate_rows(a) -> IntMatrix:
    """HNF basis of the saturation (Q-span intersect Z^n) of the row space."""
    if not a:
        return ()
    ker = right_kernel(a)
    if not ker:
        h, _ = hnf(identity(len(a[0])))
        return h
    sat = right_kernel(ker)
    return sat


def solve_int(a, t) -> IntVector | None:
    """One integer solution x of a*x = t (columns unknowns), or None."""
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    d, u, v = snf(a)
    ut = mat_vec(u, t)
    w = [0] * ncols
    for i in range(nrows):
        di = d[i][i] if i < min(nrows, ncols) else 0
        if di == 0:
            if ut[i] != 0:
                return None
        else:
            if ut[i] % di != 0:
                return None
            w[i] = ut[i] // di
    return mat_vec(v, tuple(w))


def floor_sqrt_frac(x: Fraction) -> int:
    """floor(sqrt(x)) for a nonnegative rational x."""
    if x < 0:
        raise ValueError("negative radicand")
    return isqrt(x.numerator * x.denominator) // x.denominator


def lcm_denominator(rows) -> int:
    from math import lcm

    d = 1
    for row in rows:
        for x in row:
            d = lcm(d, Fraction(x).denominator)
    return d
