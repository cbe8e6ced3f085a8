"""Small exact linear algebra over Q (lists of lists of Fraction).

Row-vector conventions throughout the package: groups act on row vectors
on the right, subspaces are row spans.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

Mat = list[list[Fraction]]


def mat(rows) -> Mat:
    return [[Fraction(x) for x in row] for row in rows]


def zeros(m: int, n: int) -> Mat:
    return [[Fraction(0)] * n for _ in range(m)]


def identity(n: int) -> Mat:
    return [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]


def transpose(a: Mat) -> Mat:
    return [list(col) for col in zip(*a)] if a else []


def _int_rows(a: Mat) -> tuple[list[list[int]], int]:
    """Clear denominators: a = N / d with N integral."""
    d = 1
    for row in a:
        for x in row:
            q = x.denominator
            if q != 1:
                g = gcd(d, q)
                d = d // g * q
    n = [[x.numerator * (d // x.denominator) for x in row] for row in a]
    return n, d


def mat_mul(a: Mat, b: Mat) -> Mat:
    """Exact product; integer core with common denominators (Fraction
    accumulation is the hot path otherwise)."""
    k = len(b)
    assert all(len(row) == k for row in a), "dimension mismatch"
    if not a or not b:
        return [[] for _ in a]
    na, da = _int_rows(a)
    nb, db = _int_rows(b)
    bt = list(zip(*nb))
    d = da * db
    return [[Fraction(sum(x * y for x, y in zip(row, col)), d) for col in bt] for row in na]


def mat_add(a: Mat, b: Mat) -> Mat:
    return [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(a, b)]


def mat_sub(a: Mat, b: Mat) -> Mat:
    return [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(a, b)]


def scal_mul(c, a: Mat) -> Mat:
    c = Fraction(c)
    return [[c * x for x in row] for row in a]


def mat_eq(a: Mat, b: Mat) -> bool:
    return len(a) == len(b) and all(r1 == r2 for r1, r2 in zip(a, b))


def row_mul(x: list[Fraction], a: Mat) -> list[Fraction]:
    assert len(x) == len(a)
    n = len(a[0]) if a else 0
    out = [Fraction(0)] * n
    for xi, row in zip(x, a):
        if xi:
            for j in range(n):
                out[j] += xi * row[j]
    return out


def det(a: Mat) -> Fraction:
    n = len(a)
    m = [row[:] for row in a]
    d = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] * inv
            if f:
                for j in range(c, n):
                    m[r][j] -= f * m[c][j]
    return d


def inverse(a: Mat) -> Mat:
    n = len(a)
    m = [row[:] + identity(n)[i] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def rref(a: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form (the unique one over Q); fraction-free
    integer elimination with per-row gcd control, normalized at the end."""
    if not a:
        return [], []
    rows, cols = len(a), len(a[0])
    m: list[list[int]] = []
    for row in a:
        d = 1
        for x in row:
            q = x.denominator
            if q != 1:
                g = gcd(d, q)
                d = d // g * q
        m.append([x.numerator * (d // x.denominator) for x in row])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(rows):
            if i != r and m[i][c]:
                w = m[i][c]
                new = [x * p - w * y for x, y in zip(m[i], m[r])]
                g = 0
                for x in new:
                    g = gcd(g, x)
                    if g == 1:
                        break
                m[i] = [x // g for x in new] if g > 1 else new
        pivots.append(c)
        r += 1
        if r == rows:
            break
    out: Mat = []
    for i in range(rows):
        if i < len(pivots):
            p = m[i][pivots[i]]
            out.append([Fraction(x, p) for x in m[i]])
        else:
            out.append([Fraction(x) for x in m[i]])
    return out, pivots


def row_basis(a: Mat) -> Mat:
    r, pivots = rref(a)
    return [r[i] for i in range(len(pivots))]


def rank(a: Mat) -> int:
    return len(rref(a)[1])


def null_space(a: Mat) -> Mat:
    """Basis of {x (column) : a x = 0}, returned as rows."""
    if not a:
        return []
    r, pivots = rref(a)
    cols = len(a[0])
    free = [c for c in range(cols) if c not in pivots]
    out = []
    for f in free:
        vec = [Fraction(0)] * cols
        vec[f] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -r[i][f]
        out.append(vec)
    return out


def left_null_space(a: Mat) -> Mat:
    """Basis of {x (row) : x a = 0}."""
    return null_space(transpose(a))


def solve_right(a: Mat, b: list[Fraction]) -> list[Fraction]:
    """Solve a x = b for a column vector x (a square, invertible)."""
    ainv = inverse(a)
    return [sum(r * x for r, x in zip(row, b)) for row in ainv]


def solve_left(a: Mat, b: list[Fraction]) -> list[Fraction]:
    """Solve x a = b for a row vector x (a square, invertible)."""
    return solve_right(transpose(a), b)


def row_span_intersect(a: Mat, b: Mat) -> Mat:
    """Basis of rowspan(a) cap rowspan(b)."""
    if not a or not b:
        return []
    stacked = a + b
    out = []
    for coeffs in left_null_space(stacked):
        x = coeffs[: len(a)]
        if any(x):
            out.append(row_mul(x, a))
    return row_basis(out)


def in_row_span(v: list[Fraction], a: Mat) -> bool:
    return rank(a + [list(v)]) == rank(a)


def row_spans_equal(a: Mat, b: Mat) -> bool:
    ra, rb = row_basis(a), row_basis(b)
    return mat_eq(ra, rb)


def block(blocks: list[list[Mat]]) -> Mat:
    """Assemble a block matrix from a grid of matrices."""
    out: Mat = []
    for brow in blocks:
        height = len(brow[0])
        for i in range(height):
            row: list[Fraction] = []
            for bm in brow:
                row.extend(bm[i])
            out.append(row)
    return out


def blocks2(a: Mat, n: int) -> tuple[Mat, Mat, Mat, Mat]:
    """Split a 2n x 2n matrix into n x n blocks (A, B, C, D)."""
    A = [row[:n] for row in a[:n]]
    B = [row[n:] for row in a[:n]]
    C = [row[:n] for row in a[n:]]
    D = [row[n:] for row in a[n:]]
    return A, B, C, D
