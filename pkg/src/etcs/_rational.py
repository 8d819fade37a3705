"""Small exact linear-algebra toolkit over the rationals.

Matrices are lists of lists of :class:`fractions.Fraction` (or ints, which are
promoted on entry).  Everything here is deliberately naive: the matrices in
this package are at most 22x22 and exactness matters more than speed.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[Fraction]]


def to_q(a: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in a]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[Fraction(0)] * c for _ in range(r)]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(a: Matrix, v: Sequence) -> list[Fraction]:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(c, a: Matrix) -> Matrix:
    c = Fraction(c)
    return [[c * x for x in row] for row in a]


def sub_block(a: Matrix, rows: range, cols: range) -> Matrix:
    return [[a[i][j] for j in cols] for i in rows]


def bilinear(g: Matrix, u: Sequence, v: Sequence) -> Fraction:
    return sum((u[i] * g[i][j] * v[j] for i in range(len(u)) for j in range(len(v))), Fraction(0))


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [row[:] for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a: Matrix) -> int:
    return len(rref(a)[1]) if a else 0


def nullspace(a: Matrix, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : a x = 0}, one vector per free column (standard RREF basis)."""
    if not a:
        n = ncols or 0
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    n = len(a[0])
    m, pivots = rref(a)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -m[i][f]
        basis.append(v)
    return basis


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    m, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in m]


def det(a: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    m = to_q(a)
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def primitive_integer(v: Sequence[Fraction]) -> list[int]:
    """Clear denominators and divide by content; first nonzero entry made positive."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return ints
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x != 0)
    return [-x for x in ints] if lead < 0 else ints


def poly_eval_matrix(coeffs: Sequence[Fraction], a: Matrix) -> Matrix:
    """Evaluate a polynomial (coefficients highest degree first) at a square matrix."""
    n = len(a)
    out = zeros(n, n)
    for c in coeffs:
        out = add(matmul(out, a), scale(c, identity(n)))
    return out


def symmetric_inertia(g: Sequence[Sequence]) -> tuple[int, int, int]:
    """(n_pos, n_neg, n_zero) of a symmetric rational matrix, exactly.

    Congruence diagonalisation with full pivoting on the diagonal.  When the
    remaining block has zero diagonal but a nonzero off-diagonal entry a_ij,
    the basis vector e_i is replaced by e_i + e_j, which puts 2 a_ij on the
    diagonal (this is what the hyperbolic plane needs).
    """
    m = to_q(g)
    n = len(m)
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = max(active, key=lambda i: abs(m[i][i]))
        if m[piv][piv] == 0:
            pair = next(((i, j) for i in active for j in active if i != j and m[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # e_i <- e_i + e_j, as a congruence: row_i += row_j, col_i += col_j
            m[i] = [x + y for x, y in zip(m[i], m[j])]
            for row in m:
                row[i] += row[j]
            piv = i
        p = m[piv][piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for i in active:
            if m[i][piv] != 0:
                f = m[i][piv] / p
                m[i] = [x - f * y for x, y in zip(m[i], m[piv])]
        # the active block is now the (symmetric) Schur complement
        for i in active:
            m[i][piv] = m[piv][i] = Fraction(0)
    return pos, neg, n - pos - neg
