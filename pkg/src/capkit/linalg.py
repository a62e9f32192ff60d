"""Exact integer matrix arithmetic: Hermite and Smith normal forms, integer solves.

Matrices are plain lists of rows of Python ints, so precision is unbounded.
All functions return fresh lists and never mutate their arguments.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

IntMatrix = list[list[int]]


def zeros(rows: int, cols: int) -> IntMatrix:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def copy(m: Sequence[Sequence[int]]) -> IntMatrix:
    return [list(r) for r in m]


def shape(m: Sequence[Sequence], cols: Optional[int] = None) -> tuple[int, int]:
    """Return (rows, cols); `cols` disambiguates matrices with no rows."""
    if not m:
        return 0, cols or 0
    return len(m), len(m[0])


def transpose(m: Sequence[Sequence], cols: Optional[int] = None) -> list[list]:
    r, c = shape(m, cols)
    return [[m[i][j] for i in range(r)] for j in range(c)]


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence], inner: Optional[int] = None) -> list[list]:
    if not a:
        return []
    n = len(b) if b else (inner or 0)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [0] * cols
        for k in range(n):
            x = row[k]
            if x:
                bk = b[k]
                for j in range(cols):
                    acc[j] += x * bk[j]
        out.append(acc)
    return out


def mat_vec(a: Sequence[Sequence], x: Sequence) -> list:
    return [sum(ai * xi for ai, xi in zip(row, x)) for row in a]


def vec_mat(x: Sequence, a: Sequence[Sequence]) -> list:
    if not a:
        return []
    cols = len(a[0])
    out = [0] * cols
    for xi, row in zip(x, a):
        if xi:
            for j in range(cols):
                out[j] += xi * row[j]
    return out


def diag(d: Sequence[int], rows: int, cols: int) -> IntMatrix:
    m = zeros(rows, cols)
    for i, x in enumerate(d):
        m[i][i] = x
    return m


def det(m: Sequence[Sequence]) -> Fraction | int:
    """Determinant by fraction-free (Bareiss) elimination; exact for ints and Fractions."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
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
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num / prev if isinstance(num, Fraction) else _exact_div(num, prev)
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _exact_div(num, den):
    if isinstance(num, int) and isinstance(den, int):
        q, r = divmod(num, den)
        if r == 0:
            return q
    return Fraction(num) / den


def rank(m: Sequence[Sequence]) -> int:
    return len(rational_row_echelon(m)[1])


# --- Hermite normal form -------------------------------------------------


def hnf(m: Sequence[Sequence[int]], cols: Optional[int] = None) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form.

    Returns ``(h, u)`` with ``u`` unimodular and ``u @ m == h``. Nonzero rows of
    ``h`` come first, pivots are positive and entries above each pivot lie in
    ``[0, pivot)``. Pivoting picks the smallest nonzero entry of the column.
    """
    rows, ncols = shape(m, cols)
    h = copy(m)
    u = identity(rows)
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        while True:
            nz = [i for i in range(r, rows) if h[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(h[i][c]))
            if piv != r:
                h[r], h[piv] = h[piv], h[r]
                u[r], u[piv] = u[piv], u[r]
            p = h[r][c]
            clean = True
            for i in range(r + 1, rows):
                if h[i][c]:
                    q = h[i][c] // p
                    _row_axpy(h, i, r, -q)
                    _row_axpy(u, i, r, -q)
                    if h[i][c]:
                        clean = False
            if clean:
                break
        if h[r][c] == 0:
            continue
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        p = h[r][c]
        for i in range(r):
            q = h[i][c] // p
            if q:
                _row_axpy(h, i, r, -q)
                _row_axpy(u, i, r, -q)
        r += 1
    return h, u


def hnf_basis(vectors: Sequence[Sequence[int]], cols: int) -> IntMatrix:
    """Nonzero rows of the HNF of the lattice spanned by `vectors`."""
    if not vectors:
        return []
    h, _ = hnf(vectors, cols)
    return [row for row in h if any(row)]


def _row_axpy(a: IntMatrix, i: int, k: int, q: int) -> None:
    """row_i += q * row_k"""
    if q:
        ri, rk = a[i], a[k]
        for j in range(len(ri)):
            if rk[j]:
                ri[j] += q * rk[j]


def _col_axpy(a: IntMatrix, j: int, k: int, q: int) -> None:
    """col_j += q * col_k"""
    if q:
        for row in a:
            if row[k]:
                row[j] += q * row[k]


def _swap_cols(a: IntMatrix, j: int, k: int) -> None:
    for row in a:
        row[j], row[k] = row[k], row[j]


# --- Smith normal form ---------------------------------------------------


@dataclass(frozen=True)
class SmithDecomposition:
    """``u @ m @ v == diag(d)`` with ``d[i] | d[i+1]`` and ``u``, ``v`` unimodular."""

    d: tuple[int, ...]
    u: IntMatrix
    v: IntMatrix
    rows: int
    cols: int

    @property
    def rank(self) -> int:
        return sum(1 for x in self.d if x)

    def diagonal(self) -> IntMatrix:
        return diag(self.d, self.rows, self.cols)


def snf(m: Sequence[Sequence[int]], cols: Optional[int] = None) -> SmithDecomposition:
    rows, ncols = shape(m, cols)
    a = copy(m)
    u = identity(rows)
    v = identity(ncols)
    size = min(rows, ncols)
    for t in range(size):
        best = None
        for i in range(t, rows):
            for j in range(t, ncols):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        _move_pivot(a, u, v, t, best)
        while True:
            p = a[t][t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // p
                    _row_axpy(a, i, t, -q)
                    _row_axpy(u, i, t, -q)
            for j in range(t + 1, ncols):
                if a[t][j]:
                    q = a[t][j] // p
                    _col_axpy(a, j, t, -q)
                    _col_axpy(v, j, t, -q)
            left = [(i, t) for i in range(t + 1, rows) if a[i][t]]
            left += [(t, j) for j in range(t + 1, ncols) if a[t][j]]
            if left:
                _move_pivot(a, u, v, t, min(left, key=lambda ij: abs(a[ij[0]][ij[1]])))
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, ncols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            _row_axpy(a, t, bad, 1)
            _row_axpy(u, t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    d = tuple(a[i][i] for i in range(size))
    return SmithDecomposition(d, u, v, rows, ncols)


def _move_pivot(a, u, v, t, ij) -> None:
    i, j = ij
    if i != t:
        a[t], a[i] = a[i], a[t]
        u[t], u[i] = u[i], u[t]
    if j != t:
        _swap_cols(a, t, j)
        _swap_cols(v, t, j)


def invariant_factors(m: Sequence[Sequence[int]], cols: Optional[int] = None) -> tuple[int, ...]:
    return snf(m, cols).d


# --- integer and rational solving ---------------------------------------


def solve_integer(m: Sequence[Sequence[int]], b: Sequence[int], cols: Optional[int] = None) -> Optional[list[int]]:
    """Some integer ``x`` with ``m @ x == b``, or ``None`` if no integer solution exists."""
    rows, ncols = shape(m, cols)
    if len(b) != rows:
        raise ValueError("right-hand side length does not match row count")
    if rows == 0:
        return [0] * ncols
    s = snf(m, ncols)
    c = mat_vec(s.u, b)
    y = [0] * ncols
    for i in range(rows):
        di = s.d[i] if i < len(s.d) else 0
        if di == 0:
            if c[i] != 0:
                return None
        else:
            q, r = divmod(c[i], di)
            if r:
                return None
            y[i] = q
    return mat_vec(s.v, y)


def kernel_basis(m: Sequence[Sequence[int]], cols: Optional[int] = None) -> IntMatrix:
    """Basis (as a list of vectors) of the integer right kernel of ``m``."""
    rows, ncols = shape(m, cols)
    if rows == 0:
        return identity(ncols)
    s = snf(m, ncols)
    out = []
    for j in range(ncols):
        if j >= len(s.d) or s.d[j] == 0:
            out.append([s.v[i][j] for i in range(ncols)])
    return out


def in_lattice(basis: Sequence[Sequence[int]], x: Sequence[int]) -> Optional[list[int]]:
    """Integer coefficients ``c`` with ``c @ basis == x`` when x lies in the row lattice."""
    if not basis:
        return [] if not any(x) else None
    return solve_integer(transpose(basis), list(x), len(basis))


def lattice_index(sub: Sequence[Sequence[int]], full: Sequence[Sequence[int]]) -> int:
    """Index [full : sub] of two full-rank row lattices of the same rank."""
    hs = hnf_basis(sub, len(sub[0]))
    hf = hnf_basis(full, len(full[0]))
    if len(hs) != len(hf):
        raise ValueError("lattices of different rank")
    ds = abs(_gram_det(hs))
    df = abs(_gram_det(hf))
    q = Fraction(ds, df)
    # sqrt of the Gram determinant ratio; both are perfect squares of the index
    from math import isqrt

    num, den = isqrt(q.numerator), isqrt(q.denominator)
    if num * num != q.numerator or den != 1:
        raise ValueError("sub is not a sublattice of full")
    return num


def _gram_det(b: IntMatrix) -> int:
    return det(mat_mul(b, transpose(b)))


def rational_row_echelon(m: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q and the list of pivot columns."""
    a = [[Fraction(x) for x in row] for row in m]
    rows = len(a)
    cols = len(a[0]) if a else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def solve_rational(m: Sequence[Sequence], b: Sequence) -> Optional[list[Fraction]]:
    """A rational solution of ``m @ x == b`` (free variables set to 0), or None."""
    rows = len(m)
    cols = len(m[0]) if m else 0
    aug = [list(m[i]) + [b[i]] for i in range(rows)]
    red, pivots = rational_row_echelon(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        x[c] = red[i][cols]
    return x


def inverse_rational(m: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(m)
    aug = [list(m[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    red, pivots = rational_row_echelon(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def is_unimodular(m: Sequence[Sequence[int]]) -> bool:
    return len(m) == len(m[0]) and abs(det(m)) == 1 if m else True
