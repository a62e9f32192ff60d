"""LLL reduction and short-vector enumeration for the T2 form of a number field.

The quadratic form is real, so floating point is used here only to *find*
candidates; every consumer re-verifies what it finds with exact arithmetic.
"""

from __future__ import annotations

import math
from typing import Iterator, Sequence

import mpmath

from . import linalg as la

Gram = list[list[float]]


def t2_gram(field, dps: int = 30) -> Gram:
    """Gram matrix of sum_sigma |sigma(x)|^2 on the integral basis."""
    cache = field.__dict__.setdefault("_t2_cache", {})
    if dps in cache:
        return cache[dps]
    n = field.degree
    roots = field.embeddings(dps)
    with mpmath.workdps(dps):
        vals = [[w.numeric(r) for r in roots] for w in field.basis_elements]
        g = []
        for i in range(n):
            row = []
            for j in range(n):
                s = mpmath.mpf(0)
                for k, _ in enumerate(roots):
                    term = mpmath.re(vals[i][k] * mpmath.conj(vals[j][k]))
                    s += term if k < field.r1 else 2 * term
                row.append(float(s))
            g.append(row)
    cache[dps] = g
    return g


def sublattice_gram(gram: Gram, rows: Sequence[Sequence[int]]) -> Gram:
    return [[sum(a[i] * gram[i][j] * b[j] for i in range(len(a)) for j in range(len(b)) if a[i] and b[j])
             for b in rows] for a in rows]


def lll(gram: Gram, delta: float = 0.99) -> la.IntMatrix:
    """Unimodular T (rows) such that the lattice basis T @ B is LLL-reduced for the form `gram` on B."""
    n = len(gram)
    t = la.identity(n)

    def ip(x, y):
        return sum(x[i] * gram[i][j] * y[j] for i in range(n) for j in range(n) if x[i] and y[j])

    def gso():
        mu = [[0.0] * n for _ in range(n)]
        bstar = [0.0] * n
        for i in range(n):
            for j in range(i):
                s = ip(t[i], t[j])
                for k in range(j):
                    s -= mu[j][k] * mu[i][k] * bstar[k]
                mu[i][j] = s / bstar[j] if bstar[j] else 0.0
            s = ip(t[i], t[i])
            for k in range(i):
                s -= mu[i][k] ** 2 * bstar[k]
            bstar[i] = s
        return mu, bstar

    k = 1
    mu, bstar = gso()
    guard = 0
    while k < n:
        guard += 1
        if guard > 100000:
            break
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                t[k] = [a - q * b for a, b in zip(t[k], t[j])]
                mu, bstar = gso()
        if bstar[k] >= (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            t[k], t[k - 1] = t[k - 1], t[k]
            mu, bstar = gso()
            k = max(k - 1, 1)
    return t


def _cholesky_q(gram: Gram) -> tuple[list[float], list[list[float]]]:
    """Decompose q(x) = sum_i d_i (x_i + sum_{j>i} m_ij x_j)^2."""
    n = len(gram)
    a = [list(map(float, r)) for r in gram]
    d = [0.0] * n
    m = [[0.0] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i]
        if d[i] <= 0:
            raise ValueError("form is not positive definite")
        for j in range(i + 1, n):
            m[i][j] = a[i][j] / d[i]
        for j in range(i + 1, n):
            for k in range(j, n):
                a[j][k] -= d[i] * m[i][j] * m[i][k]
                a[k][j] = a[j][k]
    return d, m


def fincke_pohst(gram: Gram, bound: float, limit: int = 200000) -> Iterator[list[int]]:
    """Nonzero integer vectors x with x^T gram x <= bound, one of each pair +-x."""
    n = len(gram)
    d, m = _cholesky_q(gram)
    bound = bound * (1 + 1e-9) + 1e-9
    x = [0] * n
    count = 0

    def rec(i: int, remaining: float):
        nonlocal count
        c = -sum(m[i][j] * x[j] for j in range(i + 1, n))
        r = math.sqrt(max(remaining, 0.0) / d[i])
        lo, hi = math.ceil(c - r - 1e-12), math.floor(c + r + 1e-12)
        for v in range(lo, hi + 1):
            x[i] = v
            rem = remaining - d[i] * (v - c) ** 2
            if rem < -1e-9 * max(1.0, bound):
                continue
            if i == 0:
                if any(x):
                    count += 1
                    if count > limit:
                        raise OverflowError("enumeration limit exceeded")
                    # keep the representative whose last nonzero entry is positive
                    last = next(z for z in reversed(x) if z)
                    if last > 0:
                        yield list(x)
            else:
                yield from rec(i - 1, rem)
        x[i] = 0

    yield from rec(n - 1, bound)


def quad_value(gram: Gram, x: Sequence[int]) -> float:
    n = len(x)
    return sum(x[i] * gram[i][j] * x[j] for i in range(n) for j in range(n) if x[i] and x[j])
