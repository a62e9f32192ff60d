"""p-maximality test for an order given by its integral basis (one round-2 step)."""

from __future__ import annotations

from . import linalg as la


def _pow_mod(field, a: list[int], k: int, p: int) -> list[int]:
    out = _one_ib(field)
    base = [x % p for x in a]
    while k:
        if k & 1:
            out = [x % p for x in field.ib_mul(out, base)]
        base = [x % p for x in field.ib_mul(base, base)]
        k >>= 1
    return out


def _one_ib(field) -> list[int]:
    return [int(c) for c in field.one.ib_coords()]


def p_radical(field, p: int) -> la.IntMatrix:
    """HNF basis (integral-basis coordinates) of the radical of pO."""
    n = field.degree
    q = p
    while q < n:
        q *= p
    imgs = [_pow_mod(field, e, q, p) for e in la.identity(n)]
    # x @ imgs == 0 mod p
    block = [[imgs[i][k] for i in range(n)] + [p if kk == k else 0 for kk in range(n)] for k in range(n)]
    ker = la.kernel_basis(block, 2 * n)
    gens = [v[:n] for v in ker] + [[p if i == j else 0 for j in range(n)] for i in range(n)]
    return la.hnf_basis(gens, n)


def p_maximal(field, p: int) -> bool:
    """True when the order spanned by the integral basis is maximal at p."""
    n = field.degree
    rad = p_radical(field, p)
    target = [[p * x for x in row] for row in rad]
    k = len(rad)
    ncols = n + k * n
    block = []
    for a_idx, alpha in enumerate(rad):
        m = field.mult_matrix_ib(alpha)
        for i in range(n):
            row = list(m[i]) + [0] * (k * n)
            for j, t in enumerate(target):
                row[n + a_idx * n + j] = -t[i]
            block.append(row)
    ker = la.kernel_basis(block, ncols)
    u = la.hnf_basis([v[:n] for v in ker], n)
    if len(u) != n:
        return False
    d = abs(la.det(u))
    return d == p ** n
