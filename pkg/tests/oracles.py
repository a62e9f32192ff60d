"""Independent brute-force oracles used to check the library.

Nothing here imports capkit: each oracle recomputes a quantity by a
different method (minors, Zagier cycles, exhaustive enumeration, closed
formulas over Q).
"""

from __future__ import annotations

import itertools
import math
from functools import reduce


def det_laplace(m):
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        if m[0][j]:
            minor = [row[:j] + row[j + 1:] for row in m[1:]]
            total += (-1) ** j * m[0][j] * det_laplace(minor)
    return total


def smith_by_minors(m, rows, cols):
    """Nonzero invariant factors as ratios of consecutive gcds of k x k minors."""
    out = []
    prev = 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for ri in itertools.combinations(range(rows), k):
            for ci in itertools.combinations(range(cols), k):
                g = math.gcd(g, det_laplace([[m[i][j] for j in ci] for i in ri]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


# --- quadratic forms -----------------------------------------------------------


def definite_class_number(d):
    """Count reduced primitive forms |b| <= a <= c (b >= 0 on the boundary)."""
    h = 0
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a, a + 1):
            if (b * b - d) % (4 * a):
                continue
            c = (b * b - d) // (4 * a)
            if c < a:
                continue
            if b < 0 and (-b == a or a == c):
                continue
            if math.gcd(math.gcd(a, abs(b)), c) == 1:
                h += 1
        a += 1
    return h


def _zagier_step(f, d):
    a, b, c = f
    # n = ceil((b + sqrt d) / (2c)) computed exactly
    n = (b + math.isqrt(d)) // (2 * c) + 1
    while (2 * c * (n - 1) - b) > 0 and (2 * c * (n - 1) - b) ** 2 > d:
        n -= 1
    while not (2 * c * n - b > 0 and (2 * c * n - b) ** 2 > d):
        n += 1
    return c, 2 * c * n - b, a - b * n + c * n * n


def narrow_class_number_zagier(d):
    """Number of cycles of Zagier-reduced primitive forms (a, c > 0, b > a + c)."""
    reduced = []
    for b in range(1, 4 * d):
        if (b * b - d) % 4 or b * b <= d:
            continue
        ac = (b * b - d) // 4
        for a in range(1, ac + 1):
            if ac % a:
                continue
            c = ac // a
            if b > a + c and math.gcd(math.gcd(a, b), c) == 1:
                reduced.append((a, b, c))
        if b > 2 * math.isqrt(d) + 4 and b * b - d > 4 * (b - 1) ** 2:
            break
    seen = set()
    cycles = 0
    for f in reduced:
        if f in seen:
            continue
        cycles += 1
        g = f
        while g not in seen:
            seen.add(g)
            g = _zagier_step(g, d)
    return cycles


def unit_norm_is_minus_one(d, cap=10 ** 7):
    """Sign of the norm of the fundamental unit (x + y sqrt d)/2: the smallest y with x^2 - d y^2 = +-4."""
    for y in range(1, cap):
        for s in (-4, 4):
            x2 = d * y * y + s
            if x2 >= 0 and math.isqrt(x2) ** 2 == x2:
                return s == -4
    raise RuntimeError("Pell search cap reached")


def quadratic_class_number(d):
    if d < 0:
        return definite_class_number(d)
    hp = narrow_class_number_zagier(d)
    return hp if unit_norm_is_minus_one(d) else hp // 2


def is_fundamental(d):
    def squarefree(n):
        n = abs(n)
        return all(n % (k * k) for k in range(2, math.isqrt(n) + 1))

    if d % 4 == 1:
        return d != 1 and squarefree(d)
    if d % 4 == 0:
        return (d // 4) % 4 in (2, 3) and squarefree(d // 4)
    return False


# --- cohomology by enumeration -------------------------------------------------


def brute_cohomology(moduli, sigma, n):
    """|H^1| and |H^2| of the finite module prod Z/m_i with sigma given on coordinates."""
    elems = list(itertools.product(*(range(m) for m in moduli)))

    def act(mat, x):
        return tuple(sum(mat[i][j] * x[j] for j in range(len(x))) % moduli[i] for i in range(len(x)))

    def power_sum(x):
        acc = tuple(0 for _ in moduli)
        y = x
        for _ in range(n):
            acc = tuple((a + b) % m for a, b, m in zip(acc, y, moduli))
            y = act(sigma, y)
        return acc

    zero = tuple(0 for _ in moduli)
    norm = {x: power_sum(x) for x in elems}
    smo = {x: tuple((a - b) % m for a, b, m in zip(act(sigma, x), x, moduli)) for x in elems}
    ker_norm = sum(1 for x in elems if norm[x] == zero)
    im_smo = len(set(smo.values()))
    ker_smo = sum(1 for x in elems if smo[x] == zero)
    im_norm = len(set(norm.values()))
    return ker_norm // im_smo, ker_smo // im_norm


# --- Hilbert symbol over Q -----------------------------------------------------


def _split(x, p):
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k, x


def _legendre(u, p):
    r = pow(u % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def hilbert_q(a, b, p):
    """Classical closed formula for (a, b)_p over Q (p = 0 means the real place)."""
    if p == 0:
        return -1 if a < 0 and b < 0 else 1
    al, u = _split(a, p)
    be, v = _split(b, p)
    if p != 2:
        s = (-1) ** (al * be * ((p - 1) // 2))
        return s * _legendre(u, p) ** be * _legendre(v, p) ** al
    eps = lambda t: ((t - 1) // 2) % 2
    omega = lambda t: ((t * t - 1) // 8) % 2
    e = eps(u) * eps(v) + al * omega(v) + be * omega(u)
    return -1 if e % 2 else 1


def gcd_list(xs):
    return reduce(math.gcd, xs, 0)
