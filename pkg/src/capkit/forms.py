"""Class numbers of quadratic discriminants from reduced binary quadratic forms.

Used as the exact certificate for class groups of quadratic fields and for
the genus table printed by the CLI.
"""

from __future__ import annotations

import math


def is_fundamental(d: int) -> bool:
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return _squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def _squarefree(n: int) -> bool:
    n = abs(n)
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def reduced_forms_definite(d: int) -> list[tuple[int, int, int]]:
    """Primitive reduced positive definite forms (a, b, c) with b^2 - 4ac = d < 0."""
    if d >= 0 or d % 4 not in (0, 1):
        raise ValueError("need a negative discriminant congruent to 0 or 1 mod 4")
    out = []
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a + 1, a + 1):
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(a, b, c) == 1:
                out.append((a, b, c))
        a += 1
    return out


def _rho(form: tuple[int, int, int], root: float) -> tuple[int, int, int]:
    a, b, c = form
    # new form (c, b', a') with b' = -b mod 2c chosen in the reduced window
    m = 2 * abs(c)
    bp = -b % m
    # choose b' in (sqrt(D) - 2|c|, sqrt(D)]
    while bp > root:
        bp -= m
    while bp <= root - m:
        bp += m
    d = b * b - 4 * a * c
    ap = (bp * bp - d) // (4 * c)
    return c, bp, ap


def reduced_forms_indefinite(d: int) -> list[tuple[int, int, int]]:
    """Primitive reduced indefinite forms: 0 < b < sqrt(d) and sqrt(d) - b < 2|a| < sqrt(d) + b."""
    if d <= 0 or d % 4 not in (0, 1) or math.isqrt(d) ** 2 == d:
        raise ValueError("need a positive non-square discriminant congruent to 0 or 1 mod 4")
    out = []
    for b in range(d % 2, math.isqrt(d) + 1, 2):
        if b == 0:
            continue
        n = (d - b * b) // 4
        for a in range(1, n + 1):
            if n % a or not _in_window(d, a, b):
                continue
            c = n // a
            for sa in (a, -a):
                if math.gcd(a, b, c) == 1:
                    out.append((sa, b, -c if sa > 0 else c))
    return sorted(out)


def _lt_sqrt(d: int, x: int) -> bool:
    """x < sqrt(d)"""
    return x < 0 or x * x < d


def _sqrt_lt(d: int, x: int) -> bool:
    """sqrt(d) < x"""
    return x > 0 and x * x > d


def _in_window(d: int, a: int, b: int) -> bool:
    return _sqrt_lt(d, 2 * a + b) and _lt_sqrt(d, 2 * a - b)


def _cycle(f: tuple[int, int, int], d: int, limit: int) -> list[tuple[int, int, int]]:
    root = math.sqrt(d)
    out = [f]
    g = _rho(f, root)
    while g != f:
        out.append(g)
        if len(out) > limit:
            raise ArithmeticError("reduction cycle did not close")
        g = _rho(g, root)
    return out


def narrow_class_number(d: int) -> int:
    """Number of proper equivalence classes of primitive forms of discriminant d > 0."""
    forms = reduced_forms_indefinite(d)
    seen: set = set()
    cycles = 0
    for f in forms:
        if f not in seen:
            cycles += 1
            seen.update(_cycle(f, d, 2 * len(forms) + 2))
    return cycles


def pell_norm_minus_one(d: int) -> bool:
    """Whether the units of discriminant d > 0 include one of norm -1.

    That happens exactly when the cycle of the principal form also contains
    a form with leading coefficient -1.
    """
    forms = reduced_forms_indefinite(d)
    principal = min(f for f in forms if f[0] == 1)
    return any(g[0] == -1 for g in _cycle(principal, d, 2 * len(forms) + 2))


def class_number(d: int) -> int:
    """Wide class number h(d) of the order of discriminant d (fundamental d gives h_K)."""
    if d < 0:
        return len(reduced_forms_definite(d))
    hplus = narrow_class_number(d)
    return hplus if pell_norm_minus_one(d) else hplus // 2
