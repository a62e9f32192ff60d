"""Integer/rational polynomials in one variable: parsing and exact real-root work.

Coefficient lists run from the constant term upward.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import sympy
from sympy.parsing.sympy_parser import (convert_xor, implicit_multiplication_application, parse_expr,
                                        standard_transformations)

Interval = tuple[Fraction, Fraction]

_X = sympy.Symbol("x")
_TRANSFORMS = standard_transformations + (implicit_multiplication_application, convert_xor)


def parse_poly(p) -> list[Fraction]:
    """Accept "x^2+1", a sympy expression, or a coefficient list (low to high)."""
    if isinstance(p, (list, tuple)):
        out = [Fraction(c) if not isinstance(c, str) else Fraction(c.strip()) for c in p]
    else:
        if isinstance(p, str):
            expr = parse_expr(p, local_dict={"x": _X}, transformations=_TRANSFORMS)
        else:
            expr = p
        free = expr.free_symbols - {_X}
        if free:
            raise ValueError(f"unexpected symbols {sorted(map(str, free))} in polynomial")
        coeffs = sympy.Poly(expr, _X).all_coeffs()
        out = [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in reversed(coeffs)]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def poly_str(coeffs: Sequence) -> str:
    expr = sum(sympy.Rational(str(Fraction(c))) * _X ** i for i, c in enumerate(coeffs))
    return str(sympy.expand(expr)).replace("**", "^")


def eval_poly(coeffs: Sequence, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def eval_poly_interval(coeffs: Sequence, iv: Interval) -> Interval:
    """Enclosure of the values of the polynomial on the closed interval (Horner form)."""
    lo, hi = Fraction(0), Fraction(0)
    a, b = iv
    for c in reversed(coeffs):
        prods = (lo * a, lo * b, hi * a, hi * b)
        lo, hi = min(prods) + c, max(prods) + c
    return lo, hi


def real_root_intervals(poly: Sequence[int]) -> list[Interval]:
    """Disjoint isolating intervals for the real roots of a squarefree polynomial."""
    sp = sympy.Poly(list(reversed([int(c) for c in poly])), _X)
    out = []
    for (a, b), _mult in sp.intervals():
        out.append((Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q))))
    out.sort()
    return out


def refine_root(poly: Sequence[int], iv: Interval) -> Interval:
    """Halve an isolating interval, keeping the root inside."""
    a, b = iv
    if a == b:
        return iv
    m = (a + b) / 2
    fm = eval_poly(poly, m)
    if fm == 0:
        return m, m
    fa = eval_poly(poly, a)
    if fa == 0:
        return a, a
    return (a, m) if (fa < 0) != (fm < 0) else (m, b)


def poly_sign_at_root(poly: Sequence[int], iv: Interval, g: Sequence, max_steps: int = 4000) -> int:
    """Sign of g(r) for the unique root r of `poly` in `iv`; g(r) must be nonzero."""
    for _ in range(max_steps):
        if iv[0] == iv[1]:
            v = eval_poly(g, iv[0])
            return (v > 0) - (v < 0)
        lo, hi = eval_poly_interval(g, iv)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        iv = refine_root(poly, iv)
    raise ArithmeticError("sign determination did not converge")
