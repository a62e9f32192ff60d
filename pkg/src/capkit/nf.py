"""Absolute number fields Q[x]/(f) with a verified integral basis, and their elements.

Elements are stored in the power basis as an integer numerator vector over a
positive common denominator. The integral basis is kept as a rational matrix
whose rows are the basis elements in power-basis coordinates.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

import sympy

from . import linalg as la
from .polys import (
    Interval,
    parse_poly,
    poly_sign_at_root,
    real_root_intervals,
    refine_root,
    eval_poly_interval,
)


class NumberFieldError(ValueError):
    pass


class ReduciblePolynomial(NumberFieldError):
    pass


class NotARing(NumberFieldError):
    pass


class MissingBasis(NumberFieldError):
    pass


class NotMaximal(NumberFieldError):
    """The supplied integral basis spans a non-maximal order."""


class ZeroElement(ArithmeticError):
    pass


def _to_fraction(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def _normalize(num: Sequence[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        num, den = [-x for x in num], -den
    g = math.gcd(den, *num) if any(num) else den
    if g > 1:
        num = [x // g for x in num]
        den //= g
    return tuple(num), den


def _squarefree_part(n: int) -> tuple[int, int]:
    """``n = s * m^2`` with s squarefree; returns (s, m)."""
    sign = -1 if n < 0 else 1
    s, m = 1, 1
    for p, k in sympy.factorint(abs(n)).items():
        m *= p ** (k // 2)
        if k % 2:
            s *= p
    return sign * s, m


class NumberField:
    """The field Q(theta) with theta a root of the monic irreducible `min_poly`.

    `integral_basis` is a list of power-basis coordinate vectors (rationals or
    "p/q" strings). It is computed for degree <= 2 and required otherwise; a
    supplied basis is checked for closure under multiplication and for
    maximality at every prime whose square divides its discriminant.
    """

    def __init__(self, min_poly, integral_basis: Optional[Sequence[Sequence]] = None, name: str = "",
                 check_maximal: bool = True):
        coeffs = parse_poly(min_poly)
        if coeffs[-1] != 1:
            raise NumberFieldError("minimal polynomial must be monic")
        if any(Fraction(c).denominator != 1 for c in coeffs):
            raise NumberFieldError("minimal polynomial must have integer coefficients")
        self.poly = tuple(int(c) for c in coeffs)
        self.degree = n = len(self.poly) - 1
        if n < 1:
            raise NumberFieldError("degree must be positive")
        self.name = name
        x = sympy.Symbol("x")
        self._sympoly = sympy.Poly(list(reversed(self.poly)), x)
        if n > 1 and not self._sympoly.is_irreducible:
            raise ReduciblePolynomial(f"{self._sympoly.as_expr()} is reducible over Q")
        if integral_basis is None:
            if n > 2:
                raise MissingBasis("fields of degree >= 3 need a supplied integral basis")
            integral_basis = self._quadratic_basis() if n == 2 else [[1]]
            check_maximal = False
        rows = [[_to_fraction(c) for c in row] for row in integral_basis]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise NumberFieldError("integral basis must be n vectors of length n")
        den = math.lcm(*(c.denominator for r in rows for c in r))
        self._b_num = [[int(c * den) for c in r] for r in rows]
        self._b_den = den
        binv = la.inverse_rational(rows)
        bden = math.lcm(*(c.denominator for r in binv for c in r))
        self._binv_num = [[int(c * bden) for c in r] for r in binv]
        self._binv_den = bden
        self._build_tables()
        self.disc = la.det([[self._trace_ib(self._table[i][j]) for j in range(n)] for i in range(n)])
        self.r1 = self._sympoly.count_roots() if n > 1 else 1
        self.r2 = (n - self.r1) // 2
        if check_maximal:
            from .maximal import p_maximal

            for p, k in sympy.factorint(abs(self.disc)).items():
                if k >= 2 and not p_maximal(self, p):
                    raise NotMaximal(f"basis is not maximal at p={p}")

    # --- construction helpers -------------------------------------------

    def _quadratic_basis(self):
        c0, c1, _ = self.poly
        delta = c1 * c1 - 4 * c0
        d0, m = _squarefree_part(delta)
        # sqrt(d0) = (2*theta + c1) / m
        sq = [Fraction(c1, m), Fraction(2, m)]
        if d0 % 4 == 1:
            return [[1, 0], [(1 + sq[0]) / 2, sq[1] / 2]]
        return [[1, 0], sq]

    def _build_tables(self):
        n = self.degree
        # powers theta^k, k < 2n-1, in the power basis
        self._pow_table = []
        for k in range(2 * n - 1):
            v = [0] * (2 * n - 1)
            v[k] = 1
            self._pow_table.append(self._reduce_poly(v))
        table = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                prod = self._mul_pow(self._b_num[i], self._b_num[j])
                ib = self._pow_to_ib(prod, self._b_den * self._b_den)
                if any(c.denominator != 1 for c in ib):
                    raise NotARing(f"product of basis elements {i},{j} is not integral")
                table[i][j] = [int(c) for c in ib]
        self._table = table

    def _reduce_poly(self, v: list[int]) -> list[int]:
        n = self.degree
        v = list(v)
        for k in range(len(v) - 1, n - 1, -1):
            c = v[k]
            if c:
                v[k] = 0
                for i in range(n):
                    v[k - n + i] -= c * self.poly[i]
        return v[:n] + [0] * (n - len(v[:n]))

    def _mul_pow(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        n = self.degree
        conv = [0] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        return self._reduce_poly(conv)

    def _pow_to_ib(self, num: Sequence[int], den: int) -> list[Fraction]:
        c = la.vec_mat(num, self._binv_num)
        d = den * self._binv_den
        return [Fraction(x, d) for x in c]

    def _trace_ib(self, a: Sequence[int]) -> int:
        m = self.mult_matrix_ib(a)
        return sum(m[i][i] for i in range(self.degree))

    # --- integral-basis arithmetic on integer vectors --------------------

    def ib_mul(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        n = self.degree
        out = [0] * n
        for i, x in enumerate(a):
            if x:
                ti = self._table[i]
                for j, y in enumerate(b):
                    if y:
                        xy = x * y
                        for k, t in enumerate(ti[j]):
                            if t:
                                out[k] += xy * t
        return out

    def mult_matrix_ib(self, a: Sequence[int]) -> la.IntMatrix:
        """Matrix whose column j holds the integral-basis coordinates of a * w_j."""
        cols = [self.ib_mul(a, e) for e in la.identity(self.degree)]
        return la.transpose(cols)

    @cached_property
    def basis_elements(self) -> list["FieldElem"]:
        return [FieldElem(self, r, self._b_den) for r in self._b_num]

    # --- element constructors --------------------------------------------

    def elem(self, coords: Sequence) -> "FieldElem":
        fr = [_to_fraction(c) for c in coords]
        if len(fr) != self.degree:
            raise NumberFieldError("wrong number of coordinates")
        den = math.lcm(*(c.denominator for c in fr))
        return FieldElem(self, [int(c * den) for c in fr], den)

    def from_ib(self, coords: Sequence) -> "FieldElem":
        fr = [_to_fraction(c) for c in coords]
        den = math.lcm(*(c.denominator for c in fr))
        num = la.vec_mat([int(c * den) for c in fr], self._b_num)
        return FieldElem(self, num, den * self._b_den)

    def rational(self, q) -> "FieldElem":
        q = _to_fraction(q)
        return FieldElem(self, [q.numerator] + [0] * (self.degree - 1), q.denominator)

    @property
    def one(self) -> "FieldElem":
        return self.rational(1)

    @property
    def zero(self) -> "FieldElem":
        return self.rational(0)

    @property
    def gen(self) -> "FieldElem":
        if self.degree == 1:
            return self.rational(-self.poly[0])
        return FieldElem(self, [0, 1] + [0] * (self.degree - 2), 1)

    def eval_poly(self, coeffs: Sequence, x: "FieldElem") -> "FieldElem":
        """Evaluate a rational polynomial (low to high) at x."""
        acc = self.zero
        for c in reversed(list(coeffs)):
            acc = acc * x + self.rational(c)
        return acc

    # --- invariants -------------------------------------------------------

    @property
    def signature(self) -> tuple[int, int]:
        return self.r1, self.r2

    @property
    def unit_rank(self) -> int:
        return self.r1 + self.r2 - 1

    def minkowski_bound(self) -> float:
        n = self.degree
        return (4 / math.pi) ** self.r2 * math.factorial(n) / n ** n * math.sqrt(abs(self.disc))

    @cached_property
    def poly_disc(self) -> int:
        return int(sympy.discriminant(self._sympoly)) if self.degree > 1 else 1

    @cached_property
    def index(self) -> int:
        """[O_K : Z[theta]]"""
        q = Fraction(self.poly_disc, self.disc)
        r = math.isqrt(int(q))
        if q.denominator != 1 or r * r != q:
            raise NumberFieldError("integral basis inconsistent with polynomial discriminant")
        return r

    @cached_property
    def real_intervals(self) -> list[Interval]:
        """Disjoint isolating intervals of the real roots of f, in increasing order."""
        if self.degree == 1:
            r = Fraction(-self.poly[0])
            return [(r, r)]
        return real_root_intervals(self.poly)

    def real_sign(self, x: "FieldElem", place: int) -> int:
        """Exact sign of x under the `place`-th real embedding."""
        if x.is_zero():
            return 0
        coeffs = [Fraction(c, x.den) for c in x.num]
        return poly_sign_at_root(self.poly, self.real_intervals[place], coeffs)

    def embeddings(self, dps: int = 30) -> list:
        """Numeric embeddings of theta: r1 real roots, then r2 roots with positive imaginary part."""
        return _numeric_roots(self.poly, self.r1, dps)

    def __repr__(self) -> str:
        return f"NumberField({self.name or self._sympoly.as_expr()})"

    def __eq__(self, other) -> bool:
        return isinstance(other, NumberField) and self.poly == other.poly and self._b_num == other._b_num \
            and self._b_den == other._b_den

    def __hash__(self) -> int:
        return hash(self.poly)


_ROOT_CACHE: dict = {}


def _numeric_roots(poly: tuple[int, ...], r1: int, dps: int) -> list:
    import mpmath

    key = (poly, dps)
    if key in _ROOT_CACHE:
        return _ROOT_CACHE[key]
    n = len(poly) - 1
    with mpmath.workdps(dps + 10):
        if n == 1:
            roots = [mpmath.mpf(-poly[0])]
        else:
            roots = mpmath.polyroots(list(reversed(poly)), maxsteps=200, extraprec=4 * dps + 50)
        roots = sorted(roots, key=lambda z: abs(mpmath.im(z)))
        real = sorted((mpmath.re(z) for z in roots[:r1]))
        cplx = sorted((z for z in roots[r1:] if mpmath.im(z) > 0), key=lambda z: (mpmath.re(z), mpmath.im(z)))
        out = [mpmath.mpc(z) for z in real] + cplx
    _ROOT_CACHE[key] = out
    return out


class FieldElem:
    __slots__ = ("field", "num", "den", "__weakref__")

    def __init__(self, field: NumberField, num: Sequence[int], den: int = 1):
        self.field = field
        self.num, self.den = _normalize(list(num), den)

    # arithmetic
    def _coerce(self, other) -> "FieldElem":
        if isinstance(other, FieldElem):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        return self.field.rational(other)

    def __add__(self, other):
        o = self._coerce(other)
        d = self.den * o.den // math.gcd(self.den, o.den)
        a, b = d // self.den, d // o.den
        return FieldElem(self.field, [a * x + b * y for x, y in zip(self.num, o.num)], d)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, [-x for x in self.num], self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElem(self.field, self.field._mul_pow(self.num, o.num), self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        if self.is_zero():
            raise ZeroElement("inverse of zero")
        n = self.field.degree
        m = self.mult_matrix()
        rhs = [Fraction(self.den)] + [Fraction(0)] * (n - 1)
        x = la.solve_rational(m, rhs)
        return self.field.elem(x)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.field.rational(other)
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def mult_matrix(self) -> la.IntMatrix:
        """Integer matrix of multiplication by ``den * self`` on the power basis."""
        n = self.field.degree
        cols = []
        v = list(self.num)
        for _ in range(n):
            cols.append(v)
            v = self.field._reduce_poly([0] + v)
        return la.transpose(cols)

    def norm(self) -> Fraction:
        return Fraction(la.det(self.mult_matrix())) / self.den ** self.field.degree

    def trace(self) -> Fraction:
        m = self.mult_matrix()
        return Fraction(sum(m[i][i] for i in range(self.field.degree)), self.den)

    def ib_coords(self) -> list[Fraction]:
        return self.field._pow_to_ib(self.num, self.den)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.ib_coords())

    def ib_int(self) -> list[int]:
        c = self.ib_coords()
        if any(x.denominator != 1 for x in c):
            raise ValueError("element is not integral")
        return [int(x) for x in c]

    def coords(self) -> list[Fraction]:
        return [Fraction(x, self.den) for x in self.num]

    def numeric(self, emb) -> complex:
        """Value under an embedding given numerically as the image of theta."""
        acc = 0
        for c in reversed(self.num):
            acc = acc * emb + c
        return acc / self.den

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coords()):
            if c:
                terms.append(f"{c}" + ("" if i == 0 else ("*t" if i == 1 else f"*t^{i}")))
        return "(" + (" + ".join(terms) if terms else "0") + ")"

    def to_strings(self) -> list[str]:
        return [str(c) for c in self.coords()]


def elem_product(elems: Iterable[tuple[FieldElem, int]], field: NumberField) -> FieldElem:
    out = field.one
    for x, k in elems:
        if k:
            out = out * x ** k
    return out
