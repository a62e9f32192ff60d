"""Fractional ideals of the maximal order and prime decomposition.

An ideal is ``(1/den) * L`` where L is a full-rank sublattice of O_K given by
its HNF basis in integral-basis coordinates.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Optional, Sequence

import sympy

from . import linalg as la
from .nf import FieldElem, NumberField, ZeroElement


class IndexDivisor(ArithmeticError):
    """No primitive element with index prime to p was found and no decomposition was supplied."""


class FracIdeal:
    __slots__ = ("field", "basis", "den", "_key")

    def __init__(self, field: NumberField, basis: Sequence[Sequence[int]], den: int = 1):
        n = field.degree
        h = la.hnf_basis([list(r) for r in basis], n)
        if len(h) != n:
            raise ValueError("the zero ideal is not a fractional ideal")
        if den < 0:
            den = -den
        g = math.gcd(den, *(x for r in h for x in r))
        if g > 1:
            h = [[x // g for x in r] for r in h]
            den //= g
        self.field = field
        self.basis = tuple(tuple(r) for r in h)
        self.den = den
        self._key = (self.den, self.basis)

    # constructors
    @classmethod
    def from_elements(cls, field: NumberField, elems: Sequence[FieldElem]) -> "FracIdeal":
        vecs = [e.ib_coords() for e in elems if not e.is_zero()]
        if not vecs:
            raise ValueError("the zero ideal is not a fractional ideal")
        d = math.lcm(*(c.denominator for v in vecs for c in v))
        ints = [[int(c * d) for c in v] for v in vecs]
        rows = [field.ib_mul(v, e) for v in ints for e in la.identity(field.degree)]
        return cls(field, rows, d)

    @classmethod
    def principal(cls, x: FieldElem) -> "FracIdeal":
        return cls.from_elements(x.field, [x])

    @classmethod
    def unit(cls, field: NumberField) -> "FracIdeal":
        return cls(field, la.identity(field.degree), 1)

    @classmethod
    def from_ib_generators(cls, field: NumberField, gens: Sequence[Sequence[int]]) -> "FracIdeal":
        rows = [field.ib_mul(list(v), e) for v in gens for e in la.identity(field.degree)]
        return cls(field, rows, 1)

    # arithmetic
    def __mul__(self, other: "FracIdeal") -> "FracIdeal":
        if isinstance(other, FieldElem):
            other = FracIdeal.principal(other)
        rows = [self.field.ib_mul(a, b) for a in self.basis for b in other.basis]
        return FracIdeal(self.field, rows, self.den * other.den)

    def __add__(self, other: "FracIdeal") -> "FracIdeal":
        d = math.lcm(self.den, other.den)
        rows = [[x * (d // self.den) for x in r] for r in self.basis] + \
               [[x * (d // other.den) for x in r] for r in other.basis]
        return FracIdeal(self.field, rows, d)

    def _lattice_norm(self) -> int:
        return abs(math.prod(self.basis[i][i] for i in range(self.field.degree)))

    def inverse(self) -> "FracIdeal":
        n = self.field.degree
        nl = self._lattice_norm()
        # {x in O : x * L subset nl * O} = nl * L^{-1}
        blocks = [self.field.mult_matrix_ib(a) for a in self.basis]
        rows = [r for m in blocks for r in m]
        big = [r + [nl if k == i else 0 for k in range(len(rows))] for i, r in enumerate(rows)]
        ker = la.kernel_basis(big, n + len(rows))
        lat = [v[:n] for v in ker]
        return FracIdeal(self.field, [[x * self.den for x in r] for r in lat], nl)

    def __truediv__(self, other: "FracIdeal") -> "FracIdeal":
        return self * other.inverse()

    def __pow__(self, k: int) -> "FracIdeal":
        if k < 0:
            return self.inverse() ** (-k)
        out = FracIdeal.unit(self.field)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # queries
    def norm(self) -> Fraction:
        return Fraction(self._lattice_norm(), self.den ** self.field.degree)

    def is_integral(self) -> bool:
        return self.den == 1

    def contains(self, x: FieldElem) -> bool:
        c = [v * self.den for v in x.ib_coords()]
        if any(v.denominator != 1 for v in c):
            return False
        return la.in_lattice([list(r) for r in self.basis], [int(v) for v in c]) is not None

    def elements(self) -> list[FieldElem]:
        return [self.field.from_ib([Fraction(x, self.den) for x in r]) for r in self.basis]

    def __eq__(self, other) -> bool:
        return isinstance(other, FracIdeal) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"FracIdeal(den={self.den}, basis={list(map(list, self.basis))})"


class PrimeIdeal:
    """A nonzero prime of O_K over the rational prime p."""

    def __init__(self, field: NumberField, p: int, gen: Sequence[int], ideal: FracIdeal, e: int, f: int,
                 index: int = 0):
        self.field = field
        self.p = p
        self.gen = list(gen)
        self.ideal = ideal
        self.e = e
        self.f = f
        self.index = index
        jt = FracIdeal(field, [[p * x for x in r] for r in ideal.inverse().basis], ideal.inverse().den)
        if jt.den != 1:
            raise ArithmeticError("p * P^-1 should be integral")
        self._beta = next(list(r) for r in jt.basis if any(x % p for x in r))
        self._uniformizer = None

    @property
    def norm(self) -> int:
        return self.p ** self.f

    def _val_int(self, a: list[int], cap: Optional[int] = None) -> int:
        if not any(a):
            raise ValueError("valuation of zero")
        k = 0
        p = self.p
        while cap is None or k < cap:
            b = self.field.ib_mul(a, self._beta)
            if any(x % p for x in b):
                break
            a = [x // p for x in b]
            k += 1
        return k

    def valuation(self, x) -> int:
        """P-adic valuation of a nonzero FieldElem or FracIdeal."""
        if isinstance(x, FracIdeal):
            v = min(self._val_int(list(r)) for r in x.basis)
            return v - self.e * _vp(x.den, self.p)
        if x.is_zero():
            raise ZeroElement("valuation of zero")
        c = x.ib_coords()
        d = math.lcm(*(q.denominator for q in c))
        a = [int(q * d) for q in c]
        return self._val_int(a) - self.e * _vp(d, self.p)

    @property
    def uniformizer(self) -> FieldElem:
        if self._uniformizer is None:
            cands = [self.gen] + [list(r) for r in self.ideal.basis]
            cands += [[g + (self.p if i == 0 else 0) for i, g in enumerate(self.gen)]]
            for c in cands:
                if any(c) and self._val_int(list(c)) == 1:
                    self._uniformizer = self.field.from_ib(c)
                    break
            else:
                raise ArithmeticError("no uniformizer among the candidates")
        return self._uniformizer

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeIdeal) and self.ideal == other.ideal

    def __hash__(self) -> int:
        return hash(self.ideal)

    def label(self) -> str:
        return f"P{self.p}.{self.index}"

    def __repr__(self) -> str:
        return f"PrimeIdeal(p={self.p}, e={self.e}, f={self.f}, index={self.index})"


def _vp(n: int, p: int) -> int:
    n = abs(n)
    k = 0
    while n and n % p == 0:
        n //= p
        k += 1
    return k


_X = sympy.Symbol("x")


def _charpoly_ib(field: NumberField, a: Sequence[int]) -> list[int]:
    m = sympy.Matrix(field.mult_matrix_ib(a))
    cp = m.charpoly(_X).all_coeffs()
    return [int(c) for c in reversed(cp)]


def _poly_at(field: NumberField, coeffs: Sequence[int], a: Sequence[int]) -> list[int]:
    n = field.degree
    acc = [0] * n
    one = [int(c) for c in field.one.ib_coords()]
    for c in reversed(coeffs):
        acc = field.ib_mul(acc, a)
        acc = [x + c * o for x, o in zip(acc, one)]
    return acc


def _primitive_candidates(field: NumberField):
    n = field.degree
    yield [int(c) for c in field.gen.ib_coords()]
    basis = la.identity(n)
    for i in range(1, n):
        yield basis[i]
    for coeffs in itertools.product(range(-2, 3), repeat=n - 1):
        if any(coeffs):
            yield [0] + list(coeffs)


def _index_prime_to(field: NumberField, a: Sequence[int], p: int) -> Optional[list[int]]:
    cp = _charpoly_ib(field, a)
    d = int(sympy.discriminant(sympy.Poly(list(reversed(cp)), _X)))
    if d == 0:
        return None
    q = Fraction(d, field.disc)
    if q.denominator != 1 or int(q) % (p * p) == 0:
        return None
    return cp


def decompose_prime(field: NumberField, p: int) -> list[PrimeIdeal]:
    """Primes of O_K above p, sorted deterministically; cached on the field."""
    cache = field.__dict__.setdefault("_prime_cache", {})
    if p in cache:
        return cache[p]
    if not sympy.isprime(p):
        raise ValueError(f"{p} is not prime")
    n = field.degree
    supplied = getattr(field, "supplied_primes", {}).get(p)
    found = None
    for a in itertools.islice(_primitive_candidates(field), 200):
        cp = _index_prime_to(field, a, p)
        if cp is not None:
            found = (a, cp)
            break
    raw = []
    if found is not None:
        a, cp = found
        _, facs = sympy.Poly(list(reversed(cp)), _X, modulus=p).factor_list()
        for g, e in facs:
            gc = [int(c) for c in reversed(g.all_coeffs())]
            gen = _poly_at(field, gc, a)
            ideal = FracIdeal.from_ib_generators(field, [[p] + [0] * (n - 1), gen]) if n > 1 else None
            if n == 1:
                ideal = FracIdeal(field, [[p]], 1)
                gen = [p]
            raw.append((gen, ideal, e, g.degree()))
    elif supplied is not None:
        for gen in supplied:
            ideal = FracIdeal.from_ib_generators(field, [[p] + [0] * (n - 1), list(gen)])
            f = _vp(ideal._lattice_norm(), p)
            raw.append((list(gen), ideal, None, f))
    else:
        raise IndexDivisor(f"p={p} divides the index of every tried primitive element")
    raw.sort(key=lambda t: (t[3], t[1].basis))
    primes = []
    for idx, (gen, ideal, e, f) in enumerate(raw):
        pr = PrimeIdeal(field, p, gen, ideal, e or 1, f, idx)
        if e is None:
            pr.e = pr.valuation(field.rational(p))
        primes.append(pr)
    # every decomposition is checked: sum e f = n and prod P^e = pO
    if sum(q.e * q.f for q in primes) != n:
        raise ArithmeticError(f"inconsistent decomposition of {p}")
    prod = FracIdeal.unit(field)
    for q in primes:
        prod = prod * q.ideal ** q.e
    if prod != FracIdeal.principal(field.rational(p)):
        raise ArithmeticError(f"product of primes above {p} is not (p)")
    cache[p] = primes
    return primes


def _norm_primes(x: Fraction) -> list[int]:
    out = set()
    for m in (x.numerator, x.denominator):
        out.update(sympy.factorint(abs(m)).keys())
    return sorted(out)


def factor_ideal(ideal: FracIdeal) -> list[tuple[PrimeIdeal, int]]:
    """Prime factorization with nonzero exponents, ordered by (p, index)."""
    out = []
    primes = set(_norm_primes(ideal.norm())) | set(sympy.factorint(ideal.den).keys())
    for p in sorted(primes):
        for q in decompose_prime(ideal.field, p):
            v = q.valuation(ideal)
            if v:
                out.append((q, v))
    return out


def factor_element(x: FieldElem) -> list[tuple[PrimeIdeal, int]]:
    out = []
    for p in _norm_primes(x.norm()):
        for q in decompose_prime(x.field, p):
            v = q.valuation(x)
            if v:
                out.append((q, v))
    return out


def ideal_from_factors(field: NumberField, factors: Sequence[tuple[PrimeIdeal, int]]) -> FracIdeal:
    out = FracIdeal.unit(field)
    for q, k in factors:
        if k:
            out = out * q.ideal ** k
    return out


def primes_up_to(field: NumberField, bound: float) -> list[PrimeIdeal]:
    """All primes of norm at most `bound`, ordered by (norm, p, index)."""
    out = []
    for p in sympy.primerange(2, int(math.floor(bound)) + 1):
        for q in decompose_prime(field, p):
            if q.norm <= bound:
                out.append(q)
    out.sort(key=lambda q: (q.norm, q.p, q.index))
    return out
