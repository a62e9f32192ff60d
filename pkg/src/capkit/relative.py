"""A cyclic extension L/K given by absolute fields, an embedding of K and a generator sigma.

L is always presented by an absolute primitive element over Q; relative
arithmetic is absolute arithmetic in L plus the embedding of K.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence, Union

import sympy

from . import linalg as la
from .abelian import GroupHom
from .ideals import FracIdeal, PrimeIdeal, decompose_prime, factor_ideal
from .nf import FieldElem, NumberField
from .polys import eval_poly_interval, refine_root


class RelExtError(ValueError):
    pass


class NotAnEmbedding(RelExtError):
    pass


class NotAnAutomorphism(RelExtError):
    pass


class NotCyclicOverBase(RelExtError):
    pass


@dataclass(frozen=True)
class InfPlace:
    """An infinite place of a field: real places come first, indexed by root order."""
    index: int
    real: bool

    def label(self) -> str:
        return f"{'R' if self.real else 'C'}{self.index}"


Place = Union[PrimeIdeal, InfPlace]


@dataclass
class SplittingData:
    place: Place
    above: list
    e: int
    f: int
    g: int

    @property
    def n_v(self) -> int:
        return self.e * self.f

    @property
    def decomposition_power(self) -> int:
        """sigma^g generates the decomposition group of each place above."""
        return self.g

    def label(self) -> str:
        return place_label(self.place)


def place_label(v: Place) -> str:
    return v.label()


class RelExt:
    def __init__(self, base: NumberField, ext: NumberField, embed: FieldElem, sigma: FieldElem):
        if ext.degree % base.degree:
            raise RelExtError("deg L must be a multiple of deg K")
        self.base = base
        self.ext = ext
        self.n = ext.degree // base.degree
        if ext.eval_poly(base.poly, embed) != ext.zero:
            raise NotAnEmbedding("embed is not a root of K's polynomial in L")
        if ext.eval_poly(ext.poly, sigma) != ext.zero:
            raise NotAnAutomorphism("sigma is not a root of L's polynomial")
        self.embed = embed
        self.sigma_image = sigma
        self._pow_images = [ext.one]
        for _ in range(1, ext.degree):
            self._pow_images.append(self._pow_images[-1] * sigma)
        if self.sigma(embed) != embed:
            raise NotCyclicOverBase("sigma does not fix K")
        g = ext.gen
        x = g
        for k in range(1, self.n + 1):
            x = self.sigma(x)
            if (x == g) != (k == self.n):
                raise NotCyclicOverBase(f"sigma has order {k}, expected {self.n}")
        self._sigma_ib = [self.sigma(w).ib_int() for w in ext.basis_elements]
        self._embed_pows = [ext.one]
        for _ in range(1, base.degree):
            self._embed_pows.append(self._embed_pows[-1] * embed)
        self._split_cache: dict = {}

    # --- elements -----------------------------------------------------------

    def sigma(self, x: FieldElem, k: int = 1) -> FieldElem:
        k %= self.n
        for _ in range(k):
            acc = self.ext.zero
            for c, img in zip(x.num, self._pow_images):
                if c:
                    acc = acc + img * c
            x = acc * Fraction(1, x.den)
        return x

    def sigma_ib(self, v: Sequence[int]) -> list[int]:
        return la.vec_mat(list(v), self._sigma_ib)

    def lift(self, x: FieldElem) -> FieldElem:
        """Image of x in K under the embedding."""
        acc = self.ext.zero
        for c, e in zip(x.coords(), self._embed_pows):
            if c:
                acc = acc + e * c
        return acc

    def pullback(self, y: FieldElem) -> Optional[FieldElem]:
        """The element of K mapping to y, or None if y is not in K."""
        cols = [e.coords() for e in self._embed_pows]
        m = [[cols[j][i] for j in range(self.base.degree)] for i in range(self.ext.degree)]
        sol = la.solve_rational(m, y.coords())
        if sol is None:
            return None
        x = self.base.elem(sol)
        return x if self.lift(x) == y else None

    def norm_in_l(self, x: FieldElem) -> FieldElem:
        out = x
        y = x
        for _ in range(1, self.n):
            y = self.sigma(y)
            out = out * y
        return out

    def relative_norm(self, x: FieldElem) -> FieldElem:
        nm = self.pullback(self.norm_in_l(x))
        if nm is None:
            raise ArithmeticError("relative norm does not lie in K")
        return nm

    # --- ideals -------------------------------------------------------------

    def extend_ideal(self, ideal: FracIdeal) -> FracIdeal:
        return FracIdeal.from_elements(self.ext, [self.lift(x) for x in ideal.elements()])

    def sigma_ideal(self, ideal: FracIdeal, k: int = 1) -> FracIdeal:
        rows = [list(r) for r in ideal.basis]
        for _ in range(k % self.n):
            rows = [self.sigma_ib(r) for r in rows]
        return FracIdeal(self.ext, rows, ideal.den)

    def prime_below(self, q: PrimeIdeal) -> PrimeIdeal:
        for p in decompose_prime(self.base, q.p):
            if all(q.valuation(self.lift(x)) >= 1 for x in p.ideal.elements()):
                return p
        raise ArithmeticError("no prime of K below")

    def primes_above(self, p: PrimeIdeal) -> list[PrimeIdeal]:
        return [q for q in decompose_prime(self.ext, p.p) if self.prime_below(q) == p]

    def relative_norm_ideal(self, ideal: FracIdeal) -> FracIdeal:
        out = FracIdeal.unit(self.base)
        for q, k in factor_ideal(ideal):
            p = self.prime_below(q)
            out = out * p.ideal ** (k * (q.f // p.f))
        return out

    # --- splitting ----------------------------------------------------------

    def splitting(self, v: Place) -> SplittingData:
        key = v.ideal if isinstance(v, PrimeIdeal) else v
        if key in self._split_cache:
            return self._split_cache[key]
        if isinstance(v, PrimeIdeal):
            above = self.primes_above(v)
            q = above[0]
            e = q.e // v.e
            f = q.f // v.f
            g = len(above)
            if e * f * g != self.n:
                raise ArithmeticError(f"e f g != n at {v.label()}")
            # sigma permutes the primes above v transitively
            orbit = {q.ideal}
            cur = q.ideal
            for _ in range(self.n):
                cur = self.sigma_ideal(cur)
                orbit.add(cur)
            if orbit != {a.ideal for a in above}:
                raise ArithmeticError(f"sigma is not transitive above {v.label()}")
            above = _orbit_order(self, above)
        else:
            above = self._infinite_above(v)
            if v.real and not any(w.real for w in above):
                e, g = 2, self.n // 2
            else:
                e, g = 1, self.n
            f = 1
        data = SplittingData(v, above, e, f, g)
        self._split_cache[key] = data
        return data

    def infinite_places_base(self) -> list[InfPlace]:
        return [InfPlace(i, True) for i in range(self.base.r1)] + \
               [InfPlace(i, False) for i in range(self.base.r1, self.base.r1 + self.base.r2)]

    @cached_property
    def _real_matching(self) -> list[Optional[int]]:
        """For each real root of L, the index of the real root of K it maps to."""
        kint = [list(iv) for iv in self.base.real_intervals]
        out = []
        coeffs = self.embed.coords()
        for iv in self.ext.real_intervals:
            cur = iv
            for _ in range(4000):
                lo, hi = eval_poly_interval(coeffs, cur) if cur[0] != cur[1] else (
                    _ev(coeffs, cur[0]), _ev(coeffs, cur[0]))
                hits = [i for i, (a, b) in enumerate(kint) if not (hi < a or lo > b)]
                inside = [i for i in hits if kint[i][0] <= lo and hi <= kint[i][1]]
                if len(hits) == 1 and inside:
                    out.append(hits[0])
                    break
                cur = refine_root(self.ext.poly, cur)
                kint = [list(refine_root(self.base.poly, tuple(k))) for k in kint]
            else:
                raise ArithmeticError("could not match real places")
        return out

    def _infinite_above(self, v: InfPlace) -> list[InfPlace]:
        if v.real:
            reals = [InfPlace(j, True) for j, i in enumerate(self._real_matching) if i == v.index]
            if reals:
                return reals
            # all places above are complex; the count is n/2 by transitivity
            return [InfPlace(-1, False)] * (self.n // 2)
        return [InfPlace(-1, False)] * self.n

    @cached_property
    def ramified_candidates(self) -> list[int]:
        q = Fraction(self.ext.disc, self.base.disc ** self.n)
        if q.denominator != 1:
            raise ArithmeticError("disc(L)/disc(K)^n is not an integer")
        return sorted(sympy.factorint(abs(int(q))).keys())

    @cached_property
    def ramified_primes(self) -> list[PrimeIdeal]:
        out = []
        for p in self.ramified_candidates:
            for v in decompose_prime(self.base, p):
                if self.splitting(v).e > 1:
                    out.append(v)
        return out

    def ramified_infinite(self) -> list[InfPlace]:
        return [v for v in self.infinite_places_base() if self.splitting(v).e > 1]

    def e_factor(self, s_finite: Sequence[PrimeIdeal]) -> int:
        """prod over v in S of n_v times prod over ramified v outside S of e(v)."""
        out = 1
        for v in self.infinite_places_base():
            out *= self.splitting(v).n_v
        keys = {p.ideal for p in s_finite}
        for v in s_finite:
            out *= self.splitting(v).n_v
        for v in self.ramified_primes:
            if v.ideal not in keys:
                out *= self.splitting(v).e
        return out

    def is_large(self, s_finite: Sequence[PrimeIdeal]) -> bool:
        keys = {p.ideal for p in s_finite}
        return all(v.ideal in keys for v in self.ramified_primes)

    def places_of_s(self, s_finite: Sequence[PrimeIdeal]) -> list[Place]:
        return list(self.infinite_places_base()) + list(s_finite)

    def s_primes_above(self, s_finite: Sequence[PrimeIdeal]) -> list[PrimeIdeal]:
        out = []
        for v in s_finite:
            out.extend(self.splitting(v).above)
        return out


def _ev(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _orbit_order(rel: RelExt, above: list[PrimeIdeal]) -> list[PrimeIdeal]:
    """Primes above v listed as w, sigma(w), sigma^2(w), ... starting from the first."""
    by_key = {q.ideal: q for q in above}
    out = [above[0]]
    cur = above[0].ideal
    while len(out) < len(above):
        cur = rel.sigma_ideal(cur)
        out.append(by_key[cur])
    return out


# --- Galois action on arithmetic groups of L ---------------------------------


def sigma_action_sunits(rel: RelExt, su) -> GroupHom:
    """Matrix of sigma on the S-unit group of L, in its generator coordinates."""
    images = [su.dlog(rel.sigma(g)) for g in su.generators]
    return GroupHom.from_images(su.group, su.group, images)


def sigma_action_classes(rel: RelExt, cl, group) -> GroupHom:
    """Action of sigma on a quotient of cl.group that keeps the factor-base generators."""
    images = [cl.ideal_vector(rel.sigma_ideal(q.ideal))[0] for q in cl.fb]
    return GroupHom.from_images(group, group, images)
