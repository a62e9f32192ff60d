"""Local invariants computed from global data: norm tests, quadratic Hilbert symbols,
and the localization maps on H^1 and H^2 of the S-unit module.

No completion is ever built. Local information comes from valuations, signs at
real places, residue classes modulo powers of a prime, and resolvents.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Sequence

from . import linalg as la
from .abelian import FgAbGroup, GroupHom, hom_parts
from .ideals import FracIdeal, PrimeIdeal, decompose_prime, factor_element
from .nf import FieldElem, NumberField
from .relative import InfPlace, RelExt
from .tate import CohomologyGroup, hilbert90_resolvent


class UnsupportedLocalDegree(ArithmeticError):
    """A ramified local extension of degree > 2 (or a quadratic one inside n > 2)."""


# --- residue rings O/P^k ---------------------------------------------------


class ResidueRing:
    def __init__(self, prime: PrimeIdeal, k: int):
        self.prime = prime
        self.k = k
        self.field = prime.field
        m = prime.ideal ** k
        assert m.den == 1
        self.mod = [list(r) for r in m.basis]
        self.size = prime.norm ** k
        self.unit_count = prime.norm ** (k - 1) * (prime.norm - 1)

    def reduce(self, v: Sequence[int]) -> tuple[int, ...]:
        v = list(v)
        for i, row in enumerate(self.mod):
            q = v[i] // row[i]
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        return tuple(v)

    def mul(self, a, b) -> tuple[int, ...]:
        return self.reduce(self.field.ib_mul(list(a), list(b)))

    def pow(self, a, e: int) -> tuple[int, ...]:
        out = self.reduce([int(c) for c in self.field.one.ib_coords()])
        base = self.reduce(a)
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def one(self) -> tuple[int, ...]:
        return self.reduce([int(c) for c in self.field.one.ib_coords()])

    def is_unit(self, a) -> bool:
        b = self.field.ib_mul(list(a), self.prime._beta)
        return any(x % self.prime.p for x in b)

    def inverse(self, a) -> tuple[int, ...]:
        return self.pow(a, self.unit_count - 1)

    def elements(self):
        diag = [self.mod[i][i] for i in range(len(self.mod))]
        for v in itertools.product(*(range(d) for d in diag)):
            yield tuple(v)

    def residue(self, x: FieldElem) -> tuple[int, ...]:
        """Class of a P-unit x modulo P^k."""
        p = self.prime
        c = x.ib_coords()
        d = math.lcm(*(q.denominator for q in c))
        num = x * d
        kk = p.valuation(num)
        if kk:
            gamma = self.field.from_ib(p._beta) * Fraction(1, p.p)
            g = gamma ** kk
            num = num * g
            den = self.field.rational(d) * g
        else:
            den = self.field.rational(d)
        a, b = num.ib_int(), den.ib_int()
        return self.mul(a, self.inverse(b))


# --- Hilbert symbols ---------------------------------------------------------


def hilbert_symbol_real(a: FieldElem, b: FieldElem, place: int) -> int:
    f = a.field
    return -1 if f.real_sign(a, place) < 0 and f.real_sign(b, place) < 0 else 1


def _tame_symbol(a: FieldElem, b: FieldElem, prime: PrimeIdeal) -> int:
    alpha, beta = prime.valuation(a), prime.valuation(b)
    u = a ** beta * b ** (-alpha)
    if (alpha * beta) % 2:
        u = -u
    r = ResidueRing(prime, 1)
    res = r.pow(r.residue(u), (prime.norm - 1) // 2)
    return 1 if res == r.one() else -1


class _DyadicData:
    """Square classes of K_P^x for P above 2, as (parity of valuation, unit class key)."""

    def __init__(self, prime: PrimeIdeal):
        self.prime = prime
        self.ring = ResidueRing(prime, 2 * prime.e + 1)
        units = [u for u in self.ring.elements() if self.ring.is_unit(u)]
        self.squares = sorted({self.ring.mul(u, u) for u in units})
        self.unit_classes = len(units) // len(self.squares)
        self.size = 2 * self.unit_classes
        self._key_cache: dict = {}

    def key(self, u) -> tuple:
        u = tuple(u)
        if u not in self._key_cache:
            self._key_cache[u] = min(self.ring.mul(u, s) for s in self.squares)
        return self._key_cache[u]

    def cls(self, x: FieldElem) -> tuple[int, tuple]:
        v = self.prime.valuation(x)
        unit = x * self.prime.uniformizer ** (-v)
        return v % 2, self.key(self.ring.residue(unit))

    def mul(self, c1, c2) -> tuple[int, tuple]:
        return (c1[0] + c2[0]) % 2, self.key(self.ring.mul(c1[1], c2[1]))


_DYADIC: dict = {}
_NORM_GROUPS: dict = {}


def _dyadic(prime: PrimeIdeal) -> _DyadicData:
    key = (prime.field.poly, prime.ideal)
    if key not in _DYADIC:
        _DYADIC[key] = _DyadicData(prime)
    return _DYADIC[key]


def _norm_classes(a: FieldElem, prime: PrimeIdeal) -> set:
    """Classes of Nm(K_P(sqrt a)^x) in K_P^x / squares, for a non-square a."""
    dd = _dyadic(prime)
    key = (prime.field.poly, prime.ideal, a.num, a.den)
    if key in _NORM_GROUPS:
        return _NORM_GROUPS[key]
    field = a.field
    target = dd.size // 2
    group = {dd.cls(field.one)}
    n = field.degree
    box = [field.from_ib(list(v)) for v in itertools.product(range(-3, 5), repeat=n)]
    box.sort(key=lambda z: (sum(abs(c) for c in z.ib_coords()), z.to_strings()))
    for x, y in itertools.product(box[:64], repeat=2):
        if len(group) >= target:
            break
        val = x * x - a * y * y
        if val.is_zero():
            continue
        c = dd.cls(val)
        if c not in group:
            group |= {dd.mul(c, h) for h in group}
    if len(group) != target:
        raise ArithmeticError("could not generate the local norm group")
    _NORM_GROUPS[key] = group
    return group


def _dyadic_symbol(a: FieldElem, b: FieldElem, prime: PrimeIdeal) -> int:
    dd = _dyadic(prime)
    ca = dd.cls(a)
    if ca == dd.cls(a.field.one):
        return 1
    return 1 if dd.cls(b) in _norm_classes(a, prime) else -1


def hilbert_symbol(a: FieldElem, b: FieldElem, place) -> int:
    """Quadratic Hilbert symbol (a, b)_v: +1 iff b is a norm from K_v(sqrt a)."""
    if a.is_zero() or b.is_zero():
        raise ValueError("Hilbert symbol of zero")
    if isinstance(place, InfPlace):
        return hilbert_symbol_real(a, b, place.index) if place.real else 1
    if place.p == 2:
        return _dyadic_symbol(a, b, place)
    return _tame_symbol(a, b, place)


# --- local norm tests -------------------------------------------------------


def quadratic_radicand(rel: RelExt) -> FieldElem:
    """a in K with L = K(sqrt a), for n = 2: a = (theta - sigma(theta))^2."""
    if rel.n != 2:
        raise UnsupportedLocalDegree("quadratic radicand needs [L:K] = 2")
    t = rel.ext.gen - rel.sigma(rel.ext.gen)
    a = rel.pullback(t * t)
    if a is None:
        raise ArithmeticError("radicand not in K")
    return a


def is_local_norm(rel: RelExt, x: FieldElem, v) -> bool:
    sp = rel.splitting(v)
    if sp.n_v == 1:
        return True
    if isinstance(v, InfPlace):
        return rel.base.real_sign(x, v.index) > 0
    if sp.e == 1:
        return v.valuation(x) % sp.n_v == 0
    if sp.n_v == 2 and rel.n == 2:
        return hilbert_symbol(quadratic_radicand(rel), x, v) == 1
    raise UnsupportedLocalDegree(f"ramified local degree {sp.n_v} at {v.label()} in a degree {rel.n} extension")


def norm_test_places(rel: RelExt, x: FieldElem) -> list:
    places: list = list(rel.infinite_places_base())
    seen = set()
    for v in rel.ramified_primes:
        places.append(v)
        seen.add(v.ideal)
    for v, _ in factor_element(x):
        if v.ideal not in seen:
            places.append(v)
            seen.add(v.ideal)
    return places


def global_norm_test(rel: RelExt, x: FieldElem) -> bool:
    """Whether x is a norm from L^x (local test at every place where it can fail)."""
    return all(is_local_norm(rel, x, v) for v in norm_test_places(rel, x))


# --- localization maps -------------------------------------------------------


@dataclass
class LocalComponent:
    place: object
    order: int
    label: str


@dataclass
class LocalizationResult:
    components: list[LocalComponent]
    target: FgAbGroup
    lam: GroupHom
    sha: FgAbGroup
    b: FgAbGroup
    image_order: int
    notes: list[str] = dc_field(default_factory=list)

    def target_order(self) -> int:
        return math.prod(c.order for c in self.components)


def _result(components, h: CohomologyGroup, images: list[list[int]]) -> LocalizationResult:
    # representatives are indexed by the canonical generators of h.group
    src = FgAbGroup.from_invariants(list(h.group.moduli))
    target = FgAbGroup.from_invariants([c.order for c in components])
    lam = GroupHom.from_images(src, target, images)
    parts = hom_parts(lam)
    return LocalizationResult(components, target, lam, parts.kernel, parts.cokernel, parts.image.order())


def _label(v) -> str:
    return v.label()


def lambda1_components(rel: RelExt, s_finite: Sequence[PrimeIdeal]) -> list[LocalComponent]:
    keys = {p.ideal for p in s_finite}
    out = []
    for v in rel.ramified_primes:
        if v.ideal not in keys:
            out.append(LocalComponent(v, rel.splitting(v).e, _label(v)))
    return out


def lambda1(rel: RelExt, s_finite: Sequence[PrimeIdeal], h1: CohomologyGroup, sunits_l) -> LocalizationResult:
    comps = lambda1_components(rel, s_finite)
    images = []
    for rep in h1.representatives:
        u = sunits_l.element(rep)
        y = hilbert90_resolvent(rel, u) if comps else None
        row = []
        for c in comps:
            w = rel.splitting(c.place).above[0]
            row.append(w.valuation(y) % c.order)
        images.append(row)
    return _result(comps, h1, images)


def lambda2_components(rel: RelExt, s_finite: Sequence[PrimeIdeal]) -> list[LocalComponent]:
    out = []
    for v in rel.infinite_places_base():
        nv = rel.splitting(v).n_v
        if nv > 1:
            out.append(LocalComponent(v, nv, _label(v)))
    for v in s_finite:
        nv = rel.splitting(v).n_v
        if nv > 1:
            out.append(LocalComponent(v, nv, _label(v)))
    keys = {p.ideal for p in s_finite}
    for v in rel.ramified_primes:
        if v.ideal not in keys:
            out.append(LocalComponent(v, rel.splitting(v).e, _label(v)))
    return out


def local_class_h2(rel: RelExt, x: FieldElem, comp: LocalComponent) -> int:
    """Class of x in K_v^x / Nm L_w^x (or U_v / Nm U_w) as an integer mod the component order."""
    v = comp.place
    sp = rel.splitting(v)
    if isinstance(v, InfPlace):
        return 0 if rel.base.real_sign(x, v.index) > 0 else 1
    if sp.e == 1:
        return v.valuation(x) % comp.order
    if comp.order == 2:
        return 0 if is_local_norm(rel, x, v) else 1
    raise UnsupportedLocalDegree(f"local class of order {comp.order} at {v.label()}")


def lambda2(rel: RelExt, s_finite: Sequence[PrimeIdeal], h2: CohomologyGroup, sunits_l) -> LocalizationResult:
    comps = lambda2_components(rel, s_finite)
    images = []
    for rep in h2.representatives:
        u = rel.pullback(sunits_l.element(rep))
        if u is None:
            raise ArithmeticError("H^2 representative is not in K")
        images.append([local_class_h2(rel, u, c) for c in comps])
    return _result(comps, h2, images)
