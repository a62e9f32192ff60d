"""Class groups by relation search, with witnesses, discrete logs and S-units.

Relations come from small elements of O_K whose norms factor over the factor
base (primes of norm at most the Minkowski bound). Every relation stores the
element that generates it. The resulting presentation always surjects onto
the class group; it is certified exact by the forms count (quadratic fields),
by being trivial, or by showing every element of prime order is non-principal.
"""

from __future__ import annotations

import itertools
from functools import cached_property
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
import sympy

from . import forms
from . import linalg as la
from .abelian import FgAbGroup, GroupHom, hom_parts, quotient
from .ideals import FracIdeal, PrimeIdeal, decompose_prime, factor_ideal, primes_up_to
from .lattice import fincke_pohst, lll, sublattice_gram, t2_gram
from .nf import FieldElem, NumberField
from .units import EXACT, TRUSTED_FIXTURE, UPPER_BOUND, UnitGroup, log_embedding, unit_group


class UncertifiedResult(ArithmeticError):
    pass


class WitnessNotFound(ArithmeticError):
    pass


def default_height(field: NumberField) -> int:
    n = field.degree
    return 12 if n <= 2 else (3 if n <= 4 else 2)


@dataclass
class Relation:
    vector: list[int]
    witness: FieldElem


def _reduced_basis(field: NumberField, rows: Sequence[Sequence[int]], den: int = 1):
    gram = sublattice_gram(t2_gram(field), rows)
    t = lll(gram)
    red = la.mat_mul(t, [list(r) for r in rows])
    return red, sublattice_gram(t2_gram(field), red)


def short_elements(ideal: FracIdeal, bound_factor: float = 1.0, limit: int = 200000):
    """Elements of the ideal in increasing T2 shells (generator, one of each +-pair)."""
    field = ideal.field
    red, gram = _reduced_basis(field, ideal.basis)
    base = min(gram[i][i] for i in range(len(gram)))
    lo = 0.0
    hi = base * bound_factor
    for _ in range(40):
        found = []
        for v in fincke_pohst(gram, hi, limit):
            q = sum(v[i] * gram[i][j] * v[j] for i in range(len(v)) for j in range(len(v)))
            if q > lo * (1 + 1e-9):
                found.append((q, v))
        found.sort()
        for _, v in found:
            row = la.vec_mat(v, red)
            yield field.from_ib([Fraction(x, ideal.den) for x in row])
        lo, hi = hi, hi * 2


def reduce_ideal(ideal: FracIdeal) -> tuple[FracIdeal, FieldElem]:
    """(J, beta) with ideal = beta * J, J integral of small norm in the same class."""
    field = ideal.field
    red, _ = _reduced_basis(field, ideal.basis)
    alpha = field.from_ib([Fraction(x, ideal.den) for x in red[0]])
    j1 = FracIdeal.principal(alpha) * ideal.inverse()
    red1, _ = _reduced_basis(field, j1.basis)
    gamma = field.from_ib([Fraction(x, j1.den) for x in red1[0]])
    j2 = FracIdeal.principal(gamma) * j1.inverse()
    return j2, alpha / gamma


def principal_search_bound(ideal: FracIdeal, units: UnitGroup) -> float:
    """T2 bound that some generator of a principal ideal must satisfy."""
    field = ideal.field
    n = field.degree
    lognorm = math.log(float(ideal.norm())) / n
    r1 = field.r1
    places = field.r1 + field.r2
    dev = [0.0] * places
    for u in units.fundamental:
        lv = log_embedding(u, 30)
        for i in range(places):
            x = float(lv[i]) if i < r1 else float(lv[i]) / 2
            dev[i] += abs(x) / 2
    total = 0.0
    for i in range(places):
        d = 1 if i < r1 else 2
        total += d * math.exp(2 * (lognorm + dev[i]))
    return total * (1 + 1e-6) + 1e-6


def find_generator(ideal: FracIdeal, units: UnitGroup, limit: int = 300000) -> Optional[FieldElem]:
    """A generator of the ideal found by exhaustive bounded enumeration, or None if not principal.

    Raises WitnessNotFound when the enumeration would exceed `limit` points.
    """
    field = ideal.field
    j, beta = reduce_ideal(ideal)
    nj = j.norm()
    bound = principal_search_bound(j, units)
    red, gram = _reduced_basis(field, j.basis)
    try:
        for v in fincke_pohst(gram, bound, limit):
            x = field.from_ib([Fraction(c, j.den) for c in la.vec_mat(v, red)])
            if abs(x.norm()) == nj:
                return x * beta
    except OverflowError as exc:
        raise WitnessNotFound(f"enumeration limit {limit} exceeded") from exc
    return None


class ClassGroup:
    def __init__(self, field: NumberField, fb: list[PrimeIdeal], relations: list[Relation], units: UnitGroup,
                 certification: str, notes: Optional[list[str]] = None):
        self.field = field
        self.fb = fb
        self.relations = relations
        self.units = units
        self.certification = certification
        self.notes = notes if notes is not None else []
        self.group = FgAbGroup(len(fb), [r.vector for r in relations])
        self._vec_cache: dict = {}

    def order(self):
        return self.group.order()

    @property
    def invariants(self) -> tuple[int, ...]:
        return self.group.invariant_factors

    def fb_index(self, p: PrimeIdeal) -> Optional[int]:
        for i, q in enumerate(self.fb):
            if q == p:
                return i
        return None

    def prime_vector(self, q: PrimeIdeal) -> tuple[list[int], FieldElem]:
        """(v, x) with q = (x) * prod fb^v."""
        key = q.ideal
        if key in self._vec_cache:
            return self._vec_cache[key]
        k = len(self.fb)
        i = self.fb_index(q)
        if i is not None:
            out = ([1 if j == i else 0 for j in range(k)], self.field.one)
        else:
            out = None
            for x in short_elements(q.ideal):
                w = _smooth_vector(self.fb, x, exclude=q)
                if w is not None:
                    out = ([-c for c in w], x)
                    break
            if out is None:
                raise WitnessNotFound(f"no smooth element found for {q}")
        self._vec_cache[key] = out
        return out

    def ideal_vector(self, ideal: FracIdeal) -> tuple[list[int], FieldElem]:
        """(v, x) with ideal = (x) * prod fb^v."""
        k = len(self.fb)
        vec = [0] * k
        x = self.field.one
        for q, e in factor_ideal(ideal):
            v, y = self.prime_vector(q)
            vec = [a + e * b for a, b in zip(vec, v)]
            x = x * y ** e
        return vec, x

    def dlog(self, ideal: FracIdeal) -> tuple[int, ...]:
        return self.group.express(self.ideal_vector(ideal)[0])

    def generator(self, ideal: FracIdeal) -> Optional[FieldElem]:
        """Generator of a principal ideal assembled from relation witnesses; None if not principal."""
        vec, x = self.ideal_vector(ideal)
        coeffs = la.in_lattice([r.vector for r in self.relations], vec) if self.relations else \
            ([] if not any(vec) else None)
        if coeffs is None:
            return None
        for r, c in zip(self.relations, coeffs):
            if c:
                x = x * r.witness ** c
        return x

    def class_ideal(self, vec: Sequence[int]) -> FracIdeal:
        out = FracIdeal.unit(self.field)
        for q, c in zip(self.fb, vec):
            if c:
                out = out * q.ideal ** c
        return out

    def verify_relations(self) -> bool:
        return all(FracIdeal.principal(r.witness) == self.class_ideal(r.vector) for r in self.relations)


def _smooth_vector(fb: list[PrimeIdeal], x: FieldElem, exclude: Optional[PrimeIdeal] = None) -> Optional[list[int]]:
    """Valuations of x over the factor base when (x) (divided by `exclude` once) is smooth."""
    nm = abs(x.norm())
    if nm == 0:
        return None
    rest = nm
    if exclude is not None:
        rest = rest / exclude.norm
    vec = [0] * len(fb)
    ps = sorted({q.p for q in fb})
    for p in ps:
        k = 0
        while rest.numerator % p == 0:
            rest /= p
            k += 1
        if k == 0:
            continue
        tot = 0
        for i, q in enumerate(fb):
            if q.p == p:
                v = q.valuation(x)
                if exclude is not None and q == exclude:
                    v -= 1
                vec[i] = v
                tot += v * q.f
        # every prime above p dividing x must be in the factor base
        if tot != k:
            return None
    if rest != 1:
        return None
    return vec


_PRIME_SHELL = 64  # short elements tried per factor-base prime


def _box(n: int, height: int):
    rng = range(-height, height + 1)
    for v in itertools.product(rng, repeat=n):
        if any(v):
            first = next(c for c in v if c)
            if first > 0:
                yield list(v)


def class_group(field: NumberField, height: Optional[int] = None, units: Optional[UnitGroup] = None,
                supplied_order: Optional[int] = None, supplied_invariants: Optional[Sequence[int]] = None) -> ClassGroup:
    units = units or unit_group(field)
    height = height or default_height(field)
    n = field.degree
    bound = field.minkowski_bound()
    fb = primes_up_to(field, bound * (1 + 1e-12)) if n > 1 else []
    notes: list[str] = []
    if not fb:
        return ClassGroup(field, [], [], units, EXACT, ["factor base is empty"])
    # enumeration over the LLL-reduced integral basis
    red, _ = _reduced_basis(field, la.identity(n))
    relations: list[Relation] = []
    k = len(fb)
    state = {"lattice": [], "det": None}

    def offer(x: FieldElem) -> bool:
        """Keep x if it is smooth and shrinks the relation lattice; True once the lattice is Z^k."""
        vec = _smooth_vector(fb, x)
        if vec is None or not any(vec):
            return False
        lattice = state["lattice"]
        cand = la.hnf_basis(lattice + [vec], k)
        if len(cand) == len(lattice) and (len(cand) < k or abs(la.det(cand)) == state["det"]):
            return False
        state["lattice"] = cand
        relations.append(Relation(vec, x))
        if len(cand) == k:
            state["det"] = abs(la.det(cand))
        return state["det"] == 1

    done = False
    for coeffs in _box(n, height):
        if offer(field.from_ib(la.vec_mat(coeffs, red))):
            done = True
            break
    if not done and len(state["lattice"]) < k:
        # second pass: short elements of each factor-base prime, which are smooth far more often
        for q in fb:
            for i, x in enumerate(short_elements(q.ideal)):
                if i >= _PRIME_SHELL or offer(x):
                    break
            if state["det"] == 1:
                break
    cl = ClassGroup(field, fb, relations, units, UPPER_BOUND, notes)
    if cl.group.free_rank:
        notes.append("relation lattice not of full rank at this height")
        return cl
    if cl.group.is_trivial():
        cl.certification = EXACT
        return cl
    if n == 2:
        h = forms.class_number(field.disc)
        if cl.order() == h:
            cl.certification = EXACT
            notes.append(f"order matches reduced-form count {h}")
            return cl
    try:
        _complete_by_principality(cl)
        cl.certification = EXACT
        notes.append("every element of prime order shown non-principal")
    except WitnessNotFound as exc:
        notes.append(f"principality certificate unavailable: {exc}")
        if supplied_order is not None and cl.order() == supplied_order:
            cl.certification = TRUSTED_FIXTURE
    return cl


def _complete_by_principality(cl: ClassGroup) -> None:
    """Add relations until no element of prime order in the presentation is principal."""
    for _ in range(64):
        g = cl.group
        if g.is_trivial():
            return
        added = False
        order = g.order()
        for ell in sorted(sympy.factorint(order)):
            idx = [i for i, m in enumerate(g.moduli) if m % ell == 0]
            for combo in itertools.product(range(ell), repeat=len(idx)):
                if not any(combo):
                    continue
                canon = [0] * len(g.moduli)
                for i, c in zip(idx, combo):
                    canon[i] = c * (g.moduli[i] // ell)
                vec = g.lift(canon)
                ideal = cl.class_ideal(vec)
                gen = find_generator(ideal, cl.units)
                if gen is not None:
                    cl.relations.append(Relation(vec, gen))
                    cl.group = FgAbGroup(len(cl.fb), [r.vector for r in cl.relations])
                    added = True
                    break
            if added:
                break
        if not added:
            return
    raise WitnessNotFound("completion did not stabilise")


# --- S-units and S-class groups -----------------------------------------


@dataclass
class SUnitGroup:
    field: NumberField
    units: UnitGroup
    primes: list[PrimeIdeal]
    lattice: list[list[int]]
    gammas: list[FieldElem]
    notes: list[str] = dc_field(default_factory=list)

    @property
    def generators(self) -> list[FieldElem]:
        return self.units.generators + self.gammas

    @property
    def rank(self) -> int:
        return self.units.rank + len(self.gammas)

    @cached_property
    def group(self) -> FgAbGroup:
        m = len(self.generators)
        return FgAbGroup(m, [[self.units.w] + [0] * (m - 1)])

    def valuation_vector(self, x: FieldElem) -> list[int]:
        return [p.valuation(x) for p in self.primes]

    def is_s_unit(self, x: FieldElem) -> bool:
        if x.is_zero():
            return False
        nm = x.norm()
        sp = {p.p for p in self.primes}
        for m in (nm.numerator, nm.denominator):
            for q in sympy.factorint(abs(m)):
                if q not in sp:
                    return False
        for q in sp:
            for pr in decompose_prime(self.field, q):
                if pr not in self.primes and pr.valuation(x) != 0:
                    return False
        return True

    def dlog(self, x: FieldElem) -> list[int]:
        if not self.is_s_unit(x):
            raise ValueError("element is not an S-unit")
        v = self.valuation_vector(x)
        c = la.in_lattice(self.lattice, v) if self.lattice else []
        if c is None:
            raise ArithmeticError("valuation vector outside the principal lattice")
        rest = x
        for g, k in zip(self.gammas, c):
            if k:
                rest = rest * g ** (-k)
        return self.units.dlog(rest) + list(c)

    def element(self, exps: Sequence[int]) -> FieldElem:
        out = self.field.one
        for g, k in zip(self.generators, exps):
            if k:
                out = out * g ** k
        return out


def s_unit_group(cl: ClassGroup, primes: Sequence[PrimeIdeal]) -> SUnitGroup:
    field = cl.field
    primes = list(primes)
    k = len(primes)
    if k == 0:
        return SUnitGroup(field, cl.units, [], [], [])
    free = FgAbGroup(k)
    imgs = [list(cl.ideal_vector(p.ideal)[0]) for p in primes]
    h = GroupHom.from_images(free, cl.group, imgs, check=False)
    parts = hom_parts(h)
    lattice = la.hnf_basis(parts.kernel_incl.images(), k)
    gammas = []
    for row in lattice:
        ideal = FracIdeal.unit(field)
        for p, c in zip(primes, row):
            if c:
                ideal = ideal * p.ideal ** c
        g = cl.generator(ideal)
        if g is None or FracIdeal.principal(g) != ideal:
            raise ArithmeticError("kernel vector of Z^S -> Cl is not principal")
        gammas.append(_shorten(g, cl.units))
    return SUnitGroup(field, cl.units, primes, lattice, gammas)


def _shorten(x: FieldElem, units: UnitGroup) -> FieldElem:
    """Multiply by a unit to balance the log embedding (keeps witnesses small)."""
    r = units.rank
    if r == 0:
        return x
    with mpmath.workdps(30):
        lv = log_embedding(x, 30)
        n = x.field.degree
        avg = sum(lv) / n
        degs = [1 if i < x.field.r1 else 2 for i in range(len(lv))]
        target = mpmath.matrix([lv[i] - degs[i] * avg for i in range(r)])
        a = mpmath.matrix([log_embedding(u, 30)[:r] for u in units.fundamental]).T
        sol = mpmath.lu_solve(a, target)
    out = x
    for u, c in zip(units.fundamental, sol):
        k = int(mpmath.nint(c))
        if k:
            out = out * u ** (-k)
    return out


def s_class_group(cl: ClassGroup, primes: Sequence[PrimeIdeal]) -> tuple[FgAbGroup, GroupHom]:
    """Cl / <classes of the given primes>, with the projection from cl.group."""
    return quotient(cl.group, [cl.ideal_vector(p.ideal)[0] for p in primes])
