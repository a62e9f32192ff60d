"""Unit groups: torsion, fundamental units, p-saturation and discrete logarithms."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from . import linalg as la
from .abelian import FgAbGroup
from .lattice import fincke_pohst, t2_gram
from .nf import FieldElem, NumberField

EXACT = "exact"
UPPER_BOUND = "upper-bound"
TRUSTED_FIXTURE = "trusted-fixture"


class UnitsUnavailable(ValueError):
    pass


class BadSuppliedUnit(ValueError):
    pass


class UnitDlogFailed(ArithmeticError):
    pass


def _euler_phi(k: int) -> int:
    return sum(1 for i in range(1, k + 1) if math.gcd(i, k) == 1)


def log_embedding(x: FieldElem, dps: int = 30) -> list:
    """(log|s_1 x|, ..., log|s_r1 x|, 2 log|t_1 x|, ...) over the infinite places."""
    f = x.field
    with mpmath.workdps(dps + 10):
        vals = [x.numeric(r) for r in f.embeddings(dps + 10)]
        out = []
        for i, v in enumerate(vals):
            a = mpmath.log(abs(v))
            out.append(a if i < f.r1 else 2 * a)
    return out


def _embedding_matrix(field: NumberField, dps: int):
    """Real n x n matrix sending integral-basis coordinates to (real parts, imag parts) at the places."""
    roots = field.embeddings(dps)
    rows = []
    for i, r in enumerate(roots):
        vals = [w.numeric(r) for w in field.basis_elements]
        rows.append([mpmath.re(v) for v in vals])
        if i >= field.r1:
            rows.append([mpmath.im(v) for v in vals])
    return mpmath.matrix(rows)


def element_from_embeddings(field: NumberField, values: Sequence, dps: int = 40) -> Optional[FieldElem]:
    """Round an algebraic integer from its values at the places (r1 reals then r2 complex)."""
    with mpmath.workdps(dps):
        m = _embedding_matrix(field, dps)
        rhs = []
        for i, v in enumerate(values):
            rhs.append(mpmath.re(v))
            if i >= field.r1:
                rhs.append(mpmath.im(v))
        try:
            sol = mpmath.lu_solve(m, mpmath.matrix(rhs))
        except ZeroDivisionError:
            return None
        coords = []
        for c in sol:
            r = int(mpmath.nint(c))
            if abs(c - r) > mpmath.mpf(10) ** (-dps // 3):
                return None
            coords.append(r)
    return field.from_ib(coords)


def pth_root(u: FieldElem, p: int, dps: int = 40) -> Optional[FieldElem]:
    """An algebraic integer r with r^p == u, or None (exhaustive over branches)."""
    f = u.field
    with mpmath.workdps(dps + 10):
        vals = [u.numeric(r) for r in f.embeddings(dps + 10)]
        choices = []
        for i, v in enumerate(vals):
            if i < f.r1:
                v = mpmath.re(v)
                if p % 2:
                    choices.append([mpmath.sign(v) * abs(v) ** (mpmath.mpf(1) / p)])
                elif v < 0:
                    return None
                else:
                    r = v ** (mpmath.mpf(1) / p)
                    choices.append([r, -r])
            else:
                base = mpmath.root(v, p)
                zeta = mpmath.exp(2j * mpmath.pi / p)
                choices.append([base * zeta ** k for k in range(p)])
    for combo in itertools.product(*choices):
        cand = element_from_embeddings(f, combo, dps)
        if cand is not None and cand ** p == u:
            return cand
    return None


def _torsion(field: NumberField) -> tuple[FieldElem, int]:
    n = field.degree
    minus = field.rational(-1)
    if field.r1 > 0:
        return minus, 2
    # candidate orders: phi(w) divides n
    orders = sorted({k for k in range(1, 4 * n * n + 3) if n % _euler_phi(k) == 0})
    best, best_w = minus, 2
    gram = t2_gram(field)
    for v in fincke_pohst(gram, n + 0.5):
        x = field.from_ib(v)
        if abs(x.norm()) != 1:
            continue
        for k in orders:
            if k > best_w and x ** k == field.one:
                # exact order k: no proper divisor works
                if all(x ** d != field.one for d in range(1, k) if k % d == 0):
                    best, best_w = x, k
                break
    if best_w % 2 == 1:
        best, best_w = -best, 2 * best_w
    return best, best_w


def _real_quadratic_unit(field: NumberField) -> FieldElem:
    """Fundamental unit from the continued fraction of the generator of O_K."""
    w = field.basis_elements[1]
    t = int(w.trace())
    nrm = int(w.norm())
    d = t * t - 4 * nrm  # w = (t + sqrt(d)) / 2
    P, Q = t, 2
    if (d - P * P) % Q:
        P, Q, d = 2 * P, 4, 4 * d
    root = math.isqrt(d)
    p0, p1 = 1, 0
    q0, q1 = 0, 1
    for _ in range(10000):
        a = (P + root) // Q
        p0, p1 = a * p0 + p1, p0
        q0, q1 = a * q0 + q1, q0
        for cand in (field.rational(p0) - w * q0, field.rational(p0 - q0 * t) + w * q0):
            if q0 > 0 and abs(cand.norm()) == 1:
                return _normalize_real_unit(cand)
        P = a * Q - P
        Q = (d - P * P) // Q
    raise ArithmeticError("continued fraction did not reach a unit")


def _normalize_real_unit(u: FieldElem) -> FieldElem:
    """Pick the representative among +-u, +-1/u that is > 1 at the first real place."""
    f = u.field
    best = None
    for c in (u, -u, u.inverse(), -u.inverse()):
        v = mpmath.re(c.numeric(f.embeddings(30)[0]))
        if v > 1:
            best = c
    return best if best is not None else u


@dataclass
class UnitGroup:
    field: NumberField
    torsion: FieldElem
    w: int
    fundamental: list[FieldElem]
    certification: str = EXACT
    notes: list[str] = dc_field(default_factory=list)
    dps: int = 30  # starting working precision for discrete logarithms

    @property
    def rank(self) -> int:
        return len(self.fundamental)

    @property
    def generators(self) -> list[FieldElem]:
        return [self.torsion] + list(self.fundamental)

    @cached_property
    def group(self) -> FgAbGroup:
        r = [[self.w] + [0] * self.rank]
        return FgAbGroup(1 + self.rank, r)

    def element(self, exps: Sequence[int]) -> FieldElem:
        out = self.field.one
        for g, k in zip(self.generators, exps):
            if k:
                out = out * g ** k
        return out

    def regulator(self, dps: int = 30):
        if not self.rank:
            return mpmath.mpf(1)
        logs = [log_embedding(u, dps)[: self.rank] for u in self.fundamental]
        with mpmath.workdps(dps):
            return abs(mpmath.det(mpmath.matrix(logs)))

    def dlog(self, u: FieldElem, dps: Optional[int] = None, max_dps: int = 640) -> list[int]:
        """Exponents (a, b_1, ..., b_r) with u = torsion^a * prod eps_j^b_j, verified exactly."""
        dps = dps or self.dps
        max_dps = max(max_dps, dps)
        if abs(u.norm()) != 1 or not u.is_integral():
            raise UnitDlogFailed("not a unit")
        while dps <= max_dps:
            b = self._guess_exponents(u, dps)
            if b is not None:
                rest = u
                for e, k in zip(self.fundamental, b):
                    if k:
                        rest = rest * e ** (-k)
                for a in range(self.w):
                    if self.torsion ** a == rest:
                        return [a] + b
            dps *= 2
        raise UnitDlogFailed("exponents could not be verified at the precision cap")

    def _guess_exponents(self, u: FieldElem, dps: int) -> Optional[list[int]]:
        r = self.rank
        if r == 0:
            return []
        with mpmath.workdps(dps):
            a = mpmath.matrix([log_embedding(e, dps)[:r] for e in self.fundamental]).T
            y = mpmath.matrix(log_embedding(u, dps)[:r])
            try:
                sol = mpmath.lu_solve(a, y)
            except ZeroDivisionError:
                return None
            out = []
            for c in sol:
                k = int(mpmath.nint(c))
                if abs(c - k) > 0.01:
                    return None
                out.append(k)
        return out


def _check_unit(u: FieldElem) -> None:
    if not u.is_integral() or abs(u.norm()) != 1:
        raise BadSuppliedUnit(f"{u} is not a unit")


def _independent(units: Sequence[FieldElem], r: int) -> bool:
    if len(units) != r:
        return False
    if r == 0:
        return True
    with mpmath.workdps(40):
        m = mpmath.matrix([log_embedding(u, 40)[:r] for u in units])
        return abs(mpmath.det(m)) > mpmath.mpf(10) ** -10


def saturate(ug: UnitGroup, primes: Sequence[int]) -> UnitGroup:
    """Enlarge the fundamental system at each p until no combination is a p-th power."""
    fund = list(ug.fundamental)
    r = len(fund)
    for p in primes:
        changed = True
        while changed:
            changed = False
            for j in range(r):
                for rest in itertools.product(range(p), repeat=r - j - 1):
                    for a in range(ug.w):
                        u = ug.torsion ** a * fund[j]
                        for e, k in zip(fund[j + 1:], rest):
                            if k:
                                u = u * e ** k
                        root = pth_root(u, p)
                        if root is not None:
                            fund[j] = root
                            ug.notes.append(f"replaced unit {j} by a {p}-th root")
                            changed = True
                            break
                    if changed:
                        break
                if changed:
                    break
    ug.fundamental = [_normalize_sign(u) for u in fund]
    return ug


def _normalize_sign(u: FieldElem) -> FieldElem:
    if u.field.r1 and u.field.real_sign(u, 0) < 0:
        return -u
    return u


def unit_group(field: NumberField, supplied_units: Optional[Sequence[FieldElem]] = None) -> UnitGroup:
    n = field.degree
    r = field.unit_rank
    torsion, w = _torsion(field)
    if n == 1:
        return UnitGroup(field, torsion, w, [])
    if r == 0:
        return UnitGroup(field, torsion, w, [])
    if n == 2:
        eps = _real_quadratic_unit(field)
        ug = UnitGroup(field, torsion, w, [eps])
        # a unit > 1 has log at least log((1+sqrt5)/2), which bounds the possible root degree
        bound = int(float(log_embedding(eps)[0]) / math.log((1 + 5 ** 0.5) / 2)) + 1
        ps = [q for q in range(2, bound + 1) if all(q % k for k in range(2, q))]
        return saturate(ug, ps)
    if not supplied_units:
        raise UnitsUnavailable("degree >= 3 with positive unit rank needs supplied units")
    units = []
    for u in supplied_units:
        _check_unit(u)
        # drop torsion elements that may have been supplied alongside
        if all(abs(x) < 1e-20 for x in log_embedding(u, 30)):
            continue
        units.append(u)
    if not _independent(units, r):
        raise BadSuppliedUnit(f"need {r} independent units, got {len(units)} non-torsion")
    ug = UnitGroup(field, torsion, w, units, TRUSTED_FIXTURE,
                   ["supplied units verified for norm, independence and 2,3-saturation"])
    return saturate(ug, [2, 3])
