"""Tate cohomology of finitely generated modules over a cyclic group <sigma> of order n.

H^1 = ker(N) / im(sigma - 1) and H^2 = H^0 = ker(sigma - 1) / im(N), computed by
integer linear algebra on the presentation of the module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import linalg as la
from .abelian import INFINITE, FgAbGroup, GroupHom, hom_parts, hom_sum, identity_hom, pullback, subquotient


class InfiniteCohomology(ArithmeticError):
    pass


class ResolventExhausted(ArithmeticError):
    pass


class NotAModule(ValueError):
    pass


class CyclicModule:
    def __init__(self, m: FgAbGroup, sigma: GroupHom, n: int):
        if sigma.src is not m or sigma.dst is not m:
            raise NotAModule("sigma must be an endomorphism of m")
        self.m = m
        self.sigma = sigma
        self.n = n
        powers = [identity_hom(m)]
        for _ in range(1, n):
            powers.append(sigma.compose(powers[-1]))
        if not sigma.compose(powers[-1]).equals(identity_hom(m)):
            raise NotAModule("sigma^n is not the identity")
        self.norm = hom_sum(powers)
        self.sigma_minus_one = hom_sum([sigma, identity_hom(m)], [1, -1])
        if not self.norm.compose(self.sigma_minus_one).is_zero():
            raise NotAModule("N (sigma - 1) is not zero")


@dataclass
class CohomologyGroup:
    group: FgAbGroup
    representatives: list[list[int]]
    cycles_incl: GroupHom
    projection: GroupHom

    def order(self):
        return self.group.order()

    def classify(self, x: Sequence[int]) -> Optional[tuple[int, ...]]:
        """Canonical class of a cycle x (module coordinates); None if x is not a cycle."""
        y = pullback(self.cycles_incl, x)
        if y is None:
            return None
        return self.group.express(self.projection(y))


def _cohomology(cycles_of: GroupHom, boundaries_from: GroupHom) -> CohomologyGroup:
    parts = hom_parts(cycles_of)
    incl = parts.kernel_incl
    q, proj = subquotient(incl, boundaries_from.images())
    reps = [incl(q.lift(_unit(len(q.moduli), i))) for i in range(len(q.moduli))]
    return CohomologyGroup(q, reps, incl, proj)


def _unit(k: int, i: int) -> list[int]:
    return [1 if j == i else 0 for j in range(k)]


def tate_h1(cm: CyclicModule) -> CohomologyGroup:
    h = _cohomology(cm.norm, cm.sigma_minus_one)
    for r in h.representatives:
        assert cm.m.is_zero(cm.norm(r))
    return h


def tate_h2(cm: CyclicModule) -> CohomologyGroup:
    h = _cohomology(cm.sigma_minus_one, cm.norm)
    for r in h.representatives:
        assert cm.m.is_zero(cm.sigma_minus_one(r))
    return h


def herbrand(cm: CyclicModule) -> Fraction:
    h1 = tate_h1(cm).order()
    h2 = tate_h2(cm).order()
    if h1 == INFINITE or h2 == INFINITE:
        raise InfiniteCohomology("cohomology group is infinite")
    return Fraction(h2, h1)


def hilbert90_resolvent(rel, u):
    """Nonzero y in L with u = y / sigma(y), for u of relative norm 1."""
    if rel.relative_norm(u) != rel.base.one:
        raise ValueError("element does not have relative norm 1")
    for z in [rel.ext.one] + list(rel.ext.basis_elements) + [rel.ext.gen]:
        y = rel.ext.zero
        c = rel.ext.one
        sz = z
        for k in range(rel.n):
            y = y + c * sz
            c = u * rel.sigma(c)
            sz = rel.sigma(sz)
        if not y.is_zero():
            if u * rel.sigma(y) != y:
                raise ArithmeticError("resolvent identity failed")
            return y
    raise ResolventExhausted("no basis element gives a nonzero resolvent")
