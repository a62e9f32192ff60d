"""The S-capitulation map j: Cl_{K,S} -> Cl_{L,S}, ambiguous and strongly ambiguous classes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .abelian import FgAbGroup, GroupHom, HomParts, hom_parts, hom_sum, identity_hom, pullback, subgroup
from .classgroup import ClassGroup
from .ideals import FracIdeal, PrimeIdeal
from .relative import RelExt


def extend_ideal(rel: RelExt, ideal: FracIdeal) -> FracIdeal:
    """I O_L, with the norm relation Nm_{L/K}(I O_L) = I^n checked."""
    out = rel.extend_ideal(ideal)
    if rel.relative_norm_ideal(out) != ideal ** rel.n:
        raise ArithmeticError("norm of the extended ideal is not I^n")
    return out


@dataclass
class CapitulationData:
    cl_ks: FgAbGroup
    cl_ls: FgAbGroup
    j: GroupHom
    sigma: GroupHom
    am: FgAbGroup
    am_incl: GroupHom
    j_am: GroupHom
    am_st: FgAbGroup
    am_st_incl: GroupHom
    j_prime: GroupHom
    j_parts: HomParts
    j_am_parts: HomParts
    j_prime_parts: HomParts

    @property
    def ker_j(self) -> FgAbGroup:
        return self.j_parts.kernel

    @property
    def coker_j(self) -> FgAbGroup:
        return self.j_am_parts.cokernel

    @property
    def ker_j_prime(self) -> FgAbGroup:
        return self.j_prime_parts.kernel

    @property
    def coker_j_prime(self) -> FgAbGroup:
        return self.j_prime_parts.cokernel


def _pull_all(incl: GroupHom, elems) -> list[list[int]]:
    out = []
    for y in elems:
        x = pullback(incl, y)
        if x is None:
            raise ArithmeticError("element does not lie in the subgroup")
        out.append(x)
    return out


def orbit_product(rel: RelExt, v: PrimeIdeal) -> FracIdeal:
    out = FracIdeal.unit(rel.ext)
    for w in rel.splitting(v).above:
        out = out * w.ideal
    return out


def capitulation_map(rel: RelExt, cl_k: ClassGroup, cl_ks: FgAbGroup, cl_l: ClassGroup, cl_ls: FgAbGroup,
                     sigma: GroupHom, s_finite: Sequence[PrimeIdeal]) -> CapitulationData:
    images = [cl_l.ideal_vector(extend_ideal(rel, p.ideal))[0] for p in cl_k.fb]
    j = GroupHom.from_images(cl_ks, cl_ls, images)
    if not sigma.compose(j).equals(j):
        raise ArithmeticError("sigma does not fix the image of j")
    am_parts = hom_parts(hom_sum([sigma, identity_hom(cl_ls)], [1, -1]))
    am, am_incl = am_parts.kernel, am_parts.kernel_incl
    j_am = GroupHom.from_images(cl_ks, am, _pull_all(am_incl, j.images()))
    # strongly ambiguous classes: j(Cl_{K,S}) plus orbit products over ramified v outside S
    keys = {p.ideal for p in s_finite}
    extra = [cl_l.ideal_vector(orbit_product(rel, v))[0] for v in rel.ramified_primes if v.ideal not in keys]
    st_gens_l = list(j.images()) + extra
    st_gens = _pull_all(am_incl, st_gens_l)
    am_st, st_incl_am = subgroup(am, st_gens)
    j_prime = GroupHom.from_images(cl_ks, am_st, _pull_all(st_incl_am, j_am.images()))
    return CapitulationData(cl_ks, cl_ls, j, sigma, am, am_incl, j_am, am_st, st_incl_am, j_prime,
                            hom_parts(j), hom_parts(j_am), hom_parts(j_prime))


def ideal_descent_index(rel: RelExt, s_finite: Sequence[PrimeIdeal]) -> tuple[int, list[tuple[str, int]]]:
    """[J_{L,S}^G : J_{K,S}] from the orders of ramified orbit products modulo extended ideals.

    For each ramified v outside S, finds the least k with (prod_{w|v} w)^k equal (as HNF)
    to the extension of some power of v.
    """
    keys = {p.ideal for p in s_finite}
    total = 1
    parts = []
    for v in rel.ramified_primes:
        if v.ideal in keys:
            continue
        orb = orbit_product(rel, v)
        ext_v = extend_ideal(rel, v.ideal)
        found = None
        for k in range(1, rel.n + 1):
            pk = orb ** k
            for m in range(0, k + 1):
                if pk == ext_v ** m:
                    found = k
                    break
            if found:
                break
        if found is None:
            raise ArithmeticError(f"orbit product at {v.label()} has no extended power")
        parts.append((v.label(), found))
        total *= found
    return total, parts
