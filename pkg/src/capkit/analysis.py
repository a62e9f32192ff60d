"""Every finite invariant of (L/K, S), computed lazily.

Quantities are memoized together with any exception they raised, so a failing
local computation only affects the checks that actually need it.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Optional

from .abelian import FgAbGroup, GroupHom, contains, hom_parts, quotient
from .capitulation import CapitulationData, capitulation_map, ideal_descent_index
from .classgroup import ClassGroup, SUnitGroup, class_group, s_class_group, s_unit_group
from .fixtures import Fixture, SVariant
from .ideals import PrimeIdeal
from .local import LocalizationResult, global_norm_test, lambda1, lambda2
from .relative import sigma_action_classes, sigma_action_sunits
from .tate import CohomologyGroup, CyclicModule, tate_h1, tate_h2
from .units import EXACT, UnitGroup, unit_group


class FieldContext:
    """Unit and class groups of K and L, shared across the S-variants of a fixture."""

    def __init__(self, fixture: Fixture, height: Optional[int] = None, prec_bits: Optional[int] = None):
        self.fixture = fixture
        self.height = height or fixture.height
        self.prec_bits = prec_bits or fixture.prec_bits
        self._memo: dict = {}

    def _get(self, key: str, fn: Callable):
        if key not in self._memo:
            try:
                self._memo[key] = (True, fn())
            except Exception as exc:  # stored and re-raised to every consumer
                self._memo[key] = (False, exc)
        ok, val = self._memo[key]
        if not ok:
            raise val
        return val

    def units(self, which: str) -> UnitGroup:
        fx = self.fixture
        field = fx.base if which == "base" else fx.ext
        supplied = fx.base_units if which == "base" else fx.ext_units
        return self._get(f"units:{which}", lambda: self._units(field, supplied))

    def _units(self, field, supplied) -> UnitGroup:
        ug = unit_group(field, supplied)
        ug.dps = max(15, int(self.prec_bits * math.log10(2)))
        return ug

    def classes(self, which: str) -> ClassGroup:
        fx = self.fixture
        field = fx.base if which == "base" else fx.ext
        return self._get(f"cl:{which}", lambda: class_group(
            field, self.height, self.units(which), supplied_order=fx.class_orders.get(which)))


class Analysis:
    def __init__(self, ctx: FieldContext, variant: SVariant):
        self.ctx = ctx
        self.fixture = ctx.fixture
        self.variant = variant
        self.rel = ctx.fixture.rel
        self.s_finite: list[PrimeIdeal] = ctx.fixture.s_primes(variant)
        self._memo: dict = {}

    def get(self, name: str):
        if name not in self._memo:
            try:
                self._memo[name] = (True, getattr(self, "_q_" + name)())
            except Exception as exc:
                self._memo[name] = (False, exc)
        ok, val = self._memo[name]
        if not ok:
            raise val
        return val

    # --- splitting-level quantities ------------------------------------------

    def _q_n(self) -> int:
        return self.rel.n

    def _q_e(self) -> int:
        return self.rel.e_factor(self.s_finite)

    def _q_prod_nv(self) -> int:
        out = 1
        for v in self.rel.places_of_s(self.s_finite):
            out *= self.rel.splitting(v).n_v
        return out

    def _q_large(self) -> bool:
        return self.rel.is_large(self.s_finite)

    def _q_e_outside(self) -> int:
        keys = {p.ideal for p in self.s_finite}
        return math.prod(self.rel.splitting(v).e for v in self.rel.ramified_primes if v.ideal not in keys)

    def _q_n_prime(self) -> int:
        n, e = self.get("n"), self.get("e")
        return n // math.gcd(n, e)

    def _q_e_prime(self) -> int:
        n, e = self.get("n"), self.get("e")
        return e // math.gcd(n, e)

    def _q_descent(self):
        return ideal_descent_index(self.rel, self.s_finite)

    # --- class and unit groups ------------------------------------------------

    def _q_cl_k(self) -> ClassGroup:
        return self.ctx.classes("base")

    def _q_cl_l(self) -> ClassGroup:
        return self.ctx.classes("ext")

    def _q_s_l(self) -> list[PrimeIdeal]:
        return self.rel.s_primes_above(self.s_finite)

    def _q_su_k(self) -> SUnitGroup:
        return s_unit_group(self.get("cl_k"), self.s_finite)

    def _q_su_l(self) -> SUnitGroup:
        return s_unit_group(self.get("cl_l"), self.get("s_l"))

    def _q_cl_ks(self):
        return s_class_group(self.get("cl_k"), self.s_finite)

    def _q_cl_ls(self):
        return s_class_group(self.get("cl_l"), self.get("s_l"))

    def _q_h_ks(self) -> int:
        return self.get("cl_ks")[0].order()

    # --- cohomology of S-units --------------------------------------------------

    def _q_sigma_units(self) -> GroupHom:
        return sigma_action_sunits(self.rel, self.get("su_l"))

    def _q_module(self) -> CyclicModule:
        su = self.get("su_l")
        return CyclicModule(su.group, self.get("sigma_units"), self.rel.n)

    def _q_h1(self) -> CohomologyGroup:
        return tate_h1(self.get("module"))

    def _q_h2(self) -> CohomologyGroup:
        return tate_h2(self.get("module"))

    # --- norm indices on the K side ---------------------------------------------

    def _q_norm_quotient(self):
        """U_{K,S} / Nm U_{L,S} as a finite group, with its projection."""
        suk, sul = self.get("su_k"), self.get("su_l")
        norms = [suk.dlog(self.rel.relative_norm(g)) for g in sul.generators]
        return quotient(suk.group, norms)

    def _q_index_u_nmu(self) -> int:
        return self.get("norm_quotient")[0].order()

    def _q_norms_mod_nmu(self) -> int:
        """|U_{K,S} cap Nm L^x / Nm U_{L,S}| by a norm test on every coset representative."""
        q, _ = self.get("norm_quotient")
        suk = self.get("su_k")
        count = 0
        for canon in q.elements():
            x = suk.element(q.lift(list(canon)))
            if global_norm_test(self.rel, x):
                count += 1
        return count

    def _q_index_u_unm(self) -> int:
        return self.get("index_u_nmu") // self.get("norms_mod_nmu")

    def _q_units_are_norms(self) -> bool:
        suk = self.get("su_k")
        return all(global_norm_test(self.rel, g) for g in suk.generators)

    # --- capitulation -----------------------------------------------------------

    def _q_sigma_classes(self) -> GroupHom:
        return sigma_action_classes(self.rel, self.get("cl_l"), self.get("cl_ls")[0])

    def _q_cap(self) -> CapitulationData:
        return capitulation_map(self.rel, self.get("cl_k"), self.get("cl_ks")[0], self.get("cl_l"),
                                self.get("cl_ls")[0], self.get("sigma_classes"), self.s_finite)

    def _q_ker_j(self) -> int:
        return self.get("cap").ker_j.order()

    def _q_coker_j(self) -> int:
        return self.get("cap").coker_j.order()

    def _q_coker_j_prime(self) -> int:
        return self.get("cap").coker_j_prime.order()

    def _q_ker_j_prime(self) -> int:
        return self.get("cap").ker_j_prime.order()

    def _q_am(self) -> int:
        return self.get("cap").am.order()

    def _q_am_st(self) -> int:
        return self.get("cap").am_st.order()

    # --- localization -----------------------------------------------------------

    def _q_lam1(self) -> LocalizationResult:
        return lambda1(self.rel, self.s_finite, self.get("h1"), self.get("su_l"))

    def _q_lam2(self) -> LocalizationResult:
        return lambda2(self.rel, self.s_finite, self.get("h2"), self.get("su_l"))

    def _q_sha1(self) -> int:
        return self.get("lam1").sha.order()

    def _q_b1(self) -> int:
        return self.get("lam1").b.order()

    def _q_sha2(self) -> int:
        return self.get("lam2").sha.order()

    def _q_b2(self) -> int:
        return self.get("lam2").b.order()

    def _q_h1_order(self) -> int:
        return self.get("h1").order()

    def _q_h2_order(self) -> int:
        return self.get("h2").order()

    # --- derived idele-class indices (through proven identities only) ------------

    def _q_coker_j_route3(self) -> Fraction:
        return Fraction(self.get("e") * self.get("sha1"), self.get("n") * self.get("index_u_unm"))

    def certification(self) -> dict:
        out = {}
        for key, label in (("cl_k", "class_group_K"), ("cl_l", "class_group_L")):
            try:
                out[label] = self.get(key).certification
            except Exception:
                out[label] = "unavailable"
        for which, label in (("base", "units_K"), ("ext", "units_L")):
            try:
                out[label] = self.ctx.units(which).certification
            except Exception:
                out[label] = "unavailable"
        return out
