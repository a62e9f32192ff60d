"""The catalog of verified identities and the report they produce.

Each check compares two independently computed sides. Checks whose inputs
cannot be computed (an unsupported local degree, an uncertified class group)
are SKIPPED with the reason, never passed.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .analysis import Analysis, FieldContext
from .classgroup import WitnessNotFound
from .fixtures import Fixture
from .ideals import IndexDivisor
from .local import UnsupportedLocalDegree
from .units import EXACT, TRUSTED_FIXTURE, UnitsUnavailable

PASS, FAIL, SKIPPED = "PASS", "FAIL", "SKIPPED"

_SKIP_ERRORS = (UnsupportedLocalDegree, WitnessNotFound, UnitsUnavailable, IndexDivisor)


@dataclass
class CheckRecord:
    check_id: str
    description: str
    anchor: str
    relation: str
    lhs: str
    rhs: str
    status: str
    reason: str = ""
    flags: dict = dc_field(default_factory=dict)


@dataclass
class DerivedEntry:
    name: str
    value: str
    note: str = ""


@dataclass
class ExpectedEntry:
    name: str
    expected: str
    computed: str
    match: bool


@dataclass
class VerificationReport:
    fixture: str
    variant: str
    s_places: list[str]
    large: Optional[bool]
    checks: list[CheckRecord]
    consistency: list[CheckRecord]
    derived: list[DerivedEntry]
    expected: list[ExpectedEntry]
    certification: dict

    def failed(self) -> bool:
        return any(c.status == FAIL for c in self.checks + self.consistency)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        return cls(
            fixture=d["fixture"],
            variant=d["variant"],
            s_places=list(d["s_places"]),
            large=d["large"],
            checks=[CheckRecord(**c) for c in d["checks"]],
            consistency=[CheckRecord(**c) for c in d["consistency"]],
            derived=[DerivedEntry(**x) for x in d["derived"]],
            expected=[ExpectedEntry(**x) for x in d["expected"]],
            certification=dict(d["certification"]),
        )


class Uncertified(Exception):
    pass


@dataclass
class CheckSpec:
    check_id: str
    description: str
    anchor: str
    relation: str
    fn: Callable
    uses_classes: bool = True


def _divides(a: int, b: int) -> bool:
    return b % a == 0


def _remainder(b: int, a: int) -> str:
    return f"{b} = {b // a}*{a} + {b % a}"


def _eq(lhs, rhs):
    return lhs, rhs, lhs == rhs, ""


def _chk01(a: Analysis):
    idx, _ = a.get("descent")
    return _eq(idx, a.get("e_outside"))


def _chk02(a: Analysis):
    return _eq(a.get("am"), a.get("am_st") * a.get("norms_mod_nmu"))


def _chk03(a: Analysis):
    return _eq(a.get("am") * a.get("n") * a.get("index_u_unm"), a.get("h_ks") * a.get("e"))


def _chk04(a: Analysis):
    return _eq(a.get("am_st") * a.get("n") * a.get("index_u_nmu"), a.get("h_ks") * a.get("e"))


def _chk05(a: Analysis):
    return _eq(a.get("ker_j"), a.get("sha1"))


def _chk06(a: Analysis):
    return _eq(a.get("coker_j"), a.get("b1") * a.get("sha2"))


def _chk07(a: Analysis):
    return _eq(a.get("b1") * a.get("n") * a.get("index_u_nmu"), a.get("sha1") * a.get("e"))


def _chk08(a: Analysis):
    return _eq(a.get("sha2"), a.get("norms_mod_nmu"))


def _chk09(a: Analysis):
    return _eq(a.get("coker_j_prime"), a.get("b1"))


def _chk10(a: Analysis):
    e, idx = a.get("e"), a.get("index_u_unm")
    rhs = Fraction(e, idx)
    return a.get("b2"), rhs, a.get("b2") == rhs, ""


def _chk11(a: Analysis):
    np_, k = a.get("n_prime"), a.get("ker_j")
    ok = _divides(np_, k)
    return np_, k, ok, "" if ok else _remainder(k, np_)


def _chk12(a: Analysis):
    if not a.get("large"):
        return "-", "-", True, "S does not contain every ramified prime; nothing to check"
    kj, h1 = a.get("ker_j"), a.get("h1_order")
    cjp = a.get("coker_j_prime")
    prod = a.get("prod_nv")
    ep = prod // math.gcd(a.get("n"), prod)
    idx = a.get("index_u_nmu")
    lhs = f"|ker j|={kj}, |coker j'|={cjp}, e'={ep}"
    rhs = f"|H1(U_L,S)|={h1}, 1, [U:NmU]={idx}"
    ok = kj == h1 and cjp == 1 and idx % ep == 0
    return lhs, rhs, ok, "" if idx % ep == 0 else _remainder(idx, ep)


def _chk13(a: Analysis):
    if not a.get("units_are_norms"):
        return "-", "-", True, "some S-unit of K is not a norm from L; nothing to check"
    ep, cj = a.get("e_prime"), a.get("coker_j")
    b2, e = a.get("b2"), a.get("e")
    lhs = f"e'={ep}, |B2|={b2}"
    rhs = f"|coker j|={cj}, e={e}"
    return lhs, rhs, cj % ep == 0 and b2 == e, "" if cj % ep == 0 else _remainder(cj, ep)


CATALOG: list[CheckSpec] = [
    CheckSpec("CHK-01", "[J_{L,S}^G : J_{K,S}] equals the product of e(v) over ramified v outside S",
              "ideal descent index", "=", _chk01, uses_classes=False),
    CheckSpec("CHK-02", "|Am| = |Am_st| * |(U_{K,S} cap Nm L^x) / Nm U_{L,S}|",
              "ambiguous versus strongly ambiguous classes", "=", _chk02),
    CheckSpec("CHK-03", "|Am| * n * [U_{K,S} : U_{K,S} cap Nm L^x] = h_{K,S} * e_{L/K,S}",
              "ambiguous S-class number formula", "=", _chk03),
    CheckSpec("CHK-04", "|Am_st| * n * [U_{K,S} : Nm U_{L,S}] = h_{K,S} * e_{L/K,S}",
              "strongly ambiguous S-class number formula", "=", _chk04),
    CheckSpec("CHK-05", "|ker j| = |Sha1|", "capitulation kernel is the first Sha", "=", _chk05),
    CheckSpec("CHK-06", "|coker j| = |B1| * |Sha2|", "cokernel of j from the localization sequences", "=", _chk06),
    CheckSpec("CHK-07", "|B1| * n * [U_{K,S} : Nm U_{L,S}] = |Sha1| * e_{L/K,S}", "order of B1", "=", _chk07),
    CheckSpec("CHK-08", "|Sha2| = [U_{K,S} cap Nm L^x : Nm U_{L,S}]", "second Sha as a unit norm residue", "=",
              _chk08, uses_classes=False),
    CheckSpec("CHK-09", "|coker j'| = |B1|", "strongly ambiguous cokernel", "=", _chk09),
    CheckSpec("CHK-10", "|B2| = e_{L/K,S} / [U_{K,S} : U_{K,S} cap Nm L^x]", "order of B2", "=", _chk10,
              uses_classes=False),
    CheckSpec("CHK-11", "n' = n / gcd(n, e_{L/K,S}) divides |ker j|", "capitulation lower bound", "|", _chk11),
    CheckSpec("CHK-12", "S large: |ker j| = |H1(G,U_{L,S})|, coker j' = 1, e' divides [U_{K,S} : Nm U_{L,S}]",
              "large S", "=", _chk12),
    CheckSpec("CHK-13", "U_{K,S} in Nm L^x: e' divides |coker j| and |B2| = e_{L/K,S}",
              "S-units are norms", "=", _chk13),
]


def _con_herbrand(a: Analysis):
    lhs = a.get("h2_order") * a.get("n")
    rhs = a.get("h1_order") * a.get("prod_nv")
    return lhs, rhs, lhs == rhs, ""


def _con_coker_routes(a: Analysis):
    direct = a.get("coker_j")
    via_loc = a.get("b1") * a.get("sha2")
    via_orders = a.get("coker_j_route3")
    ok = direct == via_loc == via_orders
    return direct, f"{via_loc}, {via_orders}", ok, ""


def _con_idele_h2(a: Analysis):
    lhs = a.get("b2") * a.get("sha1")
    rhs = a.get("n") * a.get("coker_j")
    return lhs, rhs, lhs == rhs, ""


def _con_norm_index(a: Analysis):
    return _eq(a.get("h2_order"), a.get("index_u_nmu"))


def _con_ker_jprime(a: Analysis):
    return _eq(a.get("ker_j_prime"), a.get("ker_j"))


def _con_lambda_sizes(a: Analysis):
    l1, l2 = a.get("lam1"), a.get("lam2")
    h1, h2 = a.get("h1_order"), a.get("h2_order")
    ok = (l1.sha.order() * l1.image_order == h1 and l1.image_order * l1.b.order() == l1.target_order()
          and l2.sha.order() * l2.image_order == h2 and l2.image_order * l2.b.order() == l2.target_order())
    lhs = f"{l1.sha.order()}*{l1.image_order}, {l2.sha.order()}*{l2.image_order}"
    rhs = f"{h1}, {h2}"
    return lhs, rhs, ok, ""


CONSISTENCY: list[CheckSpec] = [
    CheckSpec("CHK-00", "|H2(G,U_{L,S})| * n = |H1(G,U_{L,S})| * prod_{v in S} n_v",
              "Herbrand quotient of S-units", "=", _con_herbrand, uses_classes=False),
    CheckSpec("CON-COKER", "|coker j| directly, as |B1|*|Sha2|, and as e*|Sha1|/(n*[U:U cap Nm])",
              "three routes to the cokernel of j", "=", _con_coker_routes),
    CheckSpec("CON-IDELE-H2", "|B2| * |Sha1| = n * |coker j|", "idele-class H2 two ways", "=", _con_idele_h2),
    CheckSpec("CON-NORM-INDEX", "|H2(G,U_{L,S})| = [U_{K,S} : Nm U_{L,S}] computed in K",
              "norm index two ways", "=", _con_norm_index, uses_classes=False),
    CheckSpec("CON-KER-JPRIME", "|ker j'| = |ker j|", "kernels of j and j'", "=", _con_ker_jprime),
    CheckSpec("CON-LAMBDA", "|Sha|*|image| = |H| and |image|*|B| = |target| for both localization maps",
              "localization bookkeeping", "=", _con_lambda_sizes, uses_classes=False),
]

CHECK_IDS = [c.check_id for c in CATALOG]


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


def _run_one(spec: CheckSpec, a: Analysis, flags: dict) -> CheckRecord:
    def rec(status, lhs="-", rhs="-", reason=""):
        return CheckRecord(spec.check_id, spec.description, spec.anchor, spec.relation, _fmt(lhs), _fmt(rhs),
                           status, reason, dict(flags))

    try:
        if spec.uses_classes:
            for key in ("cl_k", "cl_l"):
                cert = a.get(key).certification
                if cert not in (EXACT, TRUSTED_FIXTURE):
                    return rec(SKIPPED, reason=f"class group of {'K' if key == 'cl_k' else 'L'} is only an upper bound")
        lhs, rhs, ok, note = spec.fn(a)
    except _SKIP_ERRORS as exc:
        return rec(SKIPPED, reason=f"{type(exc).__name__}: {exc}")
    except Exception as exc:
        return rec(FAIL, reason=f"{type(exc).__name__}: {exc}")
    return rec(PASS if ok else FAIL, lhs, rhs, note)


def _derived(a: Analysis) -> list[DerivedEntry]:
    rows = [
        ("h_{K,S}", "h_ks", ""),
        ("e_{L/K,S}", "e", ""),
        ("n", "n", ""),
        ("n'", "n_prime", ""),
        ("e'", "e_prime", ""),
        ("|Am|", "am", ""),
        ("|Am_st|", "am_st", ""),
        ("|ker j|", "ker_j", ""),
        ("|coker j|", "coker_j", ""),
        ("|coker j'|", "coker_j_prime", ""),
        ("|H1(G,U_{L,S})|", "h1_order", ""),
        ("|H2(G,U_{L,S})|", "h2_order", ""),
        ("|Sha1|", "sha1", ""),
        ("|Sha2|", "sha2", ""),
        ("|B1|", "b1", ""),
        ("|B2|", "b2", ""),
        ("[U_{K,S}:Nm U_{L,S}]", "index_u_nmu", ""),
        ("[U_{K,S}:U_{K,S} cap Nm L^x]", "index_u_unm", ""),
    ]
    out = []
    for name, key, note in rows:
        try:
            out.append(DerivedEntry(name, _fmt(a.get(key)), note))
        except Exception as exc:
            out.append(DerivedEntry(name, "unavailable", f"{type(exc).__name__}"))
    idele = [
        ("[C_{L,S}^G : C_{K,S}]", lambda: a.get("ker_j"), "derived via the capitulation four-term sequence"),
        ("|H1(G,C_{L,S})|", lambda: a.get("coker_j"), "derived via the capitulation four-term sequence"),
        ("|H2(G,C_{L,S})|", lambda: a.get("n") * a.get("coker_j"), "derived via the idele-class Herbrand relation"),
        ("[C_{K,S} : Nm C_{L,S}]", lambda: Fraction(a.get("e"), a.get("index_u_unm")),
         "derived via the idele norm index corollary"),
    ]
    for name, fn, note in idele:
        try:
            out.append(DerivedEntry(name, _fmt(fn()), note))
        except Exception as exc:
            out.append(DerivedEntry(name, "unavailable", f"{note}; {type(exc).__name__}"))
    return out


EXPECTED_KEYS = {
    "e": "e", "n_prime": "n_prime", "e_prime": "e_prime", "h_ks": "h_ks", "am": "am", "am_st": "am_st",
    "ker_j": "ker_j", "coker_j": "coker_j", "coker_j_prime": "coker_j_prime", "h1": "h1_order",
    "h2": "h2_order", "sha1": "sha1", "sha2": "sha2", "b1": "b1", "b2": "b2", "index_u_nmu": "index_u_nmu",
    "index_u_unm": "index_u_unm",
}


def _expected(a: Analysis) -> list[ExpectedEntry]:
    out = []
    for name, want in sorted(a.variant.expected.items()):
        key = EXPECTED_KEYS.get(name)
        if key is None:
            out.append(ExpectedEntry(name, _fmt(want), "unknown quantity", False))
            continue
        try:
            got = a.get(key)
            out.append(ExpectedEntry(name, _fmt(want), _fmt(got), got == want))
        except Exception as exc:
            out.append(ExpectedEntry(name, _fmt(want), f"unavailable ({type(exc).__name__})", False))
    return out


def run_checks(fixture: Fixture, variant: str = "base", check_ids: Optional[Sequence[str]] = None,
               ctx: Optional[FieldContext] = None, height: Optional[int] = None,
               prec_bits: Optional[int] = None) -> VerificationReport:
    ctx = ctx or FieldContext(fixture, height, prec_bits)
    a = Analysis(ctx, fixture.variant(variant))
    flags = a.certification()
    wanted = set(check_ids) if check_ids is not None else None
    checks = [_run_one(c, a, flags) for c in CATALOG if wanted is None or c.check_id in wanted]
    consistency = [_run_one(c, a, flags) for c in CONSISTENCY
                   if wanted is None or c.check_id in wanted or "consistency" in wanted]
    s_places = [v.label() for v in a.rel.places_of_s(a.s_finite)]
    try:
        large = a.get("large")
    except Exception:
        large = None
    return VerificationReport(fixture.name, variant, s_places, large, checks, consistency, _derived(a),
                              _expected(a), flags)
