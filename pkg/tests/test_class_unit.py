import pytest

from capkit.abelian import subgroup
from capkit.classgroup import class_group, s_class_group, s_unit_group
from capkit.genus import quadratic_field
from capkit.ideals import FracIdeal, decompose_prime, factor_element
from capkit.nf import NumberField
from capkit.units import EXACT, BadSuppliedUnit, UnitsUnavailable, unit_group

from conftest import CORPUS, analysis, corpus_context
from oracles import quadratic_class_number


def test_class_group_of_sqrt_minus_five():
    cl = class_group(NumberField("x^2 + 5"))
    assert cl.invariants == (2,) and cl.certification == EXACT
    assert [p.norm for p in cl.fb] == [2]


def test_trivial_class_groups():
    assert class_group(NumberField("x^2 + 1")).fb == []
    assert class_group(NumberField("x")).order() == 1


def test_real_quadratic_unit():
    k = NumberField("x^2 - 2")
    ug = unit_group(k)
    eps = ug.fundamental[0]
    assert abs(eps.norm()) == 1
    # 1 + sqrt 2 up to sign and inversion
    cands = {k.elem([1, 1]), k.elem([1, -1]), k.elem([-1, 1]), k.elem([-1, -1])}
    assert eps in cands
    assert ug.w == 2


def test_gaussian_units_are_torsion():
    ug = unit_group(NumberField("x^2 + 1"))
    assert ug.w == 4 and ug.rank == 0
    assert ug.torsion ** 4 == ug.field.one and ug.torsion ** 2 != ug.field.one


def test_rational_units():
    ug = unit_group(NumberField("x"))
    assert ug.w == 2 and ug.rank == 0


def test_unit_errors():
    k = NumberField("x^3 + x^2 - 2x - 1", [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]])
    with pytest.raises(UnitsUnavailable):
        unit_group(k)
    with pytest.raises(BadSuppliedUnit):
        unit_group(k, [k.elem([2, 0, 0]), k.elem([1, 1, 0])])
    with pytest.raises(BadSuppliedUnit):
        unit_group(k, [k.gen, k.gen ** 2])


def test_s_units_of_the_rationals():
    q = NumberField("x")
    cl = class_group(q)
    su = s_unit_group(cl, decompose_prime(q, 5))
    assert su.rank == 1
    assert abs(su.gammas[0].norm()) == 5


def test_s_units_of_gaussian_at_five():
    k = NumberField("x^2 + 1")
    cl = class_group(k)
    su = s_unit_group(cl, decompose_prime(k, 5))
    assert su.rank == 2 and su.units.w == 4
    for g in su.gammas:
        assert abs(g.norm()) == 5


def test_s_units_of_sqrt_minus_five_at_two():
    k = NumberField("x^2 + 5")
    cl = class_group(k)
    p2 = decompose_prime(k, 2)
    su = s_unit_group(cl, p2)
    assert su.lattice == [[2]]
    assert FracIdeal.principal(su.gammas[0]) == p2[0].ideal ** 2
    assert su.gammas[0] in (k.rational(2), k.rational(-2))


def test_s_class_groups_of_sqrt_minus_five():
    k = NumberField("x^2 + 5")
    cl = class_group(k)
    assert s_class_group(cl, [])[0].order() == 2
    assert s_class_group(cl, decompose_prime(k, 2))[0].order() == 1


def test_class_dlog_examples():
    k = NumberField("x^2 + 5")
    cl = class_group(k)
    p2 = decompose_prime(k, 2)[0].ideal
    assert not cl.group.is_zero(cl.ideal_vector(p2)[0])
    assert not any(x.norm() == 2 for x in (k.elem([a, b]) for a in range(-2, 3) for b in range(-1, 2)))
    seven = FracIdeal.principal(k.rational(7))
    g = cl.generator(seven)
    assert g is not None and FracIdeal.principal(g) == seven
    g2 = cl.generator(p2 ** 2)
    assert g2 is not None and FracIdeal.principal(g2) == p2 ** 2 and abs(g2.norm()) == 4


def _quadratic_fields():
    seen = {}
    for name in CORPUS:
        fx = corpus_context(name).fixture
        for which, f in (("base", fx.base), ("ext", fx.ext)):
            if f.degree == 2:
                seen[f.poly] = (name, which)
    return sorted(seen.values())


@pytest.mark.parametrize("name,which", _quadratic_fields())
def test_quadratic_fixture_fields_match_form_count(name, which):
    ctx = corpus_context(name)
    cl = ctx.classes(which)
    assert cl.order() == quadratic_class_number(cl.field.disc)


@pytest.mark.parametrize("name", CORPUS)
def test_s_class_number_times_s_prime_classes(name):
    ctx = corpus_context(name)
    for v in ctx.fixture.variants:
        a = analysis(name, v.name)
        for cl_key, s_key in (("cl_k", None), ("cl_l", "s_l")):
            cl = a.get(cl_key)
            primes = a.s_finite if s_key is None else a.get(s_key)
            q, _ = s_class_group(cl, primes)
            sub, _ = subgroup(cl.group, [cl.ideal_vector(p.ideal)[0] for p in primes] or [[0] * cl.group.ngens])
            assert q.order() * sub.order() == cl.order()


@pytest.mark.parametrize("name", CORPUS)
def test_s_unit_generators_supported_on_s(name):
    for v in corpus_context(name).fixture.variants:
        a = analysis(name, v.name)
        for key in ("su_k", "su_l"):
            su = a.get(key)
            s_keys = {p.ideal for p in su.primes}
            for g in su.gammas:
                for p, e in factor_element(g):
                    assert e == 0 or p.ideal in s_keys


@pytest.mark.parametrize("d", [8, 12, 5, 13, 28, 40, 76, 94 * 4, 181])
def test_pell_units_have_norm_plus_minus_one(d):
    ug = unit_group(quadratic_field(d))
    assert abs(ug.fundamental[0].norm()) == 1
    assert ug.fundamental[0].is_integral()


def test_unit_dlog_roundtrip():
    ug = unit_group(quadratic_field(94 * 4))
    eps = ug.fundamental[0]
    u = -(eps ** 5)
    assert ug.dlog(u) == [1, 5]
