import pytest

from capkit.capitulation import capitulation_map, extend_ideal, ideal_descent_index, orbit_product
from capkit.classgroup import class_group, s_class_group
from capkit.ideals import FracIdeal, decompose_prime
from capkit.nf import NumberField
from capkit.relative import RelExt, sigma_action_classes

from conftest import CORPUS, analysis, corpus_context

CASES = [(name, v.name) for name in CORPUS for v in corpus_context(name).fixture.variants]


def _gaussian():
    q, k = NumberField("x"), NumberField("x^2 + 1")
    return RelExt(q, k, k.zero, k.elem([0, -1]))


def test_two_extends_to_square_of_one_plus_i():
    rel = _gaussian()
    two = FracIdeal.principal(rel.base.rational(2))
    ext = extend_ideal(rel, two)
    assert ext == FracIdeal.principal(rel.ext.elem([1, 1])) ** 2
    assert ext == orbit_product(rel, decompose_prime(rel.base, 2)[0]) ** 2


def test_unit_ideal_extends_to_unit_ideal():
    rel = _gaussian()
    assert extend_ideal(rel, FracIdeal.unit(rel.base)) == FracIdeal.unit(rel.ext)


def test_nonprincipal_prime_capitulates_in_hilbert_class_field(hcf):
    rel = hcf.rel
    p2 = decompose_prime(rel.base, 2)[0]
    cl_k = corpus_context("hcf_m5").classes("base")
    cl_l = corpus_context("hcf_m5").classes("ext")
    assert cl_k.generator(p2.ideal) is None
    ext = extend_ideal(rel, p2.ideal)
    g = cl_l.generator(ext)
    assert g is not None and FracIdeal.principal(g) == ext


def test_hilbert_class_field_capitulation_data():
    a = analysis("hcf_m5", "base")
    assert a.get("cl_k").order() == 2 and a.get("cl_l").order() == 1
    assert a.get("ker_j") == 2
    assert a.get("am") == 1 and a.get("am_st") == 1
    assert a.get("coker_j") == 1 and a.get("coker_j_prime") == 1
    assert a.get("descent") == (1, [])


def test_gaussian_capitulation_data():
    a = analysis("gaussian", "base")
    assert a.get("ker_j") == 1 and a.get("am") == 1
    assert a.get("descent") == (2, [("P2.0", 2)])


def test_degenerate_extension_gives_identity():
    k = NumberField("x^2 + 5")
    rel = RelExt(k, k, k.gen, k.gen)
    cl = class_group(k)
    cls = s_class_group(cl, [])[0]
    cap = capitulation_map(rel, cl, cls, cl, cls, sigma_action_classes(rel, cl, cls), [])
    assert cap.ker_j.order() == 1 and cap.coker_j.order() == 1
    assert cap.am.order() == 2


def test_descent_index_drops_primes_in_s():
    rel = _gaussian()
    assert ideal_descent_index(rel, decompose_prime(rel.base, 2)) == (1, [])


@pytest.mark.parametrize("name,variant", CASES)
def test_capitulation_invariants(name, variant):
    a = analysis(name, variant)
    cap = a.get("cap")
    assert cap.sigma.compose(cap.j).equals(cap.j)
    # Am_st sits inside Am, and the kernels of j and j' agree
    assert cap.am_st_incl.dst is cap.am
    assert cap.am.order() % cap.am_st.order() == 0
    assert cap.ker_j_prime.order() == cap.ker_j.order()


@pytest.mark.parametrize("name,variant", CASES)
def test_class_number_identities(name, variant):
    a = analysis(name, variant)
    n, e = a.get("n"), a.get("e")
    assert a.get("descent")[0] == a.get("e_outside")
    assert a.get("am") == a.get("am_st") * a.get("norms_mod_nmu")
    assert a.get("am") * n * a.get("index_u_unm") == a.get("h_ks") * e
    assert a.get("am_st") * n * a.get("index_u_nmu") == a.get("h_ks") * e
    assert a.get("ker_j") == a.get("sha1")
    assert a.get("coker_j_prime") == a.get("b1")
    assert a.get("ker_j") % a.get("n_prime") == 0
