import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from capkit.abelian import FgAbGroup, GroupHom, identity_hom
from capkit.nf import NumberField
from capkit.relative import RelExt
from capkit.tate import CyclicModule, NotAModule, herbrand, hilbert90_resolvent, tate_h1, tate_h2

from conftest import CORPUS, analysis, corpus_context
from oracles import brute_cohomology


def _module(moduli, matrix, n):
    g = FgAbGroup.from_invariants(moduli) if moduli else FgAbGroup(len(matrix))
    return CyclicModule(g, GroupHom(g, g, matrix), n)


def test_z4_with_multiplication_by_three():
    cm = _module([4], [[3]], 2)
    assert tate_h1(cm).group.invariant_factors == (2,)
    assert tate_h2(cm).group.invariant_factors == (2,)


def test_trivial_integers():
    for n in (2, 3, 5):
        cm = _module([], [[1]], n)
        assert tate_h1(cm).order() == 1
        assert tate_h2(cm).group.invariant_factors == (n,)


def test_swap_on_z_squared_is_cohomologically_trivial():
    # Z^2 with the swap is the regular representation, so both groups vanish
    cm = _module([], [[0, 1], [1, 0]], 2)
    assert tate_h1(cm).order() == 1
    assert tate_h2(cm).order() == 1


def test_sign_action_on_z():
    cm = _module([], [[-1]], 2)
    assert tate_h1(cm).group.invariant_factors == (2,)
    assert tate_h2(cm).order() == 1


def test_herbrand_on_z8():
    assert herbrand(_module([8], [[3]], 2)) == 1


def test_herbrand_of_trivial_z_is_n():
    assert herbrand(_module([], [[1]], 3)) == Fraction(3)


def test_sigma_power_must_be_identity():
    with pytest.raises(NotAModule):
        _module([5], [[2]], 2)


def test_representatives_are_cycles():
    cm = _module([2, 4], [[1, 0], [2, 1]], 2)
    h1, h2 = tate_h1(cm), tate_h2(cm)
    for r in h1.representatives:
        assert cm.m.is_zero(cm.norm(r))
    for r in h2.representatives:
        assert cm.m.is_zero(cm.sigma_minus_one(r))


def test_classify_non_cycle_returns_none():
    cm = _module([], [[1]], 2)
    assert tate_h1(cm).classify([1]) is None
    assert tate_h2(cm).classify([1]) == (1,)


def _random_module(rng):
    """(moduli, matrix, n) with the matrix invertible mod m and of small order."""
    while True:
        m = rng.choice([2, 3, 4, 5, 6, 8, 9])
        k = rng.randint(1, 3)
        mat = [[rng.randint(0, m - 1) for _ in range(k)] for _ in range(k)]
        g = FgAbGroup.from_invariants([m] * k)
        try:
            sig = GroupHom(g, g, mat)
        except Exception:
            continue
        acc, n = sig, 1
        while n <= 24 and not acc.equals(identity_hom(g)):
            acc, n = sig.compose(acc), n + 1
        if n <= 24:
            return [m] * k, mat, n


def test_random_finite_modules_against_brute_force():
    rng = random.Random(20240)
    for _ in range(200):
        moduli, mat, n = _random_module(rng)
        cm = _module(moduli, mat, n)
        h1, h2 = tate_h1(cm).order(), tate_h2(cm).order()
        assert (h1, h2) == brute_cohomology(moduli, mat, n)
        assert h1 == h2


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=2, max_value=40), st.integers(min_value=1, max_value=39))
def test_cyclic_group_herbrand_is_one(m, a):
    if math.gcd(a, m) != 1:
        return
    n = 1
    while pow(a, n, m) != 1 % m:
        n += 1
    assert herbrand(_module([m], [[a]], n)) == 1


def test_hilbert90_in_gaussian_field():
    q, k = NumberField("x"), NumberField("x^2 + 1")
    rel = RelExt(q, k, k.zero, k.elem([0, -1]))
    for u in (k.gen, k.elem(["3/5", "4/5"]), -k.one):
        y = hilbert90_resolvent(rel, u)
        assert not y.is_zero()
        assert y == u * rel.sigma(y)


def test_hilbert90_rejects_non_norm_one():
    q, k = NumberField("x"), NumberField("x^2 + 1")
    rel = RelExt(q, k, k.zero, k.elem([0, -1]))
    with pytest.raises(ValueError):
        hilbert90_resolvent(rel, k.elem([1, 1]))


def test_hilbert90_on_fixture_units(zeta5):
    rel = zeta5.rel
    z = rel.ext.gen
    u = z / rel.sigma(z)
    y = hilbert90_resolvent(rel, u)
    assert y == u * rel.sigma(y)


@pytest.mark.parametrize("name", CORPUS)
def test_herbrand_quotient_of_s_units(name):
    for v in corpus_context(name).fixture.variants:
        a = analysis(name, v.name)
        assert herbrand(a.get("module")) == Fraction(a.get("prod_nv"), a.get("n"))
