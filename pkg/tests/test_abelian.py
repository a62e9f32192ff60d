import math

import pytest
from hypothesis import given, settings, strategies as st

from capkit.abelian import (INFINITE, FgAbGroup, GroupHom, IllFormedHom, hom_parts, is_exact, quotient,
                            subgroup)


def test_presentation_examples():
    g = FgAbGroup(2, [[2, 0], [0, 3]])
    assert g.invariant_factors == (6,) and g.free_rank == 0
    assert FgAbGroup(1, []).free_rank == 1
    h = FgAbGroup(2, [[1, 0]])
    assert h.invariant_factors == () and h.free_rank == 1
    assert h.order() == INFINITE


def test_express_examples():
    g = FgAbGroup(2, [[2, 0], [0, 3]])
    assert g.element_order([1, 1]) == 6
    assert g.is_zero([0, 0])
    assert FgAbGroup.cyclic(2).express([3]) == (1,)


def test_hom_parts_doubling_on_z4():
    z4 = FgAbGroup.cyclic(4)
    p = hom_parts(GroupHom(z4, z4, [[2]]))
    assert (p.kernel.order(), p.image.order(), p.cokernel.order()) == (2, 2, 2)


def test_hom_parts_times_three_on_z():
    z = FgAbGroup(1)
    p = hom_parts(GroupHom(z, z, [[3]]))
    assert p.kernel.order() == 1 and p.cokernel.invariant_factors == (3,)


def test_hom_parts_sum_map():
    v4 = FgAbGroup.from_invariants([2, 2])
    p = hom_parts(GroupHom(v4, FgAbGroup.cyclic(2), [[1, 1]]))
    assert p.kernel.order() == 2 and p.cokernel.order() == 1


def test_ill_formed_hom_rejected():
    with pytest.raises(IllFormedHom):
        GroupHom(FgAbGroup.cyclic(2), FgAbGroup.cyclic(3), [[1]])


def test_exactness_of_short_sequence():
    z4 = FgAbGroup.cyclic(4)
    z2 = FgAbGroup.cyclic(2)
    inc = GroupHom(z2, z4, [[2]])
    proj = GroupHom(z4, z2, [[1]])
    assert is_exact(inc, proj)
    assert not is_exact(GroupHom(z2, z4, [[0]]), proj)


groups = st.lists(st.integers(0, 6), min_size=1, max_size=3)


@settings(max_examples=120, deadline=None)
@given(groups, groups, st.data())
def test_lagrange_for_random_homs(src_mod, dst_mod, data):
    src = FgAbGroup.from_invariants([m or 0 for m in src_mod])
    dst = FgAbGroup.from_invariants([m or 0 for m in dst_mod])
    # images of generators must be killed by the generator's order
    images = []
    for m in src_mod:
        img = []
        for d in dst_mod:
            k = data.draw(st.integers(-4, 4))
            if m and d:
                # k * m must vanish mod d: scale by d / gcd(m, d)
                k *= d // math.gcd(m, d)
            elif m and not d:
                k = 0
            img.append(k)
        images.append(img)
    h = GroupHom.from_images(src, dst, images)
    p = hom_parts(h)
    if src.order() != INFINITE:
        assert p.kernel.order() * p.image.order() == src.order()
    if dst.order() != INFINITE:
        assert p.image.order() * p.cokernel.order() == dst.order()
    assert is_exact(p.kernel_incl, h)


def test_subgroup_and_quotient_orders():
    g = FgAbGroup.from_invariants([4, 6])
    sub, incl = subgroup(g, [[2, 0], [0, 3]])
    q, _ = quotient(g, [[2, 0], [0, 3]])
    assert sub.order() * q.order() == g.order() == 24
