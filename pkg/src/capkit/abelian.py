"""Finitely generated abelian groups given by generators and relations.

A group is ``Z^ngens / rowspan(relations)``. Elements are integer vectors in
generator coordinates; `FgAbGroup.express` maps them to canonical Smith
coordinates, which is the only normal form used for equality.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional, Sequence

from . import linalg as la

INFINITE = math.inf


class IllFormedHom(ValueError):
    """A matrix does not send the source relations into the target relations."""


class FgAbGroup:
    def __init__(self, ngens: int, relations: Sequence[Sequence[int]] = ()):
        rels = [list(r) for r in relations if any(r)]
        for r in rels:
            if len(r) != ngens:
                raise ValueError(f"relation {r} has {len(r)} entries, expected {ngens}")
        self.ngens = ngens
        self.relations = rels
        self.smith = la.snf(rels, ngens)
        full = [self.smith.d[i] if i < len(self.smith.d) else 0 for i in range(ngens)]
        self._keep = [i for i in range(ngens) if full[i] != 1]
        self.moduli = tuple(full[i] for i in self._keep)

    @classmethod
    def cyclic(cls, n: int) -> "FgAbGroup":
        return cls(1, [[n]])

    @classmethod
    def from_invariants(cls, moduli: Sequence[int]) -> "FgAbGroup":
        k = len(moduli)
        return cls(k, [[m if i == j else 0 for j in range(k)] for i, m in enumerate(moduli)])

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(m for m in self.moduli if m)

    @property
    def free_rank(self) -> int:
        return sum(1 for m in self.moduli if m == 0)

    def order(self):
        """Group order, or `INFINITE` when the free rank is positive."""
        if self.free_rank:
            return INFINITE
        return math.prod(self.moduli)

    def is_trivial(self) -> bool:
        return not self.moduli

    def express(self, coords: Sequence[int]) -> tuple[int, ...]:
        if len(coords) != self.ngens:
            raise ValueError("coordinate vector has wrong length")
        c = la.vec_mat(coords, self.smith.v) if self.ngens else []
        return tuple(c[i] % m if m else c[i] for i, m in zip(self._keep, self.moduli))

    def is_zero(self, coords: Sequence[int]) -> bool:
        return not any(self.express(coords))

    def equal(self, x: Sequence[int], y: Sequence[int]) -> bool:
        return self.is_zero([a - b for a, b in zip(x, y)])

    @cached_property
    def _vinv(self) -> la.IntMatrix:
        inv = la.inverse_rational(self.smith.v) if self.ngens else []
        return [[int(x) for x in row] for row in inv]

    def lift(self, canonical: Sequence[int]) -> list[int]:
        """Generator coordinates of the element with the given canonical coordinates."""
        c = [0] * self.ngens
        for i, x in zip(self._keep, canonical):
            c[i] = x
        return la.vec_mat(c, self._vinv) if self.ngens else []

    def canonical_generators(self) -> list[list[int]]:
        return [self._vinv[i] for i in self._keep]

    def elements(self) -> Iterator[tuple[int, ...]]:
        """All elements in canonical coordinates (finite groups only)."""
        if self.free_rank:
            raise ValueError("cannot enumerate an infinite group")
        return itertools.product(*(range(m) for m in self.moduli))

    def element_order(self, coords: Sequence[int]):
        c = self.express(coords)
        out = 1
        for x, m in zip(c, self.moduli):
            if m == 0:
                if x:
                    return INFINITE
            else:
                out = math.lcm(out, m // math.gcd(m, x))
        return out

    def simplified(self) -> tuple["FgAbGroup", "GroupHom", "GroupHom"]:
        """Diagonal copy of the group plus the isomorphisms to and from it."""
        g = FgAbGroup.from_invariants(self.moduli)
        to = GroupHom(self, g, la.transpose([list(self.express(e)) for e in la.identity(self.ngens)], g.ngens))
        back = GroupHom(g, self, la.transpose(self.canonical_generators(), self.ngens))
        return g, to, back

    def __repr__(self) -> str:
        parts = [f"Z/{m}" if m else "Z" for m in self.moduli]
        return "FgAbGroup(" + (" + ".join(parts) if parts else "0") + ")"


class GroupHom:
    """Homomorphism given by a ``dst.ngens x src.ngens`` matrix (columns are images)."""

    def __init__(self, src: FgAbGroup, dst: FgAbGroup, matrix: Sequence[Sequence[int]], check: bool = True):
        m = [list(r) for r in matrix]
        if dst.ngens == 0:
            m = []
        elif len(m) != dst.ngens or any(len(r) != src.ngens for r in m):
            raise ValueError("matrix shape does not match the groups")
        self.src = src
        self.dst = dst
        self.matrix = m
        if check:
            for r in src.relations:
                if not dst.is_zero(self(r)):
                    raise IllFormedHom(f"relation {r} maps to a nonzero element")

    @classmethod
    def from_images(cls, src: FgAbGroup, dst: FgAbGroup, images: Sequence[Sequence[int]], check: bool = True):
        return cls(src, dst, la.transpose(images, dst.ngens), check)

    def __call__(self, x: Sequence[int]) -> list[int]:
        if not self.dst.ngens:
            return []
        return la.mat_vec(self.matrix, x)

    def images(self) -> list[list[int]]:
        if not self.matrix:
            return [[] for _ in range(self.src.ngens)]
        return la.transpose(self.matrix)

    def compose(self, first: "GroupHom") -> "GroupHom":
        """self after first."""
        cols = [self(c) for c in first.images()]
        return GroupHom(first.src, self.dst, la.transpose(cols, self.dst.ngens), check=False)

    def is_zero(self) -> bool:
        return all(self.dst.is_zero(c) for c in self.images())

    def equals(self, other: "GroupHom") -> bool:
        return all(self.dst.equal(a, b) for a, b in zip(self.images(), other.images()))


def identity_hom(g: FgAbGroup) -> GroupHom:
    return GroupHom(g, g, la.identity(g.ngens), check=False)


def hom_sum(homs: Sequence[GroupHom], coeffs: Optional[Sequence[int]] = None) -> GroupHom:
    coeffs = coeffs or [1] * len(homs)
    src, dst = homs[0].src, homs[0].dst
    m = la.zeros(dst.ngens, src.ngens)
    for h, c in zip(homs, coeffs):
        for i in range(dst.ngens):
            for j in range(src.ngens):
                m[i][j] += c * h.matrix[i][j]
    return GroupHom(src, dst, m, check=False)


# --- kernels, images, cokernels ------------------------------------------


def _preimage_lattice(matrix: la.IntMatrix, target_rels: la.IntMatrix, a: int, b: int) -> la.IntMatrix:
    """HNF basis of {x in Z^a : matrix @ x lies in rowspan(target_rels)}."""
    if b == 0:
        return la.identity(a)
    block = [list(matrix[i]) + [r[i] for r in target_rels] for i in range(b)]
    ker = la.kernel_basis(block, a + len(target_rels))
    return la.hnf_basis([v[:a] for v in ker], a)


@dataclass
class HomParts:
    kernel: FgAbGroup
    kernel_incl: GroupHom
    image: FgAbGroup
    image_incl: GroupHom
    cokernel: FgAbGroup
    cokernel_proj: GroupHom


def hom_parts(h: GroupHom) -> HomParts:
    src, dst = h.src, h.dst
    lat = _preimage_lattice(h.matrix, dst.relations, src.ngens, dst.ngens)
    rels = []
    for r in src.relations:
        c = la.in_lattice(lat, r)
        if c is None:
            raise IllFormedHom("source relation outside the kernel lattice")
        rels.append(c)
    kernel = FgAbGroup(len(lat), rels)
    kernel_incl = GroupHom(kernel, src, la.transpose(lat, src.ngens), check=False)
    image = FgAbGroup(src.ngens, lat)
    image_incl = GroupHom(image, dst, h.matrix, check=False)
    coker_rels = dst.relations + h.images()
    cokernel = FgAbGroup(dst.ngens, coker_rels)
    cokernel_proj = GroupHom(dst, cokernel, la.identity(dst.ngens), check=False)
    return HomParts(kernel, kernel_incl, image, image_incl, cokernel, cokernel_proj)


def pullback(incl: GroupHom, y: Sequence[int]) -> Optional[list[int]]:
    """Some x with ``incl(x) == y`` in ``incl.dst``, or None if y is not in the image."""
    a, b = incl.src.ngens, incl.dst.ngens
    if b == 0:
        return [0] * a
    block = [list(incl.matrix[i]) + [r[i] for r in incl.dst.relations] for i in range(b)]
    z = la.solve_integer(block, list(y), a + len(incl.dst.relations))
    return None if z is None else z[:a]


def subgroup(g: FgAbGroup, gens: Sequence[Sequence[int]]) -> tuple[FgAbGroup, GroupHom]:
    """The subgroup generated by `gens`, with its inclusion."""
    free = FgAbGroup(len(gens))
    parts = hom_parts(GroupHom.from_images(free, g, gens, check=False))
    return parts.image, parts.image_incl


def quotient(g: FgAbGroup, gens: Sequence[Sequence[int]]) -> tuple[FgAbGroup, GroupHom]:
    q = FgAbGroup(g.ngens, g.relations + [list(x) for x in gens])
    return q, GroupHom(g, q, la.identity(g.ngens), check=False)


def contains(g: FgAbGroup, gens: Sequence[Sequence[int]], x: Sequence[int]) -> bool:
    free = FgAbGroup(len(gens))
    return pullback(GroupHom.from_images(free, g, gens, check=False), x) is not None


def subquotient(incl: GroupHom, killed: Sequence[Sequence[int]]) -> tuple[FgAbGroup, GroupHom]:
    """``incl.src / <killed>`` where `killed` are elements of ``incl.dst`` lying in the image.

    Returns the quotient group and the projection from ``incl.src``.
    """
    pulled = []
    for y in killed:
        x = pullback(incl, y)
        if x is None:
            raise ValueError("element to kill is not in the subgroup")
        pulled.append(x)
    return quotient(incl.src, pulled)


def is_exact(f: GroupHom, g: GroupHom) -> bool:
    """Whether ``A -f-> B -g-> C`` is exact at B (image(f) == kernel(g))."""
    if not g.compose(f).is_zero():
        return False
    parts = hom_parts(g)
    fimgs = f.images()
    return all(contains(f.dst, fimgs, k) for k in parts.kernel_incl.images())


def order_of_hom_parts(h: GroupHom) -> tuple:
    p = hom_parts(h)
    return p.kernel.order(), p.image.order(), p.cokernel.order()
