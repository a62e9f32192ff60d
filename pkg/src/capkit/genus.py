"""Genus-theory table for quadratic fields: two routes to h and to the ambiguous class count."""

from __future__ import annotations

from dataclasses import dataclass

from sympy import factorint

from .classgroup import class_group
from .forms import class_number, is_fundamental, narrow_class_number
from .nf import NumberField


@dataclass
class GenusRow:
    d: int
    h_relations: int
    certification: str
    h_forms: int
    h_plus: int
    t: int
    genus_count: int  # 2^(t-1), the narrow 2-rank count
    ambiguous_formula: int
    ambiguous_cl2: int

    @property
    def consistent(self) -> bool:
        return self.h_relations == self.h_forms and self.ambiguous_formula == self.ambiguous_cl2


def quadratic_field(d: int) -> NumberField:
    if not is_fundamental(d):
        raise ValueError(f"{d} is not a fundamental discriminant")
    if d % 4 == 1:
        return NumberField([(1 - d) // 4, -1, 1], name=f"Q(sqrt {d})")
    return NumberField([-(d // 4), 0, 1], name=f"Q(sqrt {d // 4})")


def prime_discriminants(d: int) -> list[int]:
    """The factorization of d into prime discriminants -4, 8, -8 and (-1)^((p-1)/2) p."""
    out = []
    rest = d
    for p in sorted(factorint(abs(d))):
        if p == 2:
            continue
        q = p if p % 4 == 1 else -p
        out.append(q)
        rest //= q
    if rest != 1:
        out.append(rest)
    return sorted(out)


def ambiguous_classes(d: int) -> int:
    """|Cl[2]| predicted by genus theory for the wide class group."""
    discs = prime_discriminants(d)
    t = len(discs)
    if d > 0 and any(q < 0 for q in discs):
        return 2 ** (t - 2)
    return 2 ** (t - 1)


def genus_row(d: int, height=None) -> GenusRow:
    cl = class_group(quadratic_field(d), height)
    cl2 = 2 ** sum(1 for m in cl.invariants if m % 2 == 0)
    t = len(prime_discriminants(d))
    h_plus = narrow_class_number(d) if d > 0 else class_number(d)
    return GenusRow(d, cl.order(), cl.certification, class_number(d), h_plus, t, 2 ** (t - 1),
                    ambiguous_classes(d), cl2)
