"""Fixture files: a cyclic extension L/K, supplied data, and the S-variants to verify.

Fixtures are TOML documents. Rationals are written as "p/q" strings and
polynomials as strings in x. See README.md for the schema.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Any, Optional

import tomli

from .ideals import PrimeIdeal, decompose_prime
from .nf import FieldElem, NumberField, NumberFieldError
from .relative import RelExt, RelExtError
from .units import BadSuppliedUnit


class FixtureError(Exception):
    pass


class ParseError(FixtureError):
    def __init__(self, line: Optional[int], message: str):
        self.line = line
        self.message = message
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


class VerificationError(FixtureError):
    def __init__(self, datum: str, reason: str):
        self.datum = datum
        self.reason = reason
        super().__init__(f"{datum}: {reason}")


@dataclass
class SVariant:
    name: str
    s_spec: list[tuple[int, Any]]
    expected: dict = dc_field(default_factory=dict)


@dataclass
class Fixture:
    name: str
    description: str
    base: NumberField
    ext: NumberField
    rel: RelExt
    base_units: list[FieldElem]
    ext_units: list[FieldElem]
    variants: list[SVariant]
    height: Optional[int] = None
    prec_bits: int = 128
    class_orders: dict = dc_field(default_factory=dict)
    path: str = ""

    def variant(self, name: str) -> SVariant:
        for v in self.variants:
            if v.name == name:
                return v
        raise KeyError(f"no variant named {name!r}")

    def s_primes(self, variant: SVariant) -> list[PrimeIdeal]:
        out = []
        for p, which in variant.s_spec:
            primes = decompose_prime(self.base, p)
            if which == "all":
                out.extend(primes)
            else:
                for i in which:
                    if not 0 <= i < len(primes):
                        raise VerificationError(f"variant {variant.name}", f"no prime index {i} above {p}")
                    out.append(primes[i])
        return out


def _line_of(exc: Exception) -> Optional[int]:
    line = getattr(exc, "lineno", None)
    if line:
        return line
    m = re.search(r"line (\d+)", str(exc))
    return int(m.group(1)) if m else None


def _field(spec: dict, datum: str) -> NumberField:
    if "poly" not in spec:
        raise VerificationError(datum, "missing 'poly'")
    try:
        return NumberField(spec["poly"], spec.get("integral_basis"), name=spec.get("name", ""))
    except NumberFieldError as exc:
        raise VerificationError(datum, f"{type(exc).__name__}: {exc}") from exc
    except (ValueError, TypeError) as exc:
        raise VerificationError(datum, str(exc)) from exc


def _elem(field: NumberField, coords, datum: str) -> FieldElem:
    try:
        return field.elem(coords)
    except (ValueError, ZeroDivisionError, NumberFieldError) as exc:
        raise VerificationError(datum, f"bad coordinates: {exc}") from exc


def _units(field: NumberField, raw, datum: str) -> list[FieldElem]:
    out = []
    for i, coords in enumerate(raw or []):
        u = _elem(field, coords, f"{datum}[{i}]")
        if not u.is_integral() or abs(u.norm()) != 1:
            raise VerificationError(f"{datum}[{i}]", BadSuppliedUnit.__name__)
        out.append(u)
    return out


def _s_spec(raw, datum: str) -> list[tuple[int, Any]]:
    out = []
    for i, item in enumerate(raw or []):
        if not isinstance(item, dict) or "p" not in item:
            raise VerificationError(f"{datum}[{i}]", "expected a table with key 'p'")
        which = item.get("which", "all")
        if which != "all" and not (isinstance(which, list) and all(isinstance(k, int) for k in which)):
            raise VerificationError(f"{datum}[{i}]", "'which' must be \"all\" or a list of prime indices")
        out.append((int(item["p"]), which))
    return out


def parse_fixture(text: str, path: str = "<string>") -> Fixture:
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ParseError(_line_of(exc), str(exc)) from exc
    for key in ("base", "ext"):
        if key not in doc:
            raise ParseError(None, f"missing table [{key}]")
    base = _field(doc["base"], "base")
    ext = _field(doc["ext"], "ext")
    e = doc["ext"]
    for key in ("embed", "sigma"):
        if key not in e:
            raise VerificationError(key, "missing")
    embed = _elem(ext, e["embed"], "embed")
    sigma = _elem(ext, e["sigma"], "sigma")
    try:
        rel = RelExt(base, ext, embed, sigma)
    except RelExtError as exc:
        datum = "embed" if type(exc).__name__ == "NotAnEmbedding" else "sigma"
        raise VerificationError(datum, type(exc).__name__) from exc
    knobs = doc.get("knobs", {})
    variants = [SVariant("base", _s_spec(doc.get("s_finite"), "s_finite"), dict(doc.get("expected", {})))]
    for i, v in enumerate(doc.get("variants", [])):
        if "name" not in v:
            raise VerificationError(f"variants[{i}]", "missing 'name'")
        variants.append(SVariant(v["name"], _s_spec(v.get("s_finite"), f"variants[{i}].s_finite"),
                                 dict(v.get("expected", {}))))
    names = [v.name for v in variants]
    if len(set(names)) != len(names):
        raise VerificationError("variants", "duplicate variant names")
    fx = Fixture(
        name=doc.get("name", Path(path).stem),
        description=doc.get("description", ""),
        base=base,
        ext=ext,
        rel=rel,
        base_units=_units(base, doc["base"].get("units"), "base_units"),
        ext_units=_units(ext, e.get("units"), "extension_units"),
        variants=variants,
        height=knobs.get("height"),
        prec_bits=int(knobs.get("prec", 128)),
        class_orders={"base": doc["base"].get("class_number"), "ext": e.get("class_number")},
        path=path,
    )
    for v in variants:
        fx.s_primes(v)
    return fx


def load_fixture(path) -> Fixture:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(None, f"cannot read {path}: {exc}") from exc
    return parse_fixture(text, str(p))
