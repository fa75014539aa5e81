"""JSON encodings of index sets, injections and operators.

Exact operators serialize their normal-form terms; prefix-tier operators
serialize their construction recipe and are rebuilt on parse.  All
rationals travel as strings (``"p"`` or ``"p/q"``); bare integers are
accepted where an integer makes sense.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction

from .errors import SchemaError
from .index_arith import IndexSet
from .op_algebra import (
    AffinePiece,
    Coefficient,
    Law,
    Operator,
    PartialInjection,
    PrefixOperator,
    validate_injection,
)
from .op_algebra.coefficient import parse_rational


def load_json(source: str):
    """Read ``source`` as a path, ``-`` for stdin, or inline JSON text."""
    if source == "-":
        text = sys.stdin.read()
    elif source.lstrip().startswith(("{", "[")):
        text = source
    else:
        try:
            with open(source) as fh:
                text = fh.read()
        except OSError as exc:
            raise SchemaError(f"cannot read {source}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _nat(value, pointer: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise SchemaError(f"expected a natural number, got {value!r}", pointer)
    return value


def _nat_list(value, pointer: str) -> list[int]:
    if not isinstance(value, list):
        raise SchemaError("expected a list of natural numbers", pointer)
    return [_nat(v, f"{pointer}/{k}") for k, v in enumerate(value)]


def _rational(value, pointer: str) -> Fraction:
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    try:
        return parse_rational(value)
    except ValueError as exc:
        raise SchemaError(str(exc), pointer) from exc


def index_set_from_json(data, pointer: str = "") -> IndexSet:
    """``{"mod", "res", "plus", "minus"}``; a bare list means a finite set."""
    if isinstance(data, list):
        return IndexSet.finite(_nat_list(data, pointer))
    if not isinstance(data, dict):
        raise SchemaError("expected an index set object", pointer)
    unknown = set(data) - {"mod", "res", "plus", "minus"}
    if unknown:
        raise SchemaError(f"unknown index set field {sorted(unknown)[0]!r}", pointer)
    mod = _nat(data.get("mod", 1), f"{pointer}/mod")
    if mod < 1:
        raise SchemaError("modulus must be at least 1", f"{pointer}/mod")
    res = _nat_list(data.get("res", []), f"{pointer}/res")
    for k, r in enumerate(res):
        if r >= mod:
            raise SchemaError(f"residue {r} is not below the modulus", f"{pointer}/res/{k}")
    return IndexSet.build(mod, res, _nat_list(data.get("plus", []), f"{pointer}/plus"),
                          _nat_list(data.get("minus", []), f"{pointer}/minus"))


def coefficient_from_json(data, pointer: str = "") -> Coefficient:
    if isinstance(data, dict):
        unknown = set(data) - {"re", "im"}
        if unknown:
            raise SchemaError(f"unknown coefficient field {sorted(unknown)[0]!r}", pointer)
        return Coefficient(_rational(data.get("re", "0"), f"{pointer}/re"),
                           _rational(data.get("im", "0"), f"{pointer}/im"))
    return Coefficient(_rational(data, pointer))


def injection_from_json(data, pointer: str = "") -> PartialInjection:
    """Parse and validate a piece list; overlaps raise InjectivityError."""
    if not isinstance(data, dict) or not isinstance(data.get("pieces"), list):
        raise SchemaError("expected {\"pieces\": [...]}", pointer)
    pieces = []
    for k, p in enumerate(data["pieces"]):
        ptr = f"{pointer}/pieces/{k}"
        if not isinstance(p, dict) or not {"domain", "a", "b"} <= set(p):
            raise SchemaError("a piece needs domain, a and b", ptr)
        a = _rational(p["a"], f"{ptr}/a")
        if a <= 0:
            raise SchemaError("slope must be positive", f"{ptr}/a")
        law = Law(a, _rational(p["b"], f"{ptr}/b"))
        pieces.append(AffinePiece(index_set_from_json(p["domain"], f"{ptr}/domain"), law))
    return validate_injection(pieces)


def operator_to_json(op) -> dict:
    if isinstance(op, PrefixOperator):
        return {"tier": "prefix", "bound": op.bound, "provenance": op.provenance}
    out = {"tier": "exact",
           "terms": [{"coeff": c.to_json(), "map": f.to_json()} for c, f in op.terms]}
    if op.provenance:
        out["provenance"] = op.provenance
    return out


def operator_from_json(data, pointer: str = "", bound: int | None = None):
    """Exact operators from ``terms``; prefix operators rebuilt from ``provenance``."""
    if not isinstance(data, dict):
        raise SchemaError("expected an operator object", pointer)
    if "operator" in data and "terms" not in data:
        return operator_from_json(data["operator"], f"{pointer}/operator", bound)
    if "terms" in data:
        if not isinstance(data["terms"], list):
            raise SchemaError("terms must be a list", f"{pointer}/terms")
        terms = []
        for k, t in enumerate(data["terms"]):
            ptr = f"{pointer}/terms/{k}"
            if not isinstance(t, dict) or "coeff" not in t or "map" not in t:
                raise SchemaError("a term needs coeff and map", ptr)
            terms.append((coefficient_from_json(t["coeff"], f"{ptr}/coeff"),
                          injection_from_json(t["map"], f"{ptr}/map")))
        return Operator.from_terms(terms, data.get("provenance"))
    if "provenance" in data:
        b = bound or data.get("bound")
        return rebuild(data["provenance"], f"{pointer}/provenance", b)
    raise SchemaError("an operator needs terms or provenance", pointer)


def unitary_from_json(data, pointer: str = ""):
    from .constructions import UnitarySpec

    if not isinstance(data, dict) or "carrier" not in data:
        raise SchemaError("a unitary needs a carrier", pointer)
    carrier = index_set_from_json(data["carrier"], f"{pointer}/carrier")
    if "map" in data:
        f = injection_from_json(data["map"], f"{pointer}/map")
    else:
        f = PartialInjection.identity(carrier)
    phases = {}
    raw = data.get("phases", {})
    if not isinstance(raw, dict):
        raise SchemaError("phases must map indices to coefficients", f"{pointer}/phases")
    for key, val in raw.items():
        if not key.isdigit():
            raise SchemaError(f"phase key {key!r} is not an index", f"{pointer}/phases")
        phases[int(key)] = coefficient_from_json(val, f"{pointer}/phases/{key}")
    try:
        return UnitarySpec(carrier, f, phases)
    except ValueError as exc:
        raise SchemaError(str(exc), pointer) from exc


def rebuild(prov, pointer: str = "", bound: int | None = None):
    from . import constructions as cons

    if not isinstance(prov, dict):
        raise SchemaError("provenance must be an object", pointer)
    kind = prov.get("construction")
    kw = {"bound": bound} if bound else {}
    if kind == "shift_with_wandering":
        return cons.make_shift_with_wandering(index_set_from_json(prov.get("wandering"), f"{pointer}/wandering"), **kw)
    if kind == "shift_with_range":
        return cons.make_shift_with_range(index_set_from_json(prov.get("range"), f"{pointer}/range"), **kw)
    if kind == "isometry_with_parts":
        return cons.make_isometry_with_parts(unitary_from_json(prov.get("unitary"), f"{pointer}/unitary"),
                                             index_set_from_json(prov.get("range"), f"{pointer}/range"), **kw)
    if kind == "cuntz":
        return cons.make_cuntz(_nat(prov.get("n"), f"{pointer}/n"))[_nat(prov.get("r"), f"{pointer}/r")]
    raise SchemaError(f"unknown construction {kind!r}", f"{pointer}/construction")


def operators_from_json(data, pointer: str = "", bound: int | None = None) -> list:
    """A list of operators, or an object holding one under ``generators`` or ``operators``."""
    for key in ("generators", "operators"):
        if isinstance(data, dict) and key in data:
            data, pointer = data[key], f"{pointer}/{key}"
            break
    if not isinstance(data, list):
        raise SchemaError("expected a list of operators", pointer)
    return [operator_from_json(d, f"{pointer}/{k}", bound) for k, d in enumerate(data)]
