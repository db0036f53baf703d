"""JSON readers for the file formats used by the command line.

Writers live on the types themselves (``to_json``); this module turns parsed
JSON back into objects and rejects malformed input with :class:`InputError`.
"""
from __future__ import annotations

import json
import sys
from typing import Any, Optional

from .arrow import AbelianGroup, ArrowError, ArrowTriple, FieldModel, additive_model, multiplicative_model
from .field import Field, FieldError, field_of_order, make_field
from .plane import Collineation, GeometryError, PointSet


class InputError(ValueError):
    """Malformed or inconsistent user input (exit code 2)."""


def read_json(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e})") from e


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2)


def _int(x: Any, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise InputError(f"{what} must be an integer, got {x!r}")
    return x


def _int_list(xs: Any, what: str) -> list[int]:
    if not isinstance(xs, list):
        raise InputError(f"{what} must be a list")
    return [_int(x, what) for x in xs]


def field_from_json(obj: Any) -> Field:
    if not isinstance(obj, dict) or "p" not in obj:
        raise InputError("field must be an object with at least 'p'")
    p = _int(obj["p"], "field.p")
    k = _int(obj.get("k", 1), "field.k")
    try:
        F = make_field(p, k)
    except FieldError as e:
        raise InputError(str(e)) from e
    if "modulus" in obj and k > 1:
        mod = tuple(_int_list(obj["modulus"], "field.modulus"))
        if mod != F.modulus:
            raise InputError(f"modulus {list(mod)} is not the canonical one {list(F.modulus)} for GF({p}^{k})")
    return F


def field_element(F: Field, x: Any, what: str = "element") -> int:
    x = _int(x, what)
    if not 0 <= x < F.q:
        raise InputError(f"{what} {x} is not an element code of {F!r}")
    return x


def pointset_from_json(obj: Any) -> PointSet:
    """Accepts PointSet JSON and anything embedding it (construction records)."""
    if not isinstance(obj, dict) or "field" not in obj or "points" not in obj:
        raise InputError("expected an object with 'field' and 'points'")
    F = field_from_json(obj["field"])
    if not isinstance(obj["points"], list):
        raise InputError("'points' must be a list")
    pts = []
    for P in obj["points"]:
        coords = _int_list(P, "point coordinate")
        if len(coords) != 3:
            raise InputError(f"point {P!r} needs 3 coordinates")
        pts.append(tuple(field_element(F, c, "point coordinate") for c in coords))
    try:
        return PointSet(F, pts)
    except GeometryError as e:
        raise InputError(str(e)) from e


def collineation_from_json(F: Field, obj: Any) -> Collineation:
    if not isinstance(obj, dict) or "matrix" not in obj:
        raise InputError("collineation must be an object with 'matrix'")
    rows = obj["matrix"]
    if not isinstance(rows, list) or len(rows) != 3:
        raise InputError("matrix must have 3 rows")
    M = tuple(tuple(field_element(F, x, "matrix entry") for x in _int_list(r, "matrix row")) for r in rows)
    if any(len(r) != 3 for r in M):
        raise InputError("matrix rows must have 3 entries")
    try:
        return Collineation(F, M, _int(obj.get("frobenius", 0), "frobenius"))
    except GeometryError as e:
        raise InputError(str(e)) from e


def parse_group(spec: str) -> tuple[AbelianGroup, Optional[FieldModel]]:
    """'add:q', 'mult:q' or 'cyclic:n1,n2,...'."""
    kind, _, arg = spec.partition(":")
    try:
        if kind in ("add", "mult"):
            F = field_of_order(int(arg))
            model = additive_model(F) if kind == "add" else multiplicative_model(F)
            return model.group, model
        if kind == "cyclic":
            return AbelianGroup(tuple(int(n) for n in arg.split(","))), None
    except (ValueError, FieldError, ArrowError) as e:
        raise InputError(f"bad group {spec!r}: {e}") from e
    raise InputError(f"bad group {spec!r}: expected add:q, mult:q or cyclic:n1,n2,...")


def _group_element(G: AbelianGroup, x: Any):
    if isinstance(x, list):
        x = tuple(_int(v, "group element") for v in x)
    else:
        x = _int(x, "group element")
    try:
        return G.element(x)
    except ArrowError as e:
        raise InputError(str(e)) from e


def triple_from_json(obj: Any) -> ArrowTriple:
    if not isinstance(obj, dict) or any(k not in obj for k in ("group", "A", "B", "C")):
        raise InputError("triple must be an object with 'group', 'A', 'B', 'C'")
    try:
        G = AbelianGroup(tuple(_int_list(obj["group"], "group order")))
    except ArrowError as e:
        raise InputError(str(e)) from e
    comps = []
    for name in "ABC":
        if not isinstance(obj[name], list):
            raise InputError(f"component {name} must be a list")
        comps.append(frozenset(_group_element(G, x) for x in obj[name]))
    try:
        return ArrowTriple(G, *comps)
    except ArrowError as e:
        raise InputError(str(e)) from e


def model_for_case(G: AbelianGroup, case: str) -> FieldModel:
    """The field model whose group is G: (GF(q),+) for concurrent, GF(q)* for triangle."""
    try:
        if case == "concurrent":
            p = G.orders[0]
            if any(n != p for n in G.orders):
                raise InputError(f"group {list(G.orders)} is not elementary abelian")
            model = additive_model(make_field(p, len(G.orders)))
        else:
            if len(G.orders) != 1:
                raise InputError(f"group {list(G.orders)} is not cyclic")
            model = multiplicative_model(field_of_order(G.orders[0] + 1))
    except (FieldError, ArrowError) as e:
        raise InputError(f"group {list(G.orders)} is not a field group for the {case} case: {e}") from e
    if model.group != G:
        raise InputError(f"group {list(G.orders)} does not match {model.field!r}")
    return model


def parse_int_set(text: str) -> frozenset[int]:
    try:
        return frozenset(int(x) for x in text.split(",") if x.strip())
    except ValueError as e:
        raise InputError(f"bad integer list {text!r}") from e
