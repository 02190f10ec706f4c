"""JSON formats for complexes, functions, merge trees, barcodes and maps.

Every parser rejects unknown fields and reports problems as
:class:`InputError` carrying a JSON pointer to the offending value.

Formats::

    complex   {"maximal_simplices": [["a", "b"], ...]}
              {"cells": [{"id": "a", "dim": 0}, ...],
               "covers": [{"lower": "a", "upper": "ab", "regular": true}, ...],
               "regular": true}
    function  {"values": {"a": "0", "ab": "3/2"}}          (optional "morse")
    tree      {"nodes": [{"id": "a", "parent": "r", "value": "0"}, ...]}
    barcode   {"bars": [{"id": "b1", "birth": "0", "death": "2"}, ...]}
    map       {"source": <complex or path>, "target": <complex or path>,
               "assignment": {"a": "a", ...}}

Values are integers or decimal/rational strings and are parsed exactly.
"""

from __future__ import annotations

import json
from decimal import Decimal
from pathlib import Path
from typing import Any, Callable, TypeVar

from .barcode import Barcode
from .cw_complex import Cell, Complex, CoverRelation
from .discrete_morse import DiscreteFunction, as_function
from .merge_tree import MergeTree
from .morphisms import CellMap
from .values import parse_value

T = TypeVar("T")


class InputError(ValueError):
    def __init__(self, pointer: str, message: str) -> None:
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer or "/"
        self.message = message


def _escape(key: str) -> str:
    return key.replace("~", "~0").replace("/", "~1")


def load_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh, parse_float=Decimal)
    except FileNotFoundError:
        raise InputError("", f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError("", f"malformed JSON in {path}: {exc.msg} at line {exc.lineno}") from None


def _object(obj: Any, ptr: str, required: set[str], optional: set[str] = frozenset()) -> dict:
    if not isinstance(obj, dict):
        raise InputError(ptr, "expected an object")
    for key in sorted(obj):
        if key not in required and key not in optional:
            raise InputError(f"{ptr}/{_escape(key)}", "unknown field")
    for key in sorted(required):
        if key not in obj:
            raise InputError(f"{ptr}/{_escape(key)}", "missing field")
    return obj


def _list(obj: Any, ptr: str) -> list:
    if not isinstance(obj, list):
        raise InputError(ptr, "expected an array")
    return obj


def _string(obj: Any, ptr: str) -> str:
    if not isinstance(obj, str) or not obj:
        raise InputError(ptr, "expected a non-empty string")
    return obj


def _value(obj: Any, ptr: str):
    if isinstance(obj, bool) or not isinstance(obj, (int, str, Decimal)):
        raise InputError(ptr, "expected an integer or a rational string")
    try:
        return parse_value(obj)
    except (TypeError, ValueError) as exc:
        raise InputError(ptr, str(exc)) from None


def _wrap(ptr: str, build: Callable[[], T]) -> T:
    try:
        return build()
    except InputError:
        raise
    except (TypeError, ValueError) as exc:
        raise InputError(ptr, str(exc)) from None


# -- complexes ---------------------------------------------------------------------


def parse_complex(obj: Any, ptr: str = "") -> Complex:
    if isinstance(obj, dict) and "maximal_simplices" in obj:
        _object(obj, ptr, {"maximal_simplices"})
        simplices = []
        for i, s in enumerate(_list(obj["maximal_simplices"], f"{ptr}/maximal_simplices")):
            sp = f"{ptr}/maximal_simplices/{i}"
            verts = [_string(v, f"{sp}/{j}") for j, v in enumerate(_list(s, sp))]
            if not verts:
                raise InputError(sp, "empty simplex")
            if len(set(verts)) != len(verts):
                raise InputError(sp, "duplicate vertex in simplex")
            simplices.append(verts)
        return _wrap(ptr, lambda: Complex.from_maximal_simplices(simplices))

    obj = _object(obj, ptr, {"cells", "covers"}, {"regular"})
    regular = obj.get("regular", True)
    if not isinstance(regular, bool):
        raise InputError(f"{ptr}/regular", "expected a boolean")
    cells = []
    for i, c in enumerate(_list(obj["cells"], f"{ptr}/cells")):
        cp = f"{ptr}/cells/{i}"
        _object(c, cp, {"id", "dim"})
        dim = c["dim"]
        if isinstance(dim, bool) or not isinstance(dim, int) or dim < 0:
            raise InputError(f"{cp}/dim", "expected a non-negative integer")
        cells.append(Cell(_string(c["id"], f"{cp}/id"), dim))
    covers = []
    for i, c in enumerate(_list(obj["covers"], f"{ptr}/covers")):
        cp = f"{ptr}/covers/{i}"
        _object(c, cp, {"lower", "upper"}, {"regular"})
        flag = c.get("regular", True)
        if not isinstance(flag, bool):
            raise InputError(f"{cp}/regular", "expected a boolean")
        covers.append(CoverRelation(_string(c["lower"], f"{cp}/lower"), _string(c["upper"], f"{cp}/upper"), flag))
    return _wrap(ptr, lambda: Complex(cells, covers, regular=regular))


def complex_to_dict(X: Complex) -> dict:
    return {
        "cells": [{"id": c.id, "dim": c.dim} for c in X.cells],
        "covers": [{"lower": c.lower, "upper": c.upper, "regular": c.regular} for c in X.covers],
        "regular": X.regular,
    }


# -- functions ------------------------------------------------------------------------


def parse_function(obj: Any, X: Complex | None = None, ptr: str = "") -> DiscreteFunction:
    obj = _object(obj, ptr, {"values"}, {"morse"})
    vals = obj["values"]
    if not isinstance(vals, dict):
        raise InputError(f"{ptr}/values", "expected an object")
    parsed = {k: _value(v, f"{ptr}/values/{_escape(k)}") for k, v in vals.items()}
    f = DiscreteFunction(parsed)
    if X is not None:
        f = _wrap(f"{ptr}/values", lambda: as_function(X, f))
    return f


def function_to_dict(f: DiscreteFunction) -> dict:
    return {"values": f.to_dict()}


# -- merge trees and barcodes -----------------------------------------------------------


def parse_tree(obj: Any, ptr: str = "") -> MergeTree:
    obj = _object(obj, ptr, {"nodes"})
    parent: dict[str, str | None] = {}
    values = {}
    witnesses = {}
    has_values = None
    for i, n in enumerate(_list(obj["nodes"], f"{ptr}/nodes")):
        np_ = f"{ptr}/nodes/{i}"
        _object(n, np_, {"id", "parent"}, {"value", "witnesses"})
        nid = _string(n["id"], f"{np_}/id")
        if nid in parent:
            raise InputError(f"{np_}/id", f"duplicate node id {nid!r}")
        p = n["parent"]
        parent[nid] = None if p is None else _string(p, f"{np_}/parent")
        if has_values is None:
            has_values = "value" in n
        elif has_values != ("value" in n):
            raise InputError(f"{np_}/value", "either all nodes carry values or none")
        if "value" in n:
            values[nid] = _value(n["value"], f"{np_}/value")
        if "witnesses" in n:
            wp = f"{np_}/witnesses"
            witnesses[nid] = [_string(w, f"{wp}/{j}") for j, w in enumerate(_list(n["witnesses"], wp))]
    return _wrap(f"{ptr}/nodes", lambda: MergeTree(parent, values if has_values else None, witnesses))


def parse_barcode(obj: Any, ptr: str = "") -> Barcode:
    obj = _object(obj, ptr, {"bars"})
    bars = {}
    sources = {}
    for i, b in enumerate(_list(obj["bars"], f"{ptr}/bars")):
        bp = f"{ptr}/bars/{i}"
        _object(b, bp, {"id", "birth", "death"}, {"nodes"})
        bid = _string(b["id"], f"{bp}/id")
        if bid in bars:
            raise InputError(f"{bp}/id", f"duplicate bar id {bid!r}")
        bars[bid] = (_value(b["birth"], f"{bp}/birth"), _value(b["death"], f"{bp}/death"))
        if "nodes" in b:
            nodes = [_string(x, f"{bp}/nodes/{j}") for j, x in enumerate(_list(b["nodes"], f"{bp}/nodes"))]
            if len(nodes) != 2:
                raise InputError(f"{bp}/nodes", "expected two node ids")
            sources[bid] = tuple(nodes)
    return _wrap(f"{ptr}/bars", lambda: Barcode(bars, sources))


# -- maps ------------------------------------------------------------------------------------


def parse_map(obj: Any, base: Path | None = None, ptr: str = "") -> CellMap:
    obj = _object(obj, ptr, {"source", "target", "assignment"})

    def side(key: str) -> Complex:
        ref = obj[key]
        if isinstance(ref, str):
            path = Path(ref)
            if base is not None and not path.is_absolute():
                path = base / path
            try:
                return parse_complex(load_json(path))
            except InputError as exc:
                raise InputError(f"{ptr}/{key}", f"in {path}: {exc}") from None
        return parse_complex(ref, f"{ptr}/{key}")

    source, target = side("source"), side("target")
    amap = obj["assignment"]
    if not isinstance(amap, dict):
        raise InputError(f"{ptr}/assignment", "expected an object")
    assignment = {k: _string(v, f"{ptr}/assignment/{_escape(k)}") for k, v in amap.items()}
    return _wrap(f"{ptr}/assignment", lambda: CellMap(source, target, assignment))


def dumps(obj: Any) -> str:
    """Deterministic JSON text."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
