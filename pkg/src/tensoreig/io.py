"""JSON documents for maps, forms and analysis reports.

Input documents::

    {"map":  {"n": 3, "m": 2, "field": "rational-real",
              "coeffs": [{"j": 1, "exponents": [0, 1, 1], "value": "1/3"}, ...]}}
    {"form": {"n": 3, "degree": 3,
              "terms": [{"exponents": [1, 1, 1], "value": "1"}]}}

``field`` is ``"real"``, ``"complex"`` or one of the precise tags
``rational-real``, ``float-real``, ``float-complex``.  Components ``j`` are
1-based.  Values are strings: integers, ``p/q``, decimals, or (for complex
fields) Python complex literals such as ``"1-2j"``.  Without a field, or
with ``"real"``, values that all parse as rationals are kept exact.
"""
from __future__ import annotations

import json
from fractions import Fraction
from numbers import Rational

import numpy as np

from .tensor_core import COMPLEX, FLOAT, RATIONAL, Form, HomogeneousMap

SCHEMA_VERSION = 1


class SchemaError(ValueError):
    """Input document does not match the schema; the message names the entry."""


def _value(raw, field: str | None, where: str):
    if isinstance(raw, bool) or not isinstance(raw, (str, int)):
        raise SchemaError(f"{where}: value must be a string, got {raw!r}")
    text = str(raw).strip()
    try:
        if field == COMPLEX:
            return complex(text.replace(" ", ""))
        if field == FLOAT:
            return float(Fraction(text))
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        if field is None:
            try:
                return complex(text.replace(" ", ""))
            except ValueError:
                pass
        raise SchemaError(f"{where}: cannot parse value {raw!r}") from None


def _int(obj: dict, key: str, where: str, minimum: int = 1) -> int:
    if key not in obj:
        raise SchemaError(f"{where}: missing '{key}'")
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
        raise SchemaError(f"{where}.{key}: expected an integer >= {minimum}, got {v!r}")
    return v


def _exponents(entry: dict, n: int, total: int, where: str) -> tuple[int, ...]:
    e = entry.get("exponents")
    if not isinstance(e, list) or len(e) != n or any(isinstance(i, bool) or not isinstance(i, int) or i < 0
                                                      for i in e):
        raise SchemaError(f"{where}.exponents: expected {n} nonnegative integers, got {e!r}")
    if sum(e) != total:
        raise SchemaError(f"{where}.exponents: {e} sums to {sum(e)}, expected {total}")
    return tuple(e)


_FIELD_ALIASES = {"real": None, "complex": COMPLEX}


def _field(body: dict, where: str) -> str | None:
    f = body.get("field")
    if f in _FIELD_ALIASES:
        return _FIELD_ALIASES[f]
    if f is not None and f not in (RATIONAL, FLOAT, COMPLEX):
        raise SchemaError(f"{where}.field: unknown field {f!r}")
    return f


def _finish_values(values: list, field: str | None) -> list:
    if field is None and any(isinstance(v, complex) for v in values):
        return [complex(v) for v in values]
    return values


def parse_input(document) -> HomogeneousMap | Form:
    """Build a map or form from a document (dict, JSON text or file object)."""
    if hasattr(document, "read"):
        document = document.read()
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(document, dict) or len(set(document) & {"map", "form"}) != 1:
        raise SchemaError("top level must contain exactly one of 'map' or 'form'")
    if "map" in document:
        body, where = document["map"], "map"
        if not isinstance(body, dict):
            raise SchemaError("map: expected an object")
        n, m = _int(body, "n", where), _int(body, "m", where)
        field = _field(body, where)
        rows = body.get("coeffs")
        if not isinstance(rows, list):
            raise SchemaError("map.coeffs: expected a list")
        keys, values = [], []
        for i, row in enumerate(rows):
            w = f"map.coeffs[{i}]"
            if not isinstance(row, dict):
                raise SchemaError(f"{w}: expected an object")
            j = _int(row, "j", w)
            if j > n:
                raise SchemaError(f"{w}.j: component {j} exceeds n={n}")
            key = (j - 1, _exponents(row, n, m, w))
            if key in keys:
                raise SchemaError(f"{w}: duplicate entry for j={j}, exponents={list(key[1])}")
            keys.append(key)
            values.append(_value(row.get("value"), field, f"{w}.value"))
        values = _finish_values(values, field)
        try:
            return HomogeneousMap(n, m, dict(zip(keys, values)))
        except ValueError as exc:
            raise SchemaError(f"map: {exc}") from None
    body, where = document["form"], "form"
    if not isinstance(body, dict):
        raise SchemaError("form: expected an object")
    n, d = _int(body, "n", where), _int(body, "degree", where)
    field = _field(body, where)
    rows = body.get("terms")
    if not isinstance(rows, list):
        raise SchemaError("form.terms: expected a list")
    keys, values = [], []
    for i, row in enumerate(rows):
        w = f"form.terms[{i}]"
        if not isinstance(row, dict):
            raise SchemaError(f"{w}: expected an object")
        e = _exponents(row, n, d, w)
        if e in keys:
            raise SchemaError(f"{w}: duplicate exponents {list(e)}")
        keys.append(e)
        values.append(_value(row.get("value"), field, f"{w}.value"))
    values = _finish_values(values, field)
    if not any(v != 0 for v in values):
        raise SchemaError("form: all terms vanish")
    return Form(n, d, dict(zip(keys, values)))


def format_number(x) -> str:
    """Exact rationals as ``p/q``, floats with 15 significant digits."""
    if isinstance(x, Rational):
        return str(Fraction(x))
    if isinstance(x, (complex, np.complexfloating)):
        return f"{format_number(float(x.real))}{'+' if x.imag >= 0 else '-'}{format_number(abs(float(x.imag)))}j"
    v = float(x)
    return "0" if v == 0 else f"{v:.15g}"


def to_jsonable(x):
    """Recursively convert numbers/arrays into deterministic JSON values.

    Rationals become ``"p/q"`` strings, floats are rounded to 15 significant
    digits, complex numbers become ``{"re", "im"}``.
    """
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return int(x)
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else str(x.numerator)
    if isinstance(x, (complex, np.complexfloating)):
        if x.imag == 0:
            return to_jsonable(float(x.real))
        return {"re": to_jsonable(float(x.real)), "im": to_jsonable(float(x.imag))}
    if isinstance(x, (float, np.floating)):
        v = float(x)
        if not np.isfinite(v):
            return str(v)
        return float(f"{v:.15g}") + 0.0
    if isinstance(x, np.ndarray):
        return [to_jsonable(v) for v in x.tolist()] if x.dtype != object else [to_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _exact_str(c) -> str:
    if isinstance(c, Rational):
        return str(Fraction(c))
    return repr(complex(c)) if isinstance(c, complex) else repr(float(c))


def serialize(obj) -> dict:
    """Document for a map or form that :func:`parse_input` reads back."""
    if isinstance(obj, HomogeneousMap):
        rows = [{"j": j + 1, "exponents": list(e), "value": _exact_str(c)}
                for (j, e), c in sorted(obj.coeffs.items(), key=lambda kv: (kv[0][0], [-i for i in kv[0][1]]))]
        return {"map": {"n": obj.n, "m": obj.m, "field": obj.field_tag, "coeffs": rows}}
    if isinstance(obj, Form):
        rows = [{"exponents": list(e), "value": _exact_str(c)} for e, c in obj.terms.items()]
        return {"form": {"n": obj.n, "degree": obj.degree, "field": obj.field_tag, "terms": rows}}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(report: dict) -> str:
    doc = {"schema_version": SCHEMA_VERSION}
    doc.update(to_jsonable(report))
    return json.dumps(doc, indent=2) + "\n"
