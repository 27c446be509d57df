"""JSON encoding of fields, matrices, subspaces and families.

Scalars are always strings on output.  On input a scalar may also be a JSON
integer or a coefficient list; floats are rejected.  Every decoding error is
a :class:`JsonFormatError` whose message starts with the location of the
offending value, e.g. ``$.matrices[2].rows[0][1]``.
"""

from __future__ import annotations

import json

from .errors import MatgenError
from .exactfield import Field, parse_field
from .linalg import Matrix, Subspace


class JsonFormatError(MatgenError, ValueError):
    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


def loads(text: str, source: str = "<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise JsonFormatError(f"{source}:{e.lineno}:{e.colno}", e.msg) from None


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


def field_json(f: Field) -> str:
    return str(f)


def _field_at(obj, field: Field | None, where: str) -> Field:
    spec = obj.get("field") if isinstance(obj, dict) else None
    if spec is None:
        if field is None:
            raise JsonFormatError(where, "no field given (add \"field\" or pass --field)")
        return field
    if not isinstance(spec, str):
        raise JsonFormatError(f"{where}.field", "field spec must be a string")
    try:
        f = parse_field(spec)
    except (ValueError, TypeError) as e:
        raise JsonFormatError(f"{where}.field", str(e)) from None
    if field is not None and f != field:
        raise JsonFormatError(f"{where}.field", f"{f} does not match --field {field}")
    return f


def scalar_from_json(f: Field, x, where: str):
    if isinstance(x, bool) or isinstance(x, float):
        raise JsonFormatError(where, f"scalar must be a string, integer or coefficient list, not {x!r}")
    try:
        if isinstance(x, str):
            return f.parse(x)
        if isinstance(x, int):
            return f.convert(x)
        if isinstance(x, list) and all(isinstance(c, int) and not isinstance(c, bool) for c in x):
            return f.from_coeffs(x)
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise JsonFormatError(where, f"bad scalar {x!r} for {f}: {e}") from None
    raise JsonFormatError(where, f"bad scalar {x!r}")


def _rows_from_json(f: Field, rows, where: str):
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise JsonFormatError(where, "expected a list of rows")
    return [[scalar_from_json(f, x, f"{where}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(rows)]


def matrix_json(m: Matrix) -> dict:
    return {"field": str(m.field), "rows": m.to_strings()}


def matrix_from_json(obj, field: Field | None = None, where: str = "$") -> Matrix:
    if isinstance(obj, list):
        if field is None:
            raise JsonFormatError(where, "a bare row list needs --field")
        f, rows = field, obj
        rwhere = where
    elif isinstance(obj, dict):
        if "rows" not in obj:
            raise JsonFormatError(where, "matrix object needs \"rows\"")
        f = _field_at(obj, field, where)
        rows = obj["rows"]
        rwhere = f"{where}.rows"
    else:
        raise JsonFormatError(where, "expected a matrix object")
    raw = _rows_from_json(f, rows, rwhere)
    if not raw or any(len(r) != len(raw[0]) for r in raw) or not raw[0]:
        raise JsonFormatError(rwhere, "rows must be nonempty and of equal length")
    return Matrix._raw(f, raw)


def subspace_json(V: Subspace) -> dict:
    return {"field": str(V.field), "n": V.n, "basis": [[V.field.format(x) for x in r] for r in V.basis]}


def subspace_from_json(obj, field: Field | None = None, where: str = "$") -> Subspace:
    if not isinstance(obj, dict) or "basis" not in obj:
        raise JsonFormatError(where, "subspace object needs \"basis\"")
    f = _field_at(obj, field, where)
    basis = _rows_from_json(f, obj["basis"], f"{where}.basis")
    n = obj.get("n")
    if n is None:
        if not basis:
            raise JsonFormatError(where, "the zero subspace needs \"n\"")
        n = len(basis[0])
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise JsonFormatError(f"{where}.n", "n must be a positive integer")
    if any(len(r) != n for r in basis):
        raise JsonFormatError(f"{where}.basis", f"basis vectors must have length {n}")
    return Subspace(f, n, basis)


def _items(obj, keys, where):
    """The list inside ``obj``: the object itself or the first of ``keys`` present."""
    if isinstance(obj, list):
        return obj, where
    if isinstance(obj, dict):
        for k in keys:
            if k in obj:
                if not isinstance(obj[k], list):
                    raise JsonFormatError(f"{where}.{k}", "expected a list")
                return obj[k], f"{where}.{k}"
    raise JsonFormatError(where, f"expected a list or an object with one of {list(keys)}")


def matrices_from_json(obj, field: Field | None = None, where: str = "$") -> list[Matrix]:
    items, w = _items(obj, ("matrices",), where)
    if isinstance(obj, dict) and field is None and isinstance(obj.get("field"), str):
        field = _field_at(obj, None, where)
    out = [matrix_from_json(m, field, f"{w}[{i}]") for i, m in enumerate(items)]
    if out:
        f, shape = out[0].field, out[0].shape
        for i, m in enumerate(out):
            if m.field != f:
                raise JsonFormatError(f"{w}[{i}]", f"field {m.field} differs from {f}")
            if m.shape != shape:
                raise JsonFormatError(f"{w}[{i}]", f"shape {m.shape} differs from {shape}")
    return out


def subspaces_from_json(obj, field: Field | None = None, where: str = "$") -> list[Subspace]:
    items, w = _items(obj, ("subspaces", "family", "witnesses"), where)
    if isinstance(obj, dict) and field is None and isinstance(obj.get("field"), str):
        field = _field_at(obj, None, where)
    out = []
    for i, V in enumerate(items):
        if isinstance(V, list):
            # bare basis (as in classification witness lists)
            V = {"basis": V}
        out.append(subspace_from_json(V, field, f"{w}[{i}]"))
    if out and any(V.n != out[0].n or V.field != out[0].field for V in out):
        raise JsonFormatError(w, "subspaces must share one ambient space")
    return out


def matrices_json(ms) -> list[dict]:
    return [matrix_json(m) for m in ms]

