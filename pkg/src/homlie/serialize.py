"""JSON round-tripping for algebras and actions.

Algebra documents look like::

    {"field": "rational" | {"prime": p}, "dim": n, "basis": [...],
     "bracket": [{"i": i, "j": j, "value": [...]}, ...],
     "alpha": [[...], ...]}

with i < j, zero brackets omitted, and ``alpha[i]`` the coordinates of
alpha(e_i).  Rationals are written as "p/q" strings, prime-field elements
as integers.  Indices are 0-based.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .actions import HomAction
from .algebra import HomLieAlgebra
from .exactlin import GF, QQ, Field


class ParseError(ValueError):
    """The document does not describe an algebra or action."""


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def field_from_json(doc) -> Field:
    if doc == "rational" or doc is None:
        return QQ
    if isinstance(doc, dict) and set(doc) == {"prime"} and isinstance(doc["prime"], int):
        try:
            return GF(doc["prime"])
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    raise ParseError(f"unknown field {doc!r}")


def _vector(F: Field, data, n: int, what: str):
    if not isinstance(data, list) or len(data) != n:
        raise ParseError(f"{what}: expected a list of length {n}")
    try:
        return F.array(data)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{what}: {exc}") from None


def algebra_to_json(L: HomLieAlgebra) -> dict:
    F = L.field
    brackets = []
    for (i, j), v in sorted(L.upper_brackets().items()):
        brackets.append({"i": int(i), "j": int(j), "value": [F.to_json(x) for x in v]})
    doc = {
        "field": F.field_json(),
        "dim": L.dim,
        "basis": list(L.basis_names),
        "bracket": brackets,
        "alpha": [[F.to_json(x) for x in L.alpha[:, i]] for i in range(L.dim)],
    }
    if L.name:
        doc["name"] = L.name
    return doc


def algebra_from_json(doc) -> HomLieAlgebra:
    if not isinstance(doc, dict):
        raise ParseError("algebra document must be an object")
    F = field_from_json(doc.get("field", "rational"))
    n = doc.get("dim")
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ParseError("dim must be a non-negative integer")
    names = doc.get("basis")
    if names is not None and (not isinstance(names, list) or len(names) != n
                              or not all(isinstance(b, str) for b in names)):
        raise ParseError("basis must be a list of dim strings")
    table = F.zeros((n, n, n))
    seen = set()
    for entry in doc.get("bracket", []):
        if not isinstance(entry, dict) or not {"i", "j", "value"} <= set(entry):
            raise ParseError("bracket entries need i, j and value")
        i, j = entry["i"], entry["j"]
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in (i, j)):
            raise ParseError("bracket indices must be integers")
        if not 0 <= i < j < n:
            raise ParseError(f"bracket index pair ({i}, {j}) must satisfy 0 <= i < j < dim")
        if (i, j) in seen:
            raise ParseError(f"duplicate bracket ({i}, {j})")
        seen.add((i, j))
        v = _vector(F, entry["value"], n, f"bracket ({i}, {j})")
        table[i, j] = v
        table[j, i] = F.neg(v)
    alpha_doc = doc.get("alpha")
    if alpha_doc is None:
        alpha = F.eye(n)
    else:
        if not isinstance(alpha_doc, list) or len(alpha_doc) != n:
            raise ParseError("alpha must list the image of every basis vector")
        alpha = F.zeros((n, n))
        for i, row in enumerate(alpha_doc):
            alpha[:, i] = _vector(F, row, n, f"alpha[{i}]")
    return HomLieAlgebra(F, table, alpha, names, name=str(doc.get("name", "")))


def action_to_json(act: HomAction) -> dict:
    F = act.actor.field
    entries = []
    for a in range(act.actor.dim):
        for b in range(act.actee.dim):
            v = act.tensor[a, b]
            if np.any(v != 0):
                entries.append({"i": a, "j": b, "value": [F.to_json(x) for x in v]})
    return {"actor": algebra_to_json(act.actor), "actee": algebra_to_json(act.actee), "action": entries}


def action_from_json(doc, check: bool = True) -> HomAction:
    if not isinstance(doc, dict) or not {"actor", "actee"} <= set(doc):
        raise ParseError("action document needs actor and actee")
    L = algebra_from_json(doc["actor"])
    M = algebra_from_json(doc["actee"])
    if L.field != M.field:
        raise ParseError("actor and actee over different fields")
    F = L.field
    T = F.zeros((L.dim, M.dim, M.dim))
    for entry in doc.get("action", []):
        if not isinstance(entry, dict) or not {"i", "j", "value"} <= set(entry):
            raise ParseError("action entries need i, j and value")
        i, j = entry["i"], entry["j"]
        if not (isinstance(i, int) and isinstance(j, int) and 0 <= i < L.dim and 0 <= j < M.dim):
            raise ParseError(f"action index pair ({i}, {j}) out of range")
        T[i, j] = _vector(F, entry["value"], M.dim, f"action ({i}, {j})")
    return HomAction(L, M, T, check=check)


def load_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from None


def load_algebra(path) -> HomLieAlgebra:
    return algebra_from_json(load_json(path))


def save_algebra(L: HomLieAlgebra, path) -> None:
    Path(path).write_text(dumps(algebra_to_json(L)) + "\n")


def subspace_to_json(S) -> dict:
    return {"dim": S.dim, "basis": S.to_json()}


def matrix_to_json(F: Field, m) -> list:
    return [[F.to_json(x) for x in row] for row in np.asarray(m)]
