"""JSON algebra documents and result documents.

An algebra document looks like::

    {
      "name": "kronecker",
      "comment": "two parallel arrows",
      "builder": {"quiver": {"vertices": 2, "arrows": [[0, 1], [0, 1]]}},
      "bracket": {"kind": "standard", "lambda": "1"}
    }

or, with explicit tables::

    {
      "name": "dual-numbers",
      "dim": 2,
      "basis": ["1", "x"],
      "unit": ["1", "0"],
      "mult": [[0, 0, 0, "1"], [0, 1, 1, "1"], [1, 0, 1, "1"]],
      "bracket": {"kind": "trivial"}
    }

Explicit brackets use ``{"kind": "explicit", "entries": [[i, j, k, "c"], ...]}``
meaning {v_i, v_j} contains c·v_k; only the listed pairs are read, so both
(i, j) and (j, i) must be given.  Every scalar is an integer or a "p/q" string.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any, Dict, List, Optional

from .algebra import (
    FiniteDimAlgebra,
    LieBracketTable,
    PoissonAlgebra,
    Quiver,
    matrix_algebra,
    path_algebra,
    require_valid,
    standard_poisson,
    table_entries,
    trivial_poisson,
)
from .errors import ParseError, StructureError
from .linalg import as_scalar, scalar_str

TOOL_VERSION = "0.1.0"

_KEYS = {"name", "comment", "dim", "basis", "unit", "mult", "bracket", "builder", "order"}


def _scalar(value, where: str):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ParseError(f"expected an integer or a rational string, got {value!r}", where)
    try:
        return as_scalar(value)
    except (ValueError, TypeError, ZeroDivisionError) as err:
        raise ParseError(f"bad rational {value!r} ({err})", where) from None


def _index(value, dim: int, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"expected an integer index, got {value!r}", where)
    if not 0 <= value < dim:
        raise ParseError(f"index {value} out of range for dim {dim}", where)
    return value


def _entries(raw, dim: int, where: str) -> Dict:
    if not isinstance(raw, list):
        raise ParseError("expected a list of [i, j, k, coefficient] entries", where)
    out: Dict = {}
    for n, item in enumerate(raw):
        w = f"{where}[{n}]"
        if not isinstance(item, list) or len(item) != 4:
            raise ParseError("entry must be [i, j, k, coefficient]", w)
        i, j, k = (_index(item[p], dim, w) for p in range(3))
        c = _scalar(item[3], w)
        cell = out.setdefault((i, j), {})
        cell[k] = cell.get(k, 0) + c
    return out


def _builder(raw) -> FiniteDimAlgebra:
    if not isinstance(raw, dict) or len(raw) != 1:
        raise ParseError("builder must have exactly one of 'quiver' or 'matrix'", "builder")
    if "matrix" in raw:
        n = raw["matrix"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ParseError("matrix size must be a positive integer", "builder.matrix")
        return matrix_algebra(n)
    if "quiver" in raw:
        q = raw["quiver"]
        if not isinstance(q, dict) or "vertices" not in q or "arrows" not in q:
            raise ParseError("quiver needs 'vertices' and 'arrows'", "builder.quiver")
        nv = q["vertices"]
        if isinstance(nv, bool) or not isinstance(nv, int) or nv < 1:
            raise ParseError("vertex count must be a positive integer", "builder.quiver.vertices")
        arrows = []
        for n, arr in enumerate(q["arrows"]):
            w = f"builder.quiver.arrows[{n}]"
            if not isinstance(arr, list) or len(arr) != 2:
                raise ParseError("arrow must be [source, target]", w)
            arrows.append((_index(arr[0], nv, w), _index(arr[1], nv, w)))
        try:
            return path_algebra(Quiver(nv, tuple(arrows)))
        except StructureError as err:
            raise ParseError(str(err), "builder.quiver") from None
    raise ParseError(f"unknown builder {sorted(raw)}", "builder")


def parse_document(doc: Dict[str, Any], validate: bool = True) -> PoissonAlgebra:
    """Build a PoissonAlgebra from an already-decoded document."""
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    unknown = set(doc) - _KEYS
    if unknown:
        raise ParseError(f"unknown fields {sorted(unknown)}")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise ParseError("name must be a string", "name")

    if "builder" in doc:
        clash = {"mult", "unit", "basis"} & set(doc)
        if clash:
            raise ParseError(f"builder and explicit tables are mutually exclusive ({sorted(clash)})", "builder")
        A = _builder(doc["builder"])
        if "dim" in doc and doc["dim"] != A.dim:
            raise ParseError(f"builder gives dim {A.dim}, document says {doc['dim']}", "dim")
    else:
        for key in ("dim", "unit", "mult"):
            if key not in doc:
                raise ParseError("missing field", key)
        dim = doc["dim"]
        if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
            raise ParseError("dim must be a positive integer", "dim")
        unit = doc["unit"]
        if not isinstance(unit, list) or len(unit) != dim:
            raise ParseError(f"unit must list {dim} coefficients", "unit")
        unit = [_scalar(c, f"unit[{n}]") for n, c in enumerate(unit)]
        labels = doc.get("basis") or [f"v{k}" for k in range(dim)]
        if not isinstance(labels, list) or len(labels) != dim or not all(isinstance(s, str) for s in labels):
            raise ParseError(f"basis must list {dim} labels", "basis")
        mult = _entries(doc["mult"], dim, "mult")
        try:
            A = FiniteDimAlgebra.from_entries(dim, mult, unit, tuple(labels))
        except StructureError as err:
            raise ParseError(str(err), "mult") from None

    br = doc.get("bracket", {"kind": "trivial"})
    if not isinstance(br, dict) or "kind" not in br:
        raise ParseError("bracket must be an object with a 'kind'", "bracket")
    kind = br["kind"]
    if kind == "standard":
        lam = _scalar(br.get("lambda", "1"), "bracket.lambda")
        P = standard_poisson(A, lam, name)
    elif kind == "trivial":
        P = trivial_poisson(A, name)
    elif kind == "explicit":
        entries = _entries(br.get("entries", []), A.dim, "bracket.entries")
        P = PoissonAlgebra(A, LieBracketTable.from_entries(A.dim, entries), name=name)
    else:
        raise ParseError(f"unknown bracket kind {kind!r}", "bracket.kind")

    if "order" in doc:
        order = doc["order"]
        if not isinstance(order, list) or sorted(order) != list(range(A.dim)):
            raise ParseError("order must be a permutation of the basis indices", "order")
        P = PoissonAlgebra(P.algebra, P.bracket, tuple(order), name)
    if validate:
        require_valid(P)
    return P


def parse_algebra(text: str, validate: bool = True) -> PoissonAlgebra:
    """Parse a JSON algebra document; errors carry the offending field or line."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(err.msg, f"line {err.lineno} column {err.colno}") from None
    return parse_document(doc, validate)


def document_comment(text: str) -> str:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        return ""
    return doc.get("comment", "") if isinstance(doc, dict) else ""


def _flat_entries(table) -> List[list]:
    out = []
    for (i, j), cell in sorted(table_entries(table).items()):
        for k, c in sorted(cell.items()):
            out.append([i, j, k, scalar_str(c)])
    return out


def serialize_algebra(P: PoissonAlgebra, comment: str = "") -> Dict[str, Any]:
    """Explicit-table document for P (always explicit, whatever it was built from)."""
    doc: Dict[str, Any] = {
        "name": P.name,
        "dim": P.dim,
        "basis": list(P.labels),
        "unit": [scalar_str(c) for c in P.algebra.unit],
        "mult": _flat_entries(P.algebra.mult),
        "bracket": {"kind": "explicit", "entries": _flat_entries(P.bracket.bracket)},
        "order": list(P.order),
    }
    if comment:
        doc["comment"] = comment
    return doc


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


def input_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def result_document(
    command: str,
    text: str,
    payload: Dict[str, Any],
    arguments: Optional[Dict[str, Any]] = None,
    seed: Optional[int] = None,
    timings: Optional[Dict[str, float]] = None,
) -> Dict[str, Any]:
    """The JSON written by ``--json``; only ``timings`` varies between runs."""
    doc: Dict[str, Any] = {
        "tool_version": TOOL_VERSION,
        "input_hash": input_hash(text),
        "command": command,
        "arguments": arguments or {},
        "comment": document_comment(text),
        "payload": payload,
        "timings": {k: f"{v:.3f}" for k, v in (timings or {}).items()},
    }
    if seed is not None:
        doc["seed"] = seed
    return doc
