"""Chain documents (JSON), OFF meshes, and deterministic JSON reports.

A chain document looks like::

    {"dimension": 2, "intrinsic_dim": 1,
     "vertices": [[0, 0], [1, 0], [1, 1]],
     "simplices": [{"vertices": [0, 1], "coefficient": 1}, ...]}

or, for a closed planar polygon, ``{"polygon": [[0, 0], [1, 0], [1, 1]]}``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .chain import Chain, canonicalize
from .errors import ParseError, ValidationError

STATUSES = ("pass", "fail", "error")


def format_float(x: float) -> str:
    """17 significant digits, always recognisable as a float."""
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = format(x, ".17g")
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def to_plain(obj: Any) -> Any:
    """Recursively convert numpy values and tuples to JSON-native Python values."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any, indent: int = 2) -> str:
    """Deterministic JSON text: sorted keys, floats via ``format_float``."""

    def enc(o, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{pad}{json.dumps(k)}: {enc(o[k], level + 1)}" for k in sorted(o)]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(o, list):
            if not o:
                return "[]"
            if all(not isinstance(v, (dict, list)) for v in o):
                return "[" + ", ".join(enc(v, level + 1) for v in o) + "]"
            return "[\n" + ",\n".join(pad + enc(v, level + 1) for v in o) + "\n" + end + "]"
        if isinstance(o, bool):
            return "true" if o else "false"
        if isinstance(o, int):
            return str(o)
        if isinstance(o, float):
            return format_float(o)
        if o is None:
            return "null"
        return json.dumps(o)

    return enc(to_plain(obj), 0) + "\n"


@dataclass
class Report:
    command: str
    inputs: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    status: str = "pass"
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"status must be one of {STATUSES}; got {self.status!r}")
        self.inputs = to_plain(self.inputs)
        self.results = to_plain(self.results)
        self.tolerances = to_plain(self.tolerances)

    @property
    def exit_code(self) -> int:
        return 0 if self.status == "pass" else 1


def serialize_report(r: Report) -> bytes:
    doc = {
        "command": r.command,
        "inputs": r.inputs,
        "results": r.results,
        "status": r.status,
        "tolerances": r.tolerances,
    }
    return dumps(doc).encode("utf-8")


def parse_report(data: bytes | str) -> Report:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return Report(**doc)


# -- chains -------------------------------------------------------------------


def chain_document(c: Chain) -> dict:
    doc = {
        "dimension": c.ambient_dim,
        "intrinsic_dim": c.dim,
        "vertices": c.vertices.tolist(),
        "simplices": [{"vertices": list(idx), "coefficient": coef} for idx, coef in c.terms],
    }
    if c.combinatorial:
        doc["combinatorial"] = True
    return doc


def dump_chain(c: Chain) -> bytes:
    return dumps(chain_document(c)).encode("utf-8")


def _require(cond: bool, message: str):
    if not cond:
        raise ValidationError(message)


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _coords(rows, what: str) -> np.ndarray:
    _require(isinstance(rows, list), f"{what} must be a list of coordinate arrays")
    for i, row in enumerate(rows):
        _require(
            isinstance(row, list) and row and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in row),
            f"{what}[{i}] must be a non-empty array of numbers",
        )
    lengths = {len(r) for r in rows}
    _require(len(lengths) <= 1, f"{what} have mixed coordinate lengths {sorted(lengths)}")
    arr = np.array(rows, dtype=float) if rows else np.zeros((0, 1))
    _require(bool(np.all(np.isfinite(arr))), f"{what} must be finite")
    return arr


def chain_from_document(doc: Any) -> Chain:
    """Validate a decoded chain document and return the canonical chain."""
    _require(isinstance(doc, dict), "a chain document must be a JSON object")
    known = {"dimension", "intrinsic_dim", "vertices", "simplices", "polygon", "combinatorial"}
    unknown = set(doc) - known
    _require(not unknown, f"unknown keys {sorted(unknown)}")
    combinatorial = bool(doc.get("combinatorial", False))

    if "polygon" in doc:
        _require("vertices" not in doc and "simplices" not in doc, "'polygon' excludes 'vertices' and 'simplices'")
        pts = _coords(doc["polygon"], "polygon")
        _require(len(pts) >= 2 and pts.shape[1] == 2, "a polygon needs at least 2 points in the plane")
        n = len(pts)
        terms = tuple(((i, (i + 1) % n), 1) for i in range(n))
        _require(doc.get("dimension", 2) == 2 and doc.get("intrinsic_dim", 1) == 1, "a polygon is a 1-chain in R^2")
        return canonicalize(Chain(pts, terms, 1, combinatorial))

    _require("vertices" in doc and "simplices" in doc, "a chain document needs 'vertices' and 'simplices'")
    pool = _coords(doc["vertices"], "vertices")
    n = doc.get("dimension", pool.shape[1] if len(pool) else None)
    _require(_is_int(n) and n >= 1, "'dimension' must be a positive integer")
    _require(len(pool) == 0 or pool.shape[1] == n, f"vertices have {pool.shape[1]} coordinates, dimension is {n}")
    if len(pool) == 0:
        pool = np.zeros((0, n))
    simplices = doc["simplices"]
    _require(isinstance(simplices, list), "'simplices' must be a list")
    terms = []
    for t, s in enumerate(simplices):
        _require(isinstance(s, dict) and "vertices" in s, f"simplices[{t}] needs 'vertices'")
        idx = s["vertices"]
        coef = s.get("coefficient", 1)
        _require(isinstance(idx, list) and idx and all(_is_int(i) for i in idx), f"simplices[{t}].vertices must be integers")
        _require(all(0 <= i < len(pool) for i in idx), f"simplices[{t}] has an index outside 0..{len(pool) - 1}")
        _require(len(set(idx)) == len(idx), f"simplices[{t}] repeats a vertex")
        _require(_is_int(coef), f"simplices[{t}].coefficient must be an integer")
        _require(coef != 0, f"simplices[{t}].coefficient must be nonzero")
        terms.append((tuple(idx), coef))
    k = doc.get("intrinsic_dim")
    if k is None:
        _require(bool(terms), "an empty chain needs 'intrinsic_dim'")
        k = len(terms[0][0]) - 1
    _require(_is_int(k) and k >= 0, "'intrinsic_dim' must be a nonnegative integer")
    for t, (idx, _) in enumerate(terms):
        _require(len(idx) == k + 1, f"simplices[{t}] has {len(idx)} vertices; a {k}-simplex has {k + 1}")
    return canonicalize(Chain(pool, tuple(terms), k, combinatorial))


def parse_off(text: str) -> Chain:
    """ASCII OFF mesh as a 2-chain in R^3; polygonal faces fan from their first vertex."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append((lineno, body.split()))
    if not lines or not lines[0][1][0].endswith("OFF"):
        raise ParseError("missing OFF header", lines[0][0] if lines else 1, 1)
    if lines[0][1][0] != "OFF":
        raise ParseError(f"unsupported OFF variant {lines[0][1][0]!r}", lines[0][0], 1)
    header = lines[0][1][1:]
    rest = lines[1:]
    if not header:
        if not rest:
            raise ParseError("missing vertex/face counts", lines[0][0])
        lineno, header = rest[0]
        rest = rest[1:]
    else:
        lineno = lines[0][0]
    try:
        nv, nf = int(header[0]), int(header[1])
    except (IndexError, ValueError):
        raise ParseError("counts line must read 'nvertices nfaces nedges'", lineno) from None
    if len(rest) < nv + nf:
        raise ParseError(f"expected {nv} vertices and {nf} faces, file ends early", rest[-1][0] if rest else lineno)
    pts = []
    for lineno, tok in rest[:nv]:
        try:
            xyz = [float(x) for x in tok[:3]]
        except ValueError:
            raise ParseError("vertex coordinates must be numbers", lineno) from None
        if len(xyz) != 3:
            raise ParseError("a vertex needs 3 coordinates", lineno)
        pts.append(xyz)
    terms = []
    for lineno, tok in rest[nv:nv + nf]:
        try:
            k = int(tok[0])
            face = [int(x) for x in tok[1:1 + k]]
        except ValueError:
            raise ParseError("face line must be 'k i_1 ... i_k'", lineno) from None
        if len(face) != k:
            raise ParseError(f"face lists {len(face)} of {k} indices", lineno)
        if k < 3:
            raise ValidationError(f"line {lineno}: a face needs at least 3 vertices")
        if any(i < 0 or i >= nv for i in face):
            raise ValidationError(f"line {lineno}: face index outside 0..{nv - 1}")
        if len(set(face)) != k:
            raise ValidationError(f"line {lineno}: face repeats a vertex")
        for j in range(1, k - 1):
            terms.append(((face[0], face[j], face[j + 1]), 1))
    pool = np.array(pts, dtype=float) if pts else np.zeros((0, 3))
    return canonicalize(Chain(pool, tuple(terms), 2))


def parse_chain(data: bytes | str) -> Chain:
    """JSON chain document or OFF text to a canonical Chain."""
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc.reason}", None, exc.start + 1) from None
    else:
        text = data
    if text.lstrip().startswith(("OFF", "#")) and not text.lstrip().startswith("{"):
        return parse_off(text)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return chain_from_document(doc)
