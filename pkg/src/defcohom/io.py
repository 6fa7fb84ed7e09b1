"""JSON documents for every object type, and result tables in JSON or CSV.

Rationals are written as ``"p/q"`` (or ``"p"``) strings, matrices as
``{"rows": r, "cols": c, "data": [[...], ...]}`` in row-major order.
Documents are recognised by their keys, see :func:`detect_kind`.
"""

from __future__ import annotations

import csv
import hashlib
import io as _io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from . import __version__
from .chain_complex import ChainMap, Complex
from .double_complex import DoubleComplex
from .exact_linalg import RationalMatrix, format_rational, to_rational
from .finite_groupoid import FiniteGroupoid
from .lie_theory import LieAlgebra
from .poisson import CoordinateSpace, PolyMultivector

CONVENTIONS = {
    "cone": "Cone^n = S^n + T^(n-1), D(c,Y) = (dc, f c - dY)",
    "totalization": "delta + (-1)^p d",
    "schouten": "[X, f] = X(f)",
    "coadjoint": "(ad*_x xi)(y) = -xi([x, y])",
}


class InputError(ValueError):
    """A document could not be parsed into the requested object."""


def _need(doc: Mapping, key: str, where: str):
    if not isinstance(doc, Mapping) or key not in doc:
        raise InputError(f"{where}: missing field '{key}'")
    return doc[key]


def _table(doc, key: str, where: str, required: bool = True) -> Mapping:
    if required:
        v = _need(doc, key, where)
    else:
        v = doc.get(key, {})
    if not isinstance(v, Mapping):
        raise InputError(f"{where}: field '{key}' must be an object")
    return v


def _rational(x, where: str):
    try:
        return to_rational(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: {exc}") from None


def _int(x, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise InputError(f"{where}: expected an integer, got {x!r}")
    try:
        return int(x)
    except ValueError:
        raise InputError(f"{where}: expected an integer, got {x!r}") from None


# ---------------------------------------------------------------------------
# matrices and complexes

def dump_matrix(m: RationalMatrix) -> dict:
    return {"rows": m.rows, "cols": m.cols,
            "data": [[format_rational(x) for x in row] for row in m.to_rows()]}


def parse_matrix(doc, where: str = "matrix") -> RationalMatrix:
    rows, cols = _int(_need(doc, "rows", where), where), _int(_need(doc, "cols", where), where)
    data = _need(doc, "data", where)
    if rows < 0 or cols < 0:
        raise InputError(f"{where}: negative dimensions")
    if not isinstance(data, list) or len(data) != rows or any(not isinstance(r, list) or len(r) != cols for r in data):
        raise InputError(f"{where}: data is not a {rows} x {cols} array")
    return RationalMatrix(rows, cols, {(i, j): _rational(x, where)
                                       for i, r in enumerate(data) for j, x in enumerate(r)})


def dump_complex(c: Complex) -> dict:
    lo, hi = c.window
    return {
        "window": [lo, hi],
        "dims": {str(k): c.dim(k) for k in c.degrees},
        "differentials": {str(k): dump_matrix(c.d(k)) for k in range(lo, hi)},
        "closed": {"below": c.closed_below, "above": c.closed_above},
    }


def parse_complex(doc, where: str = "complex") -> Complex:
    window = _need(doc, "window", where)
    if not isinstance(window, list) or len(window) != 2:
        raise InputError(f"{where}: window must be [k_min, k_max]")
    lo, hi = (_int(x, where) for x in window)
    if lo > hi:
        raise InputError(f"{where}: empty window")
    dims = {_int(k, where): _int(v, where) for k, v in _table(doc, "dims", where).items()}
    diffs = {_int(k, where): parse_matrix(m, f"{where} d_{k}")
             for k, m in _table(doc, "differentials", where, False).items()}
    closed = _table(doc, "closed", where, False)
    return Complex((lo, hi), dims, diffs, closed_below=bool(closed.get("below", False)),
                   closed_above=bool(closed.get("above", False)))


def dump_chain_map(f: ChainMap) -> dict:
    return {
        "source": dump_complex(f.source),
        "target": dump_complex(f.target),
        "components": {str(k): dump_matrix(f.component(k)) for k in f.degrees},
    }


def parse_chain_map(doc, base: Path | None = None, where: str = "chain map") -> ChainMap:
    ends = []
    for key in ("source", "target"):
        ref = _need(doc, key, where)
        if isinstance(ref, str):
            path = (base or Path(".")) / ref
            ends.append(parse_complex(read_json(path)[0], f"{where} {key} ({ref})"))
        else:
            ends.append(parse_complex(ref, f"{where} {key}"))
    comps = {_int(k, where): parse_matrix(m, f"{where} f_{k}") for k, m in _table(doc, "components", where).items()}
    return ChainMap(ends[0], ends[1], comps)


# ---------------------------------------------------------------------------
# double complexes

def _bidegree(key: str, where: str) -> tuple[int, int]:
    parts = str(key).split(",")
    if len(parts) != 2:
        raise InputError(f"{where}: bidegree key {key!r} is not 'p,q'")
    return _int(parts[0].strip(), where), _int(parts[1].strip(), where)


def dump_double(dc: DoubleComplex) -> dict:
    def key(b):
        return f"{b[0]},{b[1]}"
    return {
        "p_range": list(dc.p_range),
        "q_range": list(dc.q_range),
        "dims": {key(b): dc.dim(*b) for b in dc.bidegrees},
        "horizontal": {key(b): dump_matrix(dc.h(*b)) for b in dc.bidegrees if dc.inside(b[0] + 1, b[1])},
        "vertical": {key(b): dump_matrix(dc.v(*b)) for b in dc.bidegrees if dc.inside(b[0], b[1] + 1)},
    }


def parse_double(doc, where: str = "double complex") -> DoubleComplex:
    pr, qr = _need(doc, "p_range", where), _need(doc, "q_range", where)
    dims = {_bidegree(k, where): _int(v, where) for k, v in _table(doc, "dims", where).items()}
    hor = {_bidegree(k, where): parse_matrix(m, f"{where} horizontal {k}") for k, m in _table(doc, "horizontal", where, False).items()}
    ver = {_bidegree(k, where): parse_matrix(m, f"{where} vertical {k}") for k, m in _table(doc, "vertical", where, False).items()}
    return DoubleComplex(tuple(_int(x, where) for x in pr), tuple(_int(x, where) for x in qr), dims, hor, ver)


# ---------------------------------------------------------------------------
# groupoids, Lie algebras, multivectors

def dump_groupoid(g: FiniteGroupoid) -> dict:
    return {
        "name": g.name,
        "objects": list(g.objects),
        "arrows": [{"id": a, "src": g.src[a], "tgt": g.tgt[a]} for a in g.arrows],
        "units": {x: g.unit[x] for x in g.objects},
        "inv": {a: g.inv[a] for a in g.arrows},
        "comp": [{"left": l, "right": r, "result": v} for (l, r), v in sorted(g.comp.items())],
    }


def parse_groupoid(doc, where: str = "groupoid") -> FiniteGroupoid:
    objects = [str(x) for x in _need(doc, "objects", where)]
    arrows = _need(doc, "arrows", where)
    src, tgt, ids = {}, {}, []
    for a in arrows:
        i = str(_need(a, "id", where))
        ids.append(i)
        src[i], tgt[i] = str(_need(a, "src", where)), str(_need(a, "tgt", where))
    comp = {}
    for e in _need(doc, "comp", where):
        comp[(str(_need(e, "left", where)), str(_need(e, "right", where)))] = str(_need(e, "result", where))
    return FiniteGroupoid(tuple(objects), tuple(ids), src, tgt,
                          {str(k): str(v) for k, v in _table(doc, "units", where).items()},
                          {str(k): str(v) for k, v in _table(doc, "inv", where).items()},
                          comp, str(doc.get("name", "")))


def dump_lie(g: LieAlgebra) -> dict:
    return {
        "name": g.name,
        "dim": g.dim,
        "brackets": [{"i": i + 1, "j": j + 1, "coeffs": [format_rational(c) for c in v]}
                     for (i, j), v in sorted(g.brackets.items())],
    }


def parse_lie(doc, where: str = "Lie algebra") -> LieAlgebra:
    n = _int(_need(doc, "dim", where), where)
    brackets = {}
    for b in doc.get("brackets", []):
        i, j = _int(_need(b, "i", where), where), _int(_need(b, "j", where), where)
        coeffs = [_rational(c, where) for c in _need(b, "coeffs", where)]
        if (i - 1, j - 1) in brackets:
            raise InputError(f"{where}: bracket ({i}, {j}) given twice")
        brackets[(i - 1, j - 1)] = coeffs
    return LieAlgebra(n, brackets, str(doc.get("name", "")))


def dump_multivector(p: PolyMultivector) -> dict:
    names = p.space.names
    grouped: dict[tuple, list] = {}
    for (idx, e), c in sorted(p.terms.items()):
        mono = {names[t]: x for t, x in enumerate(e) if x}
        grouped.setdefault(idx, []).append({"monomial": mono, "coeff": format_rational(c)})
    return {
        "space": {"names": list(names), "fibre_mask": sorted(p.space.fibre_mask)},
        "degree": p.degree,
        "terms": [{"index": list(idx), "poly": poly} for idx, poly in grouped.items()],
    }


def parse_multivector(doc, where: str = "multivector") -> PolyMultivector:
    sp_doc = _need(doc, "space", where)
    try:
        sp = CoordinateSpace(tuple(str(x) for x in _need(sp_doc, "names", where)),
                             frozenset(str(x) for x in sp_doc.get("fibre_mask", [])))
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from None
    k = _int(_need(doc, "degree", where), where)
    terms = []
    for t in _need(doc, "terms", where):
        idx = []
        for i in _need(t, "index", where):
            # 0-based integer positions, or coordinate names
            if isinstance(i, str) and i in sp.names:
                idx.append(sp.index(i))
            else:
                idx.append(_int(i, where))
        for mono in _need(t, "poly", where):
            exps = [0] * sp.n
            for name, e in _table(mono, "monomial", where).items():
                if name not in sp.names:
                    raise InputError(f"{where}: unknown coordinate {name!r}")
                exps[sp.index(name)] = _int(e, where)
            terms.append(((tuple(idx), tuple(exps)), _rational(_need(mono, "coeff", where), where)))
    try:
        return PolyMultivector(sp, k, terms)
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from None


# ---------------------------------------------------------------------------
# detection and reading

KINDS = ("lie", "groupoid", "multivector", "double", "chain-map", "complex", "matrix")


def detect_kind(doc) -> str:
    if not isinstance(doc, Mapping):
        raise InputError("top-level document must be an object")
    keys = set(doc)
    if "brackets" in keys or ("dim" in keys and keys <= {"dim", "name"}):
        return "lie"
    if {"objects", "arrows"} <= keys:
        return "groupoid"
    if {"space", "degree", "terms"} <= keys:
        return "multivector"
    if "p_range" in keys:
        return "double"
    if "components" in keys:
        return "chain-map"
    if {"window", "dims"} <= keys:
        return "complex"
    if {"rows", "cols", "data"} <= keys:
        return "matrix"
    raise InputError(f"cannot tell what kind of document this is (keys: {sorted(keys)})")


def read_json(path: Path | str) -> tuple[Any, bytes]:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(raw), raw
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def parse_any(doc, base: Path | None = None):
    kind = detect_kind(doc)
    parser = {
        "lie": parse_lie,
        "groupoid": parse_groupoid,
        "multivector": parse_multivector,
        "double": parse_double,
        "chain-map": lambda d: parse_chain_map(d, base),
        "complex": parse_complex,
        "matrix": parse_matrix,
    }[kind]
    return kind, parser(doc)


def sha256(raw: bytes) -> str:
    return hashlib.sha256(raw).hexdigest()


# ---------------------------------------------------------------------------
# result tables

@dataclass
class ResultTable:
    columns: list[str]
    rows: list[tuple]
    metadata: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def sorted(self) -> "ResultTable":
        return ResultTable(self.columns, sorted(self.rows, key=_row_key), self.metadata, self.extra)


def _row_key(row):
    return tuple((0, x) if isinstance(x, (int, float)) and not isinstance(x, bool) else (1, str(x)) for x in row)


def metadata(input_hash: str | None, **more) -> dict:
    meta = {"tool": "defcohom", "version": __version__, "conventions": dict(CONVENTIONS)}
    if input_hash is not None:
        meta["input_sha256"] = input_hash
    meta.update(more)
    return meta


def render(table: ResultTable, fmt: str) -> str:
    if fmt == "json":
        doc = {"metadata": table.metadata, "columns": table.columns,
               "rows": [dict(zip(table.columns, r)) for r in table.rows]}
        doc.update(table.extra)
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = _io.StringIO()
        for k, v in sorted(_flatten(table.metadata).items()):
            buf.write(f"# {k}: {v}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(table.columns)
        for r in table.rows:
            w.writerow(["" if x is None else x for x in r])
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")


def _flatten(d: Mapping, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, Mapping):
            out.update(_flatten(v, key + "."))
        else:
            out[key] = v
    return out
