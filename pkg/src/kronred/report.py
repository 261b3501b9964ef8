"""Batch front end: JSON system description in, JSON structure report out.

Input document::

    {"backend": "rational",            # or "integer"
     "E": [["0", "1"], ["0", "0"]],    # entry strings "p/q" or integers
     "A": [["1", "0"], ["0", "1"]],
     "max_depth": 32,                  # optional
     "analyses": ["defects", "resolvent"],   # optional
     "domain_relations": [],           # integer backend only: relator vectors
     "codomain_relations": [],
     "cols": 2,                        # only needed when E has no rows
     "spec": {...}}                    # generator mode, replaces E and A

The report has sorted keys, rationals as strings and one key per analysis
(``null`` when it was not requested).  Input problems raise subclasses of
:class:`~kronred.errors.InputError`; a singular or otherwise degenerate
pencil is a result, never an error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys as _sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import __version__
from .analysis import ALL_ANALYSES, DEFAULT_CAP, analyze, delta_chain
from .blocks import StructureSpec, assemble
from .errors import (BackendError, InputError, NotStalled, ParseError,
                     ShapeError, ShapeMismatch, UnsupportedBackend)
from .linalg import RatMatrix
from .reduction import PencilSystem
from .zmod import AbInvariants, IntMatrix

__all__ = ["InputDoc", "REPORT_SCHEMA", "run", "render", "main", "parse_matrix"]

BACKENDS = ("rational", "integer")
RATIONAL_ONLY = ("kronecker", "strangeness")
# dependency order; analyses run and appear in this order
ORDER = ("defects", "indices", "kronecker", "resolvent", "strangeness", "grid")

_RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*[+-]?\d+)?\s*$")
_INTEGER = re.compile(r"^\s*[+-]?\d+\s*$")


def _entry(value, backend: str, where: str):
    if isinstance(value, bool):
        raise ParseError(f"{where}: booleans are not matrix entries")
    if isinstance(value, int):
        return value
    if not isinstance(value, str):
        raise ParseError(f"{where}: expected a string entry, got {type(value).__name__}")
    pattern = _INTEGER if backend == "integer" else _RATIONAL
    if not pattern.match(value):
        kind = "an integer" if backend == "integer" else "a rational 'p/q'"
        raise ParseError(f"{where}: {value!r} is not {kind}")
    if backend == "integer":
        return int(value)
    try:
        return Fraction(value.replace(" ", ""))
    except ZeroDivisionError:
        raise ParseError(f"{where}: zero denominator in {value!r}") from None


def parse_matrix(rows, backend: str, name: str, cols: Optional[int] = None) -> list[list]:
    """Validate a list of rows of entry strings and convert the entries."""
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ParseError(f"{name} must be a list of rows")
    out = [[_entry(x, backend, f"{name}[{i}][{j}]") for j, x in enumerate(r)]
           for i, r in enumerate(rows)]
    widths = {len(r) for r in out}
    if cols is not None:
        widths.add(cols)
    if len(widths) > 1:
        raise ShapeError(f"{name} has rows of different lengths")
    return out


@dataclass(frozen=True)
class InputDoc:
    backend: str = "rational"
    E: Optional[list] = None
    A: Optional[list] = None
    max_depth: int = DEFAULT_CAP
    analyses: Optional[tuple] = None
    spec: Optional[StructureSpec] = None
    domain_relations: tuple = ()
    codomain_relations: tuple = ()
    cols: Optional[int] = None

    @classmethod
    def from_json(cls, doc, *, analyses=None, max_depth=None, seed=None) -> "InputDoc":
        """Validate a decoded document; keyword arguments override its fields."""
        if not isinstance(doc, dict):
            raise ParseError("input must be a JSON object")
        known = {"backend", "E", "A", "max_depth", "analyses", "spec",
                 "domain_relations", "codomain_relations", "cols"}
        extra = set(doc) - known
        if extra:
            raise ParseError(f"unknown fields: {sorted(extra)}")
        backend = doc.get("backend", "rational")
        if backend not in BACKENDS:
            raise ParseError(f"backend must be one of {BACKENDS}, got {backend!r}")

        depth = doc.get("max_depth", DEFAULT_CAP) if max_depth is None else max_depth
        if isinstance(depth, bool) or not isinstance(depth, int) or depth < 1:
            raise ParseError(f"max_depth must be a positive integer, got {depth!r}")

        names = doc.get("analyses") if analyses is None else analyses
        if names is not None:
            if not isinstance(names, (list, tuple)) or not all(isinstance(x, str) for x in names):
                raise ParseError("analyses must be a list of names")
            unknown = set(names) - set(ALL_ANALYSES)
            if unknown:
                raise ParseError(f"unknown analyses: {sorted(unknown)}")
            names = tuple(a for a in ORDER if a in set(names))

        spec = None
        if doc.get("spec") is not None:
            if "E" in doc or "A" in doc:
                raise ParseError("give either a spec or the matrices E and A, not both")
            if backend != "rational":
                raise BackendError("generator mode builds rational pencils only")
            if not isinstance(doc["spec"], dict):
                raise ParseError("spec must be an object")
            try:
                spec = StructureSpec.from_json(doc["spec"], seed=seed)
            except (TypeError, ValueError, AttributeError) as exc:
                raise ParseError(f"bad spec: {exc}") from None
            return cls(backend, None, None, depth, names, spec)

        if "E" not in doc or "A" not in doc:
            raise ParseError("input needs E and A (or a spec)")
        cols = doc.get("cols")
        if cols is not None and (isinstance(cols, bool) or not isinstance(cols, int) or cols < 0):
            raise ParseError(f"cols must be a non-negative integer, got {cols!r}")
        E = parse_matrix(doc["E"], backend, "E", cols)
        A = parse_matrix(doc["A"], backend, "A", cols)
        shape_E = (len(E), len(E[0]) if E else cols or 0)
        shape_A = (len(A), len(A[0]) if A else cols or 0)
        if shape_E != shape_A:
            raise ShapeError(f"E is {shape_E[0]}x{shape_E[1]} but A is {shape_A[0]}x{shape_A[1]}")
        rels = {}
        for key, length in (("domain_relations", shape_E[1]), ("codomain_relations", shape_E[0])):
            vecs = doc.get(key, [])
            if vecs and backend != "integer":
                raise BackendError(f"{key} only make sense over the integers")
            vecs = parse_matrix(vecs, backend, key, length if vecs else None)
            rels[key] = tuple(tuple(v) for v in vecs)
        return cls(backend, E, A, depth, names, None, cols=shape_E[1], **rels)

    @property
    def requested(self) -> tuple:
        if self.analyses is not None:
            return self.analyses
        if self.backend == "integer":
            return tuple(a for a in ORDER if a not in RATIONAL_ONLY)
        return ORDER

    def shape(self) -> tuple[int, int]:
        if self.spec is not None:
            return self.spec.shape
        if self.cols is not None:
            return len(self.E), self.cols
        return len(self.E), (len(self.E[0]) if self.E else 0)


def _system(doc: InputDoc):
    """The pencil to analyze and, in generator mode, its construction."""
    if doc.spec is not None:
        built = assemble(doc.spec)
        return built.system, built
    m, n = doc.shape()
    if doc.backend == "rational":
        return PencilSystem.rational(RatMatrix.from_rows(doc.E, cols=n),
                                     RatMatrix.from_rows(doc.A, cols=n)), None
    try:
        return PencilSystem.integer(
            IntMatrix.from_rows(doc.E, cols=n), IntMatrix.from_rows(doc.A, cols=n),
            IntMatrix.from_columns(doc.domain_relations, n),
            IntMatrix.from_columns(doc.codomain_relations, m)), None
    except InputError as exc:
        raise ShapeError(f"relations: {exc}") from None


def _invariant(x):
    return x.to_json() if isinstance(x, AbInvariants) else x


def run(doc: InputDoc) -> dict:
    """Execute the requested analyses and build the report document."""
    wanted = doc.requested
    if doc.backend == "integer":
        bad = [a for a in wanted if a in RATIONAL_ONLY]
        if bad:
            raise BackendError(f"{', '.join(bad)} require the rational backend")
    sys, built = _system(doc)
    m, n = doc.shape()
    out = {
        "version": __version__,
        "backend": doc.backend,
        "shape": [m, n],
        "invariants": {"codomain": _invariant(sys.codomain_invariant),
                       "domain": _invariant(sys.domain_invariant)},
        "max_depth": doc.max_depth,
        "analyses": list(wanted),
        "generated": None,
        "warnings": [],
    }
    for name in ORDER:
        out[name] = None

    cap = doc.max_depth
    # kronecker and the resolvent can legitimately fail to apply; handled below
    core = [a for a in wanted if a not in ("kronecker", "resolvent")]
    report = analyze(sys, cap, core)
    out["warnings"] += report.warnings
    if report.defects is not None:
        out["defects"] = report.defects.to_json()
    if report.indices is not None:
        out["indices"] = report.indices.to_json()
    if report.strangeness is not None:
        canon, t = report.normal_form
        out["strangeness"] = {
            **report.strangeness.to_json(),
            "normal_form": {"E": canon.E.to_strings(), "A": canon.A.to_strings()},
            "transform": {"P": t.P.to_strings(), "Q": t.Q.to_strings(),
                          "R": t.R.to_strings()},
        }
    if report.grid is not None:
        out["grid"] = [[{"W": w, "U": u} for w, u in row] for row in report.grid]

    if "kronecker" in wanted:
        try:
            kron = analyze(sys, cap, ["kronecker"]).kronecker
            out["kronecker"] = {**kron.to_json(),
                                "delta": [{"dU": du, "dW": dw}
                                          for du, dw in delta_chain(sys, cap)]}
        except NotStalled as exc:
            out["warnings"].append(f"kronecker structure unavailable: {exc}")
    if "resolvent" in wanted:
        try:
            out["resolvent"] = analyze(sys, cap, ["resolvent"]).resolvent.to_json()
        except UnsupportedBackend as exc:
            out["warnings"].append(f"resolvent unavailable: {exc}")

    if built is not None:
        entry = {"spec": built.spec.to_json(),
                 "E": sys.E.to_strings(), "A": sys.A.to_strings()}
        if out["kronecker"] is not None:
            entry["round_trip"] = kron.counts() == built.spec.counts()
        out["generated"] = entry
    out["warnings"] = sorted(set(out["warnings"]))
    return out


def render(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# exit statuses
EXIT_OK, EXIT_PARSE, EXIT_SHAPE, EXIT_BACKEND = 0, 2, 3, 4


def _exit_code(exc: InputError) -> int:
    if isinstance(exc, UnsupportedBackend):
        return EXIT_BACKEND
    if isinstance(exc, ShapeMismatch):
        return EXIT_SHAPE
    return EXIT_PARSE


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="python -m kronred",
        description="Reduce a matrix pencil and report its structure as JSON.")
    p.add_argument("--input", metavar="PATH", default="-",
                   help="input document (default: standard input)")
    p.add_argument("--analyses", metavar="LIST",
                   help="comma separated subset of " + ",".join(ORDER))
    p.add_argument("--max-depth", metavar="N", type=int,
                   help=f"reduction depth cap (default {DEFAULT_CAP})")
    p.add_argument("--seed", metavar="N", type=int,
                   help="seed for generator mode, overrides the spec's seed")
    p.add_argument("--format", choices=["json"], default="json")
    return p


def main(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or _sys.stdin
    stdout = stdout or _sys.stdout
    stderr = stderr or _sys.stderr
    args = _parser().parse_args(argv)
    try:
        if args.input == "-":
            text = stdin.read()
        else:
            try:
                with open(args.input, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise ParseError(f"cannot read {args.input}: {exc.strerror}") from None
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
        analyses = None
        if args.analyses is not None:
            analyses = [a.strip() for a in args.analyses.split(",") if a.strip()]
        doc = InputDoc.from_json(raw, analyses=analyses, max_depth=args.max_depth,
                                 seed=args.seed)
        report = run(doc)
    except InputError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return _exit_code(exc)
    stdout.write(render(report))
    return EXIT_OK


_STR_MATRIX = {"type": "array", "items": {"type": "array", "items": {"type": "string"}}}
_COUNT_MAP = {"type": "object", "additionalProperties": {"type": "integer", "minimum": 1}}
_AB = {"type": "object", "required": ["free_rank", "torsion"],
       "properties": {"free_rank": {"type": "integer", "minimum": 0},
                      "torsion": {"type": "array", "items": {"type": "integer", "minimum": 2}}}}
_COUNT = {"oneOf": [{"type": "integer", "minimum": 0}, _AB]}
_INDEX = {"oneOf": [{"type": "integer", "minimum": 0},
                    {"type": "string", "pattern": "^≥[0-9]+$"}]}


def _nullable(schema: dict) -> dict:
    return {"oneOf": [{"type": "null"}, schema]}


REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "kronred structure report",
    "type": "object",
    "additionalProperties": False,
    "required": ["version", "backend", "shape", "invariants", "max_depth", "analyses",
                 "generated", "warnings", *ORDER],
    "properties": {
        "version": {"type": "string"},
        "backend": {"enum": list(BACKENDS)},
        "shape": {"type": "array", "items": {"type": "integer", "minimum": 0},
                  "minItems": 2, "maxItems": 2},
        "invariants": {"type": "object", "required": ["codomain", "domain"],
                       "properties": {"codomain": _COUNT, "domain": _COUNT}},
        "max_depth": {"type": "integer", "minimum": 1},
        "analyses": {"type": "array", "items": {"enum": list(ORDER)}},
        "warnings": {"type": "array", "items": {"type": "string"}},
        "generated": _nullable({
            "type": "object", "required": ["spec", "E", "A"],
            "properties": {"spec": {"type": "object"}, "E": _STR_MATRIX, "A": _STR_MATRIX,
                           "round_trip": {"type": "boolean"}}}),
        "defects": _nullable({
            "type": "object", "required": ["alpha", "beta_obs", "beta_ctl", "truncated_at"],
            "properties": {
                "alpha": {"type": "array", "items": _COUNT},
                "beta_obs": {"type": "array", "items": _COUNT},
                "beta_ctl": {"type": "array", "items": _COUNT},
                "truncated_at": {"oneOf": [{"type": "null"}, {"type": "integer"}]}}}),
        "indices": _nullable({
            "type": "object", "required": ["obs_index", "ctl_index", "cap"],
            "properties": {"obs_index": _INDEX, "ctl_index": _INDEX,
                           "cap": {"type": "integer"}}}),
        "kronecker": _nullable({
            "type": "object",
            "required": ["nilpotent_blocks", "l_blocks", "lt_blocks", "core_dim",
                         "core_E", "core_A", "delta"],
            "properties": {
                "nilpotent_blocks": _COUNT_MAP, "l_blocks": _COUNT_MAP,
                "lt_blocks": _COUNT_MAP, "core_dim": {"type": "integer", "minimum": 0},
                "core_E": _STR_MATRIX, "core_A": _STR_MATRIX,
                "delta": {"type": "array", "items": {
                    "type": "object", "required": ["dU", "dW"],
                    "properties": {"dU": {"type": "integer"}, "dW": {"type": "integer"}}}}}}),
        "resolvent": _nullable({
            "type": "object", "required": ["kind", "certificate", "excluded", "blocking_defect"],
            "properties": {
                "kind": {"enum": ["empty", "all", "cofinite", "finite_set"]},
                "certificate": {"type": "array", "items": {"type": "string"}},
                "excluded": {"type": "array", "items": {"type": "string"}},
                "blocking_defect": {"oneOf": [{"type": "null"}, {"type": "object"}]}}}),
        "strangeness": _nullable({
            "type": "object", "required": ["d", "a", "s", "normal_form", "transform"],
            "properties": {
                "d": {"type": "integer", "minimum": 0}, "a": {"type": "integer", "minimum": 0},
                "s": {"type": "integer", "minimum": 0},
                "normal_form": {"type": "object", "required": ["E", "A"],
                                "properties": {"E": _STR_MATRIX, "A": _STR_MATRIX}},
                "transform": {"type": "object", "required": ["P", "Q", "R"],
                              "properties": {"P": _STR_MATRIX, "Q": _STR_MATRIX,
                                             "R": _STR_MATRIX}}}}),
        "grid": _nullable({"type": "array", "items": {"type": "array", "items": {
            "type": "object", "required": ["W", "U"],
            "properties": {"W": {"type": "string"}, "U": {"type": "string"}}}}}),
    },
}
