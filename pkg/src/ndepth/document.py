"""JSON input documents: structure constants with exact rational coefficients.

Layout::

    {
      "schema_version": 1,
      "field": "rational",
      "name": "three_assoc",
      "space": [["a", 0], ["b", 0]],
      "operations": {
        "m1": [{"in": ["a"], "out": {"b": "1"}}],
        "m2": [{"in": ["a", "a"], "out": {"b": "1/2"}}],
        "bracket": [...],
        "mk": {"3": [...]}
      },
      "declared": {"kind": "nassociative", "N": 3},
      "options": {"truncation": 4, "mode": "full"}
    }

``m1``/``m2``/``bracket`` live on ``A`` (degrees 1, 0, 0); ``mk`` components
live on ``A[1]`` and have degree 1 there.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .exactmath import to_scalar
from .graded import DegreeError, GradedMultiMap, GradedSpace
from .structures import KINDS, AlgebraPresentation
from .tensorcoalg import FULL, TWO_TRUNCATED

SCHEMA_VERSION = 1


class DocumentError(ValueError):
    """Malformed input document; the message names the offending field."""


@dataclass
class InputDocument:
    presentation: AlgebraPresentation
    options: dict = field(default_factory=dict)

    @property
    def kind(self) -> str:
        return self.presentation.kind

    @property
    def N(self) -> int:
        return self.presentation.N

    @property
    def truncation(self) -> int | None:
        return self.options.get("truncation")

    @property
    def mode(self) -> str:
        return self.options.get("mode", FULL)

    def __eq__(self, other):
        if not isinstance(other, InputDocument):
            return NotImplemented
        return to_dict(self) == to_dict(other)


def _entries(raw, where: str):
    if not isinstance(raw, list):
        raise DocumentError(f"{where}: expected a list of {{'in': [...], 'out': {{...}}}} entries")
    coeffs = {}
    for i, e in enumerate(raw):
        if not isinstance(e, dict) or "in" not in e or "out" not in e:
            raise DocumentError(f"{where}[{i}]: entry needs 'in' and 'out'")
        key = tuple(e["in"])
        if key in coeffs:
            raise DocumentError(f"{where}[{i}]: input {list(key)} listed twice")
        try:
            coeffs[key] = {str(o): to_scalar(c) for o, c in e["out"].items()}
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise DocumentError(f"{where}[{i}].out: {exc}") from None
    return coeffs


def _map(raw, where, domain, arity, degree):
    coeffs = _entries(raw, where)
    try:
        return GradedMultiMap(domain, arity, domain, degree, coeffs)
    except DegreeError as exc:
        raise DocumentError(f"{where}: {exc}") from None
    except KeyError as exc:
        raise DocumentError(f"{where}: {exc.args[0]}") from None
    except ValueError as exc:
        raise DocumentError(f"{where}: {exc}") from None


def parse_document(doc: dict) -> InputDocument:
    if not isinstance(doc, dict):
        raise DocumentError("top level must be a JSON object")
    if doc.get("field", "rational") != "rational":
        raise DocumentError(f"field: only 'rational' is supported, got {doc['field']!r}")
    version = doc.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise DocumentError(f"schema_version: unsupported version {version!r}")
    if "space" not in doc:
        raise DocumentError("space: missing")
    try:
        pairs = [(str(n), int(d)) for n, d in doc["space"]]
    except (TypeError, ValueError):
        raise DocumentError("space: expected a list of [name, degree] pairs") from None
    try:
        space = GradedSpace(tuple(pairs))
    except ValueError as exc:
        raise DocumentError(f"space: {exc}") from None

    declared = doc.get("declared", {})
    kind = declared.get("kind")
    if kind not in KINDS:
        raise DocumentError(f"declared.kind: expected one of {list(KINDS)}, got {kind!r}")
    N = declared.get("N")
    if not isinstance(N, int) or isinstance(N, bool) or N < 1:
        raise DocumentError(f"declared.N: expected a positive integer, got {N!r}")

    ops = doc.get("operations", {})
    unknown = set(ops) - {"m1", "m2", "bracket", "mk"}
    if unknown:
        raise DocumentError(f"operations: unknown block(s) {sorted(unknown)}")
    diff = _map(ops["m1"], "operations.m1", space, 1, 1) if "m1" in ops else None
    mult = _map(ops["m2"], "operations.m2", space, 2, 0) if "m2" in ops else None
    bracket = _map(ops["bracket"], "operations.bracket", space, 2, 0) if "bracket" in ops else None
    higher = {}
    shifted = space.shift(1)
    for k, raw in ops.get("mk", {}).items():
        try:
            ki = int(k)
        except ValueError:
            raise DocumentError(f"operations.mk: arity key {k!r} is not an integer") from None
        higher[ki] = _map(raw, f"operations.mk.{k}", shifted, ki, 1)

    options = dict(doc.get("options", {}))
    if "mode" in options and options["mode"] not in (FULL, TWO_TRUNCATED):
        raise DocumentError(f"options.mode: expected 'full' or 'two-truncated', got {options['mode']!r}")
    if "truncation" in options and (not isinstance(options["truncation"], int) or options["truncation"] < 1):
        raise DocumentError("options.truncation: expected a positive integer")
    try:
        P = AlgebraPresentation(space, kind, N, mult=mult, diff=diff, bracket=bracket, higher=higher, name=str(doc.get("name", "")))
    except ValueError as exc:
        raise DocumentError(f"declared: {exc}") from None
    return InputDocument(P, options)


def parse_input(path) -> InputDocument:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DocumentError(f"{path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: malformed JSON at line {exc.lineno}: {exc.msg}") from None
    return parse_document(doc)


def _entries_json(m: GradedMultiMap):
    return m.to_json()["entries"]


def to_dict(doc: InputDocument | AlgebraPresentation, options: dict | None = None) -> dict:
    if isinstance(doc, AlgebraPresentation):
        doc = InputDocument(doc, options or {})
    P = doc.presentation
    ops = {}
    if P.diff is not None:
        ops["m1"] = _entries_json(P.diff)
    if P.mult is not None:
        ops["m2"] = _entries_json(P.mult)
    if P.bracket is not None:
        ops["bracket"] = _entries_json(P.bracket)
    if P.higher:
        ops["mk"] = {str(k): _entries_json(m) for k, m in sorted(P.higher.items())}
    out = {
        "schema_version": SCHEMA_VERSION,
        "field": "rational",
        "name": P.name,
        "space": [[n, d] for n, d in P.space.basis],
        "operations": ops,
        "declared": {"kind": P.kind, "N": P.N},
    }
    if doc.options:
        out["options"] = dict(doc.options)
    return out


def dumps(doc, options: dict | None = None) -> str:
    return json.dumps(to_dict(doc, options), indent=2) + "\n"
