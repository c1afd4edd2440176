"""JSON wire formats: schemas, parsing with JSON-pointer error paths, and the bundled gallery."""

from __future__ import annotations

import hashlib
import json
from importlib import resources
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import jsonschema

from .errors import NeronAlignError, SchemaError
from .divisors import TraitSpec
from .graph import LabelledGraph
from .newton.poly import Poly
from .newton.series import LaurentWindow

LABEL_SCHEMA = {
    "type": "object",
    "additionalProperties": {"type": "integer", "minimum": 1},
}

GRAPH_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["vertices", "edges"],
    "properties": {
        "generators": {"type": "array", "items": {"type": "string"}, "uniqueItems": True},
        "vertices": {"type": "array", "items": {"type": "string"}, "uniqueItems": True},
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "ends", "label"],
                "properties": {
                    "id": {"type": "string"},
                    "ends": {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2},
                    "label": {**LABEL_SCHEMA, "minProperties": 1},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

TRAIT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": {"type": "integer", "minimum": 0},
}

LABELLING_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": {"type": "integer"},
}

RATIONAL = {"type": "string", "pattern": r"^-?[0-9]+(/[0-9]*[1-9][0-9]*)?$"}

POLY_SCHEMA = {
    "type": "array",
    "items": {
        "type": "array",
        "prefixItems": [
            {"type": "object", "additionalProperties": {"type": "integer"}},
            RATIONAL,
        ],
        "minItems": 2,
        "maxItems": 2,
    },
}

SERIES_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["r", "coeffs"],
    "properties": {
        "r": POLY_SCHEMA,
        "coeffs": {
            "type": "object",
            "propertyNames": {"pattern": r"^-?[0-9]+$"},
            "additionalProperties": POLY_SCHEMA,
        },
        "window": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
        "kind": {"enum": ["polynomial", "truncated"]},
        "precision": {
            "type": "object",
            "propertyNames": {"pattern": r"^-?[0-9]+$"},
            "additionalProperties": {"type": "integer"},
        },
    },
    "additionalProperties": False,
}


def pointer(path) -> str:
    parts = [str(p).replace("~", "~0").replace("/", "~1") for p in path]
    return "/" + "/".join(parts) if parts else ""


def validate(data: Any, schema: dict) -> None:
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(data), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        err = errors[0]
        raise SchemaError(err.message, pointer(err.absolute_path))


GALLERY_PREFIX = "@"


def resolve(ref: str) -> Path | Any:
    """A file path, or ``@name`` for a document bundled in the gallery."""
    if ref.startswith(GALLERY_PREFIX):
        name = ref[1:]
        if not name.endswith(".json"):
            name += ".json"
        res = resources.files("neron_align.gallery").joinpath(name)
        if not res.is_file():
            raise SchemaError(f"no gallery entry named {ref[1:]!r}")
        return res
    return Path(ref)


def load_json(ref: str) -> Any:
    src = resolve(ref)
    try:
        text = src.read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read {ref}: {exc.strerror or exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def parse_graph(data: Any) -> LabelledGraph:
    validate(data, GRAPH_SCHEMA)
    vset = set(data["vertices"])
    seen = set()
    for k, e in enumerate(data["edges"]):
        if e["id"] in seen:
            raise SchemaError(f"duplicate edge id {e['id']!r}", f"/edges/{k}/id")
        seen.add(e["id"])
        for j, v in enumerate(e["ends"]):
            if v not in vset:
                raise SchemaError(f"unknown vertex {v!r}", f"/edges/{k}/ends/{j}")
        if "generators" in data:
            for g in e["label"]:
                if g not in data["generators"]:
                    raise SchemaError(f"undeclared generator {g!r}", pointer(["edges", k, "label", g]))
    try:
        return LabelledGraph.from_json(data)
    except NeronAlignError as exc:
        raise SchemaError(str(exc)) from None


def parse_trait(data: Any) -> TraitSpec:
    validate(data, TRAIT_SCHEMA)
    return TraitSpec(data)


def parse_labelling(data: Any, G: LabelledGraph | None = None) -> dict[str, int]:
    validate(data, LABELLING_SCHEMA)
    if G is not None:
        for v in data:
            if v not in G.vertices:
                raise SchemaError(f"unknown vertex {v!r}", pointer([v]))
        missing = [v for v in G.vertices if v not in data]
        if missing:
            raise SchemaError(f"labelling misses vertices {missing}")
    return dict(data)


def parse_series(data: Any) -> LaurentWindow:
    validate(data, SERIES_SCHEMA)
    coeffs = {int(i): Poly.from_json(c) for i, c in data["coeffs"].items()}
    r = Poly.from_json(data["r"])
    if r.is_zero():
        raise SchemaError("r must be nonzero", "/r")
    kind = data.get("kind", "polynomial")
    if "window" in data:
        lo, hi = data["window"]
        if lo > hi:
            raise SchemaError("window must satisfy i_min <= i_max", "/window")
        for i in coeffs:
            if not lo <= i <= hi:
                raise SchemaError(f"index {i} lies outside the window", pointer(["coeffs", str(i)]))
        window = (lo, hi)
    else:
        nz = [i for i, c in coeffs.items() if c]
        if kind != "polynomial":
            raise SchemaError("a truncated series must declare its window", "/window")
        window = (min(nz), max(nz)) if nz else (0, 0)
    try:
        return LaurentWindow(coeffs, window, r, kind, {int(i): p for i, p in data.get("precision", {}).items()})
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def canonical(data: Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def digest(*docs: Any) -> str:
    return hashlib.sha256(canonical(list(docs)).encode("utf-8")).hexdigest()


@dataclass
class Report:
    """What a CLI command found. ``timing`` is informational and kept out of the digest."""

    command: str
    input_digest: str
    verdicts: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "input_digest": self.input_digest,
            "verdicts": self.verdicts,
            "witnesses": self.witnesses,
            "timing": self.timing,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Report":
        return cls(data["command"], data["input_digest"], data.get("verdicts", {}),
                   data.get("witnesses", {}), data.get("timing", {}))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2, ensure_ascii=False)
