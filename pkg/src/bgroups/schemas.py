"""JSON schemas for group input and for every machine-readable report."""

from __future__ import annotations

from typing import Any

import jsonschema

from .errors import ParseError

_FACTORS = {
    "type": "object",
    "patternProperties": {"^[0-9]+$": {"type": "integer", "minimum": 0}},
    "additionalProperties": False,
}

_PARTS = {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1}
_FAMILY = {"type": "array", "items": _PARTS}

GROUP = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["type_defs", "pieces"],
    "properties": {
        "type_defs": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["inverted_primes"],
                "properties": {"inverted_primes": {"type": "array", "items": {"type": "integer", "minimum": 2}}},
                "additionalProperties": False,
            },
        },
        "pieces": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["types"],
                "properties": {
                    "types": {"type": "array", "items": {"type": "string"}, "minItems": 1},
                    "index": _FACTORS,
                    "coefficients": {"type": "object", "additionalProperties": _FACTORS},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

_VIOLATION = {
    "type": "object",
    "required": ["code", "message"],
    "properties": {"code": {"type": "string"}, "message": {"type": "string"}},
}

VALIDATION = {
    "type": "object",
    "required": ["valid", "violations"],
    "properties": {"valid": {"type": "boolean"}, "violations": {"type": "array", "items": _VIOLATION}},
}

ERROR = {
    "type": "object",
    "required": ["status", "error"],
    "properties": {
        "status": {"const": "error"},
        "error": {"type": "object", "required": ["code", "message"]},
    },
}

PARTITIONS = {
    "type": "object",
    "required": ["n", "family", "count"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "family": _FAMILY,
        "count": {"type": "integer", "minimum": 0},
    },
}

HOOK = {
    "type": "object",
    "required": ["n", "r", "t", "hooks", "hooked"],
    "properties": {
        "n": {"type": "integer"},
        "r": {"type": "integer"},
        "t": {"type": "integer"},
        "hooks": _FAMILY,
        "hooked": {"type": "boolean"},
        "maximal": {"type": ["boolean", "null"]},
    },
}

INVARIANTS = {
    "type": "object",
    "required": ["n", "e", "types"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "e": {"type": "integer", "minimum": 1},
        "types": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["label", "rank", "mu", "mu_factors"],
                "properties": {
                    "label": {"type": "string"},
                    "rank": {"type": "integer", "minimum": 1},
                    "mu": {"type": "integer", "minimum": 1},
                    "mu_factors": _FACTORS,
                },
            },
        },
        "clipped": {"type": "boolean"},
    },
}

FRAME = {
    "type": "object",
    "required": ["pieces"],
    "properties": {
        "pieces": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["vertices", "edges", "connected", "indecomposable"],
                "properties": {
                    "vertices": {"type": "array", "items": {"type": "string"}},
                    "edges": {"type": "array", "items": {"type": "array", "items": {"type": "string"},
                                                         "minItems": 2, "maxItems": 2}},
                    "connected": {"type": "boolean"},
                    "indecomposable": {"type": "boolean"},
                },
            },
        },
        "group": {"type": "object"},
    },
}

MERGE = {
    "type": "object",
    "required": ["merged", "rank_ones", "group", "conserved"],
    "properties": {
        "merged": {"type": "string"},
        "rank_ones": {"type": "array", "items": {"type": "string"}},
        "group": GROUP,
        "conserved": {"type": "boolean"},
    },
}

SPECTRUM = {
    "type": "object",
    "required": ["n", "spectrum"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "spectrum": _FAMILY,
        "decompositions": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["partition", "summands"],
                "properties": {"partition": _PARTS, "summands": {"type": "array"}},
            },
        },
    },
}

_STATUS = {"enum": ["REALIZED", "REFUTED_WITHIN_BUDGET", "OBSTRUCTED", "UNKNOWN"]}

VERDICT = {
    "type": "object",
    "required": ["status", "n", "family", "mode", "candidates", "log"],
    "properties": {
        "status": _STATUS,
        "n": {"type": "integer"},
        "family": _FAMILY,
        "mode": {"enum": ["contains", "equals"]},
        "candidates": {"type": "integer", "minimum": 0},
        "elapsed": {"type": "number"},
        "log": {"type": "array", "items": {"type": "object"}},
        "obstruction": {"type": "string"},
        "obstructions": {"type": "array", "items": {"type": "string"}},
        "witness": GROUP,
        "witness_path": {"type": "string"},
    },
}

TABLE = {
    "type": "object",
    "required": ["n_max", "budget", "cells"],
    "properties": {
        "n_max": {"type": "integer"},
        "budget": {"type": "object"},
        "cells": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["n", "k", "status", "candidates"],
                "properties": {
                    "n": {"type": "integer"},
                    "k": {"type": "integer"},
                    "status": _STATUS,
                    "candidates": {"type": "integer"},
                    "witness": GROUP,
                    "witness_path": {"type": "string"},
                },
            },
        },
    },
}

EXAMPLES = {
    "type": "object",
    "required": ["examples"],
    "properties": {"examples": {"type": "array", "items": {"type": "string"}}},
}

EXAMPLE = {
    "type": "object",
    "required": ["name", "group", "provenance"],
    "properties": {
        "name": {"type": "string"},
        "group": GROUP,
        "expected_spectrum": {"anyOf": [_FAMILY, {"type": "null"}]},
        "expected_contains": _FAMILY,
        "companions": {"type": "object", "additionalProperties": GROUP},
        "provenance": {"type": "string"},
    },
}

SCHEMAS: dict[str, dict] = {
    "group": GROUP,
    "validation": VALIDATION,
    "error": ERROR,
    "partitions": PARTITIONS,
    "hook": HOOK,
    "invariants": INVARIANTS,
    "frame": FRAME,
    "merge": MERGE,
    "spectrum": SPECTRUM,
    "verdict": VERDICT,
    "table": TABLE,
    "examples": EXAMPLES,
    "example": EXAMPLE,
}


def check_schema(doc: Any, name: str) -> None:
    """Raise :class:`ParseError` at the first schema violation."""
    validator = jsonschema.Draft202012Validator(SCHEMAS[name])
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        where = "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in err.absolute_path)
        raise ParseError(f"{name} document invalid at {where}: {err.message}", location=where)
