"""JSON Schema for model files, version "1".

Structural checks live here; cross-references (state ids, cell names,
history ids) are resolved by the loader, which reports the same JSON
pointer style.
"""

from __future__ import annotations

import jsonschema

from .errors import SchemaError

SCHEMA_VERSION = "1"

_ident = {"type": "string", "minLength": 1}
_ref_list = {"type": "array", "items": _ident}
_number_map = {"type": "object", "additionalProperties": {"type": "number"}}

# a partial map from cell (name or member vertex) to alternative name
_pattern = {"oneOf": [{"enum": ["all", "*"]},
                      {"type": "object", "additionalProperties": _ident,
                       "not": {"anyOf": [{"required": ["default"]}, {"required": ["at"]}]}}]}
_strategy_set = {"oneOf": [_pattern, {"type": "array", "items": _pattern, "minItems": 1}]}
_vertex_map = {
    "type": "object",
    "properties": {
        "default": _strategy_set,
        "at": {"type": "array", "items": {
            "type": "object",
            "required": ["vertices", "strategies"],
            "properties": {"vertices": _ref_list, "strategies": _strategy_set},
            "additionalProperties": False,
        }},
    },
    "additionalProperties": False,
    "anyOf": [{"required": ["default"]}, {"required": ["at"]}],
}
_plan_spec = {"oneOf": [_strategy_set, _vertex_map]}

_tree_node = {
    "oneOf": [
        _ident,
        {"type": "object", "required": ["agent", "moves"],
         "properties": {"agent": _ident, "point": _ident,
                        "moves": {"type": "object", "minProperties": 1,
                                  "additionalProperties": {"$ref": "#/$defs/node"}}},
         "additionalProperties": False},
    ]
}

_ensemble = {
    "oneOf": [
        {"const": "perfect"},
        {"type": "object", "required": ["observe"],
         "properties": {"observe": _ref_list, "recall": {"type": "boolean"}},
         "additionalProperties": False},
        {"type": "array", "items": {"oneOf": [
            {"type": "object", "required": ["vertices"],
             "properties": {"name": _ident, "vertices": {**_ref_list, "minItems": 1}},
             "additionalProperties": False},
            {**_ref_list, "minItems": 1},
        ]}},
    ]
}

_message = {
    "type": "object",
    "properties": {
        "force": {"enum": ["assertive", "directive", "evaluative"]},
        "content": {"oneOf": [_ident, _number_map]},
        "token": _ident,
        "speaker": _ident,
        "addressee": _ident,
        "record_receipt": {"type": "boolean"},
    },
    "anyOf": [{"required": ["force", "content"]}, {"required": ["token"]}],
    "additionalProperties": False,
}

MODEL_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$defs": {"node": _tree_node},
    "type": "object",
    "required": ["schema_version", "t_max", "agents", "states", "initial"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "name": {"type": "string"},
        "description": {"type": "string"},
        "t_max": {"type": "integer", "minimum": 0},
        "propositions": _ref_list,
        "agents": {**_ref_list, "uniqueItems": True},
        "states": {"type": "array", "minItems": 1, "items": {
            "type": "object", "required": ["id"],
            "properties": {"id": _ident, "labels": _ref_list},
            "additionalProperties": False,
        }},
        "initial": {**_ref_list, "minItems": 1},
        "trees": {"type": "object", "additionalProperties": {"$ref": "#/$defs/node"}},
        "ensembles": {"type": "object", "additionalProperties": _ensemble},
        "repertoires": {"type": "object", "additionalProperties": _strategy_set},
        "plan_states": {"type": "object", "additionalProperties": _plan_spec},
        "nested_plan_states": {"type": "object", "additionalProperties": {
            "type": "object", "additionalProperties": _plan_spec}},
        "prior": {"oneOf": [{"const": "uniform"}, _number_map]},
        "utilities": {"type": "object", "additionalProperties": _number_map},
        "pragmatics_profiles": {"type": "object", "additionalProperties": {
            "type": "object", "additionalProperties": {
                "type": "object", "required": ["force", "content"],
                "properties": {"force": {"enum": ["assertive", "directive", "evaluative"]},
                               "content": {"oneOf": [_ident, _number_map]}},
                "additionalProperties": False}}},
        "scenarios": {"type": "object", "additionalProperties": {
            "type": "object", "required": ["agent", "vertex", "messages"],
            "properties": {
                "agent": _ident,
                "vertex": _ident,
                "plan": _strategy_set,
                "messages": {"type": "array", "items": _message},
            },
            "additionalProperties": False}},
    },
    "additionalProperties": False,
}

_validator = jsonschema.Draft202012Validator(MODEL_SCHEMA)


def pointer(path) -> str:
    return "".join(f"/{p}" for p in path) or "/"


def validate(data) -> None:
    """Raise :class:`SchemaError` for the most relevant violation."""
    best = jsonschema.exceptions.best_match(_validator.iter_errors(data))
    if best is not None:
        raise SchemaError(best.message, pointer(best.absolute_path))
