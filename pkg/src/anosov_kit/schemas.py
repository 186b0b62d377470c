"""Published JSON Schemas (draft 2020-12) for each subcommand's JSON output."""

from __future__ import annotations

RATIONAL = {"type": "string", "pattern": r"^-?[0-9]+/[0-9]+$"}
INTEGER_STRING = {"type": "string", "pattern": r"^-?[0-9]+$"}
POINT = {"type": "array", "items": RATIONAL, "minItems": 2, "maxItems": 2}
MATRIX = {
    "type": "array",
    "items": {"type": "array", "items": INTEGER_STRING, "minItems": 2, "maxItems": 2},
    "minItems": 2,
    "maxItems": 2,
}
SIGN = {"enum": [1, -1]}
ABELIAN_GROUP = {
    "type": "object",
    "required": ["rank", "torsion"],
    "properties": {
        "rank": {"type": "integer", "minimum": 0},
        "torsion": {"type": "array", "items": {"type": "integer", "minimum": 2}},
    },
    "additionalProperties": False,
}
ORBIT = {
    "type": "object",
    "required": ["points", "period", "orientation"],
    "properties": {
        "points": {"type": "array", "items": POINT, "minItems": 1},
        "period": {"type": "integer", "minimum": 1},
        "orientation": SIGN,
    },
    "additionalProperties": False,
}
HOMOTOPY_CLASS = {
    "type": "object",
    "required": ["holonomy", "winding"],
    "properties": {
        "holonomy": {"type": "array", "items": INTEGER_STRING, "minItems": 2, "maxItems": 2},
        "winding": {"type": "integer", "not": {"const": 0}},
        "basepoint": POINT,
    },
    "additionalProperties": False,
}
SEARCH = {
    "type": "object",
    "required": ["homotopic", "modulus", "invariant_factors", "attempts", "reason"],
    "properties": {
        "homotopic": {"type": "boolean"},
        "modulus": {"oneOf": [MATRIX, {"type": "null"}]},
        "invariant_factors": {"oneOf": [{"type": "array", "items": {"type": "integer"}}, {"type": "null"}]},
        "attempts": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["m", "difference", "solution"],
                "properties": {
                    "m": {"type": "integer", "minimum": 0},
                    "difference": {"type": "array", "items": INTEGER_STRING},
                    "solution": {"oneOf": [{"type": "array", "items": INTEGER_STRING}, {"type": "null"}]},
                },
            },
        },
        "reason": {"type": "string"},
    },
}
MAPPING_CLASS = {
    "type": "object",
    "required": ["coset", "label", "eps", "det", "orientation_sign", "boundary_action"],
    "properties": {
        "coset": MATRIX,
        "label": {"type": ["string", "null"]},
        "eps": SIGN,
        "det": SIGN,
        "orientation_sign": SIGN,
        "boundary_action": {"type": "array", "items": SIGN, "minItems": 2, "maxItems": 2},
    },
}
GROUP_TABLE = {
    "type": "object",
    "required": ["order", "identification", "abelian", "order_profile", "elements", "cayley"],
    "properties": {
        "order": {"type": "integer", "minimum": 1},
        "identification": {"enum": ["trivial", "Z2", "Z2+Z2", "Z4", "D4", "other"]},
        "abelian": {"type": "boolean"},
        "order_profile": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "elements": {"type": "array", "items": MAPPING_CLASS},
        "cayley": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
    },
}
BOOL_MAP = {"type": "object", "additionalProperties": {"type": "boolean"}}


def _object(required: dict, optional: dict | None = None) -> dict:
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "type": "object",
        "required": sorted(required),
        "properties": {**required, **(optional or {})},
        "additionalProperties": False,
    }


ORBITS = _object(
    {
        "monodromy": MATRIX,
        "period": {"type": "integer", "minimum": 1},
        "fixed_point_count": {"type": "integer", "minimum": 0},
        "fixed_points": {"type": "array", "items": POINT},
        "orbit_count": {"type": "integer", "minimum": 0},
        "orbits": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["points", "period", "class"],
                "properties": {
                    "points": {"type": "array", "items": POINT},
                    "period": {"type": "integer"},
                    "class": HOMOTOPY_CLASS,
                },
            },
        },
    },
    {"brute_force_count": {"type": "integer", "minimum": 0}},
)

NIELSEN = _object(
    {
        "monodromy": MATRIX,
        "orbits": {"type": "array", "items": ORBIT, "minItems": 2, "maxItems": 2},
        "labels": {"type": "array", "items": {"type": "string"}},
        "classes": {"type": "array", "items": HOMOTOPY_CLASS, "minItems": 2, "maxItems": 2},
        "freely_homotopic": {"type": "boolean"},
        "search": SEARCH,
    },
    {"g2_image_of_first": ORBIT, "g2_maps_first_to_second": {"type": "boolean"}},
)

SYMMETRIES = _object(
    {
        "monodromy": MATRIX,
        "bound": {"type": "integer", "minimum": 1},
        "symmetry_count": {"type": "integer", "minimum": 0},
        "group": GROUP_TABLE,
        "orientation_preserving": GROUP_TABLE,
        "klein_relations": {
            "type": "object",
            "required": ["squares", "products", "matrix_squares", "matrix_products"],
            "additionalProperties": BOOL_MAP,
        },
    }
)

VERDICT = {
    "type": "object",
    "required": ["curve", "value", "group", "trace"],
    "properties": {
        "curve": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
        "value": {"type": "integer"},
        "group": ABELIAN_GROUP,
        "trace": {"type": "array", "items": {"type": "string"}},
    },
}

HOMOLOGY = _object(
    {
        "monodromy": MATRIX,
        "k": {"type": "integer"},
        "h1_W": ABELIAN_GROUP,
        "h1_N": ABELIAN_GROUP,
        "longitude": VERDICT,
        "meridian": VERDICT,
        "h1_filling": ABELIAN_GROUP,
        "h1_filling_text": {"type": "string"},
        "slope_census": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["symmetry", "image", "extends"],
                "properties": {
                    "symmetry": {"type": "string"},
                    "image": {"type": "array", "items": {"type": "integer"}},
                    "extends": {"type": "boolean"},
                },
            },
        },
    }
)

STRIP_ROW = {
    "type": "object",
    "required": [
        "index",
        "x",
        "y",
        "eta_x",
        "eta_y",
        "stable_level",
        "unstable_level",
        "eta_stable_leaf_image",
    ],
    "properties": {"index": {"type": "integer"}},
    "additionalProperties": RATIONAL,
}

ORBIT_SPACE = _object(
    {"seed": {"type": "integer"}, "points": {"type": "array", "items": STRIP_ROW}},
    {
        "deck_fixed_orbits": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["point", "class"],
                "properties": {"point": POINT, "class": {"enum": ["alpha", "alpha^-1"]}},
            },
        }
    },
)

PINCH = {
    "type": "object",
    "required": ["k", "fiber_class", "fiber_class_in_filling", "filling_order", "entries"],
    "properties": {
        "entries": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["symmetry", "image", "status"],
                "properties": {"status": {"enum": ["preserved", "negated", "mismatch"]}},
            },
        }
    },
}

SURGERY_CHECK = _object(
    {
        "k": {"type": "integer"},
        "class": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
        "class_matches": {"type": "boolean"},
        "margin": {"type": "number", "minimum": 0},
        "samples": {"type": "integer", "minimum": 100},
        "lipschitz_slack": {"type": "number", "minimum": 0},
        "certified_lower_bound": {"type": "number"},
        "certified": {"type": "boolean"},
        "curve": {
            "type": "object",
            "required": ["vertices", "class", "corner_radius"],
            "properties": {"vertices": {"type": "array", "items": POINT}},
        },
    },
    {"pinch": PINCH},
)

HEX64 = {"type": "string", "pattern": "^[0-9a-f]{64}$"}

CERTIFICATE = _object(
    {
        "schema": {"const": 1},
        "k": {"type": "integer"},
        "monodromy": MATRIX,
        "input_hash": HEX64,
        "group": GROUP_TABLE,
        "class_tags": {
            "type": "object",
            "required": ["f0", "f1", "f2", "f3"],
            "additionalProperties": {"enum": ["self-orbit-equivalence", "eta-composed-orbit-equivalence"]},
        },
        "witnesses": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["label", "kind", "data"],
                "properties": {
                    "label": {"enum": ["f1", "f2", "f3"]},
                    "kind": {"enum": ["periodic-orbit-pair", "boundary-curve-sign", "orientation-reversal"]},
                    "data": {"type": "object"},
                },
            },
        },
        "premises": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "statement", "citation"],
                "properties": {"id": {"type": "string"}, "statement": {"type": "string"}, "citation": {"type": "string"}},
                "additionalProperties": False,
            },
        },
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "inputs", "input_hash", "result"],
                "properties": {
                    "id": {"type": "string"},
                    "inputs": {"type": "object"},
                    "input_hash": HEX64,
                    "result": {"type": "object", "required": ["pass"]},
                },
            },
        },
        "conclusions": {
            "type": "array",
            "items": {"type": "object", "required": ["claim", "checks", "premises"]},
        },
        "valid": {"type": "boolean"},
    }
)

REPLAY = _object({"k": {"type": "integer"}, "input_hash": HEX64, "replayed": {"type": "boolean"}})

SCHEMAS = {
    "orbits": ORBITS,
    "nielsen": NIELSEN,
    "symmetries": SYMMETRIES,
    "homology": HOMOLOGY,
    "orbit-space": ORBIT_SPACE,
    "surgery-check": SURGERY_CHECK,
    "certificate": CERTIFICATE,
    "replay": REPLAY,
}
