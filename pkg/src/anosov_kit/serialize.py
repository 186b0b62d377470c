"""Canonical JSON and digests used for output and certificate hashing."""

from __future__ import annotations

import hashlib
import json
import math

SIGNIFICANT_DIGITS = 12


def real(x: float, digits: int = SIGNIFICANT_DIGITS) -> float:
    """Round to a fixed number of significant digits for stable output."""
    if not math.isfinite(x):
        raise ValueError(f"non-finite real {x!r}")
    return float(format(x, f".{digits}g"))


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def digest(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode("ascii")).hexdigest()


def dumps(obj) -> str:
    """Human-facing JSON; still deterministic."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
