"""Canonical JSON encoding and decoding for every wire type.

Floats are written with 17 significant digits so emitted files
round-trip exactly and reports are byte-identical for identical inputs.
Complex scalars are [re, im] pairs; matrices are row-major nested lists.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .algebra import AlgebraElement, AlgebraSpec
from .analysis import (
    AlgebraBounds,
    FrameReport,
    OperatorFamily,
    ScalarBounds,
    VectorFamily,
    Witness,
)
from .constructions import ConstructionCertificate
from .errors import ParseError, ValidationError
from .modules import ModuleSpace, ModuleVector
from .operators import AdjointableOp

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# Canonical emitter


def _format_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError("non-finite float in report")
    return format(float(x), ".17g")


def canonical_dumps(obj: Any, indent: int = 0) -> str:
    """Deterministic JSON text with fixed float formatting."""
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(canonical_dumps(v) for v in obj) + "]"
    if isinstance(obj, dict):
        parts = (json.dumps(str(k)) + ":" + canonical_dumps(v) for k, v in obj.items())
        return "{" + ",".join(parts) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc


# ---------------------------------------------------------------------------
# Encoders


def _complex_pair(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def matrix_to_json(m: np.ndarray) -> list:
    return [[_complex_pair(z) for z in row] for row in np.asarray(m, dtype=complex)]


def spec_to_json(spec: AlgebraSpec) -> dict:
    return {"block_sizes": list(spec.block_sizes)}


def element_to_json(a: AlgebraElement) -> dict:
    return {"blocks": [matrix_to_json(b) for b in a.blocks]}


def space_to_json(space: ModuleSpace) -> dict:
    return {"block_sizes": list(space.spec.block_sizes), "rank": space.rank}


def vector_to_json(x: ModuleVector) -> dict:
    return {"space": space_to_json(x.space),
            "coords": [element_to_json(c) for c in x.coords]}


def op_to_json(t: AdjointableOp) -> dict:
    return {"domain": space_to_json(t.domain),
            "codomain": space_to_json(t.codomain),
            "entries": [[element_to_json(e) for e in row] for row in t.entries]}


def bounds_to_json(b: ScalarBounds | AlgebraBounds | None) -> dict | None:
    if b is None:
        return None
    if isinstance(b, ScalarBounds):
        return {"type": "scalar", "lower": b.lower, "upper": b.upper}
    return {"type": "algebra",
            "lower": element_to_json(b.lower),
            "upper": element_to_json(b.upper)}


def witness_to_json(w: Witness | None) -> dict | None:
    if w is None:
        return None
    out: dict[str, Any] = {"side": w.side}
    if w.vector is not None:
        out["vector"] = vector_to_json(w.vector)
    if w.operator is not None:
        out["operator"] = op_to_json(w.operator)
    if w.rayleigh is not None:
        out["rayleigh"] = w.rayleigh
    if w.scaling is not None:
        out["scaling"] = w.scaling
    return out


def report_to_json(r: FrameReport) -> dict:
    out = {
        "kind": r.kind,
        "verdict": r.verdict,
        "bounds": bounds_to_json(r.bounds),
        "tight": r.tight,
        "parseval": r.parseval,
        "certified": r.certified,
        "witness": witness_to_json(r.witness),
    }
    if r.detail is not None:
        out["detail"] = r.detail
    return out


def certificate_to_json(c: ConstructionCertificate) -> dict:
    out = {
        "construction": c.construction,
        "predicted": bounds_to_json(c.predicted),
        "input_report": report_to_json(c.input_report) if c.input_report else None,
        "output_report": report_to_json(c.output_report) if c.output_report else None,
        "passed": c.passed,
    }
    if c.detail is not None:
        out["detail"] = c.detail
    if c.flavor_checks:
        out["flavor_checks"] = [dict(f) for f in c.flavor_checks]
    return out


# ---------------------------------------------------------------------------
# Decoders


def _expect(cond: bool, message: str):
    if not cond:
        raise ValidationError(message)


def matrix_from_json(data, n: int) -> np.ndarray:
    _expect(isinstance(data, list) and len(data) == n, f"matrix must have {n} rows")
    out = np.zeros((n, n), dtype=complex)
    for i, row in enumerate(data):
        _expect(isinstance(row, list) and len(row) == n, f"matrix row {i} must have {n} entries")
        for j, pair in enumerate(row):
            _expect(isinstance(pair, list) and len(pair) == 2,
                    "complex scalars are [re, im] pairs")
            out[i, j] = complex(float(pair[0]), float(pair[1]))
    return out


def spec_from_json(data) -> AlgebraSpec:
    _expect(isinstance(data, dict) and "block_sizes" in data, "algebra needs block_sizes")
    try:
        return AlgebraSpec(tuple(int(n) for n in data["block_sizes"]))
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad algebra spec: {exc}") from exc


def element_from_json(data, spec: AlgebraSpec) -> AlgebraElement:
    _expect(isinstance(data, dict) and "blocks" in data, "element needs blocks")
    blocks = data["blocks"]
    _expect(isinstance(blocks, list) and len(blocks) == len(spec.block_sizes),
            "element must have one matrix per block")
    return AlgebraElement(spec, tuple(
        matrix_from_json(b, n) for b, n in zip(blocks, spec.block_sizes)))


def space_from_json(data) -> ModuleSpace:
    _expect(isinstance(data, dict) and "rank" in data, "space needs rank")
    spec = spec_from_json(data)
    try:
        return ModuleSpace(spec, int(data["rank"]))
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad module space: {exc}") from exc


def vector_from_json(data) -> ModuleVector:
    _expect(isinstance(data, dict) and "space" in data and "coords" in data,
            "vector needs space and coords")
    space = space_from_json(data["space"])
    coords = data["coords"]
    _expect(isinstance(coords, list) and len(coords) == space.rank,
            "vector must have one coordinate per rank")
    return ModuleVector(space, tuple(element_from_json(c, space.spec) for c in coords))


def op_from_json(data) -> AdjointableOp:
    _expect(isinstance(data, dict) and all(k in data for k in ("domain", "codomain", "entries")),
            "operator needs domain, codomain and entries")
    domain = space_from_json(data["domain"])
    codomain = space_from_json(data["codomain"])
    entries = data["entries"]
    _expect(isinstance(entries, list) and len(entries) == domain.rank,
            "operator entries must have one row per domain coordinate")
    rows = []
    for row in entries:
        _expect(isinstance(row, list) and len(row) == codomain.rank,
                "operator entries must have one column per codomain coordinate")
        rows.append(tuple(element_from_json(e, domain.spec) for e in row))
    try:
        return AdjointableOp(domain, codomain, tuple(rows))
    except Exception as exc:
        raise ValidationError(f"bad operator: {exc}") from exc


# ---------------------------------------------------------------------------
# Instance files


KNOWN_CHECKS = (
    "g-frame", "vector-frame", "k-g-frame",
    "star-frame", "star-g-frame", "star-k-frame", "star-k-g-frame",
    "star-sampled",
    "end-frame", "k-end-frame",
    "generalized-end-frame", "generalized-k-end-frame",
)


def instance_to_json(instance: dict) -> dict:
    return instance  # instances are built as plain JSON-shaped dicts


def validate_instance(data) -> dict:
    """Schema and reference validation for a parsed instance file."""
    _expect(isinstance(data, dict), "instance must be a JSON object")
    _expect(data.get("schema_version") == SCHEMA_VERSION,
            f"schema_version must be {SCHEMA_VERSION}")
    spec = spec_from_json(data.get("algebra"))
    operators = data.get("operators", {})
    vectors = data.get("vectors", {})
    _expect(isinstance(operators, dict), "operators must be a name->operator map")
    _expect(isinstance(vectors, dict), "vectors must be a name->vector map")

    ops = {name: op_from_json(o) for name, o in operators.items()}
    vecs = {name: vector_from_json(v) for name, v in vectors.items()}
    for name, op in ops.items():
        _expect(op.domain.spec == spec, f"operator {name} uses a different algebra")
    for name, v in vecs.items():
        _expect(v.space.spec == spec, f"vector {name} uses a different algebra")

    families = {}
    fam_data = data.get("families", {})
    _expect(isinstance(fam_data, dict), "families must be a name->family map")
    for name, fam in fam_data.items():
        _expect(isinstance(fam, dict) and fam.get("type") in ("operator", "vector"),
                f"family {name} must declare type operator|vector")
        member_names = fam.get("members")
        _expect(isinstance(member_names, list) and member_names,
                f"family {name} needs a nonempty member list")
        if fam["type"] == "operator":
            for m in member_names:
                _expect(m in ops, f"family {name} references unknown operator {m}")
            families[name] = OperatorFamily(tuple(ops[m] for m in member_names))
        else:
            for m in member_names:
                _expect(m in vecs, f"family {name} references unknown vector {m}")
            families[name] = VectorFamily(tuple(vecs[m] for m in member_names))

    requests = data.get("requests", [])
    _expect(isinstance(requests, list) and requests, "instance needs a request list")
    for i, req in enumerate(requests):
        _expect(isinstance(req, dict) and "check" in req, f"request {i} needs a check kind")
        _expect(req["check"] in KNOWN_CHECKS, f"request {i}: unknown check {req['check']!r}")
        _expect(req.get("family") in families, f"request {i} references unknown family")
        if "k" in req:
            _expect(req["k"] in ops, f"request {i} references unknown operator {req['k']!r}")
        if req["check"] == "star-sampled":
            for side in ("lower", "upper"):
                _expect(side in req, f"request {i}: star-sampled needs candidate bounds")

    seed = data.get("seed", 0)
    _expect(isinstance(seed, int), "seed must be an integer")
    tolerances = data.get("tolerances", {})
    _expect(isinstance(tolerances, dict), "tolerances must be an object")
    return {
        "spec": spec,
        "operators": ops,
        "vectors": vecs,
        "families": families,
        "requests": requests,
        "seed": seed,
        "tolerances": tolerances,
    }


def load_instance(path: str) -> tuple[dict, dict]:
    """Parse and validate an instance file; returns (raw, resolved)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    raw = loads(text)
    return raw, validate_instance(raw)
