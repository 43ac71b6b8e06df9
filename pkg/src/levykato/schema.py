"""JSON formats for process specs, potentials and outputs (``schema_version`` 1).

A process spec is an object whose ``kind`` is one of

* ``family`` (the default): a ``family`` key and that family's parameters;
* ``triplet``: ``gamma``, ``A`` and a jump measure ``nu`` with a ``type`` key;
* ``subordinator``: an ``exponent`` family and its parameters;
* ``product``: a list of one-dimensional ``components``.

A potential is an object with a ``type`` key. Unknown keys, wrong types and
out-of-range values raise :class:`SpecError` with a message naming the
offending field.
"""
from __future__ import annotations

import json
import math
from dataclasses import is_dataclass

import numpy as np

from . import levy_model as lm
from . import potentials as P
from .errors import SpecError

SCHEMA_VERSION = 1

# family -> (builder, {param: default or REQUIRED})
REQUIRED = object()

SPEC_FAMILIES = {
    "brownian": (lm.brownian, {"a": 1.0, "dimension": 1}),
    "stable": (lm.stable, {"alpha": REQUIRED, "scale": 1.0, "dimension": 1}),
    "drift": (lm.drift, {"velocity": REQUIRED}),
    "cp": (lm.cp, {"locations": REQUIRED, "masses": REQUIRED}),
    "drift_plus_jumps": (lm.drift_plus_jumps, {"gamma": 1.0, "exponent": -1.5, "coef": 1.0, "upper": 1.0}),
    "dyadic_jumps": (lm.dyadic_jumps, {"alpha": REQUIRED, "m": 1.0, "beta": 1.0, "delta": 1.0}),
    "space_time": (lm.space_time, {"a": 1.0}),
    "stable_subordinator": (lm.stable_subordinator, {"alpha": REQUIRED}),
    "shifted_stable_sub": (lm.shifted_stable_sub, {"alpha": REQUIRED, "delta": 1.0, "m": 0.0}),
    "log_sub": (lm.log_sub, {"alpha": REQUIRED}),
    "u_over_log_sub": (lm.u_over_log_sub, {"alpha": REQUIRED}),
}
# alternative names accepted on input
SPEC_FAMILIES["example511"] = SPEC_FAMILIES["dyadic_jumps"]
SPEC_FAMILIES["shifted_stable_subordinator"] = SPEC_FAMILIES["shifted_stable_sub"]
SPEC_FAMILIES["log_subordinator"] = SPEC_FAMILIES["log_sub"]
SPEC_FAMILIES["u_over_log_subordinator"] = SPEC_FAMILIES["u_over_log_sub"]

SUBORDINATOR_EXPONENTS = {
    "stable": (lm.stable_subordinator, {"alpha": REQUIRED}),
    "shifted_stable": (lm.shifted_stable_sub, {"alpha": REQUIRED, "delta": 1.0, "m": 0.0}),
    "log": (lm.log_sub, {"alpha": REQUIRED}),
    "u_over_log": (lm.u_over_log_sub, {"alpha": REQUIRED}),
}


def _power_density(pieces):
    if not isinstance(pieces, list) or not pieces:
        raise SpecError("pieces must be a nonempty list")
    out = []
    for i, pc in enumerate(pieces):
        if not isinstance(pc, dict):
            raise SpecError(f"piece {i}: expected an object")
        extra = set(pc) - {"coef", "exponent", "a", "b", "decay"}
        if extra:
            raise SpecError(f"piece {i}: unknown field(s) {sorted(extra)}")
        try:
            out.append(lm.PowerPiece(float(pc["coef"]), float(pc["exponent"]), float(pc["a"]), float(pc["b"]),
                                     float(pc.get("decay", 0.0))))
        except KeyError as exc:
            raise SpecError(f"piece {i}: missing field {exc}") from exc
    return lm.DensityMeasure(out)


# jump measures of triplet specs; "dimension" is filled in from gamma
MEASURE_TYPES = {
    "zero": (lambda dimension: lm.ZeroMeasure(dimension), {"dimension": 1}),
    "atoms": (lm.AtomicMeasure, {"locations": REQUIRED, "masses": REQUIRED}),
    "stable": (lm.StableMeasure, {"alpha": REQUIRED, "scale": 1.0, "dimension": 1}),
    "power_density": (_power_density, {"pieces": REQUIRED}),
    "dyadic_atoms": (lm.DyadicAtoms, {"alpha": REQUIRED, "m": 1.0, "beta": 1.0, "delta": 1.0}),
    "exponential": (lm.ExponentialJumps, {"mass": REQUIRED, "rate": REQUIRED, "side": 1}),
}

Q_TYPES = {
    "zero": (P.zero, {}),
    "constant": (P.constant, {"c": 1.0}),
    "indicator": (P.indicator, {"a": REQUIRED, "b": REQUIRED, "c": 1.0}),
    "power": (P.power, {"p": REQUIRED, "center": 0.0, "radius": 1.0, "side": "both", "c": 1.0}),
    "log_singular": (P.log_singular, {"center": 0.0, "radius": 0.5, "c": 1.0}),
    "comb": (P.comb, {"blocks": 40}),
    "grid_sampled": (P.grid_sampled, {"xs": REQUIRED, "values": REQUIRED, "rule": "linear"}),
    "aizenman_simon": (P.aizenman_simon, {"p": REQUIRED, "dimension": 3, "radius": 1.0, "c": 1.0}),
    "radial_ball": (P.radial_ball, {"dimension": 3, "radius": 1.0, "c": 1.0}),
}


def _check_version(obj, what):
    if not isinstance(obj, dict):
        raise SpecError(f"{what}: expected a JSON object")
    v = obj.get("schema_version", SCHEMA_VERSION)
    if v != SCHEMA_VERSION:
        raise SpecError(f"{what}: unsupported schema_version {v!r} (expected {SCHEMA_VERSION})")


def _bind(table, key_name, obj, what):
    kind = obj.get(key_name)
    if kind not in table:
        raise SpecError(f"{what}: {key_name} must be one of {sorted(table)}, got {kind!r}")
    builder, params = table[kind]
    extra = set(obj) - set(params) - {key_name, "schema_version", "name"}
    if extra:
        raise SpecError(f"{what}: unknown field(s) {sorted(extra)} for {key_name} {kind!r}")
    kwargs = {}
    for name, default in params.items():
        if name in obj:
            kwargs[name] = obj[name]
        elif default is REQUIRED:
            raise SpecError(f"{what}: missing required field {name!r} for {key_name} {kind!r}")
    for name, val in kwargs.items():
        if isinstance(val, bool) or not isinstance(val, (int, float, str, list)):
            raise SpecError(f"{what}: field {name!r} has unsupported type {type(val).__name__}")
    try:
        return builder(**kwargs)
    except SpecError as exc:
        raise SpecError(f"{what}: {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise SpecError(f"{what}: invalid parameters ({exc})") from exc


def parse_spec(obj):
    """Process spec from a JSON object."""
    _check_version(obj, "spec")
    kind = obj.get("kind", "family")
    body = {k: v for k, v in obj.items() if k != "kind"}
    if kind == "family":
        return _bind(SPEC_FAMILIES, "family", body, "spec")
    if kind == "subordinator":
        return _bind(SUBORDINATOR_EXPONENTS, "exponent", body, "spec")
    if kind == "triplet":
        return _parse_triplet(body)
    if kind == "product":
        extra = set(body) - {"components", "schema_version", "name"}
        comps = body.get("components")
        if extra or not isinstance(comps, list) or len(comps) < 2:
            raise SpecError("spec: a product needs exactly a 'components' list of at least two specs")
        parts = [parse_spec(c) for c in comps]
        try:
            return lm.Product(parts, name=body.get("name"))
        except SpecError as exc:
            raise SpecError(f"spec: {exc}") from exc
    raise SpecError(f"spec: kind must be one of ['family', 'product', 'subordinator', 'triplet'], got {kind!r}")


def _parse_triplet(obj):
    extra = set(obj) - {"gamma", "A", "nu", "h0", "schema_version", "name"}
    if extra:
        raise SpecError(f"spec: unknown field(s) {sorted(extra)} for a triplet")
    gamma = obj.get("gamma", 0.0)
    dim = len(gamma) if isinstance(gamma, list) else 1
    nu = None
    if "nu" in obj:
        raw = obj["nu"]
        if not isinstance(raw, dict):
            raise SpecError("spec: nu must be an object with a 'type' key")
        if raw.get("type") in ("zero", "stable") and "dimension" not in raw:
            raw = {**raw, "dimension": dim}
        try:
            nu = _bind(MEASURE_TYPES, "type", raw, "spec.nu")
        except lm.NonIntegrableMeasure as exc:
            raise SpecError(f"spec.nu: {exc}") from exc
    h0 = obj.get("h0")
    if h0 is not None and not isinstance(h0, bool):
        raise SpecError("spec: h0 must be true or false")
    try:
        return lm.Triplet(gamma, obj.get("A", 0.0), nu, name=obj.get("name"), h0=h0)
    except (TypeError, ValueError) as exc:
        raise SpecError(f"spec: invalid triplet ({exc})") from exc


def parse_potential(obj):
    """Potential from a JSON object."""
    _check_version(obj, "q")
    if obj.get("type") == "space_time":
        from .kato import space_time_potential
        extra = set(obj) - {"type", "p", "schema_version", "name"}
        if extra or "p" not in obj:
            raise SpecError("q: space_time needs exactly the field 'p'")
        return space_time_potential(float(obj["p"]))
    return _bind(Q_TYPES, "type", obj, "q")


def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON ({exc})") from exc


def jsonable(obj):
    """Plain JSON types; non-finite floats become the strings 'inf', '-inf', 'nan'."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, complex):
        return {"re": jsonable(obj.real), "im": jsonable(obj.imag)}
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    if is_dataclass(obj):
        return jsonable(obj.__dict__)
    return str(obj)


def dumps(obj):
    """Deterministic JSON text with a ``schema_version`` field."""
    payload = jsonable(obj)
    if isinstance(payload, dict):
        payload = {"schema_version": SCHEMA_VERSION, **payload}
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"
