"""JSON model documents: loading and validation.

A document is a JSON object with ``schema_version`` (currently 1), a
``kind`` and the kind-specific payload; see ``docs/model-schema.md``.
Every field problem is reported with its path, e.g.
``stations[2].service[0]``.
"""

import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from .. import markov
from ..errors import InvalidInput, NumericFailure, QnError
from ..networks import NetworkModel, visits_closed, visits_open

SCHEMA_VERSIONS = (1,)
KINDS = ("markov-dtmc", "markov-ctmc", "station", "open-net", "closed-net")
STATION_SYSTEMS = ("mm1", "mmm", "mminf", "mm1k", "mmmk", "mg1", "mh1", "ammm")

TIME_UNITS = {
    "s": 1.0, "min": 60.0, "h": 3600.0, "d": 86400.0,
    "years": 365 * 86400.0, "y": 365 * 86400.0,
}


class ParseError(InvalidInput):
    pass


class SchemaError(InvalidInput):
    pass


class ValidationError(InvalidInput):
    pass


@dataclass
class ModelDocument:
    schema_version: int
    kind: str
    payload: Dict[str, Any]
    sweep: Optional[Dict[str, Any]] = None
    raw: Dict[str, Any] = field(default_factory=dict)


def load_model(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not valid UTF-8") from exc
    return parse_model(text, source=str(path))


def parse_model(text, source="<string>"):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return document_from_dict(raw)


def document_from_dict(raw):
    if not isinstance(raw, dict):
        raise SchemaError("document root must be a JSON object")
    version = raw.get("schema_version")
    if version not in SCHEMA_VERSIONS:
        raise SchemaError(f"schema_version: unsupported value {version!r}")
    kind = raw.get("kind")
    if kind not in KINDS:
        raise SchemaError(f"kind: expected one of {', '.join(KINDS)}, got {kind!r}")
    payload = {k: v for k, v in raw.items() if k not in ("schema_version", "kind", "sweep")}
    doc = ModelDocument(version, kind, payload, raw.get("sweep"), raw)
    build(doc)
    if doc.sweep is not None:
        # local import: sweep grids need the parameter machinery in runner
        from .runner import sweep_points
        sweep_points(doc)
    return doc


# field helpers ---------------------------------------------------------------

def _get(obj, key, path, required=True, default=None):
    if not isinstance(obj, dict):
        raise SchemaError(f"{path}: expected an object")
    if key not in obj:
        if required:
            raise SchemaError(f"{_join(path, key)}: missing field")
        return default
    return obj[key]


def _join(path, key):
    return f"{path}.{key}" if path else key


def _number(value, path, minimum=None, strict=False, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{path}: expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"{path}: must be finite")
    if integer and value != math.floor(value):
        raise ValidationError(f"{path}: must be an integer, got {value!r}")
    if minimum is not None and (value <= minimum if strict else value < minimum):
        op = ">" if strict else ">="
        raise ValidationError(f"{path}: must be {op} {minimum}, got {value!r}")
    return int(value) if integer else value


def _vector(value, path, **kw):
    if not isinstance(value, list):
        raise SchemaError(f"{path}: expected an array")
    return [_number(v, f"{path}[{i}]", **kw) for i, v in enumerate(value)]


def _matrix(value, path, **kw):
    if not isinstance(value, list) or not value:
        raise SchemaError(f"{path}: expected a non-empty array of rows")
    rows = [_vector(r, f"{path}[{i}]", **kw) for i, r in enumerate(value)]
    if len({len(r) for r in rows}) != 1:
        raise SchemaError(f"{path}: rows have different lengths")
    return np.array(rows, dtype=float)


def _wrap(path, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except QnError as exc:
        if isinstance(exc, (ParseError, SchemaError, ValidationError)):
            raise
        if isinstance(exc, NumericFailure):
            # singular or reducible routing keeps its numeric exit code
            raise type(exc)(f"{path}: {exc}") from exc
        raise ValidationError(f"{path}: {exc}") from exc


# per-kind builders -----------------------------------------------------------

def build(doc):
    """Validated solver inputs for a document (raises on any problem)."""
    if doc.kind.startswith("markov"):
        return _build_markov(doc.payload, doc.kind)
    if doc.kind == "station":
        return _build_station(doc.payload)
    return _build_network(doc.payload, doc.kind)


def _state_index(states, ref, path):
    if isinstance(ref, int) and not isinstance(ref, bool):
        if not 0 <= ref < len(states):
            raise ValidationError(f"{path}: state index {ref} out of range")
        return ref
    if ref in states:
        return states.index(ref)
    raise ValidationError(f"{path}: unknown state {ref!r}")


def _build_markov(p, kind):
    M = _matrix(_get(p, "matrix", ""), "matrix")
    check = markov.check_generator if kind == "markov-ctmc" else markov.check_stochastic
    M = _wrap("matrix", check, M)
    n = M.shape[0]
    states = _get(p, "states", "", required=False, default=None)
    if states is None:
        states = [str(i) for i in range(n)]
    if not isinstance(states, list) or len(states) != n:
        raise SchemaError(f"states: expected {n} labels")
    states = [str(s) for s in states]
    p0 = _get(p, "initial", "", required=False)
    if p0 is not None:
        p0 = _wrap("initial", markov.check_probability, _vector(p0, "initial"), n, "initial")
    absorbing = _get(p, "absorbing", "", required=False, default=[])
    if not isinstance(absorbing, list):
        raise SchemaError("absorbing: expected an array of states")
    absorbing = [_state_index(states, a, f"absorbing[{i}]") for i, a in enumerate(absorbing)]
    unit = _get(p, "time_unit", "", required=False)
    if unit is not None and unit not in TIME_UNITS:
        raise ValidationError(f"time_unit: expected one of {', '.join(TIME_UNITS)}")
    return {"matrix": M, "states": states, "initial": p0, "absorbing": absorbing,
            "time_unit": unit}


def _build_station(p):
    system = _get(p, "system", "")
    if system not in STATION_SYSTEMS:
        raise ValidationError(f"system: expected one of {', '.join(STATION_SYSTEMS)}")
    args = {"system": system}
    args["lambda"] = _number(_get(p, "lambda", ""), "lambda", 0, strict=True)
    if system in ("mh1", "ammm"):
        args["mu"] = _vector(_get(p, "mu", ""), "mu", minimum=0, strict=True)
    elif system != "mg1":
        args["mu"] = _number(_get(p, "mu", ""), "mu", 0, strict=True)
    if system in ("mmm", "mmmk"):
        args["servers"] = _number(_get(p, "servers", ""), "servers", 1, integer=True)
    if system in ("mm1k", "mmmk"):
        args["capacity"] = _number(_get(p, "capacity", ""), "capacity", 1, integer=True)
    if system == "mg1":
        args["mean_service"] = _number(_get(p, "mean_service", ""), "mean_service", 0, strict=True)
        args["scv"] = _number(_get(p, "scv", ""), "scv", 0)
    if system == "mh1":
        args["alpha"] = _vector(_get(p, "alpha", ""), "alpha", minimum=0)
    if "k" in p:
        args["k"] = _vector(p["k"], "k", minimum=0, integer=True)
    return args


def _per_class(value, C, path, **kw):
    if isinstance(value, list):
        if len(value) != C:
            raise SchemaError(f"{path}: expected {C} per-class values")
        return _vector(value, path, **kw)
    return [_number(value, path, **kw)] * C


def _build_network(p, kind):
    classes = _get(p, "classes", "")
    if not isinstance(classes, list) or not classes:
        raise SchemaError("classes: expected a non-empty array")
    C = len(classes)
    class_names, N, Z, lam = [], [], [], []
    for c, cl in enumerate(classes):
        path = f"classes[{c}]"
        class_names.append(str(_get(cl, "name", path, required=False, default=f"class{c + 1}")))
        if kind == "closed-net":
            N.append(_number(_get(cl, "population", path), f"{path}.population", 0, integer=True))
            Z.append(_number(_get(cl, "think_time", path, required=False, default=0.0),
                             f"{path}.think_time", 0))
        else:
            lam.append(_number(_get(cl, "arrival_rate", path, required=False, default=0.0),
                               f"{path}.arrival_rate", 0))
    stations = _get(p, "stations", "")
    if not isinstance(stations, list) or not stations:
        raise SchemaError("stations: expected a non-empty array")
    K = len(stations)
    S = np.zeros((C, K))
    V = np.ones((C, K))
    m = np.ones(K)
    disc, names, ld = [], [], {}
    has_visits = []
    for i, st in enumerate(stations):
        path = f"stations[{i}]"
        names.append(str(_get(st, "name", path, required=False, default=f"center{i + 1}")))
        servers = _get(st, "servers", path, required=False, default=1)
        if servers == "inf":
            m[i] = math.inf
        else:
            m[i] = _number(servers, f"{path}.servers", 1, integer=True)
        d = _get(st, "discipline", path, required=False,
                 default="is" if math.isinf(m[i]) else "ps")
        disc.append(d)
        if "service_ld" in st:
            ld[i] = _vector(st["service_ld"], f"{path}.service_ld", minimum=0, strict=True)
            S[:, i] = ld[i][0] if ld[i] else 0.0
        else:
            S[:, i] = _per_class(_get(st, "service", path), C, f"{path}.service", minimum=0)
        if "visits" in st:
            V[:, i] = _per_class(st["visits"], C, f"{path}.visits", minimum=0)
            has_visits.append(i)
    routing = _get(p, "routing", "", required=False)
    if routing is not None:
        if has_visits:
            raise SchemaError(f"stations[{has_visits[0]}].visits: give either visits or routing, not both")
        V = _visits_from_routing(routing, kind, C, K)
        if kind == "open-net":
            arr = np.array(_matrix(routing["arrivals"], "routing.arrivals", minimum=0))
            lam = list(arr.sum(axis=1))
    model_kw = dict(S=S, V=V, m=m, ld=ld, discipline=disc, center_names=names,
                    class_names=class_names)
    if kind == "closed-net":
        model_kw.update(kind="closed", N=N, Z=Z)
    else:
        model_kw.update(kind="open", lam=lam)
    return _wrap("model", NetworkModel, **model_kw)


def _visits_from_routing(routing, kind, C, K):
    P = _get(routing, "matrix", "routing")
    if isinstance(P, list) and P and isinstance(P[0], list) and P[0] and isinstance(P[0][0], list):
        mats = [_matrix(Pc, f"routing.matrix[{c}]", minimum=0) for c, Pc in enumerate(P)]
    else:
        mats = [_matrix(P, "routing.matrix", minimum=0)] * C
    if len(mats) != C or any(M.shape != (K, K) for M in mats):
        raise SchemaError(f"routing.matrix: expected {C} matrices of shape {K}x{K}")
    if kind == "closed-net":
        ref = _get(routing, "reference", "routing", required=False, default=0)
        ref = _number(ref, "routing.reference", 0, integer=True)
        return np.array([_wrap("routing", visits_closed, M, ref) for M in mats])
    arrivals = _matrix(_get(routing, "arrivals", "routing"), "routing.arrivals", minimum=0)
    if arrivals.shape != (C, K):
        raise SchemaError(f"routing.arrivals: expected {C} rows of {K} rates")
    return np.array([_wrap("routing", visits_open, M, arrivals[c]) for c, M in enumerate(mats)])
