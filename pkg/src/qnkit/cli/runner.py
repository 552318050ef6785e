"""Dispatch model documents to the solvers and run parameter sweeps."""

import copy
import itertools
import json
import math
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from .. import markov, stations
from ..errors import InvalidInput, QnError, Unstable
from ..networks import (
    bounds_closed,
    bounds_open,
    solve_closed_multi_bs,
    solve_closed_multi_mva,
    solve_closed_single_conv,
    solve_closed_single_mva,
    solve_open_multi,
    solve_open_single,
)
from .schema import TIME_UNITS, SchemaError, ValidationError, build, document_from_dict

SOLVE_METHODS = ("mva", "conv", "bs")
BOUND_METHODS = ("aba", "bsb")


@dataclass
class RunOptions:
    method: Optional[str] = None
    horizon: Optional[float] = None
    horizon_units: Optional[str] = None
    until_absorbing: bool = False
    tol: float = 1e-7
    max_iter: int = 100000
    jobs: int = 1


@dataclass
class ResultDocument:
    input: Dict[str, Any]
    solver: str
    kind: str
    metrics: Dict[str, Any]
    warnings: List[str] = field(default_factory=list)
    timing: Dict[str, float] = field(default_factory=dict)

    def to_dict(self):
        return {"input": self.input, "solver": self.solver, "kind": self.kind,
                "metrics": self.metrics, "warnings": list(self.warnings),
                "timing": dict(self.timing)}

    @classmethod
    def from_dict(cls, d):
        return cls(input=d["input"], solver=d["solver"], kind=d["kind"], metrics=d["metrics"],
                   warnings=list(d.get("warnings", [])), timing=dict(d.get("timing", {})))

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent, allow_nan=False)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def jsonable(value):
    """Plain JSON types; non-finite floats become the strings "inf", "-inf", "nan"."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isfinite(value):
            return value
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    return value


def run(command, doc, options=None):
    """Execute ``solve``, ``bounds`` or ``sweep`` on a loaded document."""
    options = options or RunOptions()
    start = time.perf_counter()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if command == "solve":
            solver, kind, metrics = _solve(doc, options)
        elif command == "bounds":
            solver, kind, metrics = _bounds(doc, options)
        elif command == "sweep":
            solver, kind, metrics = _sweep(doc, options)
        else:
            raise InvalidInput(f"unknown command {command!r}")
    msgs = [str(w.message) for w in caught]
    msgs += metrics.pop("_warnings", [])
    return ResultDocument(input=jsonable(doc.raw), solver=solver, kind=kind,
                          metrics=jsonable(metrics), warnings=list(dict.fromkeys(msgs)),
                          timing={"seconds": time.perf_counter() - start})


# solve -----------------------------------------------------------------------

def _unit_factor(inputs, options):
    """Model time units per requested unit."""
    if options.horizon_units is None:
        return 1.0
    if options.horizon_units not in TIME_UNITS:
        raise InvalidInput(f"--horizon-units must be one of {', '.join(TIME_UNITS)}")
    if inputs.get("time_unit") is None:
        raise InvalidInput("--horizon-units needs a time_unit in the model")
    return TIME_UNITS[options.horizon_units] / TIME_UNITS[inputs["time_unit"]]


def _solve_markov(doc, options):
    inp = build(doc)
    M, states, p0 = inp["matrix"], inp["states"], inp["initial"]
    ctmc = doc.kind == "markov-ctmc"
    factor = _unit_factor(inp, options) if ctmc else 1.0
    unit = options.horizon_units or inp.get("time_unit")
    if options.until_absorbing:
        if p0 is None:
            raise InvalidInput("absorption analysis needs an initial vector")
        M = M.copy()
        for i in inp["absorbing"]:
            M[i] = 0.0
            if not ctmc:
                M[i, i] = 1.0
        if ctmc:
            mtta = markov.ctmc_mtta(M, p0) / factor
            L = markov.ctmc_exps(M, p0) / factor
        else:
            mtta = markov.dtmc_mtta(M, p0)
            L = markov.dtmc_exps(M, p0)
        return "ctmc_mtta" if ctmc else "dtmc_mtta", "absorption", {
            "states": states, "mtta": mtta, "sojourn": L.tolist(), "unit": unit}
    if options.horizon is not None:
        if p0 is None:
            raise InvalidInput("transient analysis needs an initial vector")
        if ctmc:
            p = markov.ctmc_solve(M, options.horizon * factor, p0)
        else:
            p = markov.dtmc_solve(M, options.horizon, p0)
        name = "ctmc_transient" if ctmc else "dtmc_transient"
        return name, "markov", {"states": states, "probabilities": p.tolist(),
                                "horizon": options.horizon, "unit": unit}
    p = markov.ctmc_solve(M) if ctmc else markov.dtmc_solve(M)
    return ("ctmc_stationary" if ctmc else "dtmc_stationary"), "markov", {
        "states": states, "probabilities": p.tolist()}


def _solve_station(doc):
    a = build(doc)
    system = a["system"]
    k = a.get("k")
    if system == "mm1":
        res = stations.qs_mm1(a["lambda"], a["mu"], k)
    elif system == "mmm":
        res = stations.qs_mmm(a["lambda"], a["mu"], a["servers"], k)
    elif system == "mminf":
        res = stations.qs_mminf(a["lambda"], a["mu"], k)
    elif system == "mm1k":
        res = stations.qs_mm1k(a["lambda"], a["mu"], a["capacity"], k)
    elif system == "mmmk":
        res = stations.qs_mmmk(a["lambda"], a["mu"], a["servers"], a["capacity"], k)
    elif system == "mg1":
        res = stations.qs_mg1(a["lambda"], a["mean_service"], a["scv"], k)
    elif system == "mh1":
        res = stations.qs_mh1(a["lambda"], a["mu"], a["alpha"], k)
    else:
        res = stations.qs_ammm(a["lambda"], a["mu"], k)
    metrics = res.as_dict()
    if k is not None:
        metrics["k"] = list(k)
    return f"qs_{system}", "station", metrics


def _solve_network(doc, options):
    model = build(doc)
    method = options.method
    if doc.kind == "open-net":
        if method not in (None,):
            raise InvalidInput(f"--method {method} does not apply to open networks")
        if model.n_classes == 1:
            sol, name = solve_open_single(model), "solve_open_single"
        else:
            sol, name = solve_open_multi(model), "solve_open_multi"
    else:
        method = method or "mva"
        if method not in SOLVE_METHODS:
            raise InvalidInput(f"--method must be one of {', '.join(SOLVE_METHODS)} for solve")
        single = model.n_classes == 1
        if method == "mva" and single:
            sol, name = solve_closed_single_mva(model), "solve_closed_single_mva"
        elif method == "mva":
            sol, name = solve_closed_multi_mva(model), "solve_closed_multi_mva"
        elif method == "conv":
            if not single:
                raise InvalidInput("convolution supports single-class models only")
            sol, name = solve_closed_single_conv(model), "solve_closed_single_conv"
        else:
            sol, name = (solve_closed_multi_bs(model, tol=options.tol, max_iter=options.max_iter),
                         "solve_closed_multi_bs")
    metrics = sol.as_dict()
    metrics["centers"] = model.center_names
    metrics["classes"] = model.class_names
    metrics["_warnings"] = list(sol.warnings)
    return name, "network", metrics


def _solve(doc, options):
    if doc.kind.startswith("markov"):
        return _solve_markov(doc, options)
    if doc.kind == "station":
        return _solve_station(doc)
    return _solve_network(doc, options)


def _bounds(doc, options):
    if doc.kind not in ("open-net", "closed-net"):
        raise InvalidInput("bounds need a network model")
    method = options.method or "aba"
    if method not in BOUND_METHODS:
        raise InvalidInput(f"--method must be one of {', '.join(BOUND_METHODS)} for bounds")
    model = build(doc)
    if doc.kind == "closed-net":
        res, name = bounds_closed(model, method), "bounds_closed"
    else:
        res, name = bounds_open(model, method), "bounds_open"
    metrics = res.as_dict()
    metrics["centers"] = model.center_names
    metrics["classes"] = model.class_names
    return name, "bounds", metrics


# sweep -----------------------------------------------------------------------

SWEEPABLE = {
    "station": ("lambda", "mu", "servers", "capacity", "mean_service", "scv"),
    "closed-net": ("population", "think_time", "beta"),
    "open-net": ("lambda",),
}


def _parse_name(name):
    """``"beta[1]"`` -> ``("beta", 1)``; ``"lambda"`` -> ``("lambda", None)``."""
    if name.endswith("]") and "[" in name:
        base, idx = name[:-1].split("[", 1)
        if not idx.isdigit():
            raise SchemaError(f"sweep: bad parameter index in {name!r}")
        return base, int(idx)
    return name, None


def _grid_values(spec, path):
    if not isinstance(spec, dict) or "name" not in spec:
        raise SchemaError(f"{path}: expected an object with a name")
    if "values" in spec:
        vals = spec["values"]
        if not isinstance(vals, list):
            raise SchemaError(f"{path}.values: expected an array")
        for j, v in enumerate(vals):
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise SchemaError(f"{path}.values[{j}]: expected a finite number")
        return [float(v) for v in vals]
    try:
        start, stop, num = float(spec["start"]), float(spec["stop"]), spec["num"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"{path}: give either values or start/stop/num") from exc
    if isinstance(num, bool) or not isinstance(num, int) or num < 0:
        raise SchemaError(f"{path}.num: expected a non-negative integer")
    return [float(v) for v in np.linspace(start, stop, num)]


def sweep_points(doc):
    """Parameter names and grid points (row-major over the listed parameters)."""
    sw = doc.sweep
    if not isinstance(sw, dict):
        raise SchemaError("sweep: expected an object")
    if doc.kind not in SWEEPABLE:
        raise SchemaError(f"sweep: not supported for kind {doc.kind}")
    params = sw.get("parameters")
    if not isinstance(params, list) or not 1 <= len(params) <= 2:
        raise SchemaError("sweep.parameters: expected one or two parameters")
    names, grids = [], []
    for j, spec in enumerate(params):
        path = f"sweep.parameters[{j}]"
        grids.append(_grid_values(spec, path))
        base, _ = _parse_name(str(spec["name"]))
        if base not in SWEEPABLE[doc.kind]:
            raise SchemaError(f"{path}.name: cannot sweep {spec['name']!r} on {doc.kind}")
        names.append(str(spec["name"]))
    rule = sw.get("rule")
    if any(_parse_name(n)[0] == "beta" for n in names):
        if not isinstance(rule, dict) or rule.get("type") != "population-mix":
            raise SchemaError("sweep.rule: beta parameters need a population-mix rule")
        total = rule.get("total")
        if isinstance(total, bool) or not isinstance(total, int) or total < 0:
            raise SchemaError("sweep.rule.total: expected a non-negative integer")
    elif rule is not None:
        raise SchemaError("sweep.rule: only population-mix rules are supported")
    return names, list(itertools.product(*grids))


def _apply(raw, kind, names, values, rule):
    """A copy of the document with one grid point applied.

    Returns ``(raw, derived, infeasible)``.
    """
    raw = copy.deepcopy(raw)
    raw.pop("sweep", None)
    derived = {}
    betas = {}
    for name, v in zip(names, values):
        base, idx = _parse_name(name)
        if kind == "station":
            raw[base] = int(round(v)) if base in ("servers", "capacity") else v
            continue
        classes = raw["classes"]
        c = idx if idx is not None else 0
        if not 0 <= c < len(classes):
            raise SchemaError(f"sweep: class index {c} out of range in {name!r}")
        if base == "beta":
            betas[c] = v
        elif base == "population":
            classes[c]["population"] = int(round(v))
        elif base == "think_time":
            classes[c]["think_time"] = v
        else:
            classes[c]["arrival_rate"] = v
    if betas:
        classes = raw["classes"]
        C = len(classes)
        total = int(rule["total"])
        if set(betas) != set(range(C - 1)):
            raise SchemaError("sweep: population-mix needs beta[c] for every class but the last")
        pops = [int(math.floor(betas[c] * total + 0.5)) for c in range(C - 1)]
        pops.append(total - sum(pops))
        for c in range(C):
            derived[f"population[{c}]"] = pops[c]
        if any(b < 0 for b in betas.values()) or sum(betas.values()) > 1 + 1e-12 or pops[-1] < 0:
            return raw, derived, True
        for c in range(C):
            classes[c]["population"] = pops[c]
    return raw, derived, False


def _metric_columns(kind, raw):
    if kind == "station":
        return ["U", "R", "Q", "X"]
    names = [cl.get("name", f"class{c + 1}") for c, cl in enumerate(raw["classes"])]
    return ["X_sys", "R_sys", "Q_sys"] + [f"X[{n}]" for n in names]


def _sweep_point(task):
    raw, kind, names, values, rule, options = task
    point_raw, derived, infeasible = _apply(raw, kind, names, values, rule)
    row = {"derived": derived, "status": "ok", "metrics": None, "warnings": []}
    if infeasible:
        row["status"] = "infeasible"
        return row
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            doc = document_from_dict(point_raw)
            _, _, m = _solve(doc, options)
        row["warnings"] = [str(w.message) for w in caught] + m.get("_warnings", [])
    except Unstable:
        row["status"] = "unstable"
        return row
    except (SchemaError, ValidationError):
        raise
    except QnError as exc:
        row["status"] = f"failed: {exc}"
        return row
    if kind == "station":
        row["metrics"] = [m["U"], m["R"], m["Q"], m["X"]]
    else:
        row["metrics"] = [m["X_sys"], m["R_sys"], m["Q_sys"]] + list(m["X_class"])
    return row


def _sweep(doc, options):
    names, points = sweep_points(doc)
    rule = doc.sweep.get("rule")
    tasks = [(doc.raw, doc.kind, names, p, rule, options) for p in points]
    if options.jobs > 1 and len(tasks) > 1:
        chunk = max(1, len(tasks) // (options.jobs * 8))
        with ProcessPoolExecutor(max_workers=options.jobs) as pool:
            rows = list(pool.map(_sweep_point, tasks, chunksize=chunk))
    else:
        rows = [_sweep_point(t) for t in tasks]
    derived_cols = list(rows[0]["derived"]) if rows else []
    mcols = _metric_columns(doc.kind, doc.raw)
    columns = names + derived_cols + ["status"] + mcols
    table = []
    msgs = []
    for p, row in zip(points, rows):
        metrics = row["metrics"] if row["metrics"] is not None else [None] * len(mcols)
        table.append(list(p) + [row["derived"][c] for c in derived_cols] + [row["status"]] + metrics)
        msgs.extend(row["warnings"])
    solver = "sweep:" + (options.method or "default")
    return solver, "sweep", {"columns": columns, "rows": table, "_warnings": msgs}
