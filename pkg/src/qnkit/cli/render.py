"""Render result documents as aligned tables, CSV or JSON."""

import csv
import io

FORMATS = ("table", "csv", "json")


def _rows(result):
    m = result.metrics
    kind = result.kind
    if kind == "sweep":
        return m["columns"], m["rows"]
    if kind == "markov":
        return ["state", "probability"], [[s, p] for s, p in zip(m["states"], m["probabilities"])]
    if kind == "absorption":
        rows = [["mtta", m["mtta"]]]
        rows += [[f"sojourn[{s}]", v] for s, v in zip(m["states"], m["sojourn"])]
        return ["metric", "value"], rows
    if kind == "station":
        rows = [[key, m[key]] for key in ("U", "R", "Q", "X", "p0", "pK") if key in m]
        for k, p in zip(m.get("k", []), m.get("pk", [])):
            rows.append([f"pk[{k}]", p])
        return ["metric", "value"], rows
    if kind == "bounds":
        header = ["class", "X_lower", "X_upper", "R_lower", "R_upper"]
        rows = [[name, m["X_lower"][c], m["X_upper"][c], m["R_lower"][c], m["R_upper"][c]]
                for c, name in enumerate(m["classes"])]
        if len(rows) > 1:
            rows.append(["all", sum(m["X_lower"]), sum(m["X_upper"]), None, None])
        return header, rows
    return _network_rows(m)


def _network_rows(m):
    centers, classes = m["centers"], m["classes"]
    header = ["class", "metric"] + centers + ["system"]
    rows = []
    for c, name in enumerate(classes):
        system = {"U": None, "R": m["R_class"][c], "Q": sum(m["Q"][c]), "X": m["X_class"][c]}
        for key in ("U", "R", "Q", "X"):
            rows.append([name, key] + list(m[key][c]) + [system[key]])
    C = len(classes)
    tot = {key: [sum(m[key][c][i] for c in range(C)) for i in range(len(centers))]
           for key in ("U", "Q", "X")}
    # per-center response time of the mix, weighted by class throughput
    R_all = [sum(m["X"][c][i] * m["R"][c][i] for c in range(C)) / tot["X"][i] if tot["X"][i] > 0
             else None for i in range(len(centers))]
    rows.append(["all", "U"] + tot["U"] + [None])
    rows.append(["all", "R"] + R_all + [m["R_sys"]])
    rows.append(["all", "Q"] + tot["Q"] + [m["Q_sys"]])
    rows.append(["all", "X"] + tot["X"] + [m["X_sys"]])
    return header, rows


def _cell(value, spec):
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, spec)
    return str(value)


def render(result, fmt="table"):
    if fmt == "json":
        return result.to_json() + "\n"
    header, rows = _rows(result)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v, ".17g") for v in row])
        return buf.getvalue()
    if fmt != "table":
        raise ValueError(f"unknown format {fmt!r}")
    cells = [list(map(str, header))] + [[_cell(v, ".6g") for v in row] for row in rows]
    widths = [max(len(r[j]) for r in cells) for j in range(len(header))]
    lines = [f"# {result.solver}"]
    for n, r in enumerate(cells):
        lines.append("  ".join(v.rjust(w) if n else v.ljust(w) for v, w in zip(r, widths)).rstrip())
        if n == 0:
            lines.append("  ".join("-" * w for w in widths))
    lines.extend(f"warning: {w}" for w in result.warnings)
    return "\n".join(lines) + "\n"
