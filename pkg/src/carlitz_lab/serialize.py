"""JSON and text rendering of results, plus the inverse loaders."""

from __future__ import annotations

import json

from .anderson import AndersonModule
from .ff.kfield import FieldSpec
from .ff.laurent import LaurentSeries
from .lseries import LValue
from .twisted import FracMatrix, SkewSeries

SCHEMA = "carlitz-lab/1"


def document(command: str, config: dict, result: dict) -> dict:
    return {"schema": SCHEMA, "command": command, "config": config, "result": result}


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def error_document(kind: str, message: str, **extra) -> dict:
    return {"schema": SCHEMA, "error": dict({"kind": kind, "message": message}, **extra)}


# -- loaders -------------------------------------------------------------------------

def spec_from_json(obj: dict) -> FieldSpec:
    return FieldSpec(obj["p"], obj.get("e", 1), obj.get("s", 0), obj.get("m", 1))


def lvalue_from_json(obj: dict) -> LValue:
    return LValue(LaurentSeries.from_json(obj["value"]), dict(obj["meta"]))


def exp_series_json(E: AndersonModule, series: SkewSeries) -> dict:
    desc = E.describe()
    return {"module": desc["module"], "n": E.n, "alpha": desc.get("alpha", "1"),
            "field": E.spec.to_json(), "order": series.order,
            "coeffs": [{"j": j, "matrix": series.coeff(j).to_strings()}
                       for j in range(series.order + 1)]}


def exp_series_from_json(obj: dict) -> SkewSeries:
    spec = spec_from_json(obj["field"])
    coeffs = [FracMatrix.from_strings(spec, c["matrix"]) for c in obj["coeffs"]]
    return SkewSeries(spec, obj["n"], coeffs, obj["order"])


# -- text ----------------------------------------------------------------------------

def _is_series(obj) -> bool:
    return isinstance(obj, dict) and {"prec", "terms", "field"} <= obj.keys()


def _scalar(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    return str(x)


def _walk(obj, prefix: str, out: list):
    if _is_series(obj):
        out.append(f"{prefix}: {LaurentSeries.from_json(obj)}")
    elif isinstance(obj, dict):
        for k, v in obj.items():
            if k == "pass" and isinstance(v, bool):
                out.append(f"{prefix + ': ' if prefix else ''}{'PASS' if v else 'FAIL'}")
                continue
            _walk(v, f"{prefix}.{k}" if prefix else str(k), out)
    elif isinstance(obj, list) and obj and all(not isinstance(x, (dict, list)) for x in obj):
        out.append(f"{prefix}: [{', '.join(_scalar(x) for x in obj)}]")
    elif isinstance(obj, list):
        if not obj:
            out.append(f"{prefix}: []")
        for i, v in enumerate(obj):
            _walk(v, f"{prefix}[{i}]", out)
    else:
        out.append(f"{prefix}: {_scalar(obj)}")


def to_text(doc: dict) -> str:
    lines: list[str] = []
    if "error" in doc:
        _walk(doc["error"], "error", lines)
    else:
        lines.append(f"{doc['command']} ({doc['schema']})")
        _walk(doc["result"], "", lines)
    return "\n".join(lines) + "\n"


def emit(doc: dict, fmt: str) -> str:
    return dumps(doc) if fmt == "json" else to_text(doc)
