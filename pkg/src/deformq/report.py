"""Check records and deterministic JSON/CSV serialization."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field

from .grassmann import Multivector
from .phase import PhaseFunction
from .scalar import Scalar

MAX_TEXT = 2000
RECORD_KEYS = ("backend", "check", "id", "inputs_hash", "lhs", "pass", "paper_ref", "residual", "rhs")


def fmt_float(x: float) -> str:
    return "%.17g" % x


def describe(value) -> object:
    """A stable JSON-ready description of a value (long symbolic values are summarized)."""
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, Scalar):
        return str(value)
    if isinstance(value, (Multivector, PhaseFunction)):
        text = str(value)
        if len(text) <= MAX_TEXT:
            return text
        digest = hashlib.sha256(text.encode()).hexdigest()[:16]
        return f"<{type(value).__name__}: {len(value)} terms, sha256 {digest}>"
    if isinstance(value, (list, tuple)):
        return [describe(v) for v in value]
    if isinstance(value, dict):
        return {str(k): describe(v) for k, v in value.items()}
    return str(value)


def inputs_hash(inputs: dict) -> str:
    text = dumps(describe(inputs))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


@dataclass
class CheckRecord:
    id: str
    check: str
    paper_ref: str
    inputs: dict
    lhs: object
    rhs: object
    residual: object
    backend: str
    passed: bool
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "id": self.id,
            "check": self.check,
            "paper_ref": self.paper_ref,
            "inputs_hash": inputs_hash(self.inputs),
            "lhs": describe(self.lhs),
            "rhs": describe(self.rhs),
            "residual": describe(self.residual),
            "backend": self.backend,
            "pass": bool(self.passed),
        }
        if self.extra:
            out["extra"] = describe(self.extra)
        return out


def _encode(obj, out: list):
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        if math.isfinite(obj):
            out.append(fmt_float(obj))
        else:
            out.append(json.dumps(str(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for k, v in enumerate(obj):
            if k:
                out.append(", ")
            _encode(v, out)
        out.append("]")
    elif isinstance(obj, dict):
        out.append("{")
        for k, key in enumerate(sorted(obj)):
            if k:
                out.append(", ")
            out.append(json.dumps(str(key), ensure_ascii=False))
            out.append(": ")
            _encode(obj[key], out)
        out.append("}")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    """JSON with sorted keys and floats at 17 significant digits."""
    out: list = []
    _encode(obj, out)
    return "".join(out)


def build_report(records, config: dict) -> dict:
    recs = [r.to_dict() for r in records]
    failed = [r["id"] for r in recs if not r["pass"]]
    return {
        "config": describe(config),
        "summary": {
            "checks": len(recs),
            "passed": len(recs) - len(failed),
            "failed": failed,
            "max_float_residual": max_float_residual(records),
        },
        "records": recs,
    }


def max_float_residual(records) -> float:
    worst = 0.0
    for r in records:
        if isinstance(r.residual, float):
            worst = max(worst, r.residual)
    return worst


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_float(x) if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def records_csv(records) -> str:
    rows = []
    for r in records:
        d = r.to_dict()
        res = d["residual"]
        rows.append((d["id"], d["check"], d["paper_ref"], d["backend"], res if not isinstance(res, dict) else dumps(res), d["pass"]))
    return to_csv(("id", "check", "paper_ref", "backend", "residual", "pass"), rows)
