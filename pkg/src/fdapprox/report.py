"""Verification reports with a deterministic JSON form."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any


def digest(obj: Any) -> str:
    """SHA-256 of the canonical JSON encoding of ``obj``."""
    text = json.dumps(obj, sort_keys=True, separators=(",", ":"), default=_jsonable)
    return hashlib.sha256(text.encode()).hexdigest()


def _jsonable(x):
    if hasattr(x, "tolist"):
        return x.tolist()
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    raise TypeError(f"not JSON serializable: {type(x).__name__}")


@dataclass
class Finding:
    kind: str
    indices: Any = None
    value: Any = None
    tolerance: float | None = None
    passed: bool = True
    detail: Any = None

    def to_json(self) -> dict:
        out = {"kind": self.kind, "indices": self.indices, "value": _clean(self.value),
               "tolerance": self.tolerance, "pass": bool(self.passed)}
        if self.detail is not None:
            out["detail"] = _clean(self.detail)
        return out


def _clean(v):
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if hasattr(v, "item") and getattr(v, "ndim", 1) == 0:
        return v.item()
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    return v


@dataclass
class Report:
    suite: str
    findings: list = field(default_factory=list)
    inputs: Any = None
    artifacts: dict = field(default_factory=dict)

    def add(self, kind, indices=None, value=None, tolerance=None, passed=True, detail=None) -> Finding:
        f = Finding(kind, indices, value, tolerance, passed, detail)
        self.findings.append(f)
        return f

    def violation(self, kind, indices=None, detail=None, value=None) -> Finding:
        return self.add(kind, indices, value, None, False, detail)

    @property
    def passed(self) -> bool:
        return all(f.passed for f in self.findings)

    @property
    def violations(self) -> list:
        return [f for f in self.findings if not f.passed]

    def extend(self, other: "Report", prefix: str = "") -> None:
        for f in other.findings:
            self.findings.append(Finding(prefix + f.kind, f.indices, f.value, f.tolerance, f.passed, f.detail))

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "inputs-digest": digest(self.inputs),
            "findings": [f.to_json() for f in self.findings],
            "pass": self.passed,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2, default=_jsonable)

    def __bool__(self):
        return self.passed


def norm_table_csv(labels, table) -> str:
    """CSV rendering of a square matrix of norms."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([""] + list(labels))
    for lab, row in zip(labels, table):
        w.writerow([lab] + [repr(float(x)) for x in row])
    return buf.getvalue()
