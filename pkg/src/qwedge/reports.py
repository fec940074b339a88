"""Uniform result records for identity verifiers.

Every verify_* function returns a Report; the CLI serializes them as JSON.  Keys
with None values are dropped so output stays stable and diff-friendly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


def jsonify(x: Any) -> Any:
    """Recursively render Fractions as exact strings, tuples as lists."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): jsonify(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonify(v) for v in x]
    return x


@dataclass
class Report:
    identity: str
    statement: str
    params: dict = field(default_factory=dict)
    status: str = "pass"
    order_checked: int | None = None
    first_mismatch: dict | None = None
    tolerance_info: dict | None = None
    details: dict | None = None
    elapsed_ms: float | None = None

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def to_jsonable(self, with_timing: bool = True) -> dict:
        d: dict[str, Any] = {
            "identity": self.identity,
            "params": jsonify(self.params),
            "status": self.status,
        }
        if self.order_checked is not None:
            d["order_checked"] = self.order_checked
        d["statement"] = self.statement
        if self.first_mismatch is not None:
            d["first_mismatch"] = jsonify(self.first_mismatch)
        if self.tolerance_info is not None:
            d["tolerance_info"] = jsonify(self.tolerance_info)
        if self.details is not None:
            d["details"] = jsonify(self.details)
        if with_timing and self.elapsed_ms is not None:
            d["elapsed_ms"] = int(self.elapsed_ms)
        return d


def series_report(identity: str, statement: str, params: dict,
                  lhs, rhs, order_checked: int | None = None) -> Report:
    """Compare two QSeries and package the outcome."""
    if order_checked is None:
        order_checked = int(min(lhs.upper, rhs.upper))
    if lhs == rhs:
        return Report(identity, statement, params, "pass", order_checked)
    mm = lhs.first_mismatch(rhs)
    fm = None
    if mm is not None:
        e, a, b = mm
        fm = {"exponent": e, "lhs": a, "rhs": b}
    return Report(identity, statement, params, "fail", order_checked, first_mismatch=fm)
