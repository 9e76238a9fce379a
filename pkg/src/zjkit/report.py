"""Verdict records and canonical JSON serialisation."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

PASS, FAIL, SKIPPED, UNMET = "pass", "fail", "skipped", "unmet"


@dataclass
class Check:
    """One verified statement.

    ``verdict`` is ``pass``/``fail``, ``skipped`` when a cap was hit, or
    ``unmet`` when the statement's hypothesis does not hold (nothing asserted).
    Failures carry witnesses as element or subgroup index lists.
    """

    name: str
    verdict: str
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    millis: float = 0.0

    @property
    def ok(self) -> bool:
        return self.verdict != FAIL

    def to_dict(self) -> dict:
        return jsonable(asdict(self))


def verdict(flag: bool) -> str:
    return PASS if flag else FAIL


@contextmanager
def timed(check_list: list | None = None):
    """Yield a dict; on exit its ``millis`` is set (and copied onto appended checks)."""
    box: dict = {}
    t0 = time.perf_counter()
    n0 = len(check_list) if check_list is not None else 0
    yield box
    box["millis"] = round((time.perf_counter() - t0) * 1000, 3)
    if check_list is not None:
        for c in check_list[n0:]:
            c.millis = box["millis"]


def jsonable(obj: Any) -> Any:
    """Convert numpy scalars/arrays, sets and tuples to plain JSON types."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(jsonable(v) for v in obj)
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if hasattr(obj, "elems") and hasattr(obj, "mask"):
        return [int(x) for x in obj.elems]
    return obj


def dumps(report: dict) -> str:
    return json.dumps(jsonable(report), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def render_table(report: dict) -> str:
    lines = []
    grp = report.get("group", {})
    if grp:
        lines.append("  ".join(f"{k}={grp[k]}" for k in sorted(grp)))
    for fam in report.get("families", []):
        lines.append(f"  {fam['family']:<8} members={fam['member_count']:<4} |I|={fam['I_order']:<6} "
                     f"|J|={fam['J_order']:<6} |ZJ|={fam['ZJ_order']}")
    for chk in report.get("checks", []):
        wit = f"  witnesses={chk['witnesses'][:3]}" if chk.get("witnesses") else ""
        lines.append(f"  [{chk['verdict'].upper():>7}] {chk['name']} ({chk['millis']:.1f} ms){wit}")
    return "\n".join(lines) + "\n"
