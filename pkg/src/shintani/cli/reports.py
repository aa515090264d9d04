#!/usr/bin/env python3
"""
Shintani - Reports

Verification reports: one Check per assertion, grouped by suite. The JSON
form has sorted keys and keeps the timestamp in a single top-level field, so
two runs of the same manifest differ only in generated_at.
"""

import json
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Union

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field
from termcolor import cprint

from shintani.arith.cyclotomic import CycloValue
from shintani.arith.padic import PadicNumber


def to_jsonable(value: Any) -> Any:
    """JSON form of library values: p-adic numbers as digit lists, cyclotomic values as coefficients."""
    if isinstance(value, (PadicNumber, CycloValue)):
        return value.to_json()
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if hasattr(value, "to_json"):
        return value.to_json()
    return value


class Check(BaseModel):
    model_config = ConfigDict(extra="forbid")

    suite: str
    name: str
    passed: bool
    detail: str = ""
    values: dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def make(cls, suite: str, name: str, passed: bool, detail: str = "", **values: Any) -> "Check":
        return cls(suite=suite, name=name, passed=bool(passed), detail=detail, values=to_jsonable(values))

    @classmethod
    def failure(cls, suite: str, name: str, error: Exception) -> "Check":
        return cls(suite=suite, name=name, passed=False, detail=f"{type(error).__name__}: {error}")


class Report(BaseModel):
    model_config = ConfigDict(extra="forbid")

    manifest: str
    seed: int
    suites: list[str]
    checks: list[Check]
    generated_at: str = Field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    @property
    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    @property
    def passed(self) -> bool:
        return not self.failed

    def payload(self, include_timestamp: bool = True) -> dict:
        data = self.model_dump()
        if not include_timestamp:
            data.pop("generated_at")
        return data

    def to_json(self, include_timestamp: bool = True) -> str:
        return json.dumps(self.payload(include_timestamp), sort_keys=True, indent=2)


def write_json(payload: Union[dict, str], path: Union[str, Path]) -> Path:
    """Write a JSON document (sorted keys) and return its path."""
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    text = payload if isinstance(payload, str) else json.dumps(to_jsonable(payload), sort_keys=True, indent=2)
    out.write_text(text + "\n", encoding="utf-8")
    return out


def summary_frame(report: Report) -> pd.DataFrame:
    """Checks, passed and failed per suite."""
    if not report.checks:
        return pd.DataFrame(columns=["suite", "checks", "passed", "failed"])
    df = pd.DataFrame([{"suite": c.suite, "passed": c.passed} for c in report.checks])
    summary = df.groupby("suite").agg(checks=("passed", "size"), passed=("passed", "sum")).reset_index()
    summary["failed"] = summary["checks"] - summary["passed"]
    return summary.sort_values("suite").reset_index(drop=True)


def print_summary(report: Report, csv_path: Optional[Union[str, Path]] = None) -> pd.DataFrame:
    summary = summary_frame(report)
    cprint("\nSUITE SUMMARY", "cyan", attrs=["bold"])
    print(summary.to_string(index=False))
    for check in report.failed:
        cprint(f"  FAIL {check.suite}/{check.name}: {check.detail}", "red")
    if csv_path:
        out = Path(csv_path)
        out.parent.mkdir(parents=True, exist_ok=True)
        summary.to_csv(out, index=False)
        cprint(f"  Summary written to {out}", "green")
    return summary
