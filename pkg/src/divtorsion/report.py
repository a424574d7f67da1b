"""Pass/fail reports shared by the verification routines and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List


@dataclass
class Check:
    label: str
    ok: bool
    detail: str = ""


@dataclass
class Report:
    name: str
    checks: List[Check] = field(default_factory=list)
    data: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, label: str, ok: bool, detail: str = "") -> bool:
        self.checks.append(Check(label, bool(ok), detail))
        return bool(ok)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.ok]

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.label, c.ok, c.detail))

    def to_text(self) -> str:
        lines = [f"== {self.name}: {'PASS' if self.passed else 'FAIL'} ({len(self.checks)} checks)"]
        for c in self.checks:
            tail = f"  [{c.detail}]" if c.detail else ""
            lines.append(f"  {'ok  ' if c.ok else 'FAIL'} {c.label}{tail}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": [{"label": c.label, "ok": c.ok, "detail": c.detail} for c in self.checks],
            "data": self.data,
        }
