"""Check and suite reports, serialized as diffable JSON artifacts."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Check:
    tag: str
    params: dict
    status: str
    witness: str | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        out = {"tag": self.tag, "params": self.params, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def ok(tag: str, **params) -> Check:
    return Check(tag, params, "pass")


def fail(tag: str, witness: str, **params) -> Check:
    return Check(tag, params, "fail", witness)


def checked(tag: str, passed: bool, witness: str | None = None, **params) -> Check:
    return Check(tag, params, "pass" if passed else "fail",
                 None if passed else witness)


@dataclass
class SuiteReport:
    suite: str
    params: dict
    checks: list = field(default_factory=list)
    wallclock: float = 0.0

    def extend(self, checks) -> None:
        self.checks.extend(checks)

    @property
    def counts(self) -> dict:
        passed = sum(1 for c in self.checks if c.passed)
        return {"passed": passed, "failed": len(self.checks) - passed}

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "params": self.params,
            "checks": [c.to_dict() for c in self.checks],
            "counts": self.counts,
            "wallclock": self.wallclock,
        }

    def to_json(self, pretty: bool = False) -> str:
        if pretty:
            return json.dumps(self.to_dict(), indent=2, sort_keys=False)
        return json.dumps(self.to_dict(), sort_keys=False)

    def summary_lines(self):
        for c in self.checks:
            ptxt = " ".join(f"{k}={v}" for k, v in c.params.items())
            line = f"[{c.status.upper():4}] {self.suite}: {c.tag}" + (f" ({ptxt})" if ptxt else "")
            if c.witness:
                line += f"  witness: {c.witness}"
            yield line
