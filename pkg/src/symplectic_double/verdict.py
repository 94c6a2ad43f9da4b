from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Verdict:
    """Outcome of a verification; truthy iff it passed."""

    name: str
    passed: bool
    witness: str | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.details:
            out["details"] = self.details
        return out


def combine(name: str, verdicts) -> Verdict:
    verdicts = list(verdicts)
    failed = [v for v in verdicts if not v.passed]
    witness = None
    if failed:
        witness = f"{failed[0].name}: {failed[0].witness}"
    return Verdict(name, not failed, witness, {"checks": len(verdicts), "failed": len(failed)})
