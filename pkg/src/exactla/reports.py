from dataclasses import dataclass, field
from typing import Any, Dict, Optional
import logging

logger = logging.getLogger(__name__)


@dataclass
class CheckReport:
    """Outcome of an exact verification: counts, the first witness of failure, free-form details."""
    name: str
    passed: bool = True
    checked: int = 0
    failures: int = 0
    first_failure: Optional[Dict[str, Any]] = None
    details: Dict[str, Any] = field(default_factory=dict)

    def record(self, ok: bool, witness: Optional[Dict[str, Any]] = None) -> bool:
        self.checked += 1
        if not ok:
            self.failures += 1
            self.passed = False
            if self.first_failure is None:
                self.first_failure = witness or {}
                logger.debug(f"{self.name}: first failure {self.first_failure}")
        return ok

    def merge(self, other: "CheckReport", prefix: Optional[str] = None) -> "CheckReport":
        self.checked += other.checked
        self.failures += other.failures
        if not other.passed:
            self.passed = False
            if self.first_failure is None:
                self.first_failure = dict(other.first_failure or {}, check=other.name)
        self.details[prefix or other.name] = other.to_dict()
        return self

    def to_dict(self) -> Dict[str, Any]:
        out = {"check": self.name, "passed": self.passed, "checked": self.checked,
               "failures": self.failures}
        if self.first_failure is not None:
            out["first_failure"] = self.first_failure
        if self.details:
            out["details"] = self.details
        return out
