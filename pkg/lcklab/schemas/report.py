"""Verification report schema"""

import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from lcklab.config.conventions import CONVENTIONS
from lcklab.config.settings import settings
from lcklab.core.base import Verdict

# Fields that vary between otherwise identical runs.
VOLATILE_FIELDS = {"created_at"}
VOLATILE_ENTRY_FIELDS = {"wall_ms"}


class SuiteEntry(BaseModel):
    """One suite's outcome as recorded in the report"""

    suite: str
    residual_max: Optional[float] = None
    verdict: Verdict
    paper_anchor: str = ""
    wall_ms: float = 0.0
    values: Dict[str, Any] = Field(default_factory=dict)
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict == Verdict.PASS


class VerificationReport(BaseModel):
    """Structured record of a verification run"""

    schema_version: str = Field(default_factory=lambda: settings.REPORT_SCHEMA_VERSION)
    conventions_fingerprint: str = Field(default_factory=CONVENTIONS.fingerprint)
    seed: int
    config: Dict[str, Any] = Field(default_factory=dict)
    entries: List[SuiteEntry] = Field(default_factory=list)
    created_at: str = Field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    @property
    def passed(self) -> bool:
        return all(entry.passed for entry in self.entries)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def entry(self, suite: str) -> Optional[SuiteEntry]:
        return next((entry for entry in self.entries if entry.suite == suite), None)

    def body(self) -> Dict[str, Any]:
        """Report content without timestamps and wall times."""
        data = self.model_dump(mode="json", exclude=VOLATILE_FIELDS)
        for entry in data["entries"]:
            for key in VOLATILE_ENTRY_FIELDS:
                entry.pop(key, None)
        return data

    def body_json(self) -> str:
        return json.dumps(self.body(), sort_keys=True, indent=2)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    def save(self, path: str) -> Path:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(self.to_json(), encoding="utf-8")
        return target

    @classmethod
    def load(cls, path: str) -> "VerificationReport":
        return cls.model_validate_json(Path(path).read_text(encoding="utf-8"))
