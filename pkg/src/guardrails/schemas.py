# src/guardrails/schemas.py
from __future__ import annotations
from typing import Any, Dict, List, Tuple
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.models import Command

# Envelope schema (what every command prints)
class ReportEnvelope(BaseModel):
    model_config = ConfigDict(extra="forbid")

    schema_version: str = Field(..., min_length=1)
    command: Command
    config: Dict[str, Any]
    result: Any
    digest: str = Field(..., pattern=r"^[0-9a-f]{64}$")

def validate_report(doc: Dict[str, Any]) -> Tuple[bool, List[str]]:
    """
    Strict validation for the document we write at the end.
    """
    violations: List[str] = []
    try:
        envelope = ReportEnvelope(**doc)
    except ValidationError as e:
        return False, [str(e)]
    except TypeError as e:
        return False, [f"report is not a mapping: {e}"]

    if envelope.result is None:
        violations.append("Report has no result")
    if "seed" not in envelope.config:
        violations.append("Report config does not record the seed")

    return (len(violations) == 0, violations)
