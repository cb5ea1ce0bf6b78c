"""Pydantic models for lab results."""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class RunRecord(BaseModel):
    """Scalar result emitted by every command."""

    command: str = Field(..., description="Subcommand that produced the record")
    inputs: Dict[str, Any] = Field(default_factory=dict, description="Resolved inputs")
    value: Any = Field(None, description="Result value (scalar, pair or mapping)")
    config_count: Optional[int] = Field(None, ge=0, description="Configurations enumerated")
    wall_time: float = Field(..., ge=0.0, description="Wall time in seconds")
    config: Dict[str, Any] = Field(default_factory=dict, description="Full resolved run configuration")

    model_config = {
        "json_schema_extra": {
            "examples": [
                {
                    "command": "lowtemp z",
                    "inputs": {"domain": "square1.json", "sources": []},
                    "value": 1.0294372515228594,
                    "config_count": 2,
                    "wall_time": 0.002,
                    "config": {"seed": 20240601, "tol": 1e-10, "jobs": 1},
                }
            ]
        }
    }


class CheckViolation(BaseModel):
    """Single identity violation."""

    site: str = Field(..., description="Site or plaquette where the identity failed")
    defect: float = Field(..., description="Observed defect")


class CheckReport(BaseModel):
    """Outcome of one identity check."""

    name: str = Field(..., description="Identity name")
    max_defect: float = Field(..., ge=0.0, description="Largest defect seen")
    tol: float = Field(..., ge=0.0, description="Tolerance applied")
    n_checked: int = Field(0, ge=0, description="Number of sites or pairs inspected")
    violations: List[CheckViolation] = Field(default_factory=list, description="Sites above tolerance")

    @property
    def ok(self) -> bool:
        return not self.violations


class VerifyReport(BaseModel):
    """Result of `obs verify` over a set of fixture domains."""

    fixtures: List[str] = Field(default_factory=list, description="Fixture files checked")
    checks: List[CheckReport] = Field(default_factory=list, description="All identity reports")

    @property
    def ok(self) -> bool:
        return all(check.ok for check in self.checks)


class RunConfig(BaseModel):
    """Resolved command-line configuration, embedded verbatim in every output."""

    command: str = Field(..., description="Subcommand, e.g. 'cont drift'")
    inputs: Dict[str, Any] = Field(default_factory=dict, description="Command arguments and input file paths")
    seed: int = Field(..., description="Master seed")
    tol: float = Field(..., gt=0.0, description="Identity tolerance")
    jobs: int = Field(1, ge=1, description="Worker processes")
    out: Optional[str] = Field(None, description="Output directory (stdout when unset)")
    fixtures: str = Field(..., description="Fixture domain directory")

    def slug(self) -> str:
        return self.command.replace(" ", "_").replace("-", "_")
