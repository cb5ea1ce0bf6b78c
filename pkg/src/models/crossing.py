"""Pydantic models for crossing queries and results."""

import math
from typing import Dict, List

from pydantic import BaseModel, Field, model_validator


class CrossingQuery(BaseModel):
    """Wired arcs [x_{2i-1}, x_{2i}] on the real line, free arcs in between."""

    points: List[float] = Field(..., description="Half-plane images x_1 < ... < x_2k of the arc endpoints")
    subset: List[int] = Field(..., description="Wired arcs i_1..i_r (1-based); i_1 carries the + anchor")

    model_config = {
        "json_schema_extra": {
            "examples": [
                {"points": [-3.0, -1.0, 1.0, 3.0], "subset": [1, 2]},
            ]
        }
    }

    @model_validator(mode="after")
    def _check(self) -> "CrossingQuery":
        points = self.points
        if len(points) < 2 or len(points) % 2:
            raise ValueError(f"need an even number >= 2 of points, got {len(points)}")
        if not all(math.isfinite(x) for x in points):
            raise ValueError("points must be finite")
        if any(x >= y for x, y in zip(points, points[1:])):
            raise ValueError(f"points must increase strictly, got {points}")
        k = len(points) // 2
        if not self.subset or len(set(self.subset)) != len(self.subset):
            raise ValueError("subset must list distinct wired arcs")
        if any(i < 1 or i > k for i in self.subset):
            raise ValueError(f"subset entries must lie in 1..{k}, got {self.subset}")
        return self

    @property
    def k(self) -> int:
        return len(self.points) // 2


class FKCrossingResult(BaseModel):
    """Continuum crossing value with every intermediate partition-function ratio."""

    value: float = Field(..., description="E[sigma_i1 ... sigma_ir]; the same-cluster probability for r <= 2")
    ratios: Dict[str, float] = Field(default_factory=dict, description="Z_sigma / Z_{+...+} keyed by sign string")
    weights: Dict[str, float] = Field(
        default_factory=dict, description="Normalized restricted sums over sigma with sigma_i1 = +1"
    )
