"""Pydantic models for domain description files."""

from pathlib import Path
from typing import List, Optional, Tuple

import json

import yaml
from pydantic import BaseModel, Field, model_validator

from src.models.enums import ArcLabel


class ArcSpec(BaseModel):
    """One boundary arc, running counterclockwise from `from` to `to`."""

    label: ArcLabel = Field(..., description="Boundary condition on the arc")
    start: Tuple[int, int] = Field(..., alias="from", description="Lattice vertex where the arc starts")
    end: Tuple[int, int] = Field(..., alias="to", description="Lattice vertex where the arc ends")
    spin: Optional[int] = Field(
        None, description="Assigned spin (+1/-1) for a free arc; ignored for fixed arcs"
    )

    model_config = {"populate_by_name": True}

    @model_validator(mode="after")
    def _check_spin(self) -> "ArcSpec":
        if self.spin is not None and self.spin not in (-1, 1):
            raise ValueError(f"spin must be +1 or -1, got {self.spin}")
        return self


class DomainSpec(BaseModel):
    """Domain file: faces (or a rectangle), mesh size and boundary arcs."""

    mesh: float = Field(1.0, gt=0.0, description="Lattice mesh size delta")
    faces: Optional[List[Tuple[int, int]]] = Field(
        None, description="Integer cells (i, j) covering [i, i+1] x [j, j+1]"
    )
    rect: Optional[Tuple[int, int]] = Field(None, description="Rectangle shorthand [width, height]")
    arcs: List[ArcSpec] = Field(default_factory=list, description="Counterclockwise boundary arcs")

    model_config = {
        "json_schema_extra": {
            "examples": [
                {
                    "mesh": 1.0,
                    "rect": [2, 2],
                    "arcs": [
                        {"label": "minus", "from": [1, 0], "to": [2, 1]},
                        {"label": "free", "from": [2, 1], "to": [1, 2]},
                        {"label": "plus", "from": [1, 2], "to": [1, 0]},
                    ],
                }
            ]
        }
    }

    @model_validator(mode="after")
    def _check_shape(self) -> "DomainSpec":
        if (self.faces is None) == (self.rect is None):
            raise ValueError("exactly one of 'faces' or 'rect' must be given")
        if self.rect is not None and min(self.rect) < 1:
            raise ValueError(f"rect dimensions must be positive, got {list(self.rect)}")
        return self

    def cells(self) -> List[Tuple[int, int]]:
        """Face list, expanding the rectangle shorthand."""
        if self.faces is not None:
            return [tuple(f) for f in self.faces]
        width, height = self.rect
        return [(i, j) for j in range(height) for i in range(width)]


def load_domain_spec(path: str | Path) -> DomainSpec:
    """Load a JSON or YAML domain file.

    Raises:
        FileNotFoundError: path does not exist
        pydantic.ValidationError: schema errors, with field paths
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Domain file not found: {path}")
    text = path.read_text()
    if path.suffix.lower() in (".yaml", ".yml"):
        data = yaml.safe_load(text)
    else:
        data = json.loads(text)
    return DomainSpec.model_validate(data)
