"""
Pydantic models of the JSON file formats.

Spin configurations are read from JSON; triangles and contours are written as JSON.
The models validate input files and give every output the same field names.
"""

from typing import List

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from dyson.chain.constants import Boundary


class SpinConfigurationModel(BaseModel):
    """
    `{"N": ..., "boundary": "plus"|"minus", "spins": [±1, ...]}`.
    """

    model_config = ConfigDict(extra="forbid")

    N: int = Field(ge=0)
    boundary: Boundary
    spins: List[int]

    @field_validator("boundary", mode="before")
    @classmethod
    def parse_boundary(cls, value: object) -> Boundary:
        return Boundary.parse(value)

    @field_validator("spins")
    @classmethod
    def check_spin_values(cls, spins: List[int]) -> List[int]:
        bad = [(i, s) for i, s in enumerate(spins) if s not in (-1, 1)]
        if bad:
            index, value = bad[0]
            raise ValueError(f"spin at index {index} is {value}, expected +1 or -1")
        return spins

    @model_validator(mode="after")
    def check_length(self) -> "SpinConfigurationModel":
        if len(self.spins) != 2 * self.N + 1:
            raise ValueError(
                f"expected 2N+1 = {2 * self.N + 1} spins, got {len(self.spins)}"
            )
        return self


class TriangleModel(BaseModel):
    """
    `{"left": x-, "right": x+, "mass": |T|}` with half-integer endpoints.
    """

    left: float
    right: float
    mass: int = Field(ge=1)


class ContourModel(BaseModel):
    triangles: List[TriangleModel]
    mass: int = Field(ge=0)


class ContourConfigurationModel(BaseModel):
    c: float = Field(gt=1.0)
    contours: List[ContourModel]
