import math
from pydantic import BaseModel, Field, validator
from typing import List, Optional


class BoxSpec(BaseModel):
    """Hypercube C(a) = {x : |x_i| <= a} in dimension d."""
    d: int = Field(..., ge=1, description="Dimension of the ambient space")
    a: float = Field(..., gt=0, description="Half side length of the cube")

    @validator('a')
    def validate_a(cls, v):
        if not math.isfinite(v):
            raise ValueError('a must be finite')
        return v

    class Config:
        allow_mutation = False
        schema_extra = {
            "example": {"d": 2, "a": 1.0}
        }


class Translation(BaseModel):
    """Translation vector X = (x_1, ..., x_d)."""
    coords: List[float] = Field(..., min_items=1, description="Coordinates of X")

    @validator('coords', each_item=True)
    def validate_finite(cls, v):
        if not math.isfinite(v):
            raise ValueError('translation coordinates must be finite')
        return v

    @classmethod
    def diagonal(cls, x, d):
        return cls(coords=[x] * d)

    class Config:
        allow_mutation = False
        schema_extra = {
            "example": {"coords": [0.3, -0.4]}
        }


class LatticeCountResult(BaseModel):
    """Exact lattice count in tC(a)+X together with its error statistics."""
    d: int = Field(..., ge=1, description="Dimension")
    a: float = Field(..., gt=0, description="Half side length")
    t: float = Field(..., gt=0, description="Dilation factor")
    coords: List[float] = Field(..., description="Translation used")
    count: int = Field(..., ge=0, description="Number of integer points N")
    volume: float = Field(..., description="Volume (2at)^d")
    error: float = Field(..., description="Error term R = N - volume")
    normalized_error: float = Field(..., description="R / t^(d-1)")
    delta: Optional[float] = Field(
        None,
        description="Reduced statistic Delta(t,X); only present when a = 1"
    )
    per_axis_delta_tilde: Optional[List[float]] = Field(
        None,
        description="Per-axis discrepancies; only present when a = 1"
    )
    boundary_degenerate: bool = Field(
        False,
        description="True when some at +/- x_i is within tolerance of an integer"
    )

    class Config:
        allow_mutation = False
        schema_extra = {
            "example": {
                "d": 2,
                "a": 1.0,
                "t": 1.0,
                "coords": [0.0, 0.0],
                "count": 9,
                "volume": 4.0,
                "error": 5.0,
                "normalized_error": 5.0,
                "delta": 4.0,
                "per_axis_delta_tilde": [1.0, 1.0],
                "boundary_degenerate": True
            }
        }
