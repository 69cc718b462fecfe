import math
from enum import Enum
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, Field, root_validator, validator

RHO_NORMALIZATION_TOLERANCE = 1e-6
UINT64_MAX = 2 ** 64 - 1
SAMPLE_FIELDS = {'t_samples', 'delta_samples', 'normalized_error_samples'}


class RhoKind(str, Enum):
    """Shape of the horizon density rho on [0, 1]."""
    UNIFORM01 = "uniform01"
    TABULATED = "tabulated"


class ScenarioCase(str, Enum):
    """How translations are drawn."""
    DIAGONAL = "diagonal"
    IID_UNIFORM = "iid_uniform"


class RhoSpec(BaseModel):
    """Probability density rho on [0, 1]; t is drawn from (1/T) rho(t/T) dt."""
    kind: RhoKind = Field(RhoKind.UNIFORM01, description="uniform01 or tabulated")
    knots: Optional[List[float]] = Field(
        None,
        description="Strictly increasing knots in [0, 1] (tabulated only)"
    )
    values: Optional[List[float]] = Field(
        None,
        description="Non-negative density values at the knots (tabulated only)"
    )

    @root_validator(skip_on_failure=True)
    def validate_table(cls, values):
        if values['kind'] == RhoKind.UNIFORM01:
            values['knots'] = None
            values['values'] = None
            return values

        knots, dens = values.get('knots'), values.get('values')
        if not knots or not dens:
            raise ValueError('tabulated rho needs knots and values')
        if len(knots) != len(dens) or len(knots) < 2:
            raise ValueError('knots and values must have equal lengths of at least 2')
        if not all(math.isfinite(v) for v in knots + dens):
            raise ValueError('knots and values must be finite')
        if knots[0] < 0.0 or knots[-1] > 1.0:
            raise ValueError('knots must lie in [0, 1]')
        if any(b <= a for a, b in zip(knots, knots[1:])):
            raise ValueError('knots must be strictly increasing')
        if any(v < 0.0 for v in dens):
            raise ValueError('rho values must be non-negative')

        total = float(np.trapz(dens, knots))
        if abs(total - 1.0) > RHO_NORMALIZATION_TOLERANCE:
            raise ValueError(f'rho must integrate to 1 (trapezoid integral {total:.9g})')
        return values

    @classmethod
    def uniform(cls):
        return cls(kind=RhoKind.UNIFORM01)

    @classmethod
    def tabulated(cls, knots, values):
        return cls(kind=RhoKind.TABULATED, knots=list(knots), values=list(values))

    def describe(self):
        if self.kind == RhoKind.UNIFORM01:
            return "uniform01"
        return f"tabulated({len(self.knots)} knots)"

    class Config:
        allow_mutation = False
        schema_extra = {
            "example": {"kind": "tabulated", "knots": [0.0, 1.0], "values": [0.0, 2.0]}
        }


class Scenario(BaseModel):
    """Translation regime: X = (x0, ..., x0) or X uniform on [-1/2, 1/2]^d independent of t."""
    case: ScenarioCase = Field(..., description="diagonal or iid_uniform")
    d: int = Field(..., ge=1, le=20, description="Dimension")
    x0: Optional[float] = Field(None, description="Diagonal coordinate (diagonal only)")

    @root_validator(skip_on_failure=True)
    def validate_x0(cls, values):
        if values['case'] == ScenarioCase.DIAGONAL:
            x0 = values.get('x0')
            if x0 is None or not math.isfinite(x0):
                raise ValueError('diagonal scenario needs a finite x0')
        else:
            values['x0'] = None
        return values

    def describe(self):
        if self.case == ScenarioCase.DIAGONAL:
            return f"diagonal(d={self.d},x0={self.x0:.17g})"
        return f"iid_uniform(d={self.d})"

    class Config:
        allow_mutation = False
        schema_extra = {
            "example": {"case": "diagonal", "d": 2, "x0": 0.25}
        }


def _as_array(v):
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1:
        raise ValueError('samples must be one-dimensional')
    return arr


class SampleBatch(BaseModel):
    """N draws of (t, Delta, R/t^(d-1)) for one scenario and horizon."""
    scenario: Scenario
    T: float = Field(..., gt=0, description="Horizon")
    N: int = Field(..., ge=1, description="Sample count")
    seed: int = Field(..., ge=0, le=UINT64_MAX, description="Master seed")
    rho: RhoSpec
    t_samples: np.ndarray = Field(..., description="Dilations t_k in (0, T]")
    delta_samples: np.ndarray = Field(..., description="Delta(t_k, X_k)")
    normalized_error_samples: np.ndarray = Field(..., description="R(t_k, X_k) / t_k^(d-1)")
    generator: str = Field(..., description="Bit generator and numpy version")
    chunk_size: int = Field(..., ge=1, description="Samples per independent stream")

    _to_array = validator(
        't_samples', 'delta_samples', 'normalized_error_samples', pre=True, allow_reuse=True
    )(_as_array)

    @root_validator(skip_on_failure=True)
    def validate_lengths(cls, values):
        n = values['N']
        for name in sorted(SAMPLE_FIELDS):
            if len(values[name]) != n:
                raise ValueError(f'{name} must hold N={n} values, got {len(values[name])}')
        return values

    def __eq__(self, other):
        if not isinstance(other, SampleBatch):
            return NotImplemented
        if self.dict(exclude=SAMPLE_FIELDS) != other.dict(exclude=SAMPLE_FIELDS):
            return False
        return all(np.array_equal(getattr(self, name), getattr(other, name)) for name in SAMPLE_FIELDS)

    class Config:
        allow_mutation = False
        arbitrary_types_allowed = True
        json_encoders = {np.ndarray: lambda a: a.tolist()}


class ChunkRequest(BaseModel):
    """One contiguous slice [start, start + size) of a batch, served by stream `index`."""
    scenario: Scenario
    T: float = Field(..., gt=0)
    rho: RhoSpec
    seed: int = Field(..., ge=0, le=UINT64_MAX)
    index: int = Field(..., ge=0, description="Chunk number; selects the random stream")
    start: int = Field(..., ge=0)
    size: int = Field(..., ge=1)

    class Config:
        allow_mutation = False


class ComparisonReport(BaseModel):
    """Distances between a batch and a reference limit law."""
    T: float = Field(..., gt=0)
    N: int = Field(..., ge=1)
    seed: int = Field(..., ge=0, le=UINT64_MAX)
    law: str = Field(..., description="Reference law label")
    ks_delta: float = Field(..., ge=0, le=1, description="KS distance of Delta samples")
    ks_error: float = Field(..., ge=0, le=1, description="KS distance of normalized-error samples")
    cf_sup_gap: float = Field(..., ge=0, description="sup_u |empirical CF - analytic CF|")
    cf_imag_sup: float = Field(..., ge=0, description="sup_u |Im empirical CF|")
    mean: float = Field(..., description="Sample mean of Delta")
    variance: float = Field(..., description="Sample variance of Delta")

    class Config:
        allow_mutation = False
        schema_extra = {
            "example": {
                "T": 10000.0,
                "N": 100000,
                "seed": 42,
                "law": "theorem1(d=1,y=1)",
                "ks_delta": 0.003,
                "ks_error": 0.003,
                "cf_sup_gap": 0.006,
                "cf_imag_sup": 0.004,
                "mean": 0.001,
                "variance": 0.333
            }
        }
