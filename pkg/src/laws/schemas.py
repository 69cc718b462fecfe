import math
from pydantic import BaseModel, Field, validator, root_validator
from typing import List, Literal, Optional, Union


class LimitLawTheorem1(BaseModel):
    """
    Limit law of Delta for the diagonal translation X = (x, ..., x).

    With probability y a Uniform[-by, by], otherwise a Uniform[-b(1-y), b(1-y)],
    where b = d * 2^(d-1) and y = |1 - 2{x}|.
    """
    name: Literal['theorem1'] = 'theorem1'
    d: int = Field(..., ge=1, description="Dimension")
    y: float = Field(..., ge=0.0, le=1.0, description="Gap parameter |1 - 2{x}|")
    b: Optional[float] = Field(None, description="Support scale d * 2^(d-1) (derived)")

    @root_validator(skip_on_failure=True)
    def derive_scale(cls, values):
        b = values['d'] * 2.0 ** (values['d'] - 1)
        if values.get('b') is not None and not math.isclose(values['b'], b):
            raise ValueError(f"b must equal d * 2^(d-1) = {b}")
        values['b'] = b
        return values

    @property
    def support(self):
        return (-self.b * max(self.y, 1.0 - self.y), self.b * max(self.y, 1.0 - self.y))

    @property
    def breakpoints(self):
        lo, hi = sorted((self.y, 1.0 - self.y))
        points = {-self.b * hi, -self.b * lo, self.b * lo, self.b * hi}
        return sorted(points)

    class Config:
        allow_mutation = False
        schema_extra = {
            "example": {"name": "theorem1", "d": 2, "y": 0.5, "b": 4.0}
        }


class LimitLawTheorem2(BaseModel):
    """
    Product-form limit law for iid uniform translations: s * (S - d) with S an
    Irwin-Hall sum of n = 2d uniforms and s = 2^(d-1).
    """
    name: Literal['theorem2'] = 'theorem2'
    d: int = Field(..., ge=1, le=20, description="Dimension")
    s: Optional[float] = Field(None, description="Per-axis scale 2^(d-1) (derived)")
    n: Optional[int] = Field(None, description="Number of summed uniforms 2d (derived)")

    @root_validator(skip_on_failure=True)
    def derive_scale(cls, values):
        s = 2.0 ** (values['d'] - 1)
        n = 2 * values['d']
        if values.get('s') is not None and not math.isclose(values['s'], s):
            raise ValueError(f"s must equal 2^(d-1) = {s}")
        if values.get('n') is not None and values['n'] != n:
            raise ValueError(f"n must equal 2d = {n}")
        values['s'] = s
        values['n'] = n
        return values

    @property
    def support(self):
        return (-self.s * self.d, self.s * self.d)

    @property
    def breakpoints(self):
        return [self.s * (k - self.d) for k in range(self.n + 1)]

    class Config:
        allow_mutation = False
        schema_extra = {
            "example": {"name": "theorem2", "d": 2, "s": 2.0, "n": 4}
        }


class SharedDilationLaw(BaseModel):
    """
    Exact limit law of Delta for iid uniform translations.

    Every axis sees the same f = {2t}; given f the per-axis discrepancies are
    B_i - f with B_i ~ Bernoulli(f), so Delta -> s * (K - d f), K | f ~ Binomial(d, f).
    Coincides with LimitLawTheorem2 for d = 1.
    """
    name: Literal['shared'] = 'shared'
    d: int = Field(..., ge=1, le=20, description="Dimension")
    s: Optional[float] = Field(None, description="Per-axis scale 2^(d-1) (derived)")

    @root_validator(skip_on_failure=True)
    def derive_scale(cls, values):
        s = 2.0 ** (values['d'] - 1)
        if values.get('s') is not None and not math.isclose(values['s'], s):
            raise ValueError(f"s must equal 2^(d-1) = {s}")
        values['s'] = s
        return values

    @property
    def support(self):
        return (-self.s * self.d, self.s * self.d)

    @property
    def breakpoints(self):
        return [self.s * k for k in range(-self.d, self.d + 1)]

    class Config:
        allow_mutation = False
        schema_extra = {
            "example": {"name": "shared", "d": 2, "s": 2.0}
        }


LimitLaw = Union[LimitLawTheorem1, LimitLawTheorem2, SharedDilationLaw]


class CurveTable(BaseModel):
    """Tabulated CF, density or CDF."""
    abscissae: List[float] = Field(..., min_items=1, description="Strictly increasing u or z grid")
    values: List[float] = Field(..., description="Curve values at the abscissae")
    kind: Literal['cf', 'pdf', 'cdf'] = Field(..., description="What the values are")
    imag_values: Optional[List[float]] = Field(
        None,
        description="Imaginary parts (empirical CF only)"
    )
    label: Optional[str] = Field(None, description="Law or sample the curve belongs to")

    @validator('abscissae')
    def validate_increasing(cls, v):
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError('abscissae must be strictly increasing')
        return v

    @validator('values')
    def validate_values(cls, v, values):
        abscissae = values.get('abscissae')
        if abscissae is not None and len(v) != len(abscissae):
            raise ValueError('values and abscissae must have equal lengths')
        return v

    @validator('imag_values')
    def validate_imag(cls, v, values):
        if v is not None and values.get('abscissae') is not None and len(v) != len(values['abscissae']):
            raise ValueError('imag_values and abscissae must have equal lengths')
        return v

    @root_validator(skip_on_failure=True)
    def validate_kind(cls, values):
        vals = values['values']
        if values['kind'] == 'pdf' and any(v < 0 for v in vals):
            raise ValueError('pdf values must be non-negative')
        if values['kind'] == 'cdf':
            if any(v < 0 or v > 1 for v in vals):
                raise ValueError('cdf values must lie in [0, 1]')
            if any(b < a for a, b in zip(vals, vals[1:])):
                raise ValueError('cdf values must be non-decreasing')
        return values

    class Config:
        allow_mutation = False
        schema_extra = {
            "example": {
                "abscissae": [-1.0, 0.0, 1.0],
                "values": [0.0, 1.0, 0.0],
                "kind": "pdf",
                "label": "theorem2(d=1)"
            }
        }
