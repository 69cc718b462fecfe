import math
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, root_validator, validator

from src.config import settings
from src.sampling.schemas import UINT64_MAX, Scenario, ScenarioCase

_NEEDS = {
    'count': ('d', 't', 'x'),
    'sample': ('case', 'd', 'T', 'N'),
    'cf': ('case', 'd', 'T', 'N'),
    'law': ('d',),
    'convergence': ('case', 'd', 'T_grid', 'N'),
    'verify': (),
}


class RunConfig(BaseModel):
    """Validated options of one CLI invocation."""
    subcommand: Literal['count', 'sample', 'cf', 'law', 'convergence', 'verify']

    # lattice
    d: Optional[int] = Field(None, ge=1, le=20, description="Dimension")
    a: float = Field(1.0, gt=0, description="Half side length of the cube")
    t: Optional[float] = Field(None, gt=0, description="Dilation")
    x: Optional[List[float]] = Field(None, description="Translation coordinates")

    # scenario and sampling
    case: Optional[ScenarioCase] = Field(None, description="diagonal or iid_uniform")
    x0: Optional[float] = Field(None, description="Diagonal coordinate")
    T: Optional[float] = Field(None, gt=0, description="Horizon")
    N: Optional[int] = Field(None, ge=1, description="Sample count")
    seed: int = Field(0, ge=0, le=UINT64_MAX, description="Master seed")
    rho: str = Field('uniform', description="'uniform' or a path to a (knot, value) CSV")
    T_grid: Optional[List[float]] = Field(None, description="Horizons of a convergence sweep")

    # laws and grids
    law: Optional[Literal['theorem1', 'theorem2', 'shared']] = None
    u_min: float = settings.CF_GRID_MIN
    u_max: float = settings.CF_GRID_MAX
    u_step: float = settings.CF_GRID_STEP
    tol: float = Field(settings.CF_TOLERANCE, ge=0, description="Sup-gap threshold of `cf`")
    steps: int = Field(settings.LAW_TABLE_STEPS, ge=2, description="Points per law table")

    quick: bool = False

    # output and execution
    output: Optional[str] = None
    format: Literal['csv', 'json'] = settings.OUTPUT_FORMAT
    workers: int = Field(settings.SAMPLING_WORKERS, ge=1)
    backend: Literal['local', 'celery'] = settings.SAMPLING_BACKEND
    log_level: Optional[str] = None

    @validator('x', 'T_grid', each_item=True)
    def validate_finite(cls, v):
        if not math.isfinite(v):
            raise ValueError('values must be finite')
        return v

    @validator('t', 'T', 'x0', 'a')
    def validate_scalar_finite(cls, v):
        if v is not None and not math.isfinite(v):
            raise ValueError('value must be finite')
        return v

    @root_validator(skip_on_failure=True)
    def validate_required(cls, values):
        command = values['subcommand']
        missing = [name for name in _NEEDS[command] if values.get(name) is None]
        if missing:
            flags = ', '.join('--' + name.replace('_', '-') for name in missing)
            raise ValueError(f"{command} requires {flags}")

        if command in ('sample', 'cf', 'convergence') and values['case'] == ScenarioCase.DIAGONAL \
                and values.get('x0') is None:
            raise ValueError(f"{command} with --case diagonal requires --x0")
        if command == 'law':
            law = values.get('law')
            case = values.get('case')
            if law is None and case is None:
                raise ValueError("law requires --law or --case")
            if (law == 'theorem1' or (law is None and case == ScenarioCase.DIAGONAL)) \
                    and values.get('x0') is None:
                raise ValueError("the theorem1 law requires --x0")
        return values

    def scenario(self):
        return Scenario(case=self.case, d=self.d, x0=self.x0)

    def law_name(self):
        if self.law is not None:
            return self.law
        return 'theorem1' if self.case == ScenarioCase.DIAGONAL else 'theorem2'

    class Config:
        allow_mutation = False
        schema_extra = {
            "example": {
                "subcommand": "sample",
                "case": "diagonal",
                "d": 1,
                "x0": 0.0,
                "T": 100.0,
                "N": 1000,
                "seed": 1
            }
        }
