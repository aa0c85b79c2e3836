"""Request and response models for the HTTP surface."""

from typing import Any, Optional, Union

from pydantic import BaseModel, ConfigDict, Field


class Health(BaseModel):
    status: str
    version: str


class SuiteInfo(BaseModel):
    name: str
    alias: str
    description: str
    defaults: dict[str, Any]


class VerifyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    suite: str
    config: dict[str, Any] = Field(default_factory=dict)
    seed: int = 0
    tol: Optional[float] = Field(default=None, gt=0)


class Case(BaseModel):
    name: str
    metric: str
    value: Optional[float]
    tol: float
    passed: bool = Field(alias="pass")
    detail: dict[str, Any] = Field(default_factory=dict)

    model_config = ConfigDict(populate_by_name=True)


class SuiteReport(BaseModel):
    suite: str
    cases: list[Case]
    max_deviation: float
    fitted_constants: dict[str, float]
    passed: bool = Field(alias="pass")
    config: dict[str, Any]
    seed: int
    version: str
    elapsed_seconds: float

    model_config = ConfigDict(populate_by_name=True)


class SweepConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    quantity: str = "hcal"
    t_g: list[float] = Field(default_factory=lambda: [100.0, 200.0, 400.0])
    theta: list[float] = Field(default_factory=lambda: [0.5, 0.6, 0.7])
    triple: str = "triple1"
    M: int = 8
    n_points: int = 9
    span: float = 2.0
    drift: float = 3.0
    seed: int = 0
    workers: int = 4


class FittedConstant(BaseModel):
    t_g: float
    theta: float
    T: float
    constant: float


class SweepResponse(BaseModel):
    csv: str
    fitted_constants: list[FittedConstant]
    drift: float
    passed: bool = Field(alias="pass")
    config: dict[str, Any]
    seed: int
    version: str

    model_config = ConfigDict(populate_by_name=True)


class SyntheticData(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n_records: int = Field(default=8, ge=0)
    n_lambda: int = Field(default=12, ge=1)
    seed: int = 0
    with_lvalues: bool = False


class SpectralSideRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    data_csv: Optional[str] = None
    synthetic: Optional[SyntheticData] = None
    source: str = "<request>"
    weight: str
    c_max: int = Field(default=200, ge=1)


class Side(BaseModel):
    cusp: float
    continuous: Optional[float]
    total: Optional[float]
    error_estimate: Optional[float]  # None: not certified
    notes: list[str]


class SpectralSideResponse(BaseModel):
    dataset: dict[str, Any]
    weight: dict[str, Any]
    spectral: Side
    geometric: Optional[Side] = None
    discrepancy: Optional[float] = None
    budget: Optional[float] = None
    passed: Optional[bool] = Field(default=None, alias="pass")
    version: str

    model_config = ConfigDict(populate_by_name=True)


class TableOpInfo(BaseModel):
    op: str
    doc: str
    params: dict[str, Optional[Union[float, int, str]]]


class TableRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    op: str
    args: list[str] = Field(default_factory=list)


class TableResponse(BaseModel):
    op: str
    columns: list[str]
    rows: list[dict[str, Any]]
    version: str
