"""
Pydantic models for sweep configuration, sweep results and check reports
"""
from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from solvers import MhdRunConfig, SphereRunConfig


class Experiment(str, Enum):
    """Sweep experiment kind"""
    SPHERE = "sphere"
    MHD = "mhd"
    VERIFY = "verify"


SPHERE_COLUMNS = ["epsilon", "T", "mu", "M0", "alpha", "zonal_defect", "Lh_integral_norm", "energy_final", "wall_ms"]
MHD_COLUMNS = ["epsilon", "T", "k", "s", "wave_defect_Hk1", "dzu_Hk1", "u_int_Winf", "b_int_Wks", "kernel_component_L2", "wall_ms"]

# column fitted against epsilon, plus secondary fits reported alongside
FIT_COLUMNS = {
    Experiment.SPHERE: ["zonal_defect", "Lh_integral_norm"],
    Experiment.MHD: ["wave_defect_Hk1", "u_int_Winf", "b_int_Wks"],
}


class SweepConfig(BaseModel):
    """ε-sweep over one experiment"""

    experiment: Experiment
    epsilons: List[float] = []
    alpha: float = -4.0
    s: float = Field(12.0, gt=6)
    output_dir: str = "results"
    parallelism: int = Field(1, ge=1)
    sphere: SphereRunConfig = Field(default_factory=SphereRunConfig)
    mhd: MhdRunConfig = Field(default_factory=MhdRunConfig)
    module: Optional[str] = None

    class Config:
        extra = "forbid"

    @field_validator("epsilons")
    @classmethod
    def _check_epsilons(cls, values: List[float]) -> List[float]:
        if any(value <= 0 for value in values):
            raise ValueError("epsilon values must be positive")
        if len(set(values)) != len(values):
            raise ValueError("epsilon values must be distinct")
        return sorted(values, reverse=True)

    @model_validator(mode="after")
    def _check_sweep(self):
        if self.experiment is not Experiment.VERIFY and len(self.epsilons) < 3:
            raise ValueError(f"need ≥ 3 epsilon values for a slope fit, got {len(self.epsilons)}")
        return self

    def member_config(self, epsilon: float):
        """Run configuration of one sweep member"""
        if self.experiment is Experiment.SPHERE:
            return self.sphere.model_copy(update={"epsilon": epsilon, "alpha": self.alpha})
        if self.experiment is Experiment.MHD:
            return self.mhd.model_copy(update={"epsilon": epsilon, "s": self.s})
        raise ValueError(f"experiment {self.experiment.value} has no sweep members")

    @property
    def columns(self) -> List[str]:
        return SPHERE_COLUMNS if self.experiment is Experiment.SPHERE else MHD_COLUMNS


class IdentityConfig(BaseModel):
    """Shell identity suite parameters"""

    delta: float = Field(0.25, gt=0, lt=0.5)
    nr: int = Field(48, ge=8)
    lmax: int = Field(15, ge=2)
    samples: int = Field(50, ge=1)
    seed: int = 0
    radial_degree: int = Field(3, ge=0)
    refine: bool = True
    lifting_cases: int = Field(20, ge=1)
    lifting_lambdas: List[float] = [0.0, 1.0, 10.0]
    lifting_deltas: List[float] = [0.1, 0.25, 0.45]
    viscosity_nr: int = Field(64, ge=8)
    commutation_tolerance: float = 1e-5
    traction_tolerance: float = 1e-9
    viscosity_tolerance: float = 1e-6
    lifting_tolerance: float = 1e-8

    class Config:
        extra = "forbid"

    @field_validator("lifting_lambdas")
    @classmethod
    def _check_lambdas(cls, values: List[float]) -> List[float]:
        if not values or any(value < 0 for value in values):
            raise ValueError("slip coefficients must be a nonempty list of nonnegative values")
        return values

    @field_validator("lifting_deltas")
    @classmethod
    def _check_deltas(cls, values: List[float]) -> List[float]:
        if not values or any(not 0 < value < 0.5 for value in values):
            raise ValueError("lifting half-thicknesses must lie in (0, 1/2)")
        return values


class SweepRow(BaseModel):
    epsilon: float
    ok: bool = True
    error: Optional[str] = None
    exit_code: Optional[int] = None
    values: Dict[str, float] = {}


class FitSummary(BaseModel):
    slope: float
    intercept: float
    r_squared: float
    points: int


class CheckResult(BaseModel):
    """Outcome of one property or identity check"""

    module: str
    name: str
    passed: bool
    value: Optional[float] = None
    threshold: Optional[float] = None
    detail: str = ""


class SweepResult(BaseModel):
    experiment: Experiment
    config: SweepConfig
    rows: List[SweepRow] = []
    slope: Optional[float] = None
    intercept: Optional[float] = None
    r_squared: Optional[float] = None
    fits: Dict[str, FitSummary] = {}
    checks: List[CheckResult] = []

    @property
    def partial(self) -> bool:
        return any(not row.ok for row in self.rows)

    @property
    def fit_column(self) -> Optional[str]:
        columns = FIT_COLUMNS.get(self.experiment)
        return columns[0] if columns else None


class SweepDocument(BaseModel):
    """sweep.json payload"""

    app_name: str
    app_version: str
    git_describe: str
    partial: bool
    result: SweepResult
