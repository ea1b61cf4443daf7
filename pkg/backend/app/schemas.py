"""Pydantic schemas for parameters, options and results."""

from __future__ import annotations

import math
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .models import (
    IC_LINE_AXIS,
    IC_LINE_MODEL,
    QFLOW_FOLIATIONS,
    TWO_WAVE_FOLIATIONS,
    DetectionStatus,
    FoliationLabel,
    IcLine,
    ModelKind,
    State,
)


class TwoWaveParams(BaseModel):
    """Parameters of the two-wave Hamiltonian."""

    mu: float = Field(0.0, ge=0.0, description="First wave amplitude")
    nu: float = Field(1.0, description="Relative amplitude of the second wave")
    k: int = Field(1, ge=1, description="Wavenumber of the second wave")

    model_config = ConfigDict(frozen=True)


class QFlowParams(BaseModel):
    """Parameters of Zaslavsky's Q-flow."""

    q: int = Field(4, ge=1, description="Fold symmetry of the stream function")
    eps: float = Field(0.0, ge=0.0, description="Perturbation amplitude")

    model_config = ConfigDict(frozen=True)


class StepControl(BaseModel):
    """Adaptive step-size control for the Runge-Kutta integrator."""

    rtol: float = Field(1e-8, gt=0.0)
    atol: float = Field(1e-10, gt=0.0)
    h_init: float = Field(1e-3, gt=0.0)
    h_max: float = Field(0.1, gt=0.0)
    h_min: float = Field(1e-12, gt=0.0)
    t_max: float = Field(150.0, gt=0.0)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_step_bounds(self) -> StepControl:
        if not (self.h_min <= self.h_init <= self.h_max):
            raise ValueError(
                f"step bounds must satisfy h_min <= h_init <= h_max, "
                f"got {self.h_min}, {self.h_init}, {self.h_max}"
            )
        return self


class DetectorOptions(BaseModel):
    """Options of the converse KAM detector."""

    t_max: float = Field(150.0, gt=0.0)
    guard: Literal["euclidean"] = "euclidean"
    singular_tol: float = Field(1e-6, gt=0.0)
    record_trace: bool = False

    model_config = ConfigDict(frozen=True)


class TraceSample(BaseModel):
    """One accepted-step sample of K(t) and the guard product."""

    t: float
    K: float
    guard_dot: float
    state: Tuple[float, float, float]


class DetectionResult(BaseModel):
    """Classification of one initial condition."""

    status: DetectionStatus
    t_c: Optional[float] = None
    n_steps: int = 0
    t_end: float = 0.0
    exclusion_time: Optional[float] = None
    reason: Optional[str] = None
    trace: Optional[List[TraceSample]] = None

    @model_validator(mode="after")
    def check_status_fields(self) -> DetectionResult:
        if (self.t_c is not None) != (self.status == DetectionStatus.DETECTED):
            raise ValueError("t_c must be present exactly when status is detected")
        if self.t_c is not None and self.t_c <= 0.0:
            raise ValueError(f"t_c must be positive, got {self.t_c}")
        if self.exclusion_time is not None and self.status != DetectionStatus.EXCLUDED:
            raise ValueError("exclusion_time is only set for excluded orbits")
        return self

    @property
    def detected(self) -> bool:
        return self.status == DetectionStatus.DETECTED

    @classmethod
    def failed(
        cls,
        reason: str,
        n_steps: int = 0,
        t_end: float = 0.0,
        trace: Optional[List[TraceSample]] = None,
    ) -> DetectionResult:
        """Result for an orbit whose integration could not be completed."""
        return cls(status=DetectionStatus.ERROR, reason=reason, n_steps=n_steps, t_end=t_end, trace=trace)


class SectionPoint(BaseModel):
    """Intersection of a two-wave orbit with the section t = t_section (mod 1)."""

    q: float
    p: float
    crossing_index: int


class FtleResult(BaseModel):
    """Finite-time maximal Lyapunov exponent of one orbit."""

    lam: float = Field(..., alias="lambda")
    T: float
    v0: Tuple[float, float, float]

    model_config = {"populate_by_name": True}


class Axis(BaseModel):
    """One axis of a parameter grid."""

    name: str
    lo: float
    hi: float
    n: int = Field(..., ge=1)

    @model_validator(mode="after")
    def check_range(self) -> Axis:
        if not self.lo < self.hi:
            raise ValueError(f"axis {self.name}: lo must be below hi, got {self.lo} >= {self.hi}")
        return self

    @classmethod
    def parse(cls, text: str) -> Axis:
        """Parse the command-line form ``name:lo:hi:n``."""
        parts = text.split(":")
        if len(parts) != 4:
            raise ValueError(f"axis must look like name:lo:hi:n, got {text!r}")
        name, lo, hi, n = parts
        return cls(name=name, lo=float(lo), hi=float(hi), n=int(n))

    def value(self, i: int) -> float:
        if self.n == 1:
            return self.lo
        return self.lo + (self.hi - self.lo) * i / (self.n - 1)

    def values(self) -> List[float]:
        return [self.value(i) for i in range(self.n)]


# Model parameters a grid may vary along axis1
_FLOAT_PARAMS = {
    ModelKind.TWO_WAVE: {"mu", "nu"},
    ModelKind.QFLOW: {"eps"},
}


class GridSpec(BaseModel):
    """
    Parameter grid for a converse KAM sweep.

    axis1 varies a model parameter (mu or nu for the two-wave model, eps for
    Q-flows); axis2 moves the initial condition along ``ic_line``.
    """

    model: ModelKind
    twowave: TwoWaveParams = TwoWaveParams()
    qflow: QFlowParams = QFlowParams()
    foliation: FoliationLabel
    axis1: Axis
    axis2: Axis
    ic_line: IcLine
    q0: float = 0.0
    t0: float = 0.0
    detector: DetectorOptions = DetectorOptions()
    control: StepControl = StepControl()

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_consistency(self) -> GridSpec:
        if IC_LINE_MODEL[self.ic_line] != self.model:
            raise ValueError(f"ic-line {self.ic_line.value} does not belong to model {self.model.value}")

        allowed = TWO_WAVE_FOLIATIONS if self.model == ModelKind.TWO_WAVE else QFLOW_FOLIATIONS
        if self.foliation not in allowed:
            raise ValueError(f"foliation {self.foliation.value} does not belong to model {self.model.value}")

        if self.axis1.name not in _FLOAT_PARAMS[self.model]:
            raise ValueError(
                f"axis1 must vary one of {sorted(_FLOAT_PARAMS[self.model])}, got {self.axis1.name!r}"
            )
        if self.axis1.lo < 0.0 and self.axis1.name in ("mu", "eps"):
            raise ValueError(f"axis1 {self.axis1.name} must be non-negative")

        expected_axis2 = IC_LINE_AXIS[self.ic_line]
        if self.axis2.name != expected_axis2:
            raise ValueError(f"axis2 must be {expected_axis2!r} for ic-line {self.ic_line.value}")
        return self

    @property
    def shape(self) -> Tuple[int, int]:
        return self.axis1.n, self.axis2.n

    def cell_params(self, i: int):
        """Model parameters of grid column i."""
        update = {self.axis1.name: self.axis1.value(i)}
        if self.model == ModelKind.TWO_WAVE:
            return self.twowave.model_copy(update=update)
        return self.qflow.model_copy(update=update)

    def initial_state(self, j: int) -> State:
        """Initial condition of grid row j."""
        u = self.axis2.value(j)
        if self.ic_line == IcLine.P0:
            return State(self.q0, u, self.t0, ModelKind.TWO_WAVE)
        if self.ic_line == IcLine.UU0:
            return State(u, u, 0.0, ModelKind.QFLOW)
        if self.ic_line == IcLine.Y0:
            return State(0.0, u, 0.0, ModelKind.QFLOW)
        return State(u, 0.0, 0.0, ModelKind.QFLOW)


class GridResult(BaseModel):
    """Dense row-major results of a sweep: cell (i, j) is at index i * n2 + j."""

    spec: GridSpec
    cells: List[DetectionResult]

    @field_validator("cells")
    @classmethod
    def check_not_empty(cls, v):
        if not v:
            raise ValueError("a grid has at least one cell")
        return v

    @model_validator(mode="after")
    def check_size(self) -> GridResult:
        n1, n2 = self.spec.shape
        if len(self.cells) != n1 * n2:
            raise ValueError(f"expected {n1 * n2} cells, got {len(self.cells)}")
        return self

    def cell(self, i: int, j: int) -> DetectionResult:
        return self.cells[i * self.spec.axis2.n + j]

    @property
    def n_errors(self) -> int:
        return sum(1 for c in self.cells if c.status == DetectionStatus.ERROR)


class BeltramiReport(BaseModel):
    """Finite-difference check of div v = 0 and curl v = v."""

    q: int
    eps: float
    n_points: int
    max_curl_error: float
    max_div_error: float
    tolerance: float
    passed: bool


class ScalingReport(BaseModel):
    """Observed order of a perturbative invariant from mu-halving."""

    label: str
    expected_order: int
    median_exponent: float
    worst_exponent: float
    worst_sample: Tuple[float, float, float]
    max_abs_residual: float
    passed: bool


class PropertyCheck(BaseModel):
    """Pass/fail of one verified property with its worst-case error."""

    name: str
    passed: bool
    worst_error: float
    tolerance: float
    detail: str = ""

    @field_validator("worst_error")
    @classmethod
    def finite_or_inf(cls, v: float) -> float:
        return v if not math.isnan(v) else math.inf


class VerifyReport(BaseModel):
    """Results of one verification suite."""

    suite: str
    seed: int
    checks: List[PropertyCheck] = []

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)
