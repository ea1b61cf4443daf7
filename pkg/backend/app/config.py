"""Run configuration: command-line flags over an optional key=value file."""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Tuple, Union

from pydantic import Field, ValidationError, field_validator, model_validator
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict

from .models import (
    IC_LINE_MODEL,
    QFLOW_FOLIATIONS,
    TWO_WAVE_FOLIATIONS,
    FoliationLabel,
    IcLine,
    ModelKind,
    State,
)
from .schemas import Axis, DetectorOptions, GridSpec, QFlowParams, StepControl, TwoWaveParams

COMMANDS = ("detect", "sweep", "section", "lyapunov", "hist", "orbit", "verify")
VERIFY_SUITES = ("forms", "beltrami", "gradients", "residuals", "invariances", "all")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")

DEFAULT_FOLIATION = {ModelKind.TWO_WAVE: FoliationLabel.R, ModelKind.QFLOW: FoliationLabel.QPSI}
DEFAULT_IC_LINE = {ModelKind.TWO_WAVE: IcLine.P0, ModelKind.QFLOW: IcLine.UU0}


class RunConfig(BaseSettings):
    """
    Fully resolved settings of one command-line run.

    Values come from keyword arguments (the parsed flags) and, below them,
    from a flat ``key=value`` file passed as ``_env_file``. The process
    environment is never read.
    """

    command: str = "detect"

    # Model
    model: ModelKind = ModelKind.TWO_WAVE
    mu: float = Field(0.0, ge=0.0)
    nu: float = 1.0
    k: int = Field(1, ge=1)
    q: int = Field(4, ge=1)
    eps: float = Field(0.0, ge=0.0)
    foliation: Optional[FoliationLabel] = None

    # Initial condition
    q0: float = 0.0
    p0: float = 0.5
    t0: float = 0.0
    x0: float = 0.0
    y0: float = 0.0
    z0: float = 0.0

    # Detector and integrator
    tmax: float = Field(150.0, gt=0.0)
    rtol: float = Field(1e-8, gt=0.0)
    atol: float = Field(1e-10, gt=0.0)
    h_init: float = Field(1e-3, gt=0.0)
    h_max: float = Field(0.1, gt=0.0)
    h_min: float = Field(1e-12, gt=0.0)
    singular_tol: float = Field(1e-6, gt=0.0)

    # Grids
    axis1: Optional[str] = None
    axis2: Optional[str] = None
    ic_line: Optional[IcLine] = None
    workers: int = Field(1, ge=1)

    # Analysis
    n_crossings: int = Field(100, ge=1)
    t_section: float = Field(0.0, ge=0.0, lt=1.0)
    v0: Tuple[float, float, float] = (0.0, 1.0, 0.0)
    dt: float = Field(0.05, gt=0.0)
    bin_width: float = Field(5.0, gt=0.0)
    input: Optional[Path] = None

    # Verification
    suite: str = "all"
    seed: int = 0
    samples: Optional[int] = Field(None, ge=1)

    # Output
    out: Optional[Path] = None
    image: Optional[Path] = None
    trace: Optional[Path] = None
    log_level: str = "WARNING"

    model_config = SettingsConfigDict(extra="forbid", env_file_encoding="utf-8", case_sensitive=False)

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls,
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        return init_settings, dotenv_settings

    @field_validator("command")
    @classmethod
    def known_command(cls, v: str) -> str:
        if v not in COMMANDS:
            raise ValueError(f"unknown command {v!r}, expected one of {', '.join(COMMANDS)}")
        return v

    @field_validator("suite")
    @classmethod
    def known_suite(cls, v: str) -> str:
        if v not in VERIFY_SUITES:
            raise ValueError(f"unknown suite {v!r}, expected one of {', '.join(VERIFY_SUITES)}")
        return v

    @field_validator("log_level")
    @classmethod
    def known_level(cls, v: str) -> str:
        level = v.upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"unknown log level {v!r}, expected one of {', '.join(LOG_LEVELS)}")
        return level

    @field_validator("axis1", "axis2")
    @classmethod
    def axis_syntax(cls, v: Optional[str]) -> Optional[str]:
        if v is not None:
            try:
                Axis.parse(v)
            except ValidationError as e:
                raise ValueError(e.errors()[0]["msg"]) from None
        return v

    @model_validator(mode="after")
    def resolve(self) -> RunConfig:
        if self.foliation is None:
            self.foliation = DEFAULT_FOLIATION[self.model]
        allowed = TWO_WAVE_FOLIATIONS if self.model == ModelKind.TWO_WAVE else QFLOW_FOLIATIONS
        if self.foliation not in allowed:
            raise ValueError(
                f"--foliation {self.foliation.value} does not belong to model {self.model.value}, "
                f"expected one of {', '.join(f.value for f in allowed)}"
            )

        if self.ic_line is None:
            self.ic_line = DEFAULT_IC_LINE[self.model]
        if IC_LINE_MODEL[self.ic_line] != self.model:
            raise ValueError(f"--ic-line {self.ic_line.value} belongs to model {IC_LINE_MODEL[self.ic_line].value}")

        if self.foliation == FoliationLabel.S2 and self.k != 1:
            raise ValueError("--foliation s2 requires --k 1")

        try:
            self.step_control()
        except ValidationError as e:
            raise ValueError(f"--h-min/--h-init/--h-max: {e.errors()[0]['msg']}") from None

        if self.command == "sweep":
            if self.axis1 is None or self.axis2 is None:
                raise ValueError("sweep needs both --axis1 and --axis2")
            if self.out is None:
                raise ValueError("sweep needs --out")
        if self.command == "section" and self.model != ModelKind.TWO_WAVE:
            raise ValueError("--model: Poincare sections are only defined for the two-wave model")
        if self.command == "lyapunov" and (self.axis1 is None) != (self.axis2 is None):
            raise ValueError("lyapunov grid mode needs both --axis1 and --axis2")
        if self.command == "hist" and self.input is None:
            raise ValueError("hist needs --input")
        if self.grid_mode:
            try:
                self.grid_spec()
            except ValidationError as e:
                raise ValueError(f"--axis1/--axis2: {e.errors()[0]['msg']}") from None
        return self

    @property
    def grid_mode(self) -> bool:
        return self.axis1 is not None and self.axis2 is not None

    def params(self) -> Union[TwoWaveParams, QFlowParams]:
        if self.model == ModelKind.TWO_WAVE:
            return TwoWaveParams(mu=self.mu, nu=self.nu, k=self.k)
        return QFlowParams(q=self.q, eps=self.eps)

    def step_control(self) -> StepControl:
        return StepControl(
            rtol=self.rtol,
            atol=self.atol,
            h_init=self.h_init,
            h_max=self.h_max,
            h_min=self.h_min,
            t_max=self.tmax,
        )

    def detector_options(self) -> DetectorOptions:
        return DetectorOptions(t_max=self.tmax, singular_tol=self.singular_tol, record_trace=self.trace is not None)

    def initial_state(self) -> State:
        if self.model == ModelKind.TWO_WAVE:
            return State(self.q0, self.p0, self.t0, ModelKind.TWO_WAVE)
        return State(self.x0, self.y0, self.z0, ModelKind.QFLOW)

    def grid_spec(self) -> GridSpec:
        """GridSpec of a sweep; the parameter template comes from the model flags."""
        if not self.grid_mode:
            raise ValueError("a grid needs --axis1 and --axis2")
        return GridSpec(
            model=self.model,
            twowave=TwoWaveParams(mu=self.mu, nu=self.nu, k=self.k),
            qflow=QFlowParams(q=self.q, eps=self.eps),
            foliation=self.foliation,
            axis1=Axis.parse(self.axis1),
            axis2=Axis.parse(self.axis2),
            ic_line=self.ic_line,
            q0=self.q0,
            t0=self.t0,
            detector=self.detector_options().model_copy(update={"record_trace": False}),
            control=self.step_control(),
        )
