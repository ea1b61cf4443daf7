"""Core geometric types shared by flows, foliations and the detector."""

from __future__ import annotations

import math
from enum import Enum
from typing import Dict, NamedTuple, Optional, Tuple

TWO_PI = 2.0 * math.pi


class ModelKind(str, Enum):  # noqa: UP042
    """Flow model, which also fixes the chart of a State."""

    TWO_WAVE = "twowave"
    QFLOW = "qflow"


class DetectionStatus(str, Enum):  # noqa: UP042
    """Outcome of the converse KAM test for one initial condition."""

    DETECTED = "detected"
    NONE = "none"
    EXCLUDED = "excluded"
    ERROR = "error"


class FoliationLabel(str, Enum):  # noqa: UP042
    """Foliation generators selectable from the command line."""

    R = "r"
    L = "l"
    P = "p"
    S1 = "s1"
    S2 = "s2"
    QL = "ql"
    QPSI = "qpsi"


class IcLine(str, Enum):  # noqa: UP042
    """Lines of initial conditions used by parameter sweeps."""

    P0 = "p0"  # (q0, p0, t0), two-wave
    UU0 = "uu0"  # (u0, u0, 0), Q-flow
    Y0 = "y0"  # (0, y0, 0), Q-flow
    X0 = "x0"  # (x0, 0, 0), Q-flow


# Period of each chart coordinate, None when the coordinate is not periodic
PERIODS: Dict[ModelKind, Tuple[Optional[float], Optional[float], Optional[float]]] = {
    ModelKind.TWO_WAVE: (1.0, None, 1.0),  # (q mod 1, p, t mod 1)
    ModelKind.QFLOW: (None, None, TWO_PI),  # (x, y, z mod 2pi)
}

TWO_WAVE_FOLIATIONS = (FoliationLabel.R, FoliationLabel.L, FoliationLabel.P, FoliationLabel.S1, FoliationLabel.S2)
QFLOW_FOLIATIONS = (FoliationLabel.QL, FoliationLabel.QPSI)

IC_LINE_MODEL: Dict[IcLine, ModelKind] = {
    IcLine.P0: ModelKind.TWO_WAVE,
    IcLine.UU0: ModelKind.QFLOW,
    IcLine.Y0: ModelKind.QFLOW,
    IcLine.X0: ModelKind.QFLOW,
}

# Axis name that drives each line of initial conditions
IC_LINE_AXIS: Dict[IcLine, str] = {
    IcLine.P0: "p0",
    IcLine.UU0: "u0",
    IcLine.Y0: "y0",
    IcLine.X0: "x0",
}


class State(NamedTuple):
    """A point in a 3D chart: (q, p, t) for the two-wave model, (x, y, z) for Q-flows."""

    c0: float
    c1: float
    c2: float
    model_tag: ModelKind = ModelKind.TWO_WAVE


class TangentVec(NamedTuple):
    """Tangent vector in the chart basis of its base State."""

    v0: float
    v1: float
    v2: float


Matrix3 = Tuple[Tuple[float, float, float], Tuple[float, float, float], Tuple[float, float, float]]


def det3(a: TangentVec, b: TangentVec, c: TangentVec) -> float:
    """Determinant of the 3x3 matrix with rows a, b, c."""
    return (
        a[0] * (b[1] * c[2] - b[2] * c[1])
        - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
    )


def dot3(a: TangentVec, b: TangentVec) -> float:
    """Euclidean inner product in chart components."""
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def norm3(a: TangentVec) -> float:
    return math.sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2])


def _reduce(x: float, period: float) -> float:
    r = math.fmod(x, period)
    if r < 0.0:
        r += period
    # -1e-17 + 1.0 rounds up to the period itself
    if r >= period:
        r = 0.0
    return r


def wrap(s: State) -> State:
    """
    Reduce the periodic coordinates of a state to their fundamental domain.

    Non-periodic coordinates are returned unchanged.

    Raises:
        ValueError: if any coordinate is not finite
    """
    coords = (s.c0, s.c1, s.c2)
    if not all(math.isfinite(c) for c in coords):
        raise ValueError(f"Cannot wrap non-finite state {tuple(coords)}")

    periods = PERIODS[s.model_tag]
    wrapped = [c if period is None else _reduce(c, period) for c, period in zip(coords, periods)]
    return State(wrapped[0], wrapped[1], wrapped[2], s.model_tag)
