"""
Adaptive Tsitouras 5(4) integration of a flow together with one tangent vector.

The joint system is y = (s, xi) with y' = (v(s), Dv(s) xi). Chart
coordinates are integrated unwrapped; callers wrap when they report states.
"""

from __future__ import annotations

import logging
import math
from typing import Callable, NamedTuple, Optional, Tuple

import numpy as np

from ..models import State, TangentVec
from ..schemas import StepControl
from .flows.base import FlowModel

logger = logging.getLogger(__name__)

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0
ERROR_EXPONENT = 1.0 / 5.0

RENORM_HIGH = 1e6
RENORM_LOW = 1e-6
LN2 = math.log(2.0)

RENORMALIZE_MODES = ("band", "always")


class StiffnessError(RuntimeError):
    """Raised when the adaptive step size falls below ``StepControl.h_min``."""

    def __init__(self, t: float, h: float, h_min: float):
        super().__init__(f"step size {h:.3e} fell below h_min={h_min:.3e} at t={t:.6g}")
        self.t = t
        self.h = h


class CombinedState(NamedTuple):
    """Orbit point, tangent vector, elapsed time and accumulated log of tangent rescalings."""

    s: State
    xi: TangentVec
    t: float
    log_scale: float = 0.0


Hook = Callable[[CombinedState, CombinedState], bool]


# Tsitouras (2011) 5(4) pair. The joint system is autonomous, so the stage
# nodes c_i never enter; row i holds a_ij and the last row doubles as b (FSAL).
TSIT5_A = (
    (),
    (0.161,),
    (-0.008480655492356989, 0.335480655492357),
    (2.897153057105493, -6.359448489975075, 4.3622954328695815),
    (5.325864828439257, -11.748883564062828, 7.4955393428898365, -0.09249506636175525),
    (5.86145544294642, -12.92096931784711, 8.159367898576159, -0.071584973281401, -0.028269050394068383),
    (0.09646076681806523, 0.01, 0.4798896504144996, 1.379008574103742, -3.290069515436081, 2.324710524099774),
)

# b - b_hat; h * sum(TSIT5_E * k) is the local error estimate
TSIT5_E = np.array(
    [
        -0.00178001105222577714,
        -0.0008164344596567469,
        0.007880878010261995,
        -0.1447110071732629,
        0.5823571654525552,
        -0.45808210592918697,
        0.015151515151515152,
    ]
)


def joint_rhs(model: FlowModel, y: np.ndarray) -> np.ndarray:
    """(v(s), Dv(s) xi) for y = (s, xi)."""
    s = State(y[0], y[1], y[2], model.model_tag)
    out = np.empty(6)
    out[:3] = model.velocity(s)
    out[3:] = np.dot(model.jacobian(s), y[3:])
    return out


def _pack(cs: CombinedState) -> np.ndarray:
    return np.array([cs.s.c0, cs.s.c1, cs.s.c2, cs.xi[0], cs.xi[1], cs.xi[2]], dtype=float)


def _unpack(model: FlowModel, y: np.ndarray, t: float, log_scale: float) -> CombinedState:
    return CombinedState(
        State(float(y[0]), float(y[1]), float(y[2]), model.model_tag),
        TangentVec(float(y[3]), float(y[4]), float(y[5])),
        t,
        log_scale,
    )


def _error_norm(y: np.ndarray, y_new: np.ndarray, err: np.ndarray, ctrl: StepControl) -> float:
    """
    Weighted RMS of the local error estimate.

    Tangent components use an absolute tolerance relative to |xi| so that
    the accepted step sequence does not depend on the tangent's magnitude.
    """
    magnitude = np.maximum(np.abs(y), np.abs(y_new))
    xi_norm = float(np.linalg.norm(y[3:])) or 1.0
    scale = np.empty(6)
    scale[:3] = ctrl.atol + ctrl.rtol * magnitude[:3]
    scale[3:] = ctrl.atol * xi_norm + ctrl.rtol * magnitude[3:]
    return float(np.sqrt(np.mean((err / scale) ** 2)))


def _tsit5_step(
    model: FlowModel, y: np.ndarray, h: float, k1: np.ndarray, ctrl: StepControl
) -> Tuple[np.ndarray, float, np.ndarray]:
    """One Tsit5 step from y with precomputed first stage k1; returns (y_new, error, f(y_new))."""
    k = np.empty((7, 6))
    k[0] = k1
    for i in range(1, 7):
        y_stage = y + h * np.dot(TSIT5_A[i], k[:i])
        k[i] = joint_rhs(model, y_stage)
    # FSAL: the last stage point is the propagated solution
    y_new = y_stage
    err = h * np.dot(TSIT5_E, k)
    return y_new, _error_norm(y, y_new, err, ctrl), k[6]


def rk_step(
    model: FlowModel, cs: CombinedState, h: float, ctrl: Optional[StepControl] = None
) -> Tuple[CombinedState, float]:
    """
    Advance (s, xi) by a single Tsit5 step of size h, without step control.

    Args:
        model: flow model providing v and Dv
        cs: starting point
        h: step size (negative steps integrate backwards)
        ctrl: tolerances used to weight the error estimate

    Returns:
        (new combined state, weighted RMS error estimate)
    """
    ctrl = ctrl or StepControl()
    y = _pack(cs)
    y_new, err, _ = _tsit5_step(model, y, h, joint_rhs(model, y), ctrl)
    return _unpack(model, y_new, cs.t + h, cs.log_scale), err


def advance_with_hook(
    model: FlowModel,
    cs: CombinedState,
    ctrl: StepControl,
    hook: Optional[Hook] = None,
    renormalize: str = "band",
) -> CombinedState:
    """
    Integrate from cs until ``ctrl.t_max`` or until the hook asks to stop.

    The hook is called after every accepted step with the previous and the
    new combined state and returns True to terminate. The final step is
    shortened so that an uninterrupted run ends exactly at t_max.

    With ``renormalize="band"`` xi is rescaled when |xi| leaves [1e-6, 1e6];
    with ``"always"`` after every accepted step. A rescaling divides xi by the
    power of two 2**e that brings |xi| into [1/2, 1) and adds e ln 2 to
    log_scale, so the tangent direction and its sign are reproduced exactly.

    Raises:
        StiffnessError: the step size dropped below ``ctrl.h_min``
    """
    if renormalize not in RENORMALIZE_MODES:
        raise ValueError(f"renormalize must be one of {RENORMALIZE_MODES}, got {renormalize!r}")

    t_end = ctrl.t_max
    t = cs.t
    log_scale = cs.log_scale
    h = ctrl.h_init
    y = _pack(cs)
    k1 = joint_rhs(model, y)
    prev = cs

    while t < t_end:
        h = min(h, ctrl.h_max)
        last = t + h >= t_end
        h_step = t_end - t if last else h

        y_new, err, k_new = _tsit5_step(model, y, h_step, k1, ctrl)

        if not (math.isfinite(err) and np.all(np.isfinite(y_new))):
            logger.debug("rejected non-finite step at t=%.6g with h=%.3e", t, h_step)
            h = h_step * MIN_FACTOR
            if h < ctrl.h_min:
                logger.warning("stiffness abort in %s at t=%.6g", model.name, t)
                raise StiffnessError(t, h, ctrl.h_min)
            continue

        if err > 1.0:
            h = h_step * max(MIN_FACTOR, SAFETY * err ** (-ERROR_EXPONENT))
            if h < ctrl.h_min:
                logger.warning("stiffness abort in %s at t=%.6g", model.name, t)
                raise StiffnessError(t, h, ctrl.h_min)
            continue

        t = t_end if last else t + h_step
        xi_norm = float(np.linalg.norm(y_new[3:]))
        if xi_norm > 0.0 and (renormalize == "always" or xi_norm > RENORM_HIGH or xi_norm < RENORM_LOW):
            # Power-of-two rescaling is exact, leaving |xi| in [1/2, 1)
            _, exponent = math.frexp(xi_norm)
            y_new[3:] = np.ldexp(y_new[3:], -exponent)
            k_new[3:] = np.ldexp(k_new[3:], -exponent)
            log_scale += exponent * LN2

        new = _unpack(model, y_new, t, log_scale)
        stop = hook(prev, new) if hook is not None else False
        prev = new
        y = y_new
        k1 = k_new

        factor = MAX_FACTOR if err == 0.0 else SAFETY * err ** (-ERROR_EXPONENT)
        h = h_step * min(MAX_FACTOR, max(MIN_FACTOR, factor))
        if stop:
            break

    return prev
