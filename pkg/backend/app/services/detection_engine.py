"""Converse KAM detection engine."""

from __future__ import annotations

import logging
import math
from typing import List, Optional

from ..models import DetectionStatus, State, TangentVec, dot3, wrap
from ..schemas import DetectionResult, DetectorOptions, StepControl, TraceSample
from .flows.base import FlowModel
from .foliations.base import Foliation
from .integrator import LN2, CombinedState, StiffnessError, advance_with_hook

logger = logging.getLogger(__name__)


def interpolate_crossing(t1: float, K1: float, t2: float, K2: float) -> float:
    """
    Linear root of K between two samples of opposite sign.

    Raises:
        ValueError: if K1 and K2 do not have opposite signs or t1 >= t2
    """
    if not (K1 * K2 < 0.0 and t1 < t2):
        raise ValueError(f"need K1*K2 < 0 and t1 < t2, got ({t1}, {K1}) and ({t2}, {K2})")
    return t1 + (t2 - t1) * K1 / (K1 - K2)


def _sample(t: float, K: float, guard: float, s: State) -> TraceSample:
    w = wrap(s)
    return TraceSample(t=t, K=K, guard_dot=guard, state=(w.c0, w.c1, w.c2))


class _CrossingMonitor:
    """Step hook tracking K(t) = d(alpha)(xi, eta) and the guard <eta, xi>."""

    def __init__(self, model: FlowModel, foliation: Foliation, opts: DetectorOptions):
        self.model = model
        self.foliation = foliation
        self.opts = opts
        self.trace: Optional[List[TraceSample]] = [] if opts.record_trace else None

        self.n_steps = 0
        self.t_last = 0.0
        self.t_c: Optional[float] = None
        self.exclusion_time: Optional[float] = None

        # Last sample with nonzero K (or the first sample)
        self._k_prev: Optional[float] = None
        self._g_prev = 0.0
        self._t_prev = 0.0
        self._log_scale_prev = 0.0

    def __call__(self, prev: CombinedState, new: CombinedState) -> bool:
        self.n_steps += 1
        self.t_last = new.t
        s = new.s

        if self.foliation.is_singular(s, self.opts.singular_tol):
            self.exclusion_time = new.t
            return True

        eta = self.foliation.gradient(s)
        K = self.model.two_form(s, new.xi, eta)
        guard = dot3(eta, new.xi)
        if self.trace is not None:
            self.trace.append(_sample(new.t, K, guard, s))

        if self._k_prev is not None:
            # Express the previous K in the current tangent normalisation; the
            # integrator only ever rescales xi by powers of two
            shift = round((self._log_scale_prev - new.log_scale) / LN2)
            k_prev = math.ldexp(self._k_prev, shift)
            if K != 0.0 and k_prev != 0.0 and (K > 0.0) != (k_prev > 0.0) and self._g_prev < 0.0 and guard < 0.0:
                self.t_c = interpolate_crossing(self._t_prev, k_prev, new.t, K)
                return True

        if K != 0.0 or self._k_prev is None:
            self._k_prev = K
            self._g_prev = guard
            self._t_prev = new.t
            self._log_scale_prev = new.log_scale
        return False


def detect(
    model: FlowModel,
    foliation: Foliation,
    s0: State,
    opts: Optional[DetectorOptions] = None,
    control: Optional[StepControl] = None,
    xi0: Optional[TangentVec] = None,
) -> DetectionResult:
    """
    Run the converse KAM test on the orbit through s0.

    The tangent vector starts parallel to the foliation, xi0 = eta0 = grad J(s0),
    unless ``xi0`` is given. After every accepted step K = d(alpha)(xi, eta)
    and the guard <eta, xi> are evaluated with eta = grad J at the new point.
    The orbit is detected at the first step where K changes sign while the
    guard is negative at both ends; t_c is the linear root of K in that step.

    Args:
        model: flow model
        foliation: foliation generator in the same chart as the model
        s0: initial condition
        opts: detector options; ``opts.t_max`` overrides ``control.t_max``
        control: integrator step control
        xi0: initial tangent vector override

    Returns:
        DetectionResult with status detected, none, excluded or error
    """
    opts = opts or DetectorOptions()
    control = control or StepControl()
    if foliation.model_tag != model.model_tag:
        raise ValueError(f"foliation {foliation.label} does not belong to model {model.name}")

    if foliation.is_singular(s0, opts.singular_tol):
        return DetectionResult(
            status=DetectionStatus.EXCLUDED,
            exclusion_time=0.0,
            trace=[] if opts.record_trace else None,
        )

    eta0 = foliation.gradient(s0)
    xi = eta0 if xi0 is None else TangentVec(*xi0)
    monitor = _CrossingMonitor(model, foliation, opts)
    if monitor.trace is not None:
        monitor.trace.append(_sample(0.0, model.two_form(s0, xi, eta0), dot3(eta0, xi), s0))

    ctrl = control.model_copy(update={"t_max": opts.t_max})
    try:
        advance_with_hook(model, CombinedState(s0, xi, 0.0, 0.0), ctrl, monitor)
    except StiffnessError as e:
        logger.warning("orbit from %s aborted: %s", tuple(s0[:3]), e)
        return DetectionResult.failed(str(e), n_steps=monitor.n_steps, t_end=monitor.t_last, trace=monitor.trace)

    if monitor.t_c is not None:
        status = DetectionStatus.DETECTED
    elif monitor.exclusion_time is not None:
        status = DetectionStatus.EXCLUDED
    else:
        status = DetectionStatus.NONE

    return DetectionResult(
        status=status,
        t_c=monitor.t_c,
        n_steps=monitor.n_steps,
        t_end=monitor.t_last,
        exclusion_time=monitor.exclusion_time,
        trace=monitor.trace,
    )
