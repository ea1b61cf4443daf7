"""Secondary diagnostics: Poincare sections, orbit dumps, FTLEs and t_c statistics."""

from __future__ import annotations

import logging
import math
from collections import Counter
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from ..models import DetectionStatus, ModelKind, State, TangentVec, norm3, wrap
from ..schemas import DetectionResult, FtleResult, SectionPoint, StepControl, TwoWaveParams
from .flows.base import FlowModel
from .flows.twowave import TwoWaveModel
from .integrator import CombinedState, advance_with_hook

logger = logging.getLogger(__name__)

# Tangent carried along when only the orbit itself is needed
_PASSIVE_TANGENT = TangentVec(0.0, 1.0, 0.0)

DEFAULT_V0 = TangentVec(0.0, 1.0, 0.0)

# FTLE values below these are drawn as regular orbits
REGULAR_THRESHOLD = 0.05
REGULAR_THRESHOLD_QFLOW = 0.15


def _advance_to(model: FlowModel, cs: CombinedState, t_target: float, control: StepControl) -> CombinedState:
    if t_target <= cs.t:
        return cs
    return advance_with_hook(model, cs, control.model_copy(update={"t_max": t_target}))


def poincare_section(
    params: TwoWaveParams,
    s0: State,
    n_crossings: int,
    t_section: float = 0.0,
    control: Optional[StepControl] = None,
) -> List[SectionPoint]:
    """
    Intersections of a two-wave orbit with the plane t = t_section (mod 1).

    Since t advances at unit rate the n-th crossing happens at a known time;
    the orbit is integrated segment by segment to each of them. When s0 itself
    lies on the section it is returned as crossing 0.

    Args:
        params: two-wave parameters
        s0: initial condition (q0, p0, t0)
        n_crossings: number of section points to return
        t_section: section phase in [0, 1)
        control: integrator step control

    Returns:
        List of SectionPoint with q reduced mod 1
    """
    if n_crossings < 1:
        raise ValueError(f"n_crossings must be at least 1, got {n_crossings}")
    if not 0.0 <= t_section < 1.0:
        raise ValueError(f"t_section must lie in [0, 1), got {t_section}")

    control = control or StepControl()
    model = TwoWaveModel(params)
    t0 = s0.c2
    # Elapsed time to the first crossing
    offset = math.fmod(t_section - t0, 1.0)
    if offset < 0.0:
        offset += 1.0

    cs = CombinedState(model.state(s0.c0, s0.c1, s0.c2), _PASSIVE_TANGENT, 0.0, 0.0)
    points = []
    for n in range(n_crossings):
        cs = _advance_to(model, cs, offset + n, control)
        w = wrap(cs.s)
        points.append(SectionPoint(q=w.c0, p=w.c1, crossing_index=n))
    return points


def orbit_dump(
    model: FlowModel, s0: State, T: float, dt: float, control: Optional[StepControl] = None
) -> List[Tuple[float, State]]:
    """
    Sample an orbit at t = 0, dt, 2 dt, ... up to T.

    Used for the (x, y) projections of Q-flow orbits, which have no global
    section. Returned states are wrapped.
    """
    if T <= 0.0 or dt <= 0.0:
        raise ValueError(f"T and dt must be positive, got T={T}, dt={dt}")

    control = control or StepControl()
    cs = CombinedState(model.state(s0.c0, s0.c1, s0.c2), _PASSIVE_TANGENT, 0.0, 0.0)
    samples = [(0.0, wrap(cs.s))]
    n_samples = int(math.floor(T / dt + 1e-9))
    for i in range(1, n_samples + 1):
        t = i * dt
        cs = _advance_to(model, cs, t, control)
        samples.append((t, wrap(cs.s)))
    return samples


def ftle(
    model: FlowModel,
    s0: State,
    T: float,
    v0: Optional[Sequence[float]] = None,
    control: Optional[StepControl] = None,
) -> FtleResult:
    """
    Finite-time maximal Lyapunov exponent lambda = ln(|xi_T| / |xi_0|) / T.

    The tangent vector is normalised after every accepted step and the logs
    of the norms are accumulated, so growth never overflows.

    Raises:
        ValueError: if T <= 0 or v0 is the zero vector
        StiffnessError: propagated from the integrator
    """
    if T <= 0.0:
        raise ValueError(f"T must be positive, got {T}")
    v = TangentVec(*(DEFAULT_V0 if v0 is None else v0))
    v_norm = norm3(v)
    if v_norm == 0.0:
        raise ValueError("v0 must be nonzero")

    control = (control or StepControl()).model_copy(update={"t_max": T})
    xi = TangentVec(v[0] / v_norm, v[1] / v_norm, v[2] / v_norm)
    final = advance_with_hook(model, CombinedState(s0, xi, 0.0, 0.0), control, renormalize="always")
    lam = (final.log_scale + math.log(norm3(final.xi))) / T
    return FtleResult(lam=lam, T=T, v0=(v[0], v[1], v[2]))


def histogram_tc(results: Iterable[DetectionResult], bin_width: float) -> List[Tuple[float, int]]:
    """
    Count detected orbits per t_c bin [n w, (n + 1) w).

    Only non-empty bins are returned, sorted by bin start.
    """
    if bin_width <= 0.0:
        raise ValueError(f"bin_width must be positive, got {bin_width}")
    counts = Counter(int(math.floor(r.t_c / bin_width)) for r in results if r.status == DetectionStatus.DETECTED)
    return [(index * bin_width, counts[index]) for index in sorted(counts)]


def inverse_tc_profile(row: Iterable[DetectionResult]) -> List[float]:
    """1/t_c for detected orbits and 0 otherwise, in input order."""
    return [1.0 / r.t_c if r.status == DetectionStatus.DETECTED else 0.0 for r in row]


def regular_fraction(values: Iterable[Union[FtleResult, float]], threshold: float = REGULAR_THRESHOLD) -> float:
    """Fraction of exponents strictly below ``threshold``."""
    lams = [v.lam if isinstance(v, FtleResult) else float(v) for v in values]
    if not lams:
        raise ValueError("regular_fraction needs at least one exponent")
    return sum(1 for lam in lams if lam < threshold) / len(lams)


def regular_threshold(model: ModelKind) -> float:
    """Default regularity threshold for a model's FTLE maps."""
    return REGULAR_THRESHOLD if model == ModelKind.TWO_WAVE else REGULAR_THRESHOLD_QFLOW
