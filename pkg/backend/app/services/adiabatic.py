"""Poisson-bracket residuals of the perturbative two-wave invariants."""

from __future__ import annotations

import logging
import math
import statistics
from typing import Dict, List, Optional, Sequence, Tuple, Type

import numpy as np

from ..models import ModelKind, State
from ..schemas import ScalingReport, TwoWaveParams
from .flows.twowave import TwoWaveModel
from .foliations import FirstOrderInvariant, Foliation, NaiveFirstOrderInvariant, SecondOrderInvariant

logger = logging.getLogger(__name__)

# Perturbative invariants whose residual order can be checked
INVARIANTS: Dict[str, Type[Foliation]] = {
    "s1": FirstOrderInvariant,
    "s2": SecondOrderInvariant,
    "s1_naive": NaiveFirstOrderInvariant,
}

DEFAULT_MU_PAIRS: Tuple[Tuple[float, float], ...] = ((1e-2, 5e-3),)
ORDER_TOLERANCE = 0.4


def poisson_residual(foliation: Foliation, s: State, params: TwoWaveParams) -> float:
    """
    {H, J}(s) = H_p J_q - H_q J_p + J_t in the extended phase space.

    This is the derivative of J along the two-wave flow, so it vanishes
    identically for an exact integral.
    """
    h_q, h_p = TwoWaveModel(params).hamiltonian_gradient(s)
    j_q, j_p, j_t = foliation.gradient(s)
    return h_p * j_q - h_q * j_p + j_t


def sample_states(n: int, seed: int = 0, margin: float = 0.1) -> List[State]:
    """
    Random two-wave states with p kept at least ``margin`` away from 0 and 1.

    q and t are uniform on [0, 1); p is uniform on [margin, 1 - margin].
    """
    if not 0.0 <= margin < 0.5:
        raise ValueError(f"margin must lie in [0, 0.5), got {margin}")
    rng = np.random.default_rng(seed)
    q = rng.uniform(0.0, 1.0, size=n)
    p = rng.uniform(margin, 1.0 - margin, size=n)
    t = rng.uniform(0.0, 1.0, size=n)
    return [State(float(a), float(b), float(c), ModelKind.TWO_WAVE) for a, b, c in zip(q, p, t)]


def residual_scaling_test(
    label: str,
    samples: Sequence[State],
    mu_pairs: Sequence[Tuple[float, float]] = DEFAULT_MU_PAIRS,
    nu: float = 1.0,
    k: int = 1,
    expected_order: Optional[int] = None,
) -> ScalingReport:
    """
    Estimate the order in mu of {H, J} by evaluating it at pairs of mu values.

    For every sample and pair (mu_a, mu_b) the observed exponent is
    log(|R(mu_a)| / |R(mu_b)|) / log(mu_a / mu_b).

    Args:
        label: one of ``INVARIANTS``
        samples: two-wave states to evaluate at
        mu_pairs: pairs of distinct positive mu values
        nu: relative amplitude of the second wave
        k: wavenumber of the second wave
        expected_order: order to test against, defaults to the invariant's own

    Returns:
        ScalingReport; passed iff the median exponent is within 0.4 of the
        expected order
    """
    if label not in INVARIANTS:
        raise ValueError(f"no residual test for foliation {label!r}, expected one of {sorted(INVARIANTS)}")
    invariant = INVARIANTS[label]
    order = invariant.expected_order if expected_order is None else expected_order

    exponents: List[Tuple[float, State]] = []
    max_abs = 0.0
    for mu_a, mu_b in mu_pairs:
        if mu_a <= 0.0 or mu_b <= 0.0 or mu_a == mu_b:
            raise ValueError(f"mu pair must hold two distinct positive values, got ({mu_a}, {mu_b})")
        params_a = TwoWaveParams(mu=mu_a, nu=nu, k=k)
        params_b = TwoWaveParams(mu=mu_b, nu=nu, k=k)
        foliation_a = invariant(params_a)
        foliation_b = invariant(params_b)
        for s in samples:
            r_a = abs(poisson_residual(foliation_a, s, params_a))
            r_b = abs(poisson_residual(foliation_b, s, params_b))
            max_abs = max(max_abs, r_a, r_b)
            if r_a == 0.0 or r_b == 0.0:
                continue
            exponents.append((math.log(r_a / r_b) / math.log(mu_a / mu_b), s))

    if not exponents:
        logger.warning("residual of %s vanished at every sample", label)
        return ScalingReport(
            label=label,
            expected_order=order,
            median_exponent=math.nan,
            worst_exponent=math.nan,
            worst_sample=(math.nan, math.nan, math.nan),
            max_abs_residual=max_abs,
            passed=False,
        )

    median = statistics.median(e for e, _ in exponents)
    worst, worst_state = max(exponents, key=lambda item: abs(item[0] - order))
    report = ScalingReport(
        label=label,
        expected_order=order,
        median_exponent=median,
        worst_exponent=worst,
        worst_sample=(worst_state.c0, worst_state.c1, worst_state.c2),
        max_abs_residual=max_abs,
        passed=abs(median - order) <= ORDER_TOLERANCE,
    )
    logger.info("residual order of %s: median %.3f (expected %d)", label, median, order)
    return report
