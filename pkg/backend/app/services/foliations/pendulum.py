"""p-foliation: gradient lines of the pendulum energy."""

from __future__ import annotations

import math

from ...models import TWO_PI, FoliationLabel, ModelKind, State, TangentVec
from ...schemas import TwoWaveParams
from .base import DEFAULT_SINGULAR_TOL, Foliation


class PendulumFoliation(Foliation):
    """
    Generated by J = p^2/2 - mu cos(2 pi q), a family in mu.

    Captures rotational tori and librational tori of the primary resonance.
    Singular at the elliptic point (0, 0) and the hyperbolic point (1/2, 0).
    Only proximity to these critical points is excluded, not the whole
    separatrix leaf through the hyperbolic point.
    """

    def __init__(self, params: TwoWaveParams, singular_tol: float = DEFAULT_SINGULAR_TOL):
        super().__init__(singular_tol)
        self.mu = params.mu

    @property
    def label(self) -> str:
        return FoliationLabel.P.value

    @property
    def name(self) -> str:
        return f"Pendulum foliation (mu={self.mu})"

    @property
    def model_tag(self) -> ModelKind:
        return ModelKind.TWO_WAVE

    def value(self, s: State) -> float:
        return 0.5 * s.c1 * s.c1 - self.mu * math.cos(TWO_PI * s.c0)

    def gradient(self, s: State) -> TangentVec:
        return TangentVec(TWO_PI * self.mu * math.sin(TWO_PI * s.c0), s.c1, 0.0)
