"""s1-foliation: first-order global invariant of the two-wave model."""

from __future__ import annotations

import math

from ...models import TWO_PI, FoliationLabel, ModelKind, State, TangentVec
from ...schemas import TwoWaveParams
from .base import DEFAULT_SINGULAR_TOL, Foliation


class FirstOrderInvariant(Foliation):
    """
    J = -p^2/2 + p^3/3 - mu [(p - 1) cos(2 pi q) + nu p cos(2 pi k (q - t))].

    Built by global removal of resonances from J0 with J0'(p) = p (p - 1),
    which cancels the resonant denominators at p = 0 and p = 1. {H, J} is
    O(mu^2). Tracks the elliptic points near (0, 0) and (0, 1) as mu varies.
    """

    expected_order = 2

    def __init__(self, params: TwoWaveParams, singular_tol: float = DEFAULT_SINGULAR_TOL):
        super().__init__(singular_tol)
        self.mu = params.mu
        self.nu = params.nu
        self.k = params.k

    @property
    def label(self) -> str:
        return FoliationLabel.S1.value

    @property
    def name(self) -> str:
        return f"First-order invariant foliation (mu={self.mu})"

    @property
    def model_tag(self) -> ModelKind:
        return ModelKind.TWO_WAVE

    def value(self, s: State) -> float:
        q, p, t = s.c0, s.c1, s.c2
        return (
            -0.5 * p * p
            + p * p * p / 3.0
            - self.mu * ((p - 1.0) * math.cos(TWO_PI * q) + self.nu * p * math.cos(TWO_PI * self.k * (q - t)))
        )

    def gradient(self, s: State) -> TangentVec:
        q, p, t = s.c0, s.c1, s.c2
        theta = TWO_PI * self.k * (q - t)
        sin_q = math.sin(TWO_PI * q)
        sin_theta = math.sin(theta)
        j_q = self.mu * (TWO_PI * (p - 1.0) * sin_q + TWO_PI * self.k * self.nu * p * sin_theta)
        j_p = -p + p * p - self.mu * (math.cos(TWO_PI * q) + self.nu * math.cos(theta))
        j_t = -self.mu * self.nu * p * TWO_PI * self.k * sin_theta
        return TangentVec(j_q, j_p, j_t)


class NaiveFirstOrderInvariant(Foliation):
    """
    First-order invariant built from J0 = p, i.e. J0' = 1.

    J = p - mu [cos(2 pi q) / p + nu cos(2 pi k (q - t)) / (p - 1)]. Still
    O(mu^2) in {H, J}, but its coefficients diverge at the resonances p = 0
    and p = 1. Kept as the negative control of the residual checks; it is not
    a usable foliation.
    """

    expected_order = 2

    def __init__(self, params: TwoWaveParams, singular_tol: float = DEFAULT_SINGULAR_TOL):
        super().__init__(singular_tol)
        self.mu = params.mu
        self.nu = params.nu
        self.k = params.k

    @property
    def label(self) -> str:
        return "s1_naive"

    @property
    def name(self) -> str:
        return f"First-order invariant with unit J0' (mu={self.mu})"

    @property
    def model_tag(self) -> ModelKind:
        return ModelKind.TWO_WAVE

    def value(self, s: State) -> float:
        q, p, t = s.c0, s.c1, s.c2
        return p - self.mu * (
            math.cos(TWO_PI * q) / p + self.nu * math.cos(TWO_PI * self.k * (q - t)) / (p - 1.0)
        )

    def gradient(self, s: State) -> TangentVec:
        q, p, t = s.c0, s.c1, s.c2
        theta = TWO_PI * self.k * (q - t)
        sin_theta = math.sin(theta)
        j_q = self.mu * (TWO_PI * math.sin(TWO_PI * q) / p + TWO_PI * self.k * self.nu * sin_theta / (p - 1.0))
        j_p = 1.0 + self.mu * (math.cos(TWO_PI * q) / (p * p) + self.nu * math.cos(theta) / ((p - 1.0) ** 2))
        j_t = -self.mu * self.nu * TWO_PI * self.k * sin_theta / (p - 1.0)
        return TangentVec(j_q, j_p, j_t)
