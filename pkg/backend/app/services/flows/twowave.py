"""Two-wave Hamiltonian flow in extended phase space."""

from __future__ import annotations

import math
from typing import Tuple

from ...models import TWO_PI, Matrix3, ModelKind, State, TangentVec, det3
from ...schemas import TwoWaveParams
from .base import FlowModel


def twowave_hamiltonian(s: State, P: TwoWaveParams) -> float:
    """H(q, p, t) = p^2/2 - mu cos(2 pi q) - mu nu cos(2 pi k (q - t))."""
    q, p, t = s.c0, s.c1, s.c2
    return 0.5 * p * p - P.mu * math.cos(TWO_PI * q) - P.mu * P.nu * math.cos(TWO_PI * P.k * (q - t))


def _hamiltonian_gradient(s: State, P: TwoWaveParams) -> Tuple[float, float]:
    """(H_q, H_p); H_t never enters the flow or the two-form."""
    q, p, t = s.c0, s.c1, s.c2
    h_q = TWO_PI * P.mu * math.sin(TWO_PI * q) + TWO_PI * P.mu * P.nu * P.k * math.sin(TWO_PI * P.k * (q - t))
    return h_q, p


def twowave_velocity(s: State, P: TwoWaveParams) -> TangentVec:
    """Hamilton's equations with t advancing at unit rate."""
    h_q, h_p = _hamiltonian_gradient(s, P)
    return TangentVec(h_p, -h_q, 1.0)


def twowave_jacobian(s: State, P: TwoWaveParams) -> Matrix3:
    q, t = s.c0, s.c2
    curvature = 2.0 * TWO_PI * math.pi * P.mu  # 4 pi^2 mu
    second_wave = curvature * P.nu * P.k * P.k * math.cos(TWO_PI * P.k * (q - t))
    return (
        (0.0, 1.0, 0.0),
        (-curvature * math.cos(TWO_PI * q) - second_wave, 0.0, second_wave),
        (0.0, 0.0, 0.0),
    )


def twowave_dalpha(s: State, a: TangentVec, b: TangentVec, P: TwoWaveParams) -> float:
    """
    d(alpha)(a, b) for alpha = p dq - H dt.

    d(alpha) = dp^dq - H_q dq^dt - H_p dp^dt, components ordered (q, p, t).
    """
    h_q, h_p = _hamiltonian_gradient(s, P)
    dp_dq = a[1] * b[0] - a[0] * b[1]
    dq_dt = a[0] * b[2] - a[2] * b[0]
    dp_dt = a[1] * b[2] - a[2] * b[1]
    return dp_dq - h_q * dq_dt - h_p * dp_dt


def twowave_volume(a: TangentVec, b: TangentVec, c: TangentVec) -> float:
    """Omega = dp^dq^dt, i.e. the determinant in (p, q, t) component order."""
    return det3((a[1], a[0], a[2]), (b[1], b[0], b[2]), (c[1], c[0], c[2]))


class TwoWaveModel(FlowModel):
    """
    Charged particle in two longitudinal electrostatic waves.

    Chart (q, p, t) with q and t periodic of period 1. The first wave is at
    rest, the second has unit phase velocity and wavenumber k.
    """

    def __init__(self, params: TwoWaveParams):
        self.params = params

    @property
    def model_tag(self) -> ModelKind:
        return ModelKind.TWO_WAVE

    @property
    def name(self) -> str:
        return f"two-wave (mu={self.params.mu}, nu={self.params.nu}, k={self.params.k})"

    def hamiltonian(self, s: State) -> float:
        return twowave_hamiltonian(s, self.params)

    def velocity(self, s: State) -> TangentVec:
        return twowave_velocity(s, self.params)

    def jacobian(self, s: State) -> Matrix3:
        return twowave_jacobian(s, self.params)

    def two_form(self, s: State, a: TangentVec, b: TangentVec) -> float:
        return twowave_dalpha(s, a, b, self.params)

    def volume_form(self, a: TangentVec, b: TangentVec, c: TangentVec, s: State) -> float:
        return twowave_volume(a, b, c)

    def hamiltonian_gradient(self, s: State) -> Tuple[float, float]:
        return _hamiltonian_gradient(s, self.params)
