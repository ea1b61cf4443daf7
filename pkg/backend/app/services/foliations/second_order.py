"""s2-foliation: second-order global invariant of the two-wave model (k = 1)."""

from __future__ import annotations

import math

from numpy.polynomial import Polynomial

from ...models import TWO_PI, FoliationLabel, ModelKind, State, TangentVec
from ...schemas import TwoWaveParams
from .base import DEFAULT_SINGULAR_TOL, Foliation

_P = Polynomial([0.0, 1.0])

# Zeroth order, chosen so that both the first- and second-order generators
# stay regular at the resonances p = 0, 1/2 and 1.
_J0 = 0.25 * _P**4 * (_P - 1) ** 4

# First order: -mu [A cos(2 pi q) + nu B cos(2 pi (q - t))]
_A = _P**2 * (2 * _P - 1) * (_P - 1) ** 3
_B = _P**3 * (2 * _P - 1) * (_P - 1) ** 2

# Second order, one polynomial per harmonic
_MEAN_NU2 = 0.25 * _P**2 * (10 * _P**2 - 12 * _P + 3)
_MEAN = 0.25 * (10 * _P**2 - 8 * _P + 1) * (_P - 1) ** 2
_C_4Q_4T = 0.25 * _P**2 * (3 * _P - 1) * (4 * _P - 3)  # nu^2 cos(4 pi (q - t))
_C_2Q_T = _P * (_P - 1) * (6 * _P**2 - 6 * _P + 1)  # nu cos(2 pi (2q - t))
_C_T = _P * (_P - 1) * (5 * _P**2 - 5 * _P + 1)  # nu cos(2 pi t)
_C_4Q = 0.25 * (3 * _P - 2) * (4 * _P - 1) * (_P - 1) ** 2  # cos(4 pi q)

_DERIVATIVES = {name: poly.deriv() for name, poly in {
    "J0": _J0,
    "A": _A,
    "B": _B,
    "MEAN_NU2": _MEAN_NU2,
    "MEAN": _MEAN,
    "C_4Q_4T": _C_4Q_4T,
    "C_2Q_T": _C_2Q_T,
    "C_T": _C_T,
    "C_4Q": _C_4Q,
}.items()}


class SecondOrderInvariant(Foliation):
    """
    Second-order adiabatic invariant, {H, J} = O(mu^3).

    Captures everything the first-order invariant does plus the librational
    tori of the 1:2 resonance near p = 1/2. The closed form is written for
    wavenumber k = 1.
    """

    expected_order = 3

    def __init__(self, params: TwoWaveParams, singular_tol: float = DEFAULT_SINGULAR_TOL):
        super().__init__(singular_tol)
        if params.k != 1:
            raise ValueError(f"the second-order invariant is only available for k = 1, got k = {params.k}")
        self.mu = params.mu
        self.nu = params.nu

    @property
    def label(self) -> str:
        return FoliationLabel.S2.value

    @property
    def name(self) -> str:
        return f"Second-order invariant foliation (mu={self.mu})"

    @property
    def model_tag(self) -> ModelKind:
        return ModelKind.TWO_WAVE

    def value(self, s: State) -> float:
        q, p, t = s.c0, s.c1, s.c2
        mu, nu = self.mu, self.nu
        first = _A(p) * math.cos(TWO_PI * q) + nu * _B(p) * math.cos(TWO_PI * (q - t))
        second = (
            nu * nu * _MEAN_NU2(p)
            + _MEAN(p)
            + nu * nu * _C_4Q_4T(p) * math.cos(2.0 * TWO_PI * (q - t))
            + nu * _C_2Q_T(p) * math.cos(TWO_PI * (2.0 * q - t))
            + nu * _C_T(p) * math.cos(TWO_PI * t)
            + _C_4Q(p) * math.cos(2.0 * TWO_PI * q)
        )
        return float(_J0(p) - mu * first + mu * mu * second)

    def gradient(self, s: State) -> TangentVec:
        q, p, t = s.c0, s.c1, s.c2
        mu, nu = self.mu, self.nu
        d = _DERIVATIVES

        a, b = _A(p), _B(p)
        c_4q_4t, c_2q_t, c_t, c_4q = _C_4Q_4T(p), _C_2Q_T(p), _C_T(p), _C_4Q(p)

        # Harmonics
        cos_q, sin_q = math.cos(TWO_PI * q), math.sin(TWO_PI * q)
        cos_qt, sin_qt = math.cos(TWO_PI * (q - t)), math.sin(TWO_PI * (q - t))
        cos_4q_4t, sin_4q_4t = math.cos(2.0 * TWO_PI * (q - t)), math.sin(2.0 * TWO_PI * (q - t))
        cos_2q_t, sin_2q_t = math.cos(TWO_PI * (2.0 * q - t)), math.sin(TWO_PI * (2.0 * q - t))
        cos_t, sin_t = math.cos(TWO_PI * t), math.sin(TWO_PI * t)
        cos_4q, sin_4q = math.cos(2.0 * TWO_PI * q), math.sin(2.0 * TWO_PI * q)

        j_q = mu * TWO_PI * (a * sin_q + nu * b * sin_qt) - mu * mu * 2.0 * TWO_PI * (
            nu * nu * c_4q_4t * sin_4q_4t + nu * c_2q_t * sin_2q_t + c_4q * sin_4q
        )

        j_p = (
            d["J0"](p)
            - mu * (d["A"](p) * cos_q + nu * d["B"](p) * cos_qt)
            + mu
            * mu
            * (
                nu * nu * d["MEAN_NU2"](p)
                + d["MEAN"](p)
                + nu * nu * d["C_4Q_4T"](p) * cos_4q_4t
                + nu * d["C_2Q_T"](p) * cos_2q_t
                + nu * d["C_T"](p) * cos_t
                + d["C_4Q"](p) * cos_4q
            )
        )

        j_t = -mu * nu * b * TWO_PI * sin_qt + mu * mu * TWO_PI * (
            2.0 * nu * nu * c_4q_4t * sin_4q_4t + nu * c_2q_t * sin_2q_t - nu * c_t * sin_t
        )
        return TangentVec(float(j_q), float(j_p), float(j_t))
