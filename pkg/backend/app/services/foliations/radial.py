"""l-foliation: rays from the elliptic point (q, p) = (0, 0)."""

from __future__ import annotations

import math
from typing import Optional

from ...models import FoliationLabel, ModelKind, State, TangentVec
from ...schemas import TwoWaveParams
from .base import DEFAULT_SINGULAR_TOL, Foliation


def centered_q(q: float) -> float:
    """Re-center q (mod 1) into [-1/2, 1/2)."""
    r = math.fmod(q + 0.5, 1.0)
    if r < 0.0:
        r += 1.0
    if r >= 1.0:
        r = 0.0
    return r - 0.5


class RadialFoliation(Foliation):
    """
    Rays of constant angle in the (q, p) plane, from J = (q^2 + p^2)/2.

    Captures librational tori around the origin. Singular along the curve
    (q, p) = (0, 0); orbits that reach it are excluded.
    """

    def __init__(self, params: Optional[TwoWaveParams] = None, singular_tol: float = DEFAULT_SINGULAR_TOL):
        super().__init__(singular_tol)

    @property
    def label(self) -> str:
        return FoliationLabel.L.value

    @property
    def name(self) -> str:
        return "Radial (librational) foliation"

    @property
    def model_tag(self) -> ModelKind:
        return ModelKind.TWO_WAVE

    def value(self, s: State) -> float:
        q = centered_q(s.c0)
        return 0.5 * (q * q + s.c1 * s.c1)

    def gradient(self, s: State) -> TangentVec:
        return TangentVec(centered_q(s.c0), s.c1, 0.0)
