"""r-foliation: vertical lines q, t = const."""

from __future__ import annotations

from typing import Optional

from ...models import FoliationLabel, ModelKind, State, TangentVec
from ...schemas import TwoWaveParams
from .base import DEFAULT_SINGULAR_TOL, Foliation

_UP = TangentVec(0.0, 1.0, 0.0)


class VerticalFoliation(Foliation):
    """
    Foliation by vertical lines, the gradient lines of the free-particle
    energy p^2/2.

    Designed to capture rotational tori, which are graphs over (q, t). The
    generator is J = p, whose gradient is the constant (0, 1, 0): the leaves
    are those of p^2/2 but the orientation stays consistent across p = 0.
    """

    def __init__(self, params: Optional[TwoWaveParams] = None, singular_tol: float = DEFAULT_SINGULAR_TOL):
        super().__init__(singular_tol)

    @property
    def label(self) -> str:
        return FoliationLabel.R.value

    @property
    def name(self) -> str:
        return "Vertical (rotational) foliation"

    @property
    def model_tag(self) -> ModelKind:
        return ModelKind.TWO_WAVE

    def value(self, s: State) -> float:
        return s.c1

    def gradient(self, s: State) -> TangentVec:
        return _UP

    def is_singular(self, s: State, tol: Optional[float] = None) -> bool:
        return False
