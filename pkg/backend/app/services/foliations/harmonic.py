"""ql-foliation: rays from the z-axis of a Q-flow."""

from __future__ import annotations

from typing import Optional

from ...models import FoliationLabel, ModelKind, State, TangentVec
from ...schemas import QFlowParams
from .base import DEFAULT_SINGULAR_TOL, Foliation


class HarmonicFoliation(Foliation):
    """
    Radial lines in (x, y) at constant z, generated by J = (x^2 + y^2)/2.

    The Q-flow analogue of the l-foliation. Ignores the flow parameters and
    is singular only on the z-axis.
    """

    def __init__(self, params: Optional[QFlowParams] = None, singular_tol: float = DEFAULT_SINGULAR_TOL):
        super().__init__(singular_tol)

    @property
    def label(self) -> str:
        return FoliationLabel.QL.value

    @property
    def name(self) -> str:
        return "Harmonic (radial) Q-flow foliation"

    @property
    def model_tag(self) -> ModelKind:
        return ModelKind.QFLOW

    def value(self, s: State) -> float:
        return 0.5 * (s.c0 * s.c0 + s.c1 * s.c1)

    def gradient(self, s: State) -> TangentVec:
        return TangentVec(s.c0, s.c1, 0.0)
