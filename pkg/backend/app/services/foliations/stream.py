"""qpsi-foliation: gradient lines of the Q-flow stream function."""

from __future__ import annotations

from ...models import FoliationLabel, ModelKind, State, TangentVec
from ...schemas import QFlowParams
from ..flows.qflow import psi_gradient, psi_q
from .base import DEFAULT_SINGULAR_TOL, Foliation


class StreamFoliation(Foliation):
    """
    Generated by J = psi_q(x, y).

    For eps = 0 the flow preserves psi_q, so the invariant tori are its level
    sets and are transverse to this foliation by construction. Singular at
    the stagnation points of psi_q, e.g. the lattice centres of psi_4.
    """

    def __init__(self, params: QFlowParams, singular_tol: float = DEFAULT_SINGULAR_TOL):
        super().__init__(singular_tol)
        self.q = params.q

    @property
    def label(self) -> str:
        return FoliationLabel.QPSI.value

    @property
    def name(self) -> str:
        return f"Stream-function foliation (q={self.q})"

    @property
    def model_tag(self) -> ModelKind:
        return ModelKind.QFLOW

    def value(self, s: State) -> float:
        return psi_q(s.c0, s.c1, self.q)

    def gradient(self, s: State) -> TangentVec:
        _, px, py = psi_gradient(s.c0, s.c1, self.q)
        return TangentVec(px, py, 0.0)
