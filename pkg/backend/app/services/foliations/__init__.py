"""Foliation generators."""

from __future__ import annotations

from typing import Dict, Type, Union

from ...models import FoliationLabel, ModelKind
from ...schemas import QFlowParams, TwoWaveParams
from .base import DEFAULT_SINGULAR_TOL, Foliation, NegatedFoliation
from .first_order import FirstOrderInvariant, NaiveFirstOrderInvariant
from .harmonic import HarmonicFoliation
from .pendulum import PendulumFoliation
from .radial import RadialFoliation, centered_q
from .second_order import SecondOrderInvariant
from .stream import StreamFoliation
from .vertical import VerticalFoliation

__all__ = [
    "DEFAULT_SINGULAR_TOL",
    "FOLIATIONS",
    "FirstOrderInvariant",
    "Foliation",
    "HarmonicFoliation",
    "NaiveFirstOrderInvariant",
    "NegatedFoliation",
    "PendulumFoliation",
    "RadialFoliation",
    "SecondOrderInvariant",
    "StreamFoliation",
    "VerticalFoliation",
    "build_foliation",
    "centered_q",
    "model_of",
]

# Registry of all foliation generators selectable by label
FOLIATIONS: Dict[FoliationLabel, Type[Foliation]] = {
    FoliationLabel.R: VerticalFoliation,
    FoliationLabel.L: RadialFoliation,
    FoliationLabel.P: PendulumFoliation,
    FoliationLabel.S1: FirstOrderInvariant,
    FoliationLabel.S2: SecondOrderInvariant,
    FoliationLabel.QL: HarmonicFoliation,
    FoliationLabel.QPSI: StreamFoliation,
}

_PARAMS_FOR = {
    ModelKind.TWO_WAVE: TwoWaveParams,
    ModelKind.QFLOW: QFlowParams,
}

_MODEL_OF = {
    FoliationLabel.R: ModelKind.TWO_WAVE,
    FoliationLabel.L: ModelKind.TWO_WAVE,
    FoliationLabel.P: ModelKind.TWO_WAVE,
    FoliationLabel.S1: ModelKind.TWO_WAVE,
    FoliationLabel.S2: ModelKind.TWO_WAVE,
    FoliationLabel.QL: ModelKind.QFLOW,
    FoliationLabel.QPSI: ModelKind.QFLOW,
}


def build_foliation(
    label: Union[FoliationLabel, str],
    params: Union[TwoWaveParams, QFlowParams],
    singular_tol: float = DEFAULT_SINGULAR_TOL,
) -> Foliation:
    """
    Instantiate a foliation generator from its label and the model parameters.

    Raises:
        ValueError: unknown label, or parameters of the wrong model
    """
    try:
        label = FoliationLabel(label)
    except ValueError:
        raise ValueError(f"unknown foliation {label!r}") from None

    owner = _MODEL_OF[label]
    if not isinstance(params, _PARAMS_FOR[owner]):
        raise ValueError(f"foliation {label.value} belongs to the {owner.value} model, got {type(params).__name__}")
    return FOLIATIONS[label](params, singular_tol=singular_tol)


def model_of(label: Union[FoliationLabel, str]) -> ModelKind:
    """Model whose chart a foliation label is written in."""
    return _MODEL_OF[FoliationLabel(label)]
