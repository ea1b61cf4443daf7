"""Flow models."""

from __future__ import annotations

from typing import Union

from ...models import ModelKind
from ...schemas import QFlowParams, TwoWaveParams
from .base import FlowModel
from .qflow import QFlowModel
from .twowave import TwoWaveModel

__all__ = ["FlowModel", "QFlowModel", "TwoWaveModel", "build_model"]


def build_model(kind: ModelKind, params: Union[TwoWaveParams, QFlowParams]) -> FlowModel:
    """Instantiate the flow model for a model kind and its parameters."""
    if kind == ModelKind.TWO_WAVE:
        if not isinstance(params, TwoWaveParams):
            raise ValueError(f"two-wave model needs TwoWaveParams, got {type(params).__name__}")
        return TwoWaveModel(params)
    if not isinstance(params, QFlowParams):
        raise ValueError(f"Q-flow model needs QFlowParams, got {type(params).__name__}")
    return QFlowModel(params)
