"""Flow model interface."""

from __future__ import annotations

from abc import ABC, abstractmethod

from ...models import Matrix3, ModelKind, State, TangentVec


class FlowModel(ABC):
    """
    Base class for Cartan-Arnol'd flows on a 3D chart.

    Implementations provide the vector field v, its Jacobian Dv, the two-form
    d(alpha) and the conserved volume form Omega, with iota_v Omega = d(alpha).
    """

    @property
    @abstractmethod
    def model_tag(self) -> ModelKind:
        """Chart this model lives on."""
        pass

    @property
    @abstractmethod
    def name(self) -> str:
        """Human-readable model name."""
        pass

    @abstractmethod
    def velocity(self, s: State) -> TangentVec:
        pass

    @abstractmethod
    def jacobian(self, s: State) -> Matrix3:
        pass

    @abstractmethod
    def two_form(self, s: State, a: TangentVec, b: TangentVec) -> float:
        """Evaluate d(alpha)_s(a, b)."""
        pass

    @abstractmethod
    def volume_form(self, a: TangentVec, b: TangentVec, c: TangentVec, s: State) -> float:
        """Evaluate Omega_s(a, b, c)."""
        pass

    def state(self, c0: float, c1: float, c2: float) -> State:
        return State(float(c0), float(c1), float(c2), self.model_tag)

    def contracted_volume(self, s: State, a: TangentVec, b: TangentVec) -> float:
        """Omega_s(v, a, b), which equals two_form(s, a, b) for a Cartan-Arnol'd flow."""
        return self.volume_form(self.velocity(s), a, b, s)
