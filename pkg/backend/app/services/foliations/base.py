"""Foliation generator interface."""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Optional

from ...models import ModelKind, State, TangentVec, norm3

DEFAULT_SINGULAR_TOL = 1e-6


class Foliation(ABC):
    """
    Base class for 1D foliations generated by the gradient flow of a function J.

    The leaves are integral curves of grad J; points where |grad J| is below
    ``singular_tol`` belong to singular leaves and are excluded from the test.
    """

    def __init__(self, singular_tol: float = DEFAULT_SINGULAR_TOL):
        if singular_tol <= 0.0:
            raise ValueError(f"singular_tol must be positive, got {singular_tol}")
        self.singular_tol = singular_tol

    @property
    @abstractmethod
    def label(self) -> str:
        """Short identifier used on the command line."""
        pass

    @property
    @abstractmethod
    def name(self) -> str:
        """Human-readable foliation name."""
        pass

    @property
    @abstractmethod
    def model_tag(self) -> ModelKind:
        """Chart the generator is written in."""
        pass

    @abstractmethod
    def value(self, s: State) -> float:
        """Generator J(s)."""
        pass

    @abstractmethod
    def gradient(self, s: State) -> TangentVec:
        """grad J(s) in chart components, including the t or z component."""
        pass

    def is_singular(self, s: State, tol: Optional[float] = None) -> bool:
        """True iff |grad J(s)| < tol (defaults to the foliation's singular_tol)."""
        return norm3(self.gradient(s)) < (self.singular_tol if tol is None else tol)


class NegatedFoliation(Foliation):
    """Same leaves with reversed orientation: J -> -J."""

    def __init__(self, base: Foliation):
        super().__init__(base.singular_tol)
        self.base = base

    @property
    def label(self) -> str:
        return f"-{self.base.label}"

    @property
    def name(self) -> str:
        return f"{self.base.name} (reversed)"

    @property
    def model_tag(self) -> ModelKind:
        return self.base.model_tag

    def value(self, s: State) -> float:
        return -self.base.value(s)

    def gradient(self, s: State) -> TangentVec:
        g = self.base.gradient(s)
        return TangentVec(-g[0], -g[1], -g[2])

    def is_singular(self, s: State, tol: Optional[float] = None) -> bool:
        return self.base.is_singular(s, tol)
