"""Zaslavsky Q-flows: q-fold symmetric Beltrami fields."""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Tuple

import numpy as np

from ...models import TWO_PI, Matrix3, ModelKind, State, TangentVec, det3
from ...schemas import BeltramiReport, QFlowParams
from .base import FlowModel

BELTRAMI_TOLERANCE = 1e-5


@lru_cache(maxsize=None)
def _directions(q: int) -> Tuple[Tuple[float, float], ...]:
    """Unit wave vectors (cos(2 pi j/q), sin(2 pi j/q)) for j = 1..q."""
    return tuple((math.cos(TWO_PI * j / q), math.sin(TWO_PI * j / q)) for j in range(1, q + 1))


def psi_q(x: float, y: float, q: int) -> float:
    """Stream function psi_q(x, y) = sum_j cos(x cos(2 pi j/q) + y sin(2 pi j/q))."""
    return sum(math.cos(x * c + y * s) for c, s in _directions(q))


def psi_derivatives(x: float, y: float, q: int) -> Tuple[float, float, float, float, float, float]:
    """Return (psi, psi_x, psi_y, psi_xx, psi_xy, psi_yy), differentiated termwise."""
    psi = px = py = pxx = pxy = pyy = 0.0
    for c, s in _directions(q):
        phase = x * c + y * s
        cos_phase = math.cos(phase)
        sin_phase = math.sin(phase)
        psi += cos_phase
        px -= c * sin_phase
        py -= s * sin_phase
        pxx -= c * c * cos_phase
        pxy -= c * s * cos_phase
        pyy -= s * s * cos_phase
    return psi, px, py, pxx, pxy, pyy


def psi_gradient(x: float, y: float, q: int) -> Tuple[float, float, float]:
    """Return (psi, psi_x, psi_y)."""
    psi = px = py = 0.0
    for c, s in _directions(q):
        phase = x * c + y * s
        sin_phase = math.sin(phase)
        psi += math.cos(phase)
        px -= c * sin_phase
        py -= s * sin_phase
    return psi, px, py


def qflow_velocity(s: State, P: QFlowParams) -> TangentVec:
    """v = (psi_y + eps sin z, -psi_x + eps cos z, psi)."""
    psi, px, py = psi_gradient(s.c0, s.c1, P.q)
    z = s.c2
    return TangentVec(py + P.eps * math.sin(z), -px + P.eps * math.cos(z), psi)


def qflow_jacobian(s: State, P: QFlowParams) -> Matrix3:
    _, px, py, pxx, pxy, pyy = psi_derivatives(s.c0, s.c1, P.q)
    z = s.c2
    return (
        (pxy, pyy, P.eps * math.cos(z)),
        (-pxx, -pxy, -P.eps * math.sin(z)),
        (px, py, 0.0),
    )


def effective_hamiltonian(s: State, P: QFlowParams) -> float:
    """H(x, y, z) = psi_q(x, y) + eps (y sin z - x cos z), with z playing the role of time."""
    x, y, z = s.c0, s.c1, s.c2
    return psi_q(x, y, P.q) + P.eps * (y * math.sin(z) - x * math.cos(z))


def qflow_dalpha(s: State, a: TangentVec, b: TangentVec, P: QFlowParams) -> float:
    """
    d(alpha_q)(a, b) = psi (dy^dx)(a, b) - (dH^dz)(a, b).

    The antiderivative of psi in alpha_q is only defined up to a function of x
    and never enters here.
    """
    x, y, z = s.c0, s.c1, s.c2
    psi, px, py = psi_gradient(x, y, P.q)
    h_x = px - P.eps * math.cos(z)
    h_y = py + P.eps * math.sin(z)
    h_z = P.eps * (y * math.cos(z) + x * math.sin(z))
    dh_a = h_x * a[0] + h_y * a[1] + h_z * a[2]
    dh_b = h_x * b[0] + h_y * b[1] + h_z * b[2]
    return psi * (a[1] * b[0] - a[0] * b[1]) - (dh_a * b[2] - dh_b * a[2])


def qflow_volume(a: TangentVec, b: TangentVec, c: TangentVec) -> float:
    """Omega = dy^dx^dz, i.e. the determinant in (y, x, z) component order."""
    return det3((a[1], a[0], a[2]), (b[1], b[0], b[2]), (c[1], c[0], c[2]))


def screw_image(s: State, q: int) -> State:
    """
    Image of s under the symmetry of the Q-flow: rotate (x, y) by 2 pi/q and
    shift z by -2 pi/q. The rotated velocity at s equals the velocity at the
    image; for eps = 0 the z shift is irrelevant.
    """
    c, sn = math.cos(TWO_PI / q), math.sin(TWO_PI / q)
    return State(c * s.c0 - sn * s.c1, sn * s.c0 + c * s.c1, s.c2 - TWO_PI / q, ModelKind.QFLOW)


def rotate_tangent(v: TangentVec, q: int) -> TangentVec:
    """Rotate the (x, y) components of v by 2 pi/q."""
    c, sn = math.cos(TWO_PI / q), math.sin(TWO_PI / q)
    return TangentVec(c * v[0] - sn * v[1], sn * v[0] + c * v[1], v[2])


def verify_beltrami(
    P: QFlowParams, n_points: int, seed: int = 0, h: float = 1e-5, extent: float = 10.0
) -> BeltramiReport:
    """
    Check div v = 0 and curl v = v by central differences at random points.

    Args:
        P: Q-flow parameters
        n_points: number of random states in [-extent, extent]^2 x [0, 2 pi)
        seed: RNG seed
        h: finite-difference step

    Returns:
        BeltramiReport with the worst curl and divergence errors
    """
    if n_points < 1:
        raise ValueError(f"n_points must be at least 1, got {n_points}")

    rng = np.random.default_rng(seed)
    xy = rng.uniform(-extent, extent, size=(n_points, 2))
    zs = rng.uniform(0.0, TWO_PI, size=n_points)

    max_curl = 0.0
    max_div = 0.0
    for (x, y), z in zip(xy, zs):
        base = np.array([x, y, z])
        # d[i][j] = d v_i / d x_j
        d = np.empty((3, 3))
        for j in range(3):
            step = np.zeros(3)
            step[j] = h
            plus = qflow_velocity(State(*(base + step), ModelKind.QFLOW), P)
            minus = qflow_velocity(State(*(base - step), ModelKind.QFLOW), P)
            d[:, j] = (np.array(plus) - np.array(minus)) / (2.0 * h)

        v = np.array(qflow_velocity(State(x, y, z, ModelKind.QFLOW), P))
        curl = np.array([d[2, 1] - d[1, 2], d[0, 2] - d[2, 0], d[1, 0] - d[0, 1]])
        max_curl = max(max_curl, float(np.max(np.abs(curl - v))))
        max_div = max(max_div, abs(float(np.trace(d))))

    return BeltramiReport(
        q=P.q,
        eps=P.eps,
        n_points=n_points,
        max_curl_error=max_curl,
        max_div_error=max_div,
        tolerance=BELTRAMI_TOLERANCE,
        passed=max_curl <= BELTRAMI_TOLERANCE and max_div <= BELTRAMI_TOLERANCE,
    )


class QFlowModel(FlowModel):
    """
    Q-flow v = z x grad(psi_q) + psi_q z-hat + eps (sin z, cos z, 0).

    Divergence free and Beltrami with curl v = v. Chart (x, y, z); z is
    periodic of period 2 pi, x and y are unbounded.
    """

    def __init__(self, params: QFlowParams):
        self.params = params

    @property
    def model_tag(self) -> ModelKind:
        return ModelKind.QFLOW

    @property
    def name(self) -> str:
        return f"Q-flow (q={self.params.q}, eps={self.params.eps})"

    def velocity(self, s: State) -> TangentVec:
        return qflow_velocity(s, self.params)

    def jacobian(self, s: State) -> Matrix3:
        return qflow_jacobian(s, self.params)

    def two_form(self, s: State, a: TangentVec, b: TangentVec) -> float:
        return qflow_dalpha(s, a, b, self.params)

    def volume_form(self, a: TangentVec, b: TangentVec, c: TangentVec, s: State) -> float:
        return qflow_volume(a, b, c)

    def effective_hamiltonian(self, s: State) -> float:
        return effective_hamiltonian(s, self.params)
