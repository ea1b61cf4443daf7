"""Tests for the adaptive Tsit5 integrator of orbits and tangent vectors."""

import math

import numpy as np
import pytest
from app.models import ModelKind, State, TangentVec
from app.schemas import QFlowParams, StepControl, TwoWaveParams
from app.services.flows import QFlowModel, TwoWaveModel
from app.services.integrator import (
    TSIT5_A,
    TSIT5_E,
    CombinedState,
    StiffnessError,
    advance_with_hook,
    joint_rhs,
    rk_step,
)


@pytest.fixture
def free_model():
    return TwoWaveModel(TwoWaveParams(mu=0.0))


def test_tableau_consistency():
    """Test row sums and the error weights of the Butcher tableau."""
    assert sum(TSIT5_A[-1]) == pytest.approx(1.0, abs=1e-14)
    assert float(np.sum(TSIT5_E)) == pytest.approx(0.0, abs=1e-14)
    assert all(len(row) == i for i, row in enumerate(TSIT5_A))


def test_joint_rhs(free_model):
    y = np.array([0.1, 0.5, 0.2, 0.0, 1.0, 0.0])
    assert joint_rhs(free_model, y) == pytest.approx([0.5, 0.0, 1.0, 1.0, 0.0, 0.0])


def test_rk_step_free_particle(free_model):
    """Test one step of the exactly linear free-particle system."""
    cs = CombinedState(State(0.0, 0.5, 0.0), TangentVec(0.0, 1.0, 0.0), 0.0)
    new, err = rk_step(free_model, cs, 0.1)
    assert new.s[:3] == pytest.approx((0.05, 0.5, 0.1), abs=1e-12)
    assert new.xi == pytest.approx((0.1, 1.0, 0.0), abs=1e-12)
    assert new.t == pytest.approx(0.1)
    assert err <= 1e-6


def test_advance_free_particle(free_model):
    """Test the exact solution q = q0 + p0 t after a full run."""
    cs = CombinedState(State(0.1, 0.37, 0.0), TangentVec(0.0, 1.0, 0.0), 0.0)
    final = advance_with_hook(free_model, cs, StepControl(t_max=150.0))
    assert final.t == 150.0
    assert final.s.c0 == pytest.approx(0.1 + 150.0 * 0.37, abs=1e-6)
    assert final.s.c1 == pytest.approx(0.37, abs=1e-12)
    assert final.xi[0] * math.exp(final.log_scale) == pytest.approx(150.0, rel=1e-9)


def test_hook_terminates():
    """Test that a hook stopping at t >= 10 ends within one step of 10."""
    model = TwoWaveModel(TwoWaveParams(mu=0.015))
    ctrl = StepControl(t_max=150.0)
    calls = []

    def hook(prev, new):
        calls.append((prev.t, new.t))
        return new.t >= 10.0

    final = advance_with_hook(model, CombinedState(State(0.0, 0.5, 0.0), TangentVec(0.0, 1.0, 0.0), 0.0), ctrl, hook)
    assert 10.0 <= final.t <= 10.0 + ctrl.h_max
    assert calls[0][0] == 0.0
    # consecutive calls share their endpoints
    assert all(a[1] == b[0] for a, b in zip(calls, calls[1:]))


def test_hamiltonian_conserved_for_single_wave():
    """Test that H is conserved when the second wave is switched off."""
    params = TwoWaveParams(mu=0.015, nu=0.0)
    model = TwoWaveModel(params)
    s0 = State(0.0, 0.05, 0.0)
    energies = []

    def hook(prev, new):
        energies.append(model.hamiltonian(new.s))
        return False

    advance_with_hook(model, CombinedState(s0, TangentVec(0.0, 1.0, 0.0), 0.0), StepControl(t_max=150.0), hook)
    e0 = model.hamiltonian(s0)
    assert e0 == pytest.approx(0.5 * 0.05**2 - 0.015)
    assert max(abs(e - e0) for e in energies) <= 1e-6


def test_stream_function_conserved_without_perturbation():
    model = QFlowModel(QFlowParams(q=4, eps=0.0))
    s0 = State(0.5, 0.5, 0.0, ModelKind.QFLOW)
    final = advance_with_hook(model, CombinedState(s0, TangentVec(1.0, 0.0, 0.0), 0.0), StepControl(t_max=20.0))
    assert model.effective_hamiltonian(final.s) == pytest.approx(model.effective_hamiltonian(s0), abs=1e-6)


@pytest.mark.parametrize("eps", [0.0, 0.15])
def test_qflow_step_is_time_reversible(eps):
    """Test that a forward step followed by the backward step returns to the start."""
    model = QFlowModel(QFlowParams(q=4, eps=eps))
    start = CombinedState(State(0.5, 0.3, 0.2, ModelKind.QFLOW), TangentVec(1.0, 0.0, 0.0), 0.0)
    forward, _ = rk_step(model, start, 1e-2)
    back, _ = rk_step(model, forward, -1e-2)
    assert back.t == pytest.approx(0.0, abs=1e-15)
    for got, want in zip(back.s[:3], start.s[:3]):
        assert got == pytest.approx(want, abs=1e-10)


def test_renormalization_modes_agree():
    """Test that power-of-two rescaling leaves the orbit bitwise unchanged."""
    model = TwoWaveModel(TwoWaveParams(mu=0.03))
    cs = CombinedState(State(0.0, 0.24, 0.0), TangentVec(0.0, 1.0, 0.0), 0.0)
    ctrl = StepControl(t_max=60.0)
    band = advance_with_hook(model, cs, ctrl, renormalize="band")
    always = advance_with_hook(model, cs, ctrl, renormalize="always")
    assert band.s == always.s
    assert 0.5 <= np.linalg.norm(always.xi) < 1.0
    for a, b in zip(band.xi, always.xi):
        assert a * math.exp(band.log_scale) == pytest.approx(b * math.exp(always.log_scale), rel=1e-9, abs=1e-300)


def test_band_renormalization_bounds_tangent():
    """Test that a growing tangent vector is kept inside the band."""
    model = TwoWaveModel(TwoWaveParams(mu=0.03))
    cs = CombinedState(State(0.0, 0.24, 0.0), TangentVec(0.0, 1e5, 0.0), 0.0)
    norms = []

    def hook(prev, new):
        norms.append(float(np.linalg.norm(new.xi)))
        return False

    advance_with_hook(model, cs, StepControl(t_max=60.0), hook)
    assert max(norms) <= 1e6
    assert min(norms) >= 1e-6


def test_unknown_renormalize_mode(free_model):
    cs = CombinedState(State(0.0, 0.5, 0.0), TangentVec(0.0, 1.0, 0.0), 0.0)
    with pytest.raises(ValueError):
        advance_with_hook(free_model, cs, StepControl(t_max=1.0), renormalize="never")


def test_stiffness_abort():
    """Test that an unreachable tolerance aborts once h drops below h_min."""
    model = QFlowModel(QFlowParams(q=4, eps=0.15))
    ctrl = StepControl(rtol=1e-30, atol=1e-30, h_min=1e-3, h_init=1e-3, h_max=0.1, t_max=10.0)
    cs = CombinedState(State(0.3, 0.2, 0.0, ModelKind.QFLOW), TangentVec(1.0, 0.0, 0.0), 0.0)
    with pytest.raises(StiffnessError) as exc_info:
        advance_with_hook(model, cs, ctrl)
    assert exc_info.value.h < 1e-3
    assert "h_min" in str(exc_info.value)


def test_step_control_validation():
    with pytest.raises(ValueError):
        StepControl(h_min=1e-2, h_init=1e-3)
    with pytest.raises(ValueError):
        StepControl(rtol=0.0)
