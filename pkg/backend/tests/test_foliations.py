"""Tests for the foliation generators."""

import numpy as np
import pytest
from app.models import FoliationLabel, ModelKind, State
from app.schemas import QFlowParams, TwoWaveParams
from app.services.foliations import (
    FOLIATIONS,
    FirstOrderInvariant,
    HarmonicFoliation,
    NegatedFoliation,
    PendulumFoliation,
    RadialFoliation,
    SecondOrderInvariant,
    StreamFoliation,
    VerticalFoliation,
    build_foliation,
    centered_q,
    model_of,
)
from app.services.verification import gradient_fd_error

MU = 0.015


def _foliation(label, params=None):
    if model_of(label) == ModelKind.TWO_WAVE:
        return build_foliation(label, params or TwoWaveParams(mu=0.03, nu=0.8))
    return build_foliation(label, params or QFlowParams(q=4, eps=0.15))


def test_first_order_values():
    """Test J of the first-order invariant at two substituted points."""
    s1 = FirstOrderInvariant(TwoWaveParams(mu=MU))
    assert s1.value(State(0.0, 0.0, 0.0)) == pytest.approx(MU)
    assert s1.value(State(0.0, 1.0, 0.0)) == pytest.approx(-1.0 / 6.0 - MU)


def test_first_order_gradient_at_q_t_zero():
    params = TwoWaveParams(mu=MU, nu=0.6)
    g = FirstOrderInvariant(params).gradient(State(0.0, 0.3, 0.0))
    assert g[0] == pytest.approx(0.0, abs=1e-15)
    assert g[1] == pytest.approx(-0.3 + 0.09 - MU * 1.6)
    assert g[2] == pytest.approx(0.0, abs=1e-15)


def test_second_order_unperturbed_value():
    """Test that only the zeroth-order term survives at mu = 0."""
    s2 = SecondOrderInvariant(TwoWaveParams(mu=0.0))
    for p in (0.2, 0.5, 1.3):
        assert s2.value(State(0.3, p, 0.7)) == pytest.approx(0.25 * p**4 * (p - 1) ** 4)


@pytest.mark.parametrize("mu", [0.005, MU, 0.03])
def test_second_order_critical_point_on_half_resonance(mu):
    """Test that grad J vanishes at (0, 1/2, 0) for nu = 1 and nowhere nearby on the p axis."""
    s2 = SecondOrderInvariant(TwoWaveParams(mu=mu))
    g = s2.gradient(State(0.0, 0.5, 0.0))
    assert max(abs(c) for c in g) < 1e-12
    assert s2.is_singular(State(0.0, 0.5, 0.0))
    for p in (0.48, 0.52):
        assert not s2.is_singular(State(0.0, p, 0.0))


def test_second_order_needs_unit_wavenumber():
    with pytest.raises(ValueError):
        SecondOrderInvariant(TwoWaveParams(mu=0.01, k=2))


def test_vertical_gradient_is_constant():
    r = VerticalFoliation()
    for s in (State(0.0, 0.0, 0.0), State(0.7, -3.0, 0.2)):
        assert r.gradient(s) == (0.0, 1.0, 0.0)
        assert not r.is_singular(s)
        assert not r.is_singular(s, tol=10.0)


def test_radial_gradient():
    l_fol = RadialFoliation()
    assert l_fol.gradient(State(0.1, 0.2, 0.5)) == pytest.approx((0.1, 0.2, 0.0))
    assert l_fol.gradient(State(0.9, 0.2, 0.5)) == pytest.approx((-0.1, 0.2, 0.0))


def test_centered_q():
    assert centered_q(0.25) == pytest.approx(0.25)
    assert centered_q(0.75) == pytest.approx(-0.25)
    assert centered_q(0.5) == pytest.approx(-0.5)
    assert centered_q(-1.25) == pytest.approx(-0.25)


def test_singular_points():
    """Test the excluded neighbourhoods of the singular leaves."""
    assert RadialFoliation().is_singular(State(0.0, 0.0, 0.3), 1e-6)
    pendulum = PendulumFoliation(TwoWaveParams(mu=MU))
    assert pendulum.is_singular(State(0.5, 0.0, 0.0), 1e-6)
    assert pendulum.is_singular(State(0.0, 0.0, 0.0), 1e-6)
    assert not pendulum.is_singular(State(0.25, 0.0, 0.0), 1e-6)

    stream = StreamFoliation(QFlowParams(q=4))
    assert stream.is_singular(State(0.0, 0.0, 1.0, ModelKind.QFLOW))
    assert HarmonicFoliation().is_singular(State(0.0, 0.0, 2.0, ModelKind.QFLOW))
    assert not HarmonicFoliation().is_singular(State(0.5, 0.0, 2.0, ModelKind.QFLOW))


def test_harmonic_foliation():
    ql = HarmonicFoliation(QFlowParams(q=5))
    s = State(0.3, -0.4, 1.0, ModelKind.QFLOW)
    assert ql.value(s) == pytest.approx(0.125)
    assert ql.gradient(s) == (0.3, -0.4, 0.0)


@pytest.mark.parametrize("label", list(FoliationLabel))
def test_gradient_matches_finite_differences(label):
    """Test every analytic gradient against central differences."""
    foliation = _foliation(label)
    rng = np.random.default_rng(7)
    tested = 0
    while tested < 200:
        if foliation.model_tag == ModelKind.TWO_WAVE:
            s = State(rng.uniform(-0.45, 0.45), rng.uniform(-0.5, 1.5), rng.uniform(0.0, 1.0))
        else:
            s = State(rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(0, 6.28), ModelKind.QFLOW)
        if foliation.is_singular(s, 1e-3):
            continue
        assert gradient_fd_error(foliation, s) <= 1e-6
        tested += 1


@pytest.mark.parametrize("label", [FoliationLabel.L, FoliationLabel.P, FoliationLabel.S1, FoliationLabel.S2])
def test_values_are_periodic(label):
    foliation = _foliation(label)
    s = State(0.13, 0.42, 0.71)
    shifted = State(s.c0 + 1.0, s.c1, s.c2 - 2.0)
    assert foliation.value(shifted) == pytest.approx(foliation.value(s), rel=1e-12)
    assert foliation.gradient(shifted) == pytest.approx(foliation.gradient(s), rel=1e-9, abs=1e-12)


def test_negated_foliation():
    base = FirstOrderInvariant(TwoWaveParams(mu=MU))
    flipped = NegatedFoliation(base)
    s = State(0.2, 0.4, 0.1)
    assert flipped.value(s) == -base.value(s)
    assert flipped.gradient(s) == tuple(-g for g in base.gradient(s))
    assert flipped.model_tag == ModelKind.TWO_WAVE
    assert flipped.label == "-s1"


def test_build_foliation():
    """Test the registry and its validation."""
    assert set(FOLIATIONS) == set(FoliationLabel)
    assert isinstance(build_foliation("s1", TwoWaveParams(mu=MU)), FirstOrderInvariant)
    assert isinstance(build_foliation(FoliationLabel.QPSI, QFlowParams(q=5)), StreamFoliation)
    assert build_foliation("p", TwoWaveParams(), singular_tol=1e-3).singular_tol == 1e-3

    with pytest.raises(ValueError, match="unknown foliation"):
        build_foliation("x", TwoWaveParams())
    with pytest.raises(ValueError):
        build_foliation("ql", TwoWaveParams())
    with pytest.raises(ValueError):
        build_foliation("r", QFlowParams())
    with pytest.raises(ValueError):
        build_foliation("r", TwoWaveParams(), singular_tol=0.0)


def test_model_of():
    assert model_of("r") == ModelKind.TWO_WAVE
    assert model_of(FoliationLabel.QL) == ModelKind.QFLOW
