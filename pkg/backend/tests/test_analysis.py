"""Tests for sections, orbit dumps, FTLEs and t_c statistics."""

import math
import random

import pytest
from app.models import DetectionStatus, ModelKind, State
from app.schemas import DetectionResult, FtleResult, QFlowParams, TwoWaveParams
from app.services.analysis import (
    REGULAR_THRESHOLD,
    REGULAR_THRESHOLD_QFLOW,
    ftle,
    histogram_tc,
    inverse_tc_profile,
    orbit_dump,
    poincare_section,
    regular_fraction,
    regular_threshold,
)
from app.services.flows import QFlowModel, TwoWaveModel


def _detected(t_c):
    return DetectionResult(status=DetectionStatus.DETECTED, t_c=t_c)


def _circular_gap(a, b):
    d = abs(a - b) % 1.0
    return min(d, 1.0 - d)


def test_section_of_free_rotation():
    """Test section points of a free particle with p0 = 1/2."""
    points = poincare_section(TwoWaveParams(mu=0.0), State(0.0, 0.5, 0.0), 4)
    assert [pt.crossing_index for pt in points] == [0, 1, 2, 3]
    for n, pt in enumerate(points):
        assert _circular_gap(pt.q, 0.5 * n) <= 1e-8
        assert pt.p == pytest.approx(0.5, abs=1e-8)
        assert 0.0 <= pt.q < 1.0


def test_section_inside_the_island_keeps_pendulum_energy():
    params = TwoWaveParams(mu=0.015)
    s0 = State(0.0, 0.05, 0.0)
    pendulum = TwoWaveModel(TwoWaveParams(mu=params.mu, nu=0.0))
    e0 = pendulum.hamiltonian(s0)
    points = poincare_section(params, s0, 30)
    assert len(points) == 30
    for pt in points:
        assert abs(pendulum.hamiltonian(State(pt.q, pt.p, 0.0)) - e0) <= 0.02


def test_section_phase_changes_the_point_set():
    params = TwoWaveParams(mu=0.015)
    s0 = State(0.0, 0.3, 0.0)
    at_zero = poincare_section(params, s0, 5, t_section=0.0)
    at_half = poincare_section(params, s0, 5, t_section=0.5)
    assert at_zero[0].q == 0.0 and at_zero[0].p == 0.3
    assert at_half[0].q != pytest.approx(at_zero[0].q)


def test_section_validation():
    with pytest.raises(ValueError):
        poincare_section(TwoWaveParams(), State(0.0, 0.5, 0.0), 0)
    with pytest.raises(ValueError):
        poincare_section(TwoWaveParams(), State(0.0, 0.5, 0.0), 3, t_section=1.0)


def test_orbit_dump_free_particle():
    samples = orbit_dump(TwoWaveModel(TwoWaveParams(mu=0.0)), State(0.1, 0.2, 0.0), 1.0, 0.25)
    assert [t for t, _ in samples] == [0.0, 0.25, 0.5, 0.75, 1.0]
    for t, s in samples:
        assert s.c0 == pytest.approx((0.1 + 0.2 * t) % 1.0, abs=1e-10)
        assert s.c1 == 0.2


def test_orbit_dump_qflow_is_wrapped():
    samples = orbit_dump(QFlowModel(QFlowParams(q=4, eps=0.05)), State(0.5, 0.5, 0.0, ModelKind.QFLOW), 5.0, 0.5)
    assert len(samples) == 11
    assert all(0.0 <= s.c2 < 2.0 * math.pi for _, s in samples)


def test_orbit_dump_validation():
    with pytest.raises(ValueError):
        orbit_dump(TwoWaveModel(TwoWaveParams()), State(0.0, 0.5, 0.0), 1.0, 0.0)


def test_ftle_free_particle():
    """Test the closed form ln(sqrt(1 + T^2)) / T of a sheared tangent."""
    T = 150.0
    result = ftle(TwoWaveModel(TwoWaveParams(mu=0.0)), State(0.0, 0.5, 0.0), T, (0.0, 1.0, 0.0))
    assert result.lam == pytest.approx(math.log(math.sqrt(1.0 + T * T)) / T, abs=1e-6)
    assert result.lam == pytest.approx(0.0334, abs=1e-3)
    assert result.T == T
    assert result.v0 == (0.0, 1.0, 0.0)


def test_ftle_is_independent_of_v0_length():
    model = TwoWaveModel(TwoWaveParams(mu=0.03))
    s0 = State(0.0, 0.24, 0.0)
    one = ftle(model, s0, 30.0, (0.0, 1.0, 0.0))
    two = ftle(model, s0, 30.0, (0.0, 2.0, 0.0))
    assert abs(one.lam - two.lam) <= 1e-12


def test_ftle_regular_qflow_orbit():
    """Test that an orbit on a closed stream-function contour stays below the regular threshold."""
    model = QFlowModel(QFlowParams(q=4, eps=0.0))
    result = ftle(model, State(0.5, 0.5, 0.0, ModelKind.QFLOW), 150.0)
    assert result.lam <= 0.05


def test_ftle_decays_on_regular_orbit():
    model = TwoWaveModel(TwoWaveParams(mu=0.0))
    s0 = State(0.0, 0.3, 0.0)
    short = ftle(model, s0, 100.0)
    long = ftle(model, s0, 200.0)
    assert 0.4 <= long.lam / short.lam <= 0.7


def test_ftle_validation():
    model = TwoWaveModel(TwoWaveParams())
    with pytest.raises(ValueError):
        ftle(model, State(0.0, 0.5, 0.0), 0.0)
    with pytest.raises(ValueError):
        ftle(model, State(0.0, 0.5, 0.0), 10.0, (0.0, 0.0, 0.0))


def test_ftle_result_alias():
    result = FtleResult(lam=0.1, T=10.0, v0=(0.0, 1.0, 0.0))
    assert result.model_dump(by_alias=True)["lambda"] == 0.1


def test_histogram_examples():
    assert histogram_tc([], 5.0) == []
    results = [_detected(1.0), _detected(1.5), _detected(7.2)]
    assert histogram_tc(results, 5.0) == [(0.0, 2), (5.0, 1)]


def test_histogram_ignores_undetected_and_order():
    results = [
        _detected(12.0),
        DetectionResult(status=DetectionStatus.NONE),
        _detected(3.0),
        DetectionResult(status=DetectionStatus.EXCLUDED, exclusion_time=4.0),
        _detected(14.9),
        DetectionResult.failed("stiff"),
    ]
    expected = [(0.0, 1), (10.0, 2)]
    assert histogram_tc(results, 5.0) == expected
    shuffled = list(results)
    random.Random(0).shuffle(shuffled)
    assert histogram_tc(shuffled, 5.0) == expected
    assert sum(count for _, count in histogram_tc(results, 1.0)) == 3


def test_histogram_validation():
    with pytest.raises(ValueError):
        histogram_tc([], 0.0)


def test_inverse_tc_profile():
    none = DetectionResult(status=DetectionStatus.NONE)
    assert inverse_tc_profile([none, none]) == [0.0, 0.0]
    assert inverse_tc_profile([none, _detected(2.0), _detected(4.0)]) == [0.0, 0.5, 0.25]


def test_regular_fraction():
    assert regular_fraction([0.01, 0.2, 0.04, 0.3]) == 0.5
    assert regular_fraction([FtleResult(lam=0.1, T=1.0, v0=(0, 1, 0))], threshold=0.15) == 1.0
    with pytest.raises(ValueError):
        regular_fraction([])


def test_regular_threshold():
    assert regular_threshold(ModelKind.TWO_WAVE) == REGULAR_THRESHOLD
    assert regular_threshold(ModelKind.QFLOW) == REGULAR_THRESHOLD_QFLOW
