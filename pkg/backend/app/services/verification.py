"""Seeded property suites behind the ``verify`` command."""

from __future__ import annotations

import logging
import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..models import TWO_PI, DetectionStatus, ModelKind, State, TangentVec, norm3
from ..schemas import DetectorOptions, PropertyCheck, QFlowParams, StepControl, TwoWaveParams, VerifyReport
from .adiabatic import poisson_residual, residual_scaling_test, sample_states
from .analysis import ftle
from .detection_engine import detect
from .flows import FlowModel, QFlowModel, TwoWaveModel
from .flows.qflow import rotate_tangent, screw_image, verify_beltrami
from .foliations import (
    FOLIATIONS,
    FirstOrderInvariant,
    Foliation,
    NaiveFirstOrderInvariant,
    NegatedFoliation,
    centered_q,
)
from .integrator import CombinedState, advance_with_hook

logger = logging.getLogger(__name__)

FORMS_TOLERANCE = 1e-10
GRADIENT_TOLERANCE = 1e-6
GRADIENT_STEP = 1e-5
SYMMETRY_TOLERANCE = 1e-10
INVARIANCE_TOLERANCE = 1e-9
LINEARITY_TOLERANCE = 1e-8
NAIVE_BLOWUP_RATIO = 100.0
SCALE_FACTORS = (2.0, 0.5, 3.0, 0.1)
MAX_DRAWS_PER_ORBIT = 10

SUITE_NAMES = ("forms", "beltrami", "gradients", "residuals", "invariances")

DEFAULT_SAMPLES = {
    "forms": 1000,
    "beltrami": 100,
    "gradients": 1000,
    "residuals": 50,
    "invariances": 20,
}

# Parameter sets the suites exercise
TWO_WAVE_CASES = (TwoWaveParams(mu=0.03, nu=1.0, k=1), TwoWaveParams(mu=0.02, nu=0.7, k=2))
QFLOW_CASES = (
    QFlowParams(q=4, eps=0.15),
    QFlowParams(q=4, eps=0.5),
    QFlowParams(q=5, eps=0.15),
    QFlowParams(q=5, eps=0.5),
)


def _random_state(rng: np.random.Generator, kind: ModelKind) -> State:
    if kind == ModelKind.TWO_WAVE:
        return State(rng.uniform(0.0, 1.0), rng.uniform(-0.5, 1.5), rng.uniform(0.0, 1.0), kind)
    return State(rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0), rng.uniform(0.0, TWO_PI), kind)


def _random_vector(rng: np.random.Generator) -> TangentVec:
    return TangentVec(*(float(c) for c in rng.normal(size=3)))


def _check(name: str, worst: float, tolerance: float, detail: str = "") -> PropertyCheck:
    return PropertyCheck(name=name, passed=worst <= tolerance, worst_error=worst, tolerance=tolerance, detail=detail)


def form_identity_error(model: FlowModel, s: State, a: TangentVec, b: TangentVec) -> float:
    """|d(alpha)(a, b) - Omega(v, a, b)| relative to max(1, |d(alpha)(a, b)|)."""
    lhs = model.two_form(s, a, b)
    rhs = model.contracted_volume(s, a, b)
    return abs(lhs - rhs) / max(1.0, abs(lhs))


def gradient_fd_error(foliation: Foliation, s: State, h: float = GRADIENT_STEP) -> float:
    """max_i |grad_i J - central FD_i| / (1 + |FD|)."""
    analytic = foliation.gradient(s)
    base = (s.c0, s.c1, s.c2)
    fd = []
    for i in range(3):
        plus = list(base)
        minus = list(base)
        plus[i] += h
        minus[i] -= h
        fd.append(
            (foliation.value(State(*plus, s.model_tag)) - foliation.value(State(*minus, s.model_tag))) / (2.0 * h)
        )
    scale = 1.0 + norm3(TangentVec(*fd))
    return max(abs(analytic[i] - fd[i]) for i in range(3)) / scale


def suite_forms(seed: int, samples: int) -> VerifyReport:
    """d(alpha)(a, b) = Omega(v, a, b), and the two-wave form's periodicity."""
    rng = np.random.default_rng(seed)
    report = VerifyReport(suite="forms", seed=seed)

    models: List[FlowModel] = [TwoWaveModel(p) for p in TWO_WAVE_CASES] + [QFlowModel(p) for p in QFLOW_CASES]
    for model in models:
        worst = 0.0
        for _ in range(samples):
            s = _random_state(rng, model.model_tag)
            worst = max(worst, form_identity_error(model, s, _random_vector(rng), _random_vector(rng)))
        report.checks.append(_check(f"form identity, {model.name}", worst, FORMS_TOLERANCE))

    model = TwoWaveModel(TWO_WAVE_CASES[0])
    worst = 0.0
    for _ in range(samples):
        s = _random_state(rng, ModelKind.TWO_WAVE)
        shifted = State(s.c0 + 1.0, s.c1, s.c2 + 1.0, s.model_tag)
        a, b = _random_vector(rng), _random_vector(rng)
        K = model.two_form(s, a, b)
        worst = max(worst, abs(K - model.two_form(shifted, a, b)) / max(1.0, abs(K)))
    report.checks.append(_check("two-form periodicity, two-wave", worst, FORMS_TOLERANCE))
    return report


def suite_beltrami(seed: int, samples: int) -> VerifyReport:
    """curl v = v and div v = 0 for Q-flows, plus the q-fold screw symmetry."""
    rng = np.random.default_rng(seed)
    report = VerifyReport(suite="beltrami", seed=seed)
    for params in QFLOW_CASES:
        b = verify_beltrami(params, samples, seed=seed)
        report.checks.append(
            _check(
                f"Beltrami, q={params.q}, eps={params.eps}",
                max(b.max_curl_error, b.max_div_error),
                b.tolerance,
                detail=f"curl {b.max_curl_error:.2e}, div {b.max_div_error:.2e}",
            )
        )

    for params in QFLOW_CASES:
        model = QFlowModel(params)
        worst = 0.0
        for _ in range(samples):
            s = _random_state(rng, ModelKind.QFLOW)
            lhs = rotate_tangent(model.velocity(s), params.q)
            rhs = model.velocity(screw_image(s, params.q))
            worst = max(worst, max(abs(u - w) for u, w in zip(lhs, rhs)))
        report.checks.append(_check(f"screw symmetry, q={params.q}, eps={params.eps}", worst, SYMMETRY_TOLERANCE))
    return report


def _gradient_cases() -> List[Foliation]:
    foliations: List[Foliation] = []
    two_wave = TWO_WAVE_CASES[0]
    for label, cls in FOLIATIONS.items():
        if label.value in ("ql", "qpsi"):
            foliations.extend(cls(params) for params in (QFLOW_CASES[0], QFLOW_CASES[2]))
        else:
            foliations.append(cls(two_wave))
    foliations.append(FirstOrderInvariant(TWO_WAVE_CASES[1]))
    return foliations


def suite_gradients(seed: int, samples: int) -> VerifyReport:
    """Analytic foliation gradients against central differences."""
    rng = np.random.default_rng(seed)
    report = VerifyReport(suite="gradients", seed=seed)
    for foliation in _gradient_cases():
        worst = 0.0
        tested = 0
        while tested < samples:
            s = _random_state(rng, foliation.model_tag)
            # stay clear of singular points and of the cut of the l-foliation at q = 1/2
            if foliation.is_singular(s, 1e-3):
                continue
            if foliation.model_tag == ModelKind.TWO_WAVE and abs(centered_q(s.c0)) > 0.49:
                continue
            worst = max(worst, gradient_fd_error(foliation, s))
            tested += 1
        report.checks.append(_check(f"gradient, {foliation.name}", worst, GRADIENT_TOLERANCE))
    return report


def suite_residuals(seed: int, samples: int) -> VerifyReport:
    """Residual orders of the perturbative invariants and the singular control."""
    states = sample_states(samples, seed=seed)
    report = VerifyReport(suite="residuals", seed=seed)
    for label in ("s1", "s2"):
        r = residual_scaling_test(label, states)
        report.checks.append(
            _check(
                f"residual order, {label}",
                abs(r.median_exponent - r.expected_order) if math.isfinite(r.median_exponent) else math.inf,
                0.4,
                detail=f"median exponent {r.median_exponent:.3f}, worst {r.worst_exponent:.3f}",
            )
        )

    # Near p = 1 the naive generator's residual blows up while s1 stays bounded
    params = TwoWaveParams(mu=0.01)
    s = State(0.125, 1.01, 0.0, ModelKind.TWO_WAVE)
    naive = abs(poisson_residual(NaiveFirstOrderInvariant(params), s, params))
    regular = abs(poisson_residual(FirstOrderInvariant(params), s, params))
    ratio = naive / regular if regular > 0.0 else math.inf
    report.checks.append(
        PropertyCheck(
            name="resonant blow-up, s1_naive",
            passed=ratio >= NAIVE_BLOWUP_RATIO,
            worst_error=1.0 / ratio if ratio > 0.0 else math.inf,
            tolerance=1.0 / NAIVE_BLOWUP_RATIO,
            detail=f"|R_naive| / |R_s1| = {ratio:.3g} at p = 1.01",
        )
    )
    return report


def _same_outcome(a, b) -> float:
    """0 when two detection results agree, otherwise the t_c gap (inf for differing status)."""
    if a.status != b.status:
        return math.inf
    if a.status == DetectionStatus.DETECTED:
        return abs(a.t_c - b.t_c)
    return 0.0


def suite_invariances(seed: int, samples: int) -> VerifyReport:
    """Detector scale and flip invariance, tangent linearity and FTLE normalisation."""
    rng = np.random.default_rng(seed)
    report = VerifyReport(suite="invariances", seed=seed)

    params = TwoWaveParams(mu=0.03)
    model = TwoWaveModel(params)
    foliation = FirstOrderInvariant(params)
    flipped = NegatedFoliation(foliation)
    opts = DetectorOptions()

    scale_worst = flip_worst = 0.0
    n_detected = n_drawn = 0
    # Only detected orbits carry a t_c to compare
    while n_detected < samples and n_drawn < MAX_DRAWS_PER_ORBIT * samples:
        n_drawn += 1
        s0 = State(0.0, float(rng.uniform(0.1, 0.9)), 0.0, ModelKind.TWO_WAVE)
        base = detect(model, foliation, s0, opts)
        if not base.detected:
            continue
        n_detected += 1
        eta0 = foliation.gradient(s0)
        for c in SCALE_FACTORS:
            scaled = detect(model, foliation, s0, opts, xi0=TangentVec(*(c * x for x in eta0)))
            scale_worst = max(scale_worst, _same_outcome(base, scaled))
        flip_worst = max(flip_worst, _same_outcome(base, detect(model, flipped, s0, opts)))

    detail = f"{n_detected} detected orbits out of {n_drawn} drawn"
    report.checks.append(_check("detected orbits sampled", float(samples - n_detected), 0.0, detail))
    report.checks.append(_check("detector scale invariance", scale_worst, INVARIANCE_TOLERANCE, detail))
    report.checks.append(_check("detector flip invariance", flip_worst, INVARIANCE_TOLERANCE, detail))
    report.checks.append(_tangent_linearity(model, rng))
    report.checks.append(_ftle_normalisation(model))
    return report


def _tangent_linearity(model: FlowModel, rng: np.random.Generator) -> PropertyCheck:
    s0 = State(0.0, float(rng.uniform(0.1, 0.9)), 0.0, ModelKind.TWO_WAVE)
    xi0 = _random_vector(rng)
    end = []
    for c in (1.0, 2.0):
        cs = CombinedState(s0, TangentVec(*(c * x for x in xi0)), 0.0, 0.0)
        end.append(advance_with_hook(model, cs, StepControl(t_max=20.0)))
    a, b = end
    xi_a = np.array(a.xi) * math.exp(a.log_scale)
    xi_b = np.array(b.xi) * math.exp(b.log_scale)
    worst = float(np.max(np.abs(2.0 * xi_a - xi_b)) / np.max(np.abs(xi_b)))
    return _check("tangent linearity", worst, LINEARITY_TOLERANCE)


def _ftle_normalisation(model: FlowModel) -> PropertyCheck:
    s0 = State(0.0, 0.3, 0.0, ModelKind.TWO_WAVE)
    one = ftle(model, s0, 20.0, (0.0, 1.0, 0.0))
    two = ftle(model, s0, 20.0, (0.0, 2.0, 0.0))
    return _check("FTLE v0 normalisation", abs(one.lam - two.lam), 1e-12)


SUITES: Dict[str, Callable[[int, int], VerifyReport]] = {
    "forms": suite_forms,
    "beltrami": suite_beltrami,
    "gradients": suite_gradients,
    "residuals": suite_residuals,
    "invariances": suite_invariances,
}


def run_verify(suite: str, seed: int = 0, samples: Optional[int] = None) -> List[VerifyReport]:
    """
    Run one named suite, or every suite for ``"all"``.

    Args:
        suite: one of ``SUITE_NAMES`` or ``"all"``
        seed: RNG seed shared by the randomized suites
        samples: sample count override; each suite has its own default

    Returns:
        one VerifyReport per suite run
    """
    names: Sequence[str] = SUITE_NAMES if suite == "all" else (suite,)
    reports = []
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}, expected one of {SUITE_NAMES + ('all',)}")
        n = DEFAULT_SAMPLES[name] if samples is None else samples
        logger.info("running verification suite %s with %d samples", name, n)
        reports.append(SUITES[name](seed, n))
    return reports


def summarize(reports: Sequence[VerifyReport]) -> Tuple[int, int]:
    """(passed, total) property counts."""
    checks = [c for r in reports for c in r.checks]
    return sum(c.passed for c in checks), len(checks)
