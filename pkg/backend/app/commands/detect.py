"""``detect``: converse KAM test of a single orbit."""

from __future__ import annotations

import logging

from ..config import RunConfig
from ..services.artifacts import write_trace_csv
from ..services.detection_engine import detect
from ..services.flows import build_model
from ..services.foliations import build_foliation
from . import add_command, common_flags, control_flags, initial_condition_flags, model_flags

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = add_command(
        subparsers,
        "detect",
        help="run the converse KAM test on one initial condition",
        parents=[common_flags(), model_flags(), initial_condition_flags(), control_flags()],
    )
    parser.add_argument("--trace", metavar="PATH", help="write t,K,guard,c0,c1,c2 per accepted step")


def run(cfg: RunConfig) -> int:
    params = cfg.params()
    model = build_model(cfg.model, params)
    foliation = build_foliation(cfg.foliation, params, cfg.singular_tol)
    s0 = cfg.initial_state()

    result = detect(model, foliation, s0, cfg.detector_options(), cfg.step_control())
    logger.info("%s with %s from %s: %s", model.name, foliation.label, tuple(s0[:3]), result.status.value)

    if cfg.trace is not None:
        write_trace_csv(result.trace or [], cfg.trace)
    print(result.model_dump_json(exclude={"trace"}, indent=2))
    return 0
