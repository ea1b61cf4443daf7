"""``section``, ``lyapunov``, ``hist`` and ``orbit``: secondary diagnostics."""

from __future__ import annotations

import logging

from ..config import RunConfig
from ..services.analysis import (
    ftle,
    histogram_tc,
    orbit_dump,
    poincare_section,
    regular_fraction,
    regular_threshold,
)
from ..services.artifacts import (
    read_cells,
    write_ftle_csv,
    write_histogram_csv,
    write_orbit_csv,
    write_section_csv,
)
from ..services.flows import build_model
from ..services.sweep import run_ftle_sweep
from . import add_command, common_flags, control_flags, grid_flags, initial_condition_flags, model_flags, vector3

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    section = add_command(
        subparsers,
        "section",
        help="Poincare section of a two-wave orbit at t = t_section (mod 1)",
        parents=[common_flags(), model_flags(), initial_condition_flags(), control_flags()],
    )
    section.add_argument("--n-crossings", dest="n_crossings", type=int, help="number of section points (default 100)")
    section.add_argument("--t-section", dest="t_section", type=float, help="section phase in [0, 1) (default 0)")
    section.add_argument("--out", metavar="PATH", help="CSV of crossing_index,q,p (default stdout)")

    lyapunov = add_command(
        subparsers,
        "lyapunov",
        help="finite-time Lyapunov exponent of one orbit, or of a grid with --axis1/--axis2",
        parents=[common_flags(), model_flags(), initial_condition_flags(), control_flags(), grid_flags()],
    )
    lyapunov.add_argument("--v0", type=vector3, metavar="A,B,C", help="initial tangent vector (default 0,1,0)")
    lyapunov.add_argument("--out", metavar="PATH", help="grid mode: CSV of axis1,axis2,lambda")

    hist = add_command(
        subparsers,
        "hist",
        help="histogram of t_c from a sweep CSV",
        parents=[common_flags()],
    )
    hist.add_argument("--input", metavar="PATH", help="grid CSV written by sweep")
    hist.add_argument("--bin-width", dest="bin_width", type=float, help="bin width in time units (default 5)")
    hist.add_argument("--out", metavar="PATH", help="CSV of bin_start,count (default stdout)")

    orbit = add_command(
        subparsers,
        "orbit",
        help="orbit samples at a fixed time step",
        parents=[common_flags(), model_flags(), initial_condition_flags(), control_flags()],
    )
    orbit.add_argument("--dt", type=float, help="sampling interval (default 0.05)")
    orbit.add_argument("--out", metavar="PATH", help="CSV of t,c0,c1,c2 (default stdout)")


def _out(cfg: RunConfig) -> str:
    return "-" if cfg.out is None else str(cfg.out)


def run_section(cfg: RunConfig) -> int:
    points = poincare_section(cfg.params(), cfg.initial_state(), cfg.n_crossings, cfg.t_section, cfg.step_control())
    write_section_csv(points, _out(cfg))
    return 0


def run_lyapunov(cfg: RunConfig) -> int:
    if cfg.grid_mode:
        spec = cfg.grid_spec()
        results = run_ftle_sweep(spec, T=cfg.tmax, v0=cfg.v0, workers=cfg.workers)
        write_ftle_csv(spec, results, _out(cfg))
        lams = [r for r in results if r is not None]
        threshold = regular_threshold(cfg.model)
        if lams:
            logger.info("regular fraction (lambda < %g): %.3f", threshold, regular_fraction(lams, threshold))
        failed = len(results) - len(lams)
        return 2 if failed else 0

    model = build_model(cfg.model, cfg.params())
    result = ftle(model, cfg.initial_state(), cfg.tmax, cfg.v0, cfg.step_control())
    print(result.model_dump_json(by_alias=True, indent=2))
    return 0


def run_hist(cfg: RunConfig) -> int:
    cells = read_cells(cfg.input)
    bins = histogram_tc(cells, cfg.bin_width)
    write_histogram_csv(bins, _out(cfg))
    detected = sum(count for _, count in bins)
    late = sum(1 for c in cells if c.detected and c.t_c > 100.0)
    if detected:
        logger.info("%d detected, fraction with t_c > 100: %.3f", detected, late / detected)
    return 0


def run_orbit(cfg: RunConfig) -> int:
    model = build_model(cfg.model, cfg.params())
    samples = orbit_dump(model, cfg.initial_state(), cfg.tmax, cfg.dt, cfg.step_control())
    write_orbit_csv(samples, _out(cfg))
    return 0
