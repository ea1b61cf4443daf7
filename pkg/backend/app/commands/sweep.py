"""``sweep``: converse KAM heatmap over a parameter grid."""

from __future__ import annotations

import logging

from ..config import RunConfig
from ..services.artifacts import render_pgm, write_grid_csv
from ..services.sweep import run_sweep
from . import add_command, common_flags, control_flags, grid_flags, model_flags

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = add_command(
        subparsers,
        "sweep",
        help="run the detector over a (parameter, initial condition) grid",
        parents=[common_flags(), model_flags(), control_flags(), grid_flags()],
    )
    parser.add_argument("--q0", type=float, help="two-wave: fixed initial q on the p0 line")
    parser.add_argument("--t0", type=float, help="two-wave: fixed initial t on the p0 line")
    parser.add_argument("--out", metavar="PATH", help="grid CSV (axis1,axis2,status,t_c)")
    parser.add_argument("--image", metavar="PATH", help="grayscale P5 PGM of the grid")


def run(cfg: RunConfig) -> int:
    grid = run_sweep(cfg.grid_spec(), workers=cfg.workers)
    write_grid_csv(grid, cfg.out)
    if cfg.image is not None:
        render_pgm(grid, cfg.image)

    detected = sum(1 for c in grid.cells if c.detected)
    print(f"{len(grid.cells)} cells, {detected} detected, {grid.n_errors} errors -> {cfg.out}")
    if grid.n_errors:
        logger.error("%d cell(s) failed; see the status column of %s", grid.n_errors, cfg.out)
        return 2
    return 0
