"""Parameter-grid driver for converse KAM and FTLE sweeps."""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Callable, List, Optional, Sequence, TypeVar

from ..schemas import DetectionResult, FtleResult, GridResult, GridSpec
from .analysis import ftle
from .detection_engine import detect
from .flows import build_model
from .foliations import build_foliation

logger = logging.getLogger(__name__)

T = TypeVar("T")


def _chunksize(n_cells: int, workers: int) -> int:
    return max(1, n_cells // (workers * 4))


def _map_cells(worker: Callable[[int], T], n_cells: int, workers: int) -> List[T]:
    """Evaluate worker over all cell indices; results come back in index order."""
    if workers < 1:
        raise ValueError(f"workers must be at least 1, got {workers}")
    if workers == 1:
        return [worker(index) for index in range(n_cells)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, range(n_cells), chunksize=_chunksize(n_cells, workers)))


def run_cell(spec: GridSpec, index: int) -> DetectionResult:
    """
    Run the detector on cell ``index`` (row-major, i * n2 + j) of a grid.

    Any failure is recorded in the returned cell instead of being raised.
    """
    n2 = spec.axis2.n
    i, j = divmod(index, n2)
    try:
        params = spec.cell_params(i)
        model = build_model(spec.model, params)
        foliation = build_foliation(spec.foliation, params, spec.detector.singular_tol)
        return detect(model, foliation, spec.initial_state(j), spec.detector, spec.control)
    except Exception as e:
        # Log error but continue with other cells
        logger.warning("cell (%d, %d) failed: %s", i, j, e)
        return DetectionResult.failed(f"{type(e).__name__}: {e}")


def run_sweep(spec: GridSpec, workers: int = 1) -> GridResult:
    """
    Execute the detector over every cell of a grid.

    Args:
        spec: grid description
        workers: number of worker processes; 1 runs in-process

    Returns:
        GridResult with cells in row-major order, independent of ``workers``
    """
    n1, n2 = spec.shape
    start_time = time.time()
    logger.info(
        "sweep %s/%s over %d x %d cells with %d worker(s)", spec.model.value, spec.foliation.value, n1, n2, workers
    )

    cells = _map_cells(partial(run_cell, spec), n1 * n2, workers)
    result = GridResult(spec=spec, cells=cells)

    elapsed = time.time() - start_time
    logger.info("sweep finished in %.1f s, %d cell error(s)", elapsed, result.n_errors)
    return result


def ftle_cell(spec: GridSpec, T: float, v0: Optional[Sequence[float]], index: int) -> Optional[FtleResult]:
    """FTLE of grid cell ``index``; None when the orbit could not be integrated."""
    n2 = spec.axis2.n
    i, j = divmod(index, n2)
    try:
        model = build_model(spec.model, spec.cell_params(i))
        return ftle(model, spec.initial_state(j), T, v0, spec.control)
    except Exception as e:
        logger.warning("FTLE cell (%d, %d) failed: %s", i, j, e)
        return None


def run_ftle_sweep(
    spec: GridSpec,
    T: Optional[float] = None,
    v0: Optional[Sequence[float]] = None,
    workers: int = 1,
) -> List[Optional[FtleResult]]:
    """
    Finite-time Lyapunov exponents over the cells of a grid, row-major.

    T defaults to the detector horizon ``spec.detector.t_max``. The
    foliation of ``spec`` is not used.
    """
    T = spec.detector.t_max if T is None else T
    n1, n2 = spec.shape
    logger.info("FTLE sweep over %d x %d cells, T=%g", n1, n2, T)
    v = None if v0 is None else tuple(v0)
    return _map_cells(partial(ftle_cell, spec, T, v), n1 * n2, workers)
