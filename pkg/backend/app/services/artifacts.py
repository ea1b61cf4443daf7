"""
CSV and PGM artifacts.

All writers produce byte-identical files for identical inputs: fixed
headers, ``\\n`` line endings and round-trip exact float text.
"""

from __future__ import annotations

import csv
import math
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, TextIO, Tuple, Union

from ..models import DetectionStatus, State
from ..schemas import DetectionResult, FtleResult, GridResult, GridSpec, SectionPoint, TraceSample

PathLike = Union[str, Path]

GRID_HEADER = ["axis1", "axis2", "status", "t_c"]
FTLE_HEADER = ["axis1", "axis2", "lambda"]
SECTION_HEADER = ["crossing_index", "q", "p"]
TRACE_HEADER = ["t", "K", "guard", "c0", "c1", "c2"]
HISTOGRAM_HEADER = ["bin_start", "count"]
ORBIT_HEADER = ["t", "c0", "c1", "c2"]

PIXEL_NONE = 255
PIXEL_FAILED = 0
PIXEL_EARLIEST = 32
PIXEL_RANGE = 191


class ArtifactError(OSError):
    """Reading or writing an artifact failed; the message names the path."""


def format_float(x: Optional[float]) -> str:
    """
    Shortest text that parses back to exactly x; integral values drop ".0".

    None becomes the empty field.
    """
    if x is None:
        return ""
    text = repr(float(x))
    if text.endswith(".0"):
        text = text[:-2]
    return text


def _parse_float(text: str) -> Optional[float]:
    return float(text) if text else None


@contextmanager
def _open(path: PathLike, mode: str) -> Iterator[TextIO]:
    if str(path) == "-" and mode == "w":
        yield sys.stdout
        return
    try:
        fp = open(path, mode, newline="", encoding="utf-8")
    except OSError as e:
        raise ArtifactError(f"cannot open {path}: {e.strerror}") from e
    with fp:
        yield fp


def _write_rows(path: PathLike, header: Sequence[str], rows) -> int:
    with _open(path, "w") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(header)
        count = 0
        for row in rows:
            writer.writerow(row)
            count += 1
    return count


def _read_rows(path: PathLike, header: Sequence[str]) -> List[List[str]]:
    with _open(path, "r") as fp:
        rows = list(csv.reader(fp))
    if not rows or rows[0] != list(header):
        raise ArtifactError(f"{path}: expected header {','.join(header)}")
    return rows[1:]


def write_grid_csv(g: GridResult, path: PathLike) -> int:
    """
    Write one ``axis1,axis2,status,t_c`` row per cell in row-major order.

    Returns:
        number of data rows written
    """
    spec = g.spec
    rows = (
        [
            format_float(spec.axis1.value(i)),
            format_float(spec.axis2.value(j)),
            g.cell(i, j).status.value,
            format_float(g.cell(i, j).t_c),
        ]
        for i in range(spec.axis1.n)
        for j in range(spec.axis2.n)
    )
    return _write_rows(path, GRID_HEADER, rows)


def read_cells(path: PathLike) -> List[DetectionResult]:
    """Cells of a grid CSV in file order, keeping status and t_c."""
    cells = []
    for lineno, row in enumerate(_read_rows(path, GRID_HEADER), start=2):
        if len(row) != 4:
            raise ArtifactError(f"{path}:{lineno}: expected 4 fields, got {len(row)}")
        try:
            cells.append(DetectionResult(status=DetectionStatus(row[2]), t_c=_parse_float(row[3])))
        except ValueError as e:
            raise ArtifactError(f"{path}:{lineno}: {e}") from e
    return cells


def read_grid_csv(path: PathLike, spec: GridSpec) -> GridResult:
    """
    Inverse of write_grid_csv for a known grid.

    Raises:
        ArtifactError: malformed file, or axis values that do not match ``spec``
    """
    rows = _read_rows(path, GRID_HEADER)
    n1, n2 = spec.shape
    if len(rows) != n1 * n2:
        raise ArtifactError(f"{path}: expected {n1 * n2} rows for a {n1} x {n2} grid, got {len(rows)}")
    for index, row in enumerate(rows):
        i, j = divmod(index, n2)
        if row[:2] != [format_float(spec.axis1.value(i)), format_float(spec.axis2.value(j))]:
            raise ArtifactError(f"{path}:{index + 2}: axis values {row[:2]} do not match the grid")
    return GridResult(spec=spec, cells=read_cells(path))


def pixel_value(cell: DetectionResult, t_max: float) -> int:
    """Grayscale level of a cell: white for none, black for excluded or failed, darker for earlier t_c."""
    if cell.status == DetectionStatus.NONE:
        return PIXEL_NONE
    if cell.status != DetectionStatus.DETECTED:
        return PIXEL_FAILED
    level = PIXEL_EARLIEST + int(math.floor(PIXEL_RANGE * cell.t_c / t_max))
    return min(max(level, PIXEL_EARLIEST), PIXEL_EARLIEST + PIXEL_RANGE)


def render_pgm(g: GridResult, path: PathLike) -> None:
    """
    Binary 8-bit PGM (P5) of a grid: column i is axis1 index i, the top row is
    the largest axis2 value.
    """
    n1, n2 = g.spec.shape
    t_max = g.spec.detector.t_max
    pixels = bytearray()
    for row in range(n2):
        j = n2 - 1 - row
        pixels.extend(pixel_value(g.cell(i, j), t_max) for i in range(n1))
    try:
        with open(path, "wb") as fp:
            fp.write(f"P5\n{n1} {n2}\n255\n".encode("ascii"))
            fp.write(bytes(pixels))
    except OSError as e:
        raise ArtifactError(f"cannot write {path}: {e.strerror}") from e


def write_ftle_csv(spec: GridSpec, results: Sequence[Optional[FtleResult]], path: PathLike) -> int:
    """``axis1,axis2,lambda`` rows for an FTLE sweep; failed cells have an empty lambda."""
    n2 = spec.axis2.n
    rows = (
        [
            format_float(spec.axis1.value(index // n2)),
            format_float(spec.axis2.value(index % n2)),
            format_float(None if r is None else r.lam),
        ]
        for index, r in enumerate(results)
    )
    return _write_rows(path, FTLE_HEADER, rows)


def read_ftle_csv(path: PathLike) -> List[Optional[float]]:
    """Exponents of an FTLE CSV in file order."""
    return [_parse_float(row[2]) for row in _read_rows(path, FTLE_HEADER)]


def write_section_csv(points: Sequence[SectionPoint], path: PathLike) -> int:
    rows = ([str(pt.crossing_index), format_float(pt.q), format_float(pt.p)] for pt in points)
    return _write_rows(path, SECTION_HEADER, rows)


def write_trace_csv(trace: Sequence[TraceSample], path: PathLike) -> int:
    rows = (
        [format_float(x) for x in (sample.t, sample.K, sample.guard_dot, *sample.state)] for sample in trace
    )
    return _write_rows(path, TRACE_HEADER, rows)


def write_histogram_csv(bins: Sequence[Tuple[float, int]], path: PathLike) -> int:
    rows = ([format_float(start), str(count)] for start, count in bins)
    return _write_rows(path, HISTOGRAM_HEADER, rows)


def write_orbit_csv(samples: Sequence[Tuple[float, State]], path: PathLike) -> int:
    rows = ([format_float(t), format_float(s.c0), format_float(s.c1), format_float(s.c2)] for t, s in samples)
    return _write_rows(path, ORBIT_HEADER, rows)
