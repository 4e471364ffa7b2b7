"""
Points file reader and writer.

Format: a `# ppc-points d=<dim> n=<count>` header line followed by one point
per line, coordinates comma separated with 17 significant digits so every
float64 survives a round trip.
"""
import re
import warnings
from pathlib import Path
from typing import Union

import numpy as np
import structlog

from app.core import validate_point_set
from app.errors import InputError, PointsFileError
from app.models import PointSet

logger = structlog.get_logger(__name__)

HEADER_RE = re.compile(r"^#\s*ppc-points\s+d=(\d+)\s+n=(\d+)\s*$")

PathLike = Union[str, Path]


def write_points(ps: PointSet, path: PathLike) -> None:
    """Write `ps` to `path` in the points file format."""
    path = Path(path)
    np.savetxt(
        path,
        ps.points,
        fmt="%.17g",
        delimiter=",",
        header=f"ppc-points d={ps.dim} n={ps.n}",
        comments="# ",
    )
    logger.info("points_written", path=str(path), dim=ps.dim, n=ps.n)


def read_points(path: PathLike) -> PointSet:
    """Read a points file, checking the header against the body."""
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as fh:
            header = fh.readline().strip()
    except OSError as e:
        raise PointsFileError(path, f"cannot open: {e.strerror or e}") from e

    match = HEADER_RE.match(header)
    if match is None:
        raise PointsFileError(path, f"malformed header {header!r}")
    dim, count = int(match.group(1)), int(match.group(2))
    if dim < 1 or count < 1:
        raise PointsFileError(path, f"header declares d={dim} n={count}")

    try:
        with warnings.catch_warnings():
            # empty body is reported as a count mismatch below
            warnings.simplefilter("ignore", UserWarning)
            data = np.loadtxt(path, delimiter=",", comments="#", dtype=np.float64, ndmin=2)
    except ValueError as e:
        raise PointsFileError(path, f"unparsable body: {e}") from e

    rows = 0 if data.size == 0 else data.shape[0]
    if rows != count:
        raise PointsFileError(path, f"header count {count} but {rows} rows")
    if data.shape[1] != dim:
        raise PointsFileError(path, f"header dimension {dim} but rows have {data.shape[1]} values")

    try:
        ps = validate_point_set(data, label=path.stem)
    except InputError as e:
        raise PointsFileError(path, str(e)) from e
    logger.debug("points_read", path=str(path), dim=dim, n=count)
    return ps
