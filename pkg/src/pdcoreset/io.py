"""CSV point files.

One point per row, comma separated.  Labeled files carry the label (-1 or 1)
in the last column.  A header row is recognized by a non-numeric first
token.  Blank lines and lines starting with ``#`` are skipped.
"""
from __future__ import annotations

import csv
import io
import os
from typing import TextIO

import numpy as np

from .errors import ParseError
from .geometry import PointSet
from .maxmargin import LabeledPointSet


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def _rows(source) -> list[tuple[int, list[str]]]:
    if isinstance(source, (str, os.PathLike)):
        with open(source, newline="") as fh:
            text = fh.read()
    else:
        text = source.read()
    rows = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        cells = [c.strip() for c in row]
        if not cells or all(not c for c in cells) or cells[0].startswith("#"):
            continue
        rows.append((lineno, cells))
    if rows and not _is_number(rows[0][1][0]):
        rows = rows[1:]
    if not rows:
        raise ParseError("no data rows")
    return rows


def _parse_matrix(rows) -> np.ndarray:
    width = len(rows[0][1])
    out = np.empty((len(rows), width))
    for k, (lineno, cells) in enumerate(rows):
        if len(cells) != width:
            raise ParseError(f"expected {width} fields, got {len(cells)}", lineno)
        for j, cell in enumerate(cells):
            try:
                out[k, j] = float(cell)
            except ValueError:
                raise ParseError(f"field {j + 1} is not a number: {cell!r}", lineno) from None
            if not np.isfinite(out[k, j]):
                raise ParseError(f"field {j + 1} is not finite: {cell!r}", lineno)
    return out


def read_points(source) -> PointSet:
    """Read a point CSV from a path or an open text stream."""
    return PointSet(_parse_matrix(_rows(source)))


def read_labeled(source) -> LabeledPointSet:
    rows = _rows(source)
    data = _parse_matrix(rows)
    if data.shape[1] < 2:
        raise ParseError("labeled rows need at least one coordinate and a label")
    labels = data[:, -1]
    for (lineno, _), y in zip(rows, labels):
        if y not in (-1.0, 1.0):
            raise ParseError(f"label must be -1 or 1, got {y!r}", lineno)
    return LabeledPointSet(data[:, :-1], labels.astype(int))


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_points(P: PointSet, out: TextIO | None = None) -> str:
    """Serialize with 17 significant digits so values read back bit-identical."""
    text = "".join(",".join(_fmt(v) for v in row) + "\n" for row in P.points)
    if out is not None:
        out.write(text)
    return text


def write_labeled(L: LabeledPointSet, out: TextIO | None = None) -> str:
    text = "".join(
        ",".join(_fmt(v) for v in row) + f",{y}\n" for row, y in zip(L.points.points, L.labels)
    )
    if out is not None:
        out.write(text)
    return text
