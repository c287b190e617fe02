"""Deterministic CSV, JSON, gnuplot and PGM emitters."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

FMT = "%.17g"


def _fmt(v) -> str:
    return FMT % float(v)


def write_csv(path: Path, columns: list[str], units: list[str], rows) -> Path:
    """Columns header preceded by a ``#`` line declaring each column's unit.

    ``rows`` is any 2-D array-like; an empty one yields a header-only file.
    """
    if len(columns) != len(units):
        raise ValueError("one unit per column")
    path = Path(path)
    arr = np.asarray(rows, dtype=float).reshape(-1, len(columns))
    with path.open("w", newline="\n") as fh:
        fh.write("# units: " + ", ".join(f"{c} [{u}]" for c, u in zip(columns, units)) + "\n")
        fh.write(",".join(columns) + "\n")
        for row in arr:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    return path


def write_json(path: Path, obj) -> Path:
    path = Path(path)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return path


def write_gnuplot(path: Path, title: str, plots: list[str], xlabel: str, ylabel: str,
                  extra: str = "") -> Path:
    """A gnuplot script rendering ``plots`` (each a ``plot`` clause) to a PNG next to it."""
    path = Path(path)
    png = path.with_suffix(".png").name
    lines = [
        "set datafile separator ','",
        "set datafile commentschars '#'",
        "set key autotitle columnhead",
        "set terminal pngcairo size 900,600",
        f"set output '{png}'",
        f"set title '{title}'",
        f"set xlabel '{xlabel}'",
        f"set ylabel '{ylabel}'",
    ]
    if extra:
        lines.append(extra)
    lines.append("plot " + ", \\\n     ".join(plots))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_pgm(path: Path, image) -> Path:
    """8-bit binary PGM, rows top to bottom, scaled to the array maximum."""
    img = np.asarray(image, dtype=float)
    if img.ndim != 2 or img.size == 0:
        raise ValueError("PGM needs a non-empty 2-D array")
    peak = float(np.max(img))
    scaled = np.zeros(img.shape) if peak <= 0 else img / peak
    data = np.clip(np.rint(scaled * 255.0), 0, 255).astype(np.uint8)
    h, w = data.shape
    path = Path(path)
    with path.open("wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(data.tobytes())
    return path


def read_csv(path: Path) -> tuple[list[str], np.ndarray]:
    """Inverse of :func:`write_csv` (units line skipped)."""
    lines = [ln for ln in Path(path).read_text().splitlines() if not ln.startswith("#")]
    cols = lines[0].split(",")
    body = [[float(v) for v in ln.split(",")] for ln in lines[1:] if ln]
    return cols, np.array(body, dtype=float).reshape(-1, len(cols))
