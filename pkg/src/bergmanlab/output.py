"""Deterministic CSV/JSON writers and a gnuplot script for scan and table files."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_cell(v) for v in r])
    return path


def read_sequence_csv(path: Path) -> np.ndarray:
    """Read ``k, b_k`` rows; indices must be ``0..N`` in order."""
    with Path(path).open() as fh:
        rows = list(csv.reader(fh))
    if rows and not _is_number(rows[0][0]):
        rows = rows[1:]
    k = np.array([int(r[0]) for r in rows])
    if not np.array_equal(k, np.arange(k.size)):
        raise ValueError("sequence file must list k = 0, 1, 2, ... in order")
    return np.array([float(r[1]) for r in rows])


def _is_number(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, complex):
        return {"re": o.real, "im": o.imag}
    raise TypeError(f"cannot serialise {type(o).__name__}")


def _finite(o):
    if isinstance(o, float) and not math.isfinite(o):
        return str(o)
    if isinstance(o, dict):
        return {k: _finite(v) for k, v in o.items()}
    if isinstance(o, list):
        return [_finite(v) for v in o]
    return o


def write_json(path: Path, data: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(_finite(json.loads(json.dumps(data, default=_json_default))), indent=2, sort_keys=True)
    path.write_text(text + "\n")
    return path


def write_plot_script(path: Path, series: Sequence[tuple[str, str, str, str]], title: str,
                      logx: bool = False, logy: bool = False) -> Path:
    """gnuplot script; ``series`` holds ``(csv file, x column, y column, label)``."""
    path = Path(path)
    lines = [
        "# gnuplot script; run with: gnuplot -p " + path.name,
        "set datafile separator ','",
        "set key autotitle columnhead",
        f"set title '{title}'",
        "set grid",
    ]
    if logx:
        lines.append("set logscale x")
    if logy:
        lines.append("set logscale y")
    plots = [f"'{f}' using '{x}':'{y}' with linespoints title '{lab}'" for f, x, y, lab in series]
    lines.append("plot " + ", \\\n     ".join(plots) if plots else "# nothing to plot")
    path.write_text("\n".join(lines) + "\n")
    return path
