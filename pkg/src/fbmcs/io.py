"""Text formats for signals, masks, tables and reconstruction reports.

Signal files are CSV with header ``index,re,im`` and one row per sample.
Mask files start with a ``# n=<N>`` comment followed by an ``index``
column. Floats are written with ``repr`` (shortest round-trip form), so a
write/read cycle is value-exact.
"""

from __future__ import annotations

import csv
import json
import math
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .core import ComplexSignal, SampleMask, ValidationError, to_array

__all__ = [
    "FileFormatError",
    "write_signal",
    "read_signal",
    "write_mask",
    "read_mask",
    "load_timeseries",
    "write_table",
    "make_report",
    "write_report",
    "read_report",
    "REPORT_SCHEMA",
    "standin_path",
    "make_standin",
]

SIGNAL_HEADER = ("index", "re", "im")


class FileFormatError(ValueError):
    """A data file could not be parsed; the message names the offending line."""


def _fmt(x: float) -> str:
    return repr(float(x))


def write_signal(path, signal) -> None:
    values = to_array(signal)
    lines = [",".join(SIGNAL_HEADER)]
    lines.extend(f"{i},{_fmt(v.real)},{_fmt(v.imag)}" for i, v in enumerate(values))
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def _data_rows(path):
    # yields (line_number, fields) for non-comment, non-blank lines
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip():
                continue
            if row[0].lstrip().startswith("#"):
                continue
            yield lineno, [c.strip() for c in row]


def _parse_float(text, path, lineno):
    try:
        value = float(text)
    except ValueError:
        raise FileFormatError(f"{path}: line {lineno}: cannot parse {text!r} as a number") from None
    if not math.isfinite(value):
        raise FileFormatError(f"{path}: line {lineno}: non-finite value {text!r}")
    return value


def _parse_index(text, path, lineno):
    try:
        return int(text)
    except ValueError:
        raise FileFormatError(f"{path}: line {lineno}: bad index {text!r}") from None


def read_signal(path) -> ComplexSignal:
    rows = _data_rows(path)
    first = next(rows, None)
    if first is None:
        raise FileFormatError(f"{path}: empty signal file")
    lineno, header = first
    if tuple(header) != SIGNAL_HEADER:
        raise FileFormatError(f"{path}: line {lineno}: expected header 'index,re,im', got {','.join(header)!r}")
    values = []
    for lineno, row in rows:
        if len(row) != 3:
            raise FileFormatError(f"{path}: line {lineno}: expected 3 fields, got {len(row)}")
        idx = _parse_index(row[0], path, lineno)
        if idx != len(values):
            kind = "duplicate" if idx < len(values) else "gap before"
            raise FileFormatError(f"{path}: line {lineno}: {kind} index {idx} (expected {len(values)})")
        values.append(complex(_parse_float(row[1], path, lineno), _parse_float(row[2], path, lineno)))
    if not values:
        raise FileFormatError(f"{path}: signal file has no samples")
    return ComplexSignal(values)


def write_mask(path, mask: SampleMask) -> None:
    lines = [f"# n={mask.n}", "index"]
    lines.extend(str(int(i)) for i in mask.indices)
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def read_mask(path) -> SampleMask:
    with open(path, encoding="utf-8") as fh:
        first = fh.readline().strip()
    if not first.startswith("#") or not first[1:].strip().startswith("n="):
        raise FileFormatError(f"{path}: line 1: expected '# n=<N>' metadata, got {first!r}")
    try:
        n = int(first[1:].strip()[2:])
    except ValueError:
        raise FileFormatError(f"{path}: line 1: bad length in {first!r}") from None
    rows = _data_rows(path)
    head = next(rows, None)
    if head is None or head[1] != ["index"]:
        raise FileFormatError(f"{path}: missing 'index' header")
    indices = []
    for lineno, row in rows:
        if len(row) != 1:
            raise FileFormatError(f"{path}: line {lineno}: expected a single index")
        idx = _parse_index(row[0], path, lineno)
        if not (0 <= idx < n):
            raise FileFormatError(f"{path}: line {lineno}: index {idx} outside [0, {n})")
        if indices and idx <= indices[-1]:
            raise FileFormatError(f"{path}: line {lineno}: indices must be strictly increasing")
        indices.append(idx)
    if not indices:
        raise FileFormatError(f"{path}: mask file lists no indices")
    return SampleMask(n, np.array(indices, dtype=np.int64))


def load_timeseries(path, column=None) -> ComplexSignal:
    """Read one real-valued column of a CSV and embed it as a complex signal.

    ``column`` may be a header name or a 0-based position. Files without a
    header row are accepted; with no selector the last column is used when
    a header names nothing called ``re``/``value``/``close``.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"{path}: no such file")
    rows = list(_data_rows(path))
    if not rows:
        raise FileFormatError(f"{path}: empty file")

    header = None
    lineno0, first = rows[0]
    try:
        [float(c) for c in first]
    except ValueError:
        header = [c.lower() for c in first]
        rows = rows[1:]
    if not rows:
        raise FileFormatError(f"{path}: no data rows")

    width = len(rows[0][1])
    if column is None:
        col = width - 1
        if header is not None:
            for name in ("re", "value", "close"):
                if name in header:
                    col = header.index(name)
                    break
    elif isinstance(column, int) or str(column).isdigit():
        col = int(column)
    else:
        if header is None or str(column).lower() not in header:
            raise ValidationError(f"{path}: no column named {column!r}")
        col = header.index(str(column).lower())
    if not (0 <= col < width):
        raise ValidationError(f"{path}: column {column!r} out of range")

    values = []
    for lineno, row in rows:
        if col >= len(row):
            raise FileFormatError(f"{path}: line {lineno}: missing column {col}")
        values.append(_parse_float(row[col], path, lineno))
    return ComplexSignal(np.asarray(values, dtype=np.float64).astype(np.complex128))


def write_table(path, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


_NUMBER_OR_INF = {"anyOf": [{"type": "number"}, {"enum": ["inf"]}]}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["method", "n", "m", "factor", "residual", "iters", "converged", "solver_config"],
    "additionalProperties": False,
    "properties": {
        "method": {"enum": ["bp", "tv"]},
        "tv_mode": {"enum": ["spectrum", "signal"]},
        "n": {"type": "integer", "minimum": 1},
        "m": {"type": "integer", "minimum": 1},
        "factor": {"type": "number", "minimum": 1},
        "hurst": {"type": ["number", "null"], "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "snr_db": _NUMBER_OR_INF,
        "residual": {"type": "number", "minimum": 0},
        "iters": {"type": "integer", "minimum": 0},
        "converged": {"type": "boolean"},
        "objective": {"type": "number", "minimum": 0},
        "seed": {"type": ["integer", "null"], "minimum": 0},
        "solver_config": {
            "type": "object",
            "required": ["max_iters", "tol_primal", "tol_change", "rho"],
            "properties": {
                "max_iters": {"type": "integer", "minimum": 1},
                "tol_primal": {"type": "number", "exclusiveMinimum": 0},
                "tol_change": {"type": "number", "exclusiveMinimum": 0},
                "rho": {"type": "number", "exclusiveMinimum": 0},
            },
        },
    },
}


def make_report(result, mask: SampleMask, config, method, tv_mode=None, snr=None, hurst=None, seed=None) -> dict:
    """Assemble the JSON report for one reconstruction; ``snr_db`` only with ground truth."""
    rep = {
        "method": method,
        "n": mask.n,
        "m": mask.m,
        "factor": mask.n / mask.m,
        "hurst": None if hurst is None else float(hurst),
        "residual": float(result.report.residual),
        "iters": int(result.report.iters),
        "converged": bool(result.report.converged),
        "objective": float(result.report.objective),
        "seed": None if seed is None else int(seed),
        "solver_config": config.as_dict(),
    }
    if tv_mode is not None:
        rep["tv_mode"] = tv_mode
    if snr is not None:
        rep["snr_db"] = "inf" if math.isinf(snr) else float(snr)
    jsonschema.validate(rep, REPORT_SCHEMA)
    return rep


def write_report(path, report: dict) -> None:
    jsonschema.validate(report, REPORT_SCHEMA)
    Path(path).write_text(json.dumps(report, indent=2) + "\n", encoding="ascii")


def read_report(path) -> dict:
    report = json.loads(Path(path).read_text(encoding="utf-8"))
    jsonschema.validate(report, REPORT_SCHEMA)
    return report


STANDIN_NAME = "standin_monthly_512.csv"


def standin_path():
    """Location of the bundled 512-sample real-valued monthly index stand-in."""
    return resources.files("fbmcs") / "data" / STANDIN_NAME


def make_standin(n: int = 512, seed: int = 1945) -> np.ndarray:
    """Synthetic monthly stock-index-like series used in place of market data.

    Geometric drift (about 6.9 % a year) times a real fBm log-fluctuation
    with H = 0.6, scaled to a 4 % monthly step, starting from 150.
    """
    from .fbm import FbmSpec, synthesize_fbm

    t = np.arange(n)
    w = synthesize_fbm(FbmSpec(n, 0.6, seed), real=True).values.real
    w = 0.04 * w / np.std(np.diff(w))
    return 150.0 * np.exp(0.0056 * t + w)


def write_standin(path, n: int = 512, seed: int = 1945) -> None:
    values = make_standin(n, seed)
    lines = ["month,close"]
    lines.extend(f"{i},{_fmt(v)}" for i, v in enumerate(values))
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")
