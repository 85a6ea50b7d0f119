"""CSV / JSON serialisation of :class:`~fluorospec.spectrum.SpectrumScan`."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from fluorospec.model import DotParams, DriveParams
from fluorospec.spectrum import SpectrumScan

__all__ = ["emit", "load", "to_csv_text", "to_json_text", "CSV_COLUMNS"]

CSV_COLUMNS = ("t", "detuning", "S", "S_diag", "S_nondiag")

_DOT_KEYS = ("gamma_s", "gamma_p", "d0", "gamma_big_d")


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _meta_items(scan: SpectrumScan):
    for key, value in scan.metadata().items():
        if isinstance(value, float):
            value = _fmt(value)
        yield key, value


def to_csv_text(scan: SpectrumScan) -> str:
    lines = [f"# {k}={v}" for k, v in _meta_items(scan)]
    lines.append(",".join(CSV_COLUMNS))
    for i, t in enumerate(scan.t_grid):
        for j, d in enumerate(scan.detuning_grid):
            row = (t, d, scan.values[i, j], scan.diag[i, j], scan.nondiag[i, j])
            lines.append(",".join(_fmt(x) for x in row))
    return "\n".join(lines) + "\n"


def to_json_text(scan: SpectrumScan) -> str:
    doc = {
        "produced_by": scan.produced_by,
        "metadata": scan.metadata(),
        "t_grid": scan.t_grid.tolist(),
        "detuning_grid": scan.detuning_grid.tolist(),
        "values": scan.values.tolist(),
        "diag": scan.diag.tolist(),
        "nondiag": scan.nondiag.tolist(),
    }
    return json.dumps(doc, indent=1) + "\n"


def emit(scan: SpectrumScan, fmt: str = "csv", path: str | Path | None = None) -> str:
    """Serialise ``scan``; write it to ``path`` when given and return the text."""
    if fmt == "csv":
        text = to_csv_text(scan)
    elif fmt == "json":
        text = to_json_text(scan)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        Path(path).write_text(text)
    return text


def _coerce(value: str):
    for cast in (int, float):
        try:
            return cast(value)
        except ValueError:
            pass
    return value


def _scan_from(meta: dict, t_grid, d_grid, values, diag, nondiag) -> SpectrumScan:
    meta = dict(meta)
    dot = DotParams(*(float(meta.pop(f"dot.{k}")) for k in _DOT_KEYS))
    drive = None
    if "drive.omega_f" in meta:
        drive = DriveParams(float(meta.pop("drive.delta_as")), float(meta.pop("drive.omega_f")),
                            float(meta.pop("drive.phi")))
        meta.pop("drive.m", None)
    produced_by = str(meta.pop("produced_by"))
    gamma_filter = float(meta.pop("gamma_filter"))
    eps_trunc = float(meta.pop("eps_trunc"))
    return SpectrumScan(dot, drive, gamma_filter, eps_trunc, np.asarray(t_grid, dtype=float),
                        np.asarray(d_grid, dtype=float), np.asarray(values, dtype=float),
                        np.asarray(diag, dtype=float), np.asarray(nondiag, dtype=float),
                        produced_by, meta)


def _load_csv(text: str) -> SpectrumScan:
    meta = {}
    rows = []
    header_seen = False
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key] = _coerce(value)
        elif not header_seen:
            if tuple(line.split(",")) != CSV_COLUMNS:
                raise ValueError(f"unexpected CSV header: {line!r}")
            header_seen = True
        else:
            rows.append([float(x) for x in line.split(",")])
    if not rows:
        raise ValueError("CSV holds no data rows")
    data = np.array(rows, dtype=float)
    # keep file order (row-major over t) rather than sorted order
    _, first = np.unique(data[:, 0], return_index=True)
    t_grid = data[np.sort(first), 0]
    d_grid = data[: len(data) // len(t_grid), 1]
    shape = (len(t_grid), len(d_grid))
    return _scan_from(meta, t_grid, d_grid, data[:, 2].reshape(shape),
                      data[:, 3].reshape(shape), data[:, 4].reshape(shape))


def load(path: str | Path) -> SpectrumScan:
    """Read a scan written by :func:`emit`; the format follows the content."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        meta = dict(doc["metadata"])
        return _scan_from(meta, doc["t_grid"], doc["detuning_grid"], doc["values"],
                          doc["diag"], doc["nondiag"])
    return _load_csv(text)
