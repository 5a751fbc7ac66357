"""CSV and JSON writers with a reproducibility metadata header."""

from __future__ import annotations

import csv
import io
import json
import struct
from datetime import datetime, timezone

import numpy as np

TOOL_VERSION = "kerrswitch 0.1.0"
SCHEMA_VERSION = 1

SCHEMAS = {
    "fixed_points": ["x_c", "p_c", "n", "stability", "residual", "near_bifurcation"],
    "boundary": ["delta", "epsilon_lower", "epsilon_upper", "bistable_flag"],
    "path": ["t", "x_c", "p_c", "x_q", "p_q", "H"],
    "instanton_sweep": ["sweep_value", "iS_bd", "iS_db", "rate_bd", "rate_db",
                        "iS_bvp_bd", "iS_bvp_db", "note"],
    "liouvillian_sweep": ["sweep_value", "dim", "gamma_ad", "p_b", "p_d",
                          "gamma_bd", "gamma_db", "amplitude", "note"],
    "compare": ["sweep_value", "iS_bd", "iS_db", "rate_bd_fit", "rate_db_fit",
                "gamma_bd", "gamma_db", "gamma_ad", "p_b", "p_d", "amplitude",
                "iS_bvp_bd", "iS_bvp_db", "dim", "note"],
    "barrier": ["sweep_value", "iS_bd", "iS_db", "R_bd", "R_db",
                "absR_bd", "absR_db", "lam", "note"],
    "trajectory": ["t", "amplitude", "phase", "label"],
    "wigner": ["x", "p", "W"],
}


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def metadata_lines(config_json: str, extra: dict | None = None,
                   timestamp: bool = True) -> list:
    lines = [f"# tool: {TOOL_VERSION}", f"# schema_version: {SCHEMA_VERSION}"]
    if timestamp:
        lines.append(f"# timestamp: {datetime.now(timezone.utc).isoformat()}")
    lines.append(f"# config: {config_json}")
    for key, val in (extra or {}).items():
        lines.append(f"# {key}: {json.dumps(val, sort_keys=True, default=str)}")
    return lines


def write_csv(path, schema: str, rows, config_json: str = "{}",
              extra: dict | None = None, timestamp: bool = True) -> None:
    cols = SCHEMAS[schema]
    buf = io.StringIO()
    for line in metadata_lines(config_json, extra, timestamp):
        buf.write(line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for row in rows:
        if isinstance(row, dict):
            writer.writerow([_fmt(row.get(c)) for c in cols])
        else:
            writer.writerow([_fmt(v) for v in row])
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(buf.getvalue())


def read_csv(path):
    """(metadata dict, column names, list of row dicts with string values)."""
    meta = {}
    rows = []
    cols = None
    with open(path, encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for rec in reader:
            if not rec:
                continue
            if rec[0].startswith("#"):
                text = ",".join(rec)[1:].strip()
                key, _, val = text.partition(":")
                meta[key.strip()] = val.strip()
                continue
            if cols is None:
                cols = rec
                continue
            rows.append(dict(zip(cols, rec)))
    return meta, cols or [], rows


def write_json(path, payload: dict, config_json: str = "{}") -> None:
    doc = {"schema_version": SCHEMA_VERSION, "tool": TOOL_VERSION,
           "config": json.loads(config_json), **payload}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True, default=float)
        fh.write("\n")


WIG_MAGIC = b"KSWIG1\x00\x00"


def write_wigner_binary(path, x_grid, p_grid, W) -> None:
    """Binary grid: magic, int64 nx ny, float64 x0 x1 p0 p1, row-major W."""
    x = np.asarray(x_grid, float)
    p = np.asarray(p_grid, float)
    W = np.ascontiguousarray(W, dtype=np.float64)
    assert W.shape == (len(x), len(p))
    with open(path, "wb") as fh:
        fh.write(WIG_MAGIC)
        fh.write(struct.pack("<qq", len(x), len(p)))
        fh.write(struct.pack("<dddd", x[0], x[-1], p[0], p[-1]))
        fh.write(W.tobytes(order="C"))


def read_wigner_binary(path):
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != WIG_MAGIC:
            raise ValueError("not a wigner grid file")
        nx, np_ = struct.unpack("<qq", fh.read(16))
        x0, x1, p0, p1 = struct.unpack("<dddd", fh.read(32))
        W = np.frombuffer(fh.read(8 * nx * np_), dtype=np.float64).reshape(nx, np_)
    return (np.linspace(x0, x1, nx), np.linspace(p0, p1, np_), W)
