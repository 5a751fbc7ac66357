"""Shared matplotlib style and CSV access for the figure scripts.

The scripts consume only the CLI's CSV/JSON outputs; they never recompute
physics.  Rendering is deterministic: fixed style, no timestamps in image
metadata (SVG output strips the date).
"""

import csv
import json
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "figure.dpi": 150,
    "font.size": 9,
    "axes.linewidth": 0.8,
    "lines.linewidth": 1.2,
    "legend.frameon": False,
    "svg.hashsalt": "kerrswitch-figures",
}

COLORS = {"bright": "#1f77b4", "dim": "#ff7f0e", "gamma": "#2ca02c",
          "amplitude": "#d62728", "keldysh": "#000000"}


def apply_style():
    matplotlib.rcParams.update(STYLE)


def read_csv(path):
    """(metadata, columns, rows-as-string-dicts) for a CLI CSV file."""
    meta, rows, cols = {}, [], None
    with open(path, encoding="utf-8") as fh:
        for rec in csv.reader(fh):
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


def column(rows, name, cast=float):
    out = []
    for r in rows:
        v = r.get(name, "")
        if v == "" or v == "nan":
            out.append(float("nan"))
        else:
            out.append(cast(v))
    return out


class SchemaError(SystemExit):
    pass


def require_columns(cols, needed, path):
    missing = [c for c in needed if c not in cols]
    if missing:
        raise SchemaError(
            f"{path}: missing columns {missing}; found {cols}")


def save(fig, out_path):
    out_path = pathlib.Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, metadata={"Date": None} if out_path.suffix == ".svg"
                else None)
    plt.close(fig)
    return str(out_path)


def load_json(path):
    with open(path) as fh:
        return json.load(fh)
