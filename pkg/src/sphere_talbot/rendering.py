"""File output: binary PGM images, CSV tables, JSON sidecars and matplotlib plots."""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .carpet import CarpetGrid

__all__ = [
    "atomic_write",
    "render_pgm",
    "read_pgm",
    "write_csv",
    "read_csv",
    "read_grid_csv",
    "write_sidecar",
    "plot_slice",
]


def atomic_write(path, data: bytes | str):
    """Write to a temporary file next to ``path`` and rename it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, mode, **({} if mode == "wb" else {"newline": ""})) as fh:
            fh.write(data)
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _pixels(values: np.ndarray, gamma: float) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise ValueError("cannot render non-finite values")
    vmax = values.max() if values.size else 0.0
    if vmax <= 0.0:
        return np.zeros(values.shape, dtype=np.uint8)
    scaled = np.clip(values / vmax, 0.0, 1.0) ** gamma
    return np.rint(scaled * 255.0).astype(np.uint8)


def render_pgm(grid, path, gamma: float = 1.0, north_up: bool = False):
    """Write a binary P5 greyscale image, maxval 255, brightest at the grid maximum.

    Row 0 of the image is the largest y value unless ``north_up`` is set, in
    which case row 0 is y_axis[0] (theta = 0 for quantum carpets).  Boolean
    masks are written as black (True) on white.
    """
    values = grid.values if isinstance(grid, CarpetGrid) else np.asarray(grid)
    if values.dtype == bool:
        pix = np.where(values, 0, 255).astype(np.uint8)
    else:
        pix = _pixels(values, gamma)
    if not north_up:
        pix = pix[::-1]
    h, w = pix.shape
    header = f"P5\n{w} {h}\n255\n".encode("ascii")
    return atomic_write(path, header + np.ascontiguousarray(pix).tobytes())


def read_pgm(path) -> np.ndarray:
    """Read a P5 file written by :func:`render_pgm` (no comment lines)."""
    raw = Path(path).read_bytes()
    magic, dims, maxval, rest = raw.split(b"\n", 3)
    if magic != b"P5" or maxval != b"255":
        raise ValueError("not an 8-bit P5 image")
    w, h = (int(v) for v in dims.split())
    return np.frombuffer(rest, dtype=np.uint8, count=w * h).reshape(h, w)


def _fmt(v) -> str:
    return format(float(v), ".17g")


def write_csv(data, path):
    """Headered CSV with 17 significant digits.

    ``data`` is a CarpetGrid (first row: x axis, first column: y axis) or a
    mapping of column name to equal-length 1-D arrays.
    """
    rows = []
    if isinstance(data, CarpetGrid):
        ylab = data.meta.get("y_name", "y")
        xlab = data.meta.get("x_name", "x")
        rows.append([f"{ylab}\\{xlab}"] + [_fmt(x) for x in data.x_axis])
        for yv, row in zip(data.y_axis, data.values):
            rows.append([_fmt(yv)] + [_fmt(v) for v in row])
    else:
        names = list(data)
        cols = [np.asarray(data[k], dtype=float) for k in names]
        rows.append(names)
        rows.extend([_fmt(v) for v in rec] for rec in zip(*cols))
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return atomic_write(path, buf.getvalue())


def read_csv(path) -> dict:
    """Inverse of :func:`write_csv` for column tables."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        names = next(reader)
        recs = [[float(v) for v in row] for row in reader]
    if not recs:
        return {k: np.empty(0) for k in names}
    arr = np.array(recs)
    return {k: arr[:, i] for i, k in enumerate(names)}


def read_grid_csv(path, meta: dict | None = None) -> CarpetGrid:
    """Inverse of :func:`write_csv` for grids."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        head = next(reader)
        body = [[float(v) for v in row] for row in reader]
    ylab, _, xlab = head[0].partition("\\")
    x = np.array([float(v) for v in head[1:]])
    arr = np.array(body).reshape(-1, x.size + 1)
    meta = dict(meta or {})
    meta.setdefault("x_name", xlab or "x")
    meta.setdefault("y_name", ylab or "y")
    return CarpetGrid(x, arr[:, 0], arr[:, 1:], meta)


def write_sidecar(summary: dict, path):
    return atomic_write(path, json.dumps(summary, indent=2, sort_keys=True) + "\n")


def _use_agg():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams.update(
        {
            "font.size": 9,
            "axes.linewidth": 0.8,
            "lines.linewidth": 1.0,
            "savefig.dpi": 150,
            "figure.figsize": (5.0, 2.6),
        }
    )
    return plt


def plot_slice(curve: dict, path, title: str | None = None, marks=()):
    """Line plot of density against theta; ``marks`` adds dotted verticals."""
    plt = _use_agg()
    fig, ax = plt.subplots()
    ax.plot(curve["theta"], curve["density"], color="k")
    for m in marks:
        ax.axvline(m, color="0.6", ls=":", lw=0.7)
    ax.set_xlim(0.0, np.pi)
    ax.set_ylim(bottom=0.0)
    ax.set_xlabel(r"$\theta$")
    ax.set_ylabel(r"$|\Psi|^2\sin\theta$")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path

