import json
import os
from pathlib import Path

import numpy as np
import pandas as pd
from loguru import logger

from polytile.voxel import CellSet


ROOT = os.path.realpath(os.path.dirname(__file__))

EXPORT_FORMATS = ("cells", "layers", "obj", "npz")


def sample_path(name):
    """Path of a file shipped in ``polytile/data/samples``."""
    return os.path.join(ROOT, "data", "samples", name)


def read_cells(path):
    """
    Read a cell list, one ``x y z`` triple per line.

    Blank lines and lines starting with ``#`` are skipped.
    """
    df = pd.read_csv(
        path, sep=r"\s+", header=None, comment="#", names=["x", "y", "z"], dtype=np.int64
    )
    return CellSet(df.to_numpy())


def format_cells(c):
    return "".join(f"{x} {y} {z}\n" for x, y, z in c.cells.tolist())


def write_cells(c, path):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, c.cells, fmt="%d", delimiter=" ")
    logger.debug(f"Wrote {len(c)} cells to {path}")


def format_layers(c):
    """
    ASCII art of every horizontal slice, ``#`` for a filled cell.

    Each slice starts with a ``z=<height>`` line and lists rows from north
    to south; slices are separated by a blank line.
    """
    if not len(c):
        return ""
    grid, origin = c.to_grid()
    blocks = []
    for k in range(grid.shape[0]):
        rows = [f"z={origin.z + k}"]
        for j in range(grid.shape[1] - 1, -1, -1):
            rows.append("".join("#" if v else "." for v in grid[k, j]))
        blocks.append("\n".join(rows))
    return "\n\n".join(blocks) + "\n"


def _faces(c):
    arr = c.cells.astype(np.int64)
    lo = arr.min(axis=0)
    shape = tuple(arr.max(axis=0) - lo + 3)
    mask = np.zeros(shape, dtype=bool)
    rel = arr - lo + 1
    mask[rel[:, 0], rel[:, 1], rel[:, 2]] = True

    quads = []
    eye = np.eye(3, dtype=np.int64)
    for a in range(3):
        u, v = eye[(a + 1) % 3], eye[(a + 2) % 3]
        lead = [slice(None)] * 3
        trail = [slice(None)] * 3
        lead[a] = slice(None, -1)
        trail[a] = slice(1, None)
        here, there = mask[tuple(lead)], mask[tuple(trail)]
        for solid, order in ((here & ~there, (0, 1, 2, 3)), (~here & there, (0, 3, 2, 1))):
            base = np.argwhere(solid)
            base[:, a] += 1
            corners = [base, base + u, base + u + v, base + v]
            quads.append(np.stack([corners[k] for k in order], axis=1))
    quads = np.concatenate(quads) + lo - 1
    return quads


def format_obj(c):
    """
    Wavefront OBJ of the outer surface, one quad per exposed unit face.

    Shared vertices are written once.
    """
    if not len(c):
        return ""
    quads = _faces(c)
    verts, inverse = np.unique(quads.reshape(-1, 3), axis=0, return_inverse=True)
    faces = inverse.reshape(-1, 4) + 1
    lines = [f"v {x} {y} {z}" for x, y, z in verts.tolist()]
    lines += ["f " + " ".join(str(i) for i in f) for f in faces.tolist()]
    return "\n".join(lines) + "\n"


def write_npz(c, path):
    """Dense occupancy grid ``[z, y, x]`` with its origin."""
    grid, origin = c.to_grid()
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    np.savez_compressed(path, grid=grid, origin=np.asarray(origin))


def export(c, fmt, out_path=None):
    """
    Render a cell set in one of :data:`EXPORT_FORMATS`.

    Returns the text for text formats; ``npz`` needs ``out_path``.
    """
    if fmt not in EXPORT_FORMATS:
        logger.error(f"Unknown export format {fmt!r}")
        raise ValueError(f"Unknown export format {fmt!r}")
    if fmt == "npz":
        if out_path is None:
            logger.error("The npz format needs an output path")
            raise ValueError("The npz format needs an output path")
        write_npz(c, out_path)
        return None
    text = {"cells": format_cells, "layers": format_layers, "obj": format_obj}[fmt](c)
    if out_path is not None:
        Path(out_path).parent.mkdir(parents=True, exist_ok=True)
        Path(out_path).write_text(text)
    return text


def write_manifest(data, path):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(data, f, indent=2, sort_keys=True)
        f.write("\n")
    logger.debug(f"Manifest written to {path}")


def read_manifest(path):
    with open(path) as f:
        return json.load(f)
