"""
The basic building blocks the encoder and the linker are made of.

Class-1 blocks (N, F, E, M, M+) are 28 x 7 x 7 bars; class-2 blocks
(X, Y, Z in both signs) are single 7 x 7 x 7 cubes. Blocks differ only in
the dents cut into and the bumps glued onto their middle layer ``z = 3``.

Feature coordinates live in ``data/geometry.csv`` for the north-facing
orientation: body at ``0 <= x < 28``, ``0 <= y < 7``, facing side at
``y = 6``. A south-facing block is the half turn of the north-facing one,
placed back onto the same body box.
"""

from __future__ import annotations

import os
from enum import Enum
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from loguru import logger

from polytile.utils import ROOT
from polytile.voxel import Cell
from polytile.voxel import CellSet
from polytile.voxel import Polycube
from polytile.voxel import bbox
from polytile.voxel import rotate_axis_90
from polytile.voxel import rotate_z_180
from polytile.voxel import translate
from polytile.voxel import linear_keys


__all__ = [
    "BlockKind",
    "Facing",
    "BumpShape",
    "GeometryError",
    "BAR",
    "CUBE",
    "load_geometry_table",
    "build_cross",
    "build_block",
    "feature_cells",
    "cavity",
    "probe_cells",
    "back_to_back",
    "flanking_blocks",
    "overlay_z_bump",
    "axis_feature",
    "mating_offsets",
    "check_mating_contract",
]

BAR = (28, 7, 7)
CUBE = 7


class BlockKind(str, Enum):
    N = "N"
    F = "F"
    E = "E"
    M = "M"
    Mplus = "Mplus"
    Xplus = "Xplus"
    Xminus = "Xminus"
    Yplus = "Yplus"
    Yminus = "Yminus"
    Zplus = "Zplus"
    Zminus = "Zminus"
    Cross = "Cross"

    @property
    def is_bar(self) -> bool:
        return self in _BARS


_BARS = {BlockKind.N, BlockKind.F, BlockKind.E, BlockKind.M, BlockKind.Mplus}


class Facing(str, Enum):
    NORTH = "north"
    SOUTH = "south"


_SHAPES = {
    "cross": [(x, 2) for x in range(5)] + [(2, y) for y in (0, 1, 3, 4)],
    "lbump": [(0, y) for y in range(7)] + [(x, 6) for x in (-3, -2, -1)],
    "axis": [(1, 0), (2, 0), (0, 1), (1, 1), (1, 2)],
}


class BumpShape(str, Enum):
    """One-voxel-high footprints features are cut from."""

    CrossBump = "cross"
    LBump = "lbump"
    LCrossCompound = "compound"
    AxisBump = "axis"

    @property
    def footprint(self) -> frozenset:
        if self is BumpShape.LCrossCompound:
            # cross attached to the stem as on an N block
            cross = [(x + 1, y + 2) for x, y in _SHAPES["cross"]]
            return frozenset(_SHAPES["lbump"] + cross)
        return frozenset(_SHAPES[self.value])


class GeometryError(RuntimeError):
    """The geometry table breaks the bump/dent mating contract."""

    def __init__(self, pair: str, message: str):
        super().__init__(f"{pair}: {message}")
        self.pair = pair


def load_geometry_table(path: Optional[str] = None) -> pd.DataFrame:
    """
    Read the feature table.

    Parameters
    ----------
    path : str, optional
        Defaults to the table shipped in ``polytile/data``.

    Returns
    -------
    pandas.DataFrame
        Columns ``kind, role, shape, x, y, z, turn``.
    """
    if path is None:
        path = os.path.join(ROOT, "data", "geometry.csv")
    df = pd.read_csv(path, dtype={"kind": str, "role": str, "shape": str})
    unknown = set(df["shape"]) - set(_SHAPES)
    if unknown:
        logger.error(f"Unknown feature shapes in {path}: {sorted(unknown)}")
        raise ValueError(f"Unknown feature shapes in {path}: {sorted(unknown)}")
    return df


def _turn(points, turn):
    out = []
    for x, y in points:
        for _ in range(turn % 4):
            x, y = -y, x
        out.append((x, y))
    return out


@lru_cache(maxsize=None)
def _features() -> Dict[Tuple[str, str], CellSet]:
    table = load_geometry_table()
    feats: Dict[Tuple[str, str], List] = {}
    for row in table.itertuples(index=False):
        pts = _turn(_SHAPES[row.shape], int(row.turn))
        cells = [(row.x + x, row.y + y, row.z) for x, y in pts]
        feats.setdefault((row.kind, row.role), []).extend(cells)
    return {key: CellSet(cells) for key, cells in feats.items()}


def _south(c: CellSet, width: int = BAR[0], depth: int = BAR[1]) -> CellSet:
    return translate(rotate_z_180(c, renormalize=False), (width - 1, depth - 1, 0))


@lru_cache(maxsize=None)
def build_cross() -> Polycube:
    """The 9-cell plus sign used as filler, one voxel high."""
    return Polycube([(x, y, 0) for x, y in _SHAPES["cross"]])


def _table_block(kind: BlockKind, size) -> CellSet:
    feats = _features()
    body = CellSet.box((0, 0, 0), size)
    dents = feats.get((kind.value, "dent"), CellSet())
    bumps = feats.get((kind.value, "bump"), CellSet())
    return (body - dents) | bumps


_ROTATED = {
    BlockKind.Yplus: (BlockKind.Xplus, "z"),
    BlockKind.Yminus: (BlockKind.Xminus, "z"),
    BlockKind.Zplus: (BlockKind.Xplus, "y"),
    BlockKind.Zminus: (BlockKind.Xminus, "y"),
}


@lru_cache(maxsize=None)
def build_block(kind, facing=None) -> Polycube:
    """
    Build one block as a polycube.

    Parameters
    ----------
    kind : BlockKind or str
    facing : Facing or str, optional
        Only for bar blocks; defaults to north.

    Returns
    -------
    Polycube
        Bar blocks keep their body at ``[0, 28) x [0, 7) x [0, 7)`` in both
        orientations; cubes keep their body at ``[0, 7)^3``.

    Raises
    ------
    ValueError
        If a facing is given for a cube block or the filler.
    """
    kind = BlockKind(kind)
    if kind is BlockKind.Cross:
        if facing is not None:
            logger.error("The filler has no facing")
            raise ValueError("The filler has no facing")
        return build_cross()
    if not kind.is_bar:
        if facing is not None:
            logger.error(f"Block {kind.value} has no facing")
            raise ValueError(f"Block {kind.value} has no facing")
        if kind in _ROTATED:
            base, axis = _ROTATED[kind]
            return Polycube(rotate_axis_90(build_block(base), axis, 1))
        return Polycube(_table_block(kind, (CUBE, CUBE, CUBE)))
    facing = Facing(facing or Facing.NORTH)
    block = _table_block(kind, BAR)
    if facing is Facing.SOUTH:
        block = _south(block)
    logger.trace(f"Built {kind.value} facing {facing.value}: {len(block)} cells")
    return Polycube(block)


def feature_cells(kind, role: str, facing=None) -> CellSet:
    """
    Dent or bump cells of a block in its own frame.

    Parameters
    ----------
    kind : BlockKind or str
    role : {'dent', 'bump'}
    facing : Facing or str, optional
    """
    kind = BlockKind(kind)
    if role not in ("dent", "bump"):
        logger.error(f"Unknown feature role {role!r}")
        raise ValueError(f"Unknown feature role {role!r}")
    if not kind.is_bar:
        return axis_feature(kind) if _has_role(kind, role) else CellSet()
    cells = _features().get((kind.value, role), CellSet())
    if Facing(facing or Facing.NORTH) is Facing.SOUTH:
        cells = _south(cells)
    return cells


def _has_role(kind: BlockKind, role: str) -> bool:
    if kind is BlockKind.Cross:
        return False
    return kind.value.endswith("plus") == (role == "bump")


def cavity(kind, facing=None) -> CellSet:
    """Cells cut out of a block."""
    return feature_cells(kind, "dent", facing)


@lru_cache(maxsize=None)
def axis_feature(kind) -> CellSet:
    """
    Bump or dent of a cube block relative to its cube.

    A plus block returns its bump (cells outside the cube), a minus block
    its dent (cube cells missing).
    """
    kind = BlockKind(kind)
    cube = CellSet.box((0, 0, 0), (CUBE, CUBE, CUBE))
    block = build_block(kind)
    if kind.value.endswith("plus"):
        return block - cube
    return cube - block


def _cross_centre(kind: str) -> Tuple[int, int, int]:
    table = load_geometry_table()
    rows = table[(table["kind"] == kind) & (table["role"] == "bump") & (table["shape"] == "cross")]
    row = rows.iloc[0]
    (cx, cy), = _turn([(2, 2)], int(row["turn"]))
    return int(row["x"]) + cx, int(row["y"]) + cy, int(row["z"])


@lru_cache(maxsize=None)
def probe_cells(facing=None) -> Tuple[Cell, Cell]:
    """
    Cells telling N from F in a block frame.

    Returns
    -------
    near, far : Cell
        Centre of the cross bump of an N block and of an F block.
    """
    near = _cross_centre(BlockKind.N.value)
    far = _cross_centre(BlockKind.F.value)
    if Facing(facing or Facing.NORTH) is Facing.SOUTH:
        near = (BAR[0] - 1 - near[0], BAR[1] - 1 - near[1], near[2])
        far = (BAR[0] - 1 - far[0], BAR[1] - 1 - far[1], far[2])
    return Cell(*near), Cell(*far)


def back_to_back(kind=BlockKind.M) -> Tuple[CellSet, CellSet]:
    """
    A south-facing and a north-facing bar glued back to back.

    The south-facing bar occupies ``0 <= y < 7`` and the north-facing one
    ``7 <= y < 14``, as in the two rows of a linker level.

    Returns
    -------
    pair : CellSet
    joint_cavity : CellSet
    """
    south = build_block(kind, Facing.SOUTH)
    north = translate(build_block(kind, Facing.NORTH), (0, BAR[1], 0))
    hole = cavity(kind, Facing.SOUTH) | translate(cavity(kind, Facing.NORTH), (0, BAR[1], 0))
    return south | north, hole


def flanking_blocks(kind_south, kind_north) -> Tuple[CellSet, CellSet]:
    """
    The two encoder blocks that face a :func:`back_to_back` pair.

    ``kind_south`` sits below the pair facing north, ``kind_north`` above
    it facing south.
    """
    below = translate(build_block(kind_south, Facing.NORTH), (0, -BAR[1], 0))
    above = translate(build_block(kind_north, Facing.SOUTH), (0, 2 * BAR[1], 0))
    return below, above


def overlay_z_bump(block: CellSet, cube) -> CellSet:
    """
    Glue the upward bump of a Z+ block on top of one 7-cube of ``block``.

    Parameters
    ----------
    block : CellSet
    cube : tuple of int
        Lowest corner of the 7-cube the bump sits on.

    Raises
    ------
    GeometryError
        If the bump would run into cells already in ``block``.
    """
    bump = translate(axis_feature(BlockKind.Zplus), cube)
    if not block.isdisjoint(bump):
        raise GeometryError("Z+/M+", "upward bump collides with the block below it")
    return block | bump


def _window_offsets(window) -> List[Cell]:
    if isinstance(window, int):
        lo, hi = (-window,) * 3, (window,) * 3
    else:
        lo, hi = window
    return [
        Cell(dx, dy, dz)
        for dz, dy, dx in product(
            range(lo[2], hi[2] + 1), range(lo[1], hi[1] + 1), range(lo[0], hi[0] + 1)
        )
    ]


def mating_offsets(host: CellSet, guests: Sequence[CellSet], cavity_cells: CellSet, window=2):
    """
    Translations under which guests fill a cavity of the host flush.

    Parameters
    ----------
    host : CellSet
    guests : sequence of CellSet
        Given at their nominal positions.
    cavity_cells : CellSet
        Cells that must all be covered.
    window : int or (Cell, Cell)
        Offsets tried per guest: a radius, or inclusive corner cells.

    Returns
    -------
    list of tuple of Cell
        One offset per guest, for every combination where no guest meets
        the host, guests are pairwise disjoint and the cavity is covered.
    """
    offsets = _window_offsets(window)
    pad = max(max(abs(c) for c in off) for off in offsets) + 1
    arrays = [host.cells, cavity_cells.cells] + [g.cells for g in guests]
    nonempty = [a for a in arrays if len(a)]
    lo = np.min([a.min(axis=0) for a in nonempty], axis=0) - pad
    hi = np.max([a.max(axis=0) for a in nonempty], axis=0) + pad
    keys, _ = linear_keys(arrays + [np.stack([lo, hi])])
    host_k, cav_k, guest_k = keys[0], keys[1], keys[2:-1]
    span = hi - lo + 1
    shift = {off: off.x + span[0] * (off.y + span[1] * off.z) for off in offsets}

    feasible = []
    for gk in guest_k:
        ok = [off for off in offsets if not np.isin(gk + shift[off], host_k).any()]
        feasible.append(ok)
    logger.trace(f"Feasible guest offsets: {[len(f) for f in feasible]}")

    found = []
    for combo in product(*feasible):
        placed = [gk + shift[off] for gk, off in zip(guest_k, combo)]
        union = np.concatenate(placed) if placed else np.zeros(0, dtype=np.int64)
        if len(np.unique(union)) != len(union):
            continue
        if np.isin(cav_k, union).all():
            found.append(tuple(combo))
    return found


def _expect_unique(pair: str, found, expected):
    if found != [expected]:
        raise GeometryError(pair, f"expected exactly {expected}, found {found}")


def _expect_none(pair: str, found):
    if found:
        raise GeometryError(pair, f"expected no flush offset, found {found}")


def _pocket(shape: BumpShape) -> Tuple[CellSet, CellSet]:
    """A one-voxel-deep dent of the given footprint cut into the top of a slab."""
    hole = CellSet([(x, y, 0) for x, y in shape.footprint])
    lo, hi = bbox(hole)
    slab = CellSet.box((lo.x - 2, lo.y - 2, -2), (hi.x + 3, hi.y + 3, 1))
    return slab - hole, hole


@lru_cache(maxsize=None)
def check_mating_contract(window: int = 2) -> bool:
    """
    Exhaustively check the mating matrix of the geometry table.

    Every guest is tried at all offsets up to ``window`` voxels along each
    axis from its nominal position.

    Raises
    ------
    GeometryError
        Naming the first pair that breaks the contract.
    """
    zero2 = (Cell(0, 0, 0), Cell(0, 0, 0))
    pair, hole = back_to_back(BlockKind.M)
    for ks, kn in product((BlockKind.N, BlockKind.F), repeat=2):
        found = mating_offsets(pair, flanking_blocks(ks, kn), hole, window=window)
        name = f"M-pair/{ks.value}{kn.value}"
        if ks is kn:
            _expect_unique(name, found, zero2)
        else:
            _expect_none(name, found)
    _expect_none("M-pair/EE", mating_offsets(pair, flanking_blocks("E", "E"), hole, window=window))

    for kind in (BlockKind.N, BlockKind.F):
        host = build_block(kind, Facing.SOUTH)
        guest = translate(build_block(BlockKind.Mplus, Facing.NORTH), (0, -BAR[1], 0))
        found = mating_offsets(host, [guest], cavity(kind, Facing.SOUTH), window=window)
        _expect_unique(f"M+/{kind.value}", found, (Cell(0, 0, 0),))

    step = {"X": (-CUBE, 0, 0), "Y": (0, -CUBE, 0), "Z": (0, 0, -CUBE)}
    for axis, v in step.items():
        host = build_block(f"{axis}minus")
        guest = translate(build_block(f"{axis}plus"), v)
        found = mating_offsets(host, [guest], axis_feature(f"{axis}minus"), window=window)
        _expect_unique(f"{axis}+/{axis}-", found, (Cell(0, 0, 0),))
        for other in step:
            if other == axis:
                continue
            stray = translate(build_block(f"{other}plus"), v)
            _expect_none(
                f"{other}+/{axis}-",
                mating_offsets(host, [stray], axis_feature(f"{axis}minus"), window=window),
            )
    for axis in step:
        bump = axis_feature(f"{axis}plus")
        for shape in (BumpShape.CrossBump, BumpShape.LBump):
            host, hole = _pocket(shape)
            guest = translate(bump, Cell(*(int(v) for v in np.subtract(bbox(hole)[0], bbox(bump)[0]))))
            _expect_none(f"{axis}+/{shape.value}", mating_offsets(host, [guest], hole, window=window))
    logger.debug("Mating contract holds")
    return True
