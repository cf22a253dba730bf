"""
From a Wang tile set to three polycubes: filler, encoder and linker.

Both tall polycubes are stacks of levels seven voxels high. Level ``k``
(1-based) occupies ``7 (k - 1) <= z < 7 k``. Odd levels are structural,
even levels are functional and carry two rows of ``2 t`` bar blocks: the
south row at ``0 <= y < 7`` faces south, the north row at ``7 <= y < 14``
faces north.

Encoder
    Structural levels are a 14 x 14 core in the middle of the footprint.
    Functional levels hold E blocks, except the encoding levels: tile ``i``
    is written on three of them, its edges as big-endian N/F words read
    west to east. North row west group: north edge; north row east group:
    east edge; south row west group: west edge; south row east group:
    south edge.

Linker
    Structural levels are a ``56 t x 14`` box with a north extension
    ``(56 t - 14) x 14`` inset by one 7-cube on either side. Functional
    levels hold M blocks, the top one M+ blocks (the matching layer).
    Level 1 carries X-, X+, Y-, Y+ and Z- in place of five 7-cubes, and a Z+
    bump sits on top of the matching layer.
"""

from __future__ import annotations

from enum import Enum
from functools import lru_cache
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np
from attrs import define
from loguru import logger

from polytile.blocks import BAR
from polytile.blocks import CUBE
from polytile.blocks import BlockKind
from polytile.blocks import Facing
from polytile.blocks import axis_feature
from polytile.blocks import build_block
from polytile.blocks import build_cross
from polytile.blocks import overlay_z_bump
from polytile.blocks import probe_cells
from polytile.diffsets import encoder_levels
from polytile.voxel import Cell
from polytile.voxel import CellSet
from polytile.voxel import Polycube
from polytile.voxel import translate
from polytile.wang import WangTile
from polytile.wang import WangTileSet


__all__ = [
    "LevelRole",
    "LevelPlan",
    "Reduction",
    "ROWS",
    "level_plan",
    "encode_color",
    "decode_word",
    "level_z",
    "block_origin",
    "linker_sites",
    "build_filler_tile",
    "build_encoder",
    "build_linker",
    "reduce",
    "manifest",
    "encoder_section",
    "decode_encoding_layer",
]

LEVEL = CUBE
# row index -> facing of its blocks
ROWS = (Facing.SOUTH, Facing.NORTH)


class LevelRole(str, Enum):
    STRUCTURAL = "structural"
    ENCODING = "encoding"
    FUNCTIONAL = "functional"


@define(frozen=True)
class LevelPlan:
    """
    Roles of the levels of an encoder (and of the linker of the same set).

    Attributes
    ----------
    n : int
        Number of Wang tiles.
    total_levels : int
        ``2**(3n+1) + 2``.
    owners : tuple of (int, int)
        ``(level, tile)`` for every encoding level, tile 0-based.
    """

    n: int
    total_levels: int
    owners: Tuple[Tuple[int, int], ...]

    @property
    def encoding_levels(self) -> List[int]:
        return [lvl for lvl, _ in self.owners]

    def owner(self, level: int) -> Optional[int]:
        return dict(self.owners).get(level)

    def role(self, level: int) -> LevelRole:
        if not 1 <= level <= self.total_levels:
            logger.error(f"Level {level} outside 1..{self.total_levels}")
            raise ValueError(f"Level {level} outside 1..{self.total_levels}")
        if level % 2:
            return LevelRole.STRUCTURAL
        if self.owner(level) is not None:
            return LevelRole.ENCODING
        return LevelRole.FUNCTIONAL

    def tile_levels(self, tile: int) -> Tuple[int, int, int]:
        """The three levels encoding ``tile`` (0-based), lowest first."""
        if not 0 <= tile < self.n:
            logger.error(f"Tile {tile} outside 0..{self.n - 1}")
            raise ValueError(f"Tile {tile} outside 0..{self.n - 1}")
        return tuple(lvl for lvl, k in self.owners if k == tile)


def level_plan(n: int) -> LevelPlan:
    """Level schedule of the encoder of an ``n``-tile set."""
    levels, total = encoder_levels(n)
    # levels are 2**2 .. 2**(3n+1); tile k owns three consecutive powers
    owners = tuple((lvl, k // 3) for k, lvl in enumerate(levels))
    return LevelPlan(n=n, total_levels=total, owners=owners)


def encode_color(c: int, t: int) -> str:
    """
    Big-endian binary word of a color, 0 as N and 1 as F.

    Raises
    ------
    ValueError
        If ``c`` does not fit in ``t`` bits.
    """
    if t < 1 or not 0 <= c < 2**t:
        logger.error(f"Color {c} does not fit in {t} bits")
        raise ValueError(f"Color {c} does not fit in {t} bits")
    return format(c, f"0{t}b").translate(str.maketrans("01", "NF"))


def decode_word(word: str) -> int:
    return int(word.translate(str.maketrans("NF", "01")), 2)


def level_z(level: int) -> int:
    """Lowest z of a level."""
    return LEVEL * (level - 1)


def block_origin(row: int, block: int, level: int) -> Cell:
    """Body corner of bar ``block`` (0-based, west to east) of a row."""
    return Cell(BAR[0] * block, BAR[1] * row, level_z(level))


def linker_sites(t: int) -> Dict[str, Cell]:
    """
    Corners of the special 7-cubes of a linker, in voxels.

    All sit on level 1. The Z+ bump is glued on top of the ``Zminus``
    column, above the matching layer.
    """
    east = CUBE * (8 * t - 1)
    return {
        "Xminus": Cell(0, CUBE, 0),
        "Xplus": Cell(east, CUBE, 0),
        "Yminus": Cell(0, 0, 0),
        "Yplus": Cell(BAR[0] * t, 3 * CUBE, 0),
        "Zminus": Cell(east, 0, 0),
    }


def build_filler_tile() -> Polycube:
    """The filler never depends on the tile set."""
    return build_cross()


def _row_blocks(kinds: List[BlockKind], row: int) -> CellSet:
    facing = ROWS[row]
    parts = [translate(build_block(k, facing), (BAR[0] * b, BAR[1] * row, 0)) for b, k in enumerate(kinds)]
    out = parts[0]
    for p in parts[1:]:
        out = out | p
    return out


def _functional_level(south: List[BlockKind], north: List[BlockKind]) -> CellSet:
    return _row_blocks(south, 0) | _row_blocks(north, 1)


def _code_kinds(word: str) -> List[BlockKind]:
    return [BlockKind.N if ch == "N" else BlockKind.F for ch in word]


@lru_cache(maxsize=None)
def _encoding_level(tile: WangTile, t: int) -> CellSet:
    north = _code_kinds(encode_color(tile.north, t) + encode_color(tile.east, t))
    south = _code_kinds(encode_color(tile.west, t) + encode_color(tile.south, t))
    return _functional_level(south, north)


def _stack(templates: List[CellSet]) -> CellSet:
    """Put ``templates[k]`` on level ``k + 1``."""
    out = np.empty((sum(len(tpl) for tpl in templates), 3), dtype=templates[0].cells.dtype)
    start = 0
    for k, tpl in enumerate(templates):
        stop = start + len(tpl)
        out[start:stop] = tpl.cells
        out[start:stop, 2] += level_z(k + 1)
        start = stop
    return CellSet._from_sorted(out)


def build_encoder(s: WangTileSet, validate: bool = True) -> Polycube:
    """
    Build the encoder of a tile set.

    Parameters
    ----------
    s : WangTileSet
    validate : bool
        Check face-connectivity of the result.

    Returns
    -------
    Polycube
        Body frame: functional levels span ``[0, 56 t) x [0, 14)``,
        height ``7 * (2**(3n+1) + 2)``.
    """
    t = s.t
    plan = level_plan(s.n)
    width = 2 * t * BAR[0]
    core = CellSet.box((width // 2 - CUBE, 0, 0), (width // 2 + CUBE, 2 * BAR[1], LEVEL))
    blank = _functional_level([BlockKind.E] * (2 * t), [BlockKind.E] * (2 * t))
    templates = []
    for level in range(1, plan.total_levels + 1):
        role = plan.role(level)
        if role is LevelRole.STRUCTURAL:
            templates.append(core)
        elif role is LevelRole.ENCODING:
            templates.append(_encoding_level(s[plan.owner(level)], t))
        else:
            templates.append(blank)
    encoder = _stack(templates)
    logger.debug(f"Encoder: {plan.total_levels} levels, {len(encoder)} cells")
    return Polycube.of(encoder, validate=validate)


def _linker_structural(t: int, with_sites: bool) -> CellSet:
    width = 2 * t * BAR[0]
    level = CellSet.box((0, 0, 0), (width, 2 * BAR[1], LEVEL)) | CellSet.box(
        (CUBE, 2 * BAR[1], 0), (width - CUBE, 4 * BAR[1], LEVEL)
    )
    if not with_sites:
        return level
    for name, corner in linker_sites(t).items():
        feature = translate(axis_feature(name), corner)
        if name.endswith("plus"):
            level = level | feature
        else:
            level = level - feature
    return level


def build_linker(s: WangTileSet, validate: bool = True) -> Polycube:
    """
    Build the linker of a tile set.

    Parameters
    ----------
    s : WangTileSet
    validate : bool
        Check face-connectivity of the result.

    Returns
    -------
    Polycube
        Same level count as the encoder; the Z+ bump reaches three voxels
        above the top level.
    """
    t = s.t
    plan = level_plan(s.n)
    total = plan.total_levels
    plain = _linker_structural(t, with_sites=False)
    first = _linker_structural(t, with_sites=True)
    bars = _functional_level([BlockKind.M] * (2 * t), [BlockKind.M] * (2 * t))
    matching = _functional_level([BlockKind.Mplus] * (2 * t), [BlockKind.Mplus] * (2 * t))
    templates = [first] + [plain if k % 2 else bars for k in range(2, total)] + [matching]
    body = _stack(templates)
    corner = linker_sites(t)["Zminus"]
    linker = overlay_z_bump(body, (corner.x, corner.y, level_z(total)))
    logger.debug(f"Linker: {total} levels, {len(linker)} cells")
    return Polycube.of(linker, validate=validate)


class Reduction(NamedTuple):
    filler: Polycube
    encoder: Polycube
    linker: Polycube


def reduce(s: WangTileSet, validate: bool = True) -> Reduction:
    """
    The three polycubes that tile space iff ``s`` tiles the plane.

    Parameters
    ----------
    s : WangTileSet
    validate : bool
        Check face-connectivity of encoder and linker.

    Returns
    -------
    Reduction
        ``(filler, encoder, linker)``.
    """
    plan = level_plan(s.n)
    logger.info(f"Reducing {s.n} tiles, {s.m} colors, t={s.t}: {plan.total_levels} levels")
    out = Reduction(build_filler_tile(), build_encoder(s, validate), build_linker(s, validate))
    logger.info(
        f"Volumes: filler {len(out.filler)}, encoder {len(out.encoder)}, linker {len(out.linker)}"
    )
    return out


def manifest(s: WangTileSet, reduction: Optional[Reduction] = None) -> dict:
    """
    Summary of a reduction, ready for JSON.

    Volumes are included only when the polycubes are given.
    """
    plan = level_plan(s.n)
    data = {
        "n": s.n,
        "m": s.m,
        "t": s.t,
        "levels": plan.total_levels,
        "encoder_levels": plan.total_levels,
        "linker_levels": plan.total_levels,
        "encoding_levels": plan.encoding_levels,
        "tile_levels": {str(k): list(plan.tile_levels(k)) for k in range(s.n)},
        "footprint": [2 * s.t * BAR[0], 2 * BAR[1]],
    }
    if reduction is not None:
        data["volumes"] = {
            "filler": len(reduction.filler),
            "encoder": len(reduction.encoder),
            "linker": len(reduction.linker),
        }
    return data


def encoder_section(encoder: CellSet, level: int) -> frozenset:
    """The ``(x, y)`` cells of the code-carrying layer of a level."""
    return encoder.layer(level_z(level) + 3)


def _read_block(section: frozenset, row: int, block: int) -> BlockKind:
    near, far = probe_cells(ROWS[row])
    ox, oy, _ = block_origin(row, block, 1)
    has_near = (ox + near.x, oy + near.y) in section
    has_far = (ox + far.x, oy + far.y) in section
    if has_near and has_far:
        logger.error(f"Block {block} of row {row} shows both code bumps")
        raise ValueError(f"Block {block} of row {row} shows both code bumps")
    if has_near:
        return BlockKind.N
    if has_far:
        return BlockKind.F
    return BlockKind.E


def decode_encoding_layer(section: frozenset, t: Optional[int] = None) -> Optional[WangTile]:
    """
    Read a tile back from an encoder section.

    Parameters
    ----------
    section : frozenset of (int, int)
        As returned by :func:`encoder_section`, in the encoder body frame.
    t : int, optional
        Code length; inferred from the section width when omitted.

    Returns
    -------
    WangTile or None
        None for a non-encoding level (all E blocks).

    Raises
    ------
    ValueError
        If the section mixes E with N/F blocks or shows both bumps.
    """
    if t is None:
        inside = [x for x, y in section if 0 <= y < 2 * BAR[1]]
        t = max(1, (max(inside) + 1) // (2 * BAR[0])) if inside else 1
    kinds = [[_read_block(section, row, b) for b in range(2 * t)] for row in range(2)]
    flat = kinds[0] + kinds[1]
    if all(k is BlockKind.E for k in flat):
        return None
    if any(k is BlockKind.E for k in flat):
        logger.error("Section mixes blank and code blocks")
        raise ValueError("Section mixes blank and code blocks")
    words = ["".join(k.value for k in grp) for grp in (kinds[1][:t], kinds[1][t:], kinds[0][:t], kinds[0][t:])]
    north, east, west, south = (decode_word(w) for w in words)
    return WangTile(north, east, south, west)
