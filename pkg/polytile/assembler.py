"""
Periodic tiling of space from a periodic Wang tiling.

Linkers sit on a lattice; the linker of torus cell ``(i, j)`` is placed at
``(28 t (i - j), 28 (i + j), 0)``. Each linker carries an encoder column
on its north side, shifted by ``(28 t, 14)`` and lifted so that one of the
three encoding levels of its tile lies on the matching layer (the top
level of the linker). Between two stacked linkers, encoders of diagonal
neighbours face each other:

* the east half of linker ``(i, j)`` pairs the east edge of cell
  ``(i - 1, j)`` with the west edge of cell ``(i, j)``;
* its west half pairs the north edge of ``(i - 1, j)`` with the south edge
  of ``(i - 1, j + 1)``.

The vertical offsets are chosen so that two facing encoders only meet
code against code on levels where their colors agree. Whatever is left
uncovered are plus-shaped gaps, one filler each.
"""

from __future__ import annotations

from enum import Enum
from functools import lru_cache
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from attrs import define, evolve, field
from loguru import logger
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from polytile.blocks import BAR
from polytile.blocks import BlockKind
from polytile.blocks import CUBE
from polytile.blocks import GeometryError
from polytile.blocks import axis_feature
from polytile.blocks import build_block
from polytile.blocks import check_mating_contract
from polytile.blocks import feature_cells
from polytile.blocks import mating_offsets
from polytile.log import logStage
from polytile.reduction import ROWS
from polytile.reduction import LevelPlan
from polytile.reduction import Reduction
from polytile.reduction import block_origin
from polytile.reduction import decode_encoding_layer
from polytile.reduction import level_plan
from polytile.reduction import level_z
from polytile.reduction import linker_sites
from polytile.reduction import reduce
from polytile.voxel import Cell
from polytile.voxel import CellSet
from polytile.voxel import LatticeBasis
from polytile.voxel import ResidueMap
from polytile.voxel import residue_counts
from polytile.voxel import translate
from polytile.wang import TorusTiling
from polytile.wang import WangTileSet
from polytile.wang import format_wang_set
from polytile.wang import parse_torus
from polytile.wang import parse_wang_set
from polytile.wang import repeat_torus
from polytile.wang import serialize_torus
from polytile.wang import valid_torus


__all__ = [
    "TileKind",
    "Placement",
    "OffsetAssignment",
    "Assembly",
    "OffsetError",
    "AssemblyError",
    "linker_basis",
    "published_linker_basis",
    "assembly_basis",
    "linker_origin",
    "linker_frame",
    "diagonal_pairs",
    "coincident_levels",
    "choose_offsets",
    "place_encoders",
    "check_packing",
    "fill_gaps",
    "flip_code_bit",
    "decode_assembly",
    "assemble_and_verify",
    "section_labels",
    "assembly_manifest",
    "assembly_from_manifest",
]

# torus cell (i, j) -> linker offset (28 t (i - j), 28 (i + j), 0)
STEP = 4 * BAR[1]
# encoder body relative to its linker, before the vertical lift
ENCODER_SHIFT = (BAR[0], STEP // 2)
MATCH_Z_IN_LEVEL = 3


class OffsetError(RuntimeError):
    """No vertical offsets keep facing encoders out of each other's way."""


class AssemblyError(RuntimeError):
    """
    A stage of the assembly failed.

    Attributes
    ----------
    stage : str
        ``"linker frame"``, ``"offsets"``, ``"packing"``,
        ``"matching-layer overlap"``, ``"gap filling"``, ``"partition"``
        or ``"decode"``.
    cells : CellSet or None
        Offending cells (residue representatives), when there are any.
    """

    def __init__(self, stage: str, message: str, cells: Optional[CellSet] = None):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.cells = cells


class TileKind(str, Enum):
    FILLER = "filler"
    ENCODER = "encoder"
    LINKER = "linker"


def _cell(value) -> Cell:
    return Cell(*(int(v) for v in value))


@define(frozen=True)
class Placement:
    """
    One tile translated to ``offset``.

    ``cell`` is the torus cell a linker or encoder belongs to. ``shape``
    replaces the reduced polycube of ``kind`` when set.
    """

    kind: TileKind = field(converter=TileKind)
    offset: Cell = field(converter=_cell)
    cell: Optional[Tuple[int, int]] = None
    shape: Optional[CellSet] = field(default=None, eq=False, repr=False)


def _grid(value):
    return tuple(tuple(int(v) for v in row) for row in value)


@define(frozen=True)
class OffsetAssignment:
    """
    Which of its three encoding levels each encoder column puts on the
    matching layer.

    Attributes
    ----------
    choices : tuple of tuple of int
        ``choices[y][x]`` in ``{0, 1, 2}``.
    levels : tuple of tuple of int
        The encoding level picked by each choice.
    """

    choices: Tuple[Tuple[int, ...], ...] = field(converter=_grid)
    levels: Tuple[Tuple[int, ...], ...] = field(converter=_grid)

    def __getitem__(self, xy) -> int:
        x, y = xy
        return self.choices[y][x]

    def level(self, x: int, y: int) -> int:
        return self.levels[y][x]


@define
class Assembly:
    """
    Tiles placed in a fundamental domain of ``basis``.

    Lattice translates of the placements make the whole tiling.
    """

    tileset: WangTileSet
    reduction: Reduction = field(eq=False, repr=False)
    basis: LatticeBasis
    placements: List[Placement] = field(factory=list)
    torus: Optional[TorusTiling] = None
    offsets: Optional[OffsetAssignment] = None

    def shape(self, p: Placement) -> CellSet:
        if p.shape is not None:
            return p.shape
        return {
            TileKind.FILLER: self.reduction.filler,
            TileKind.ENCODER: self.reduction.encoder,
            TileKind.LINKER: self.reduction.linker,
        }[p.kind]

    def pieces(self, kinds: Sequence[TileKind] = tuple(TileKind)) -> Iterator[Tuple[CellSet, Cell]]:
        for p in self.placements:
            if p.kind in kinds:
                yield self.shape(p), p.offset

    def count(self, kind: TileKind) -> int:
        return sum(p.kind is kind for p in self.placements)

    @property
    def volume(self) -> int:
        return sum(len(shape) for shape, _ in self.pieces())


def linker_basis(s: WangTileSet) -> LatticeBasis:
    """
    The lattice of linkers forced by the X, Y and Z mating constructs.

    In 7-cubes it is generated by ``(8t, 0, 0)``, ``(4t, 4, 0)`` and
    ``(0, 0, L)``; returned in voxels.
    """
    t, total = s.t, level_plan(s.n).total_levels
    return LatticeBasis([(8 * t * CUBE, 0, 0), (4 * t * CUBE, 4 * CUBE, 0), (0, 0, total * CUBE)])


def published_linker_basis(s: WangTileSet) -> LatticeBasis:
    """``(16t, 0, 0)``, ``(2, 8t, 0)``, ``(0, 0, L)`` 7-cubes, in voxels."""
    t, total = s.t, level_plan(s.n).total_levels
    return LatticeBasis([(16 * t * CUBE, 0, 0), (2 * CUBE, 8 * t * CUBE, 0), (0, 0, total * CUBE)])


def assembly_basis(s: WangTileSet, w: int, h: int) -> LatticeBasis:
    """Period lattice of the assembly of a ``w x h`` torus."""
    t, total = s.t, level_plan(s.n).total_levels
    return LatticeBasis(
        [(BAR[0] * t * w, STEP * w, 0), (-BAR[0] * t * h, STEP * h, 0), (0, 0, CUBE * total)]
    )


def linker_origin(t: int, i: int, j: int) -> Cell:
    return Cell(BAR[0] * t * (i - j), STEP * (i + j), 0)


def _check_site_mating(s: WangTileSet):
    """Each plus construct flush-mates the minus construct of its neighbour."""
    t, total = s.t, level_plan(s.n).total_levels
    sites = linker_sites(t)
    east_x = sites["Zminus"].x
    plus_at = {
        "X": sites["Xplus"],
        "Y": sites["Yplus"],
        "Z": Cell(east_x, 0, level_z(total)),
    }
    lattice = {
        "X": (2 * t * BAR[0], 0, 0),
        "Y": (t * BAR[0], STEP, 0),
        "Z": (0, 0, CUBE * total),
    }
    for axis in "XYZ":
        minus = f"{axis}minus"
        corner = np.asarray(sites[minus]) + np.asarray(lattice[axis])
        host = translate(build_block(minus), corner)
        guest = translate(build_block(f"{axis}plus"), plus_at[axis])
        dent = translate(axis_feature(minus), corner)
        found = mating_offsets(host, [guest], dent, window=1)
        if found != [(Cell(0, 0, 0),)]:
            raise GeometryError(f"{axis}+/{axis}-", f"linker sites do not mate, found {found}")
    logger.debug("Linker sites mate with their lattice neighbours")


def linker_frame(s: WangTileSet, repeats: Tuple[int, int] = (1, 1), reduction: Optional[Reduction] = None) -> Assembly:
    """
    Linkers of a ``w x h`` block of torus cells.

    Parameters
    ----------
    s : WangTileSet
    repeats : (int, int)
        Torus width and height.
    reduction : Reduction, optional
        Reused when given.

    Raises
    ------
    AssemblyError
        Stage ``"linker frame"`` when the blocks do not mate as required.
    """
    w, h = repeats
    if w < 1 or h < 1:
        logger.error(f"Repeats must be positive, got {repeats}")
        raise ValueError(f"Repeats must be positive, got {repeats}")
    try:
        check_mating_contract()
        _check_site_mating(s)
    except GeometryError as err:
        raise AssemblyError("linker frame", str(err)) from err
    reduction = reduction or reduce(s)
    placements = [
        Placement(TileKind.LINKER, linker_origin(s.t, i, j), (i, j))
        for j in range(h)
        for i in range(w)
    ]
    logger.debug(f"Linker frame: {len(placements)} linkers")
    return Assembly(s, reduction, assembly_basis(s, w, h), placements)


def diagonal_pairs(torus: TorusTiling) -> List[Tuple[Tuple[int, int], Tuple[int, int], str]]:
    """
    Pairs of encoder columns facing each other across a linker.

    Returns
    -------
    list of (cell_a, cell_b, direction)
        ``direction`` is ``"east"`` (east edge of ``a`` against west edge of
        ``b``) or ``"north"`` (north edge of ``a`` against south edge of
        ``b``). ``a`` and ``b`` coincide on a torus of side 1.
    """
    pairs = []
    for x, y in torus.cells():
        pairs.append(((x, y), ((x + 1) % torus.w, y), "east"))
        pairs.append(((x, y), (x, (y + 1) % torus.h), "north"))
    return pairs


def coincident_levels(plan: LevelPlan, e_a: int, e_b: int) -> List[Tuple[int, int]]:
    """
    Encoding levels of two columns that end up at the same height.

    Both columns put the given level (``e_a``, ``e_b``) on the matching
    layer; level ``a`` of the first then sits next to level
    ``a - e_a + e_b`` (mod L) of the second.

    Returns
    -------
    list of (int, int)
        ``(a, b)`` with both encoding levels, ``(e_a, e_b)`` included.
    """
    total = plan.total_levels
    encoding = set(plan.encoding_levels)
    out = []
    for a in plan.encoding_levels:
        b = (a - e_a + e_b - 1) % total + 1
        if b in encoding:
            out.append((a, b))
    return out


@lru_cache(maxsize=None)
def _conflicts(s: WangTileSet, e_a: int, e_b: int, direction: str) -> bool:
    plan = level_plan(s.n)
    for a, b in coincident_levels(plan, e_a, e_b):
        if (a, b) == (e_a, e_b) and e_a != e_b:
            continue
        ta, tb = s[plan.owner(a)], s[plan.owner(b)]
        if direction == "east" and ta.east != tb.west:
            return True
        if direction == "north" and ta.north != tb.south:
            return True
    return False


def _pair_conflicts(s: WangTileSet, a, b, e_a: int, e_b: int, direction: str) -> bool:
    if a != b and e_a == e_b:
        # fully aligned columns
        return True
    return _conflicts(s, e_a, e_b, direction)


def choose_offsets(torus: TorusTiling, s: WangTileSet, budget: int = 100_000) -> OffsetAssignment:
    """
    Pick an encoding level for the matching layer of every column.

    Columns are assigned from the middle diagonal outwards, trying the
    three choices in order and backtracking when two facing columns would
    put different colors against each other away from the matching layer.

    Two distinct columns never put the same level on the matching layer,
    so they share exactly one pair of encoding levels. A column facing
    itself (a torus side of 1) is fully aligned with itself; that is
    accepted when it puts equal colors everywhere.

    Parameters
    ----------
    torus : TorusTiling
    s : WangTileSet
    budget : int
        Maximum number of choices tried.

    Raises
    ------
    OffsetError
        When no assignment exists or the budget runs out.
    """
    plan = level_plan(s.n)
    mid = (torus.w + torus.h - 2) // 2
    order = sorted(torus.cells(), key=lambda c: (abs(c[0] + c[1] - mid), c[0] + c[1], c[0]))
    rank = {c: k for k, c in enumerate(order)}
    checks: Dict[Tuple[int, int], List] = {c: [] for c in order}
    for a, b, direction in diagonal_pairs(torus):
        # a pair is checked once both ends are assigned
        last = max(a, b, key=rank.get)
        checks[last].append((a, b, direction))

    choice: Dict[Tuple[int, int], int] = {}
    nodes = 0

    def level_of(c, r):
        return plan.tile_levels(torus[c])[r]

    def assign(k: int) -> bool:
        nonlocal nodes
        if k == len(order):
            return True
        cell = order[k]
        for r in range(3):
            nodes += 1
            if nodes > budget:
                raise OffsetError(f"Offset search budget of {budget} exhausted")
            choice[cell] = r
            if all(
                not _pair_conflicts(s, a, b, level_of(a, choice[a]), level_of(b, choice[b]), d)
                for a, b, d in checks[cell]
            ):
                logger.trace(f"Column {cell} takes choice {r}")
                if assign(k + 1):
                    return True
            del choice[cell]
        return False

    if not assign(0):
        raise OffsetError(f"No offset assignment closes the {torus.w}x{torus.h} torus")
    grid = [[choice[(x, y)] for x in range(torus.w)] for y in range(torus.h)]
    levels = [[level_of((x, y), choice[(x, y)]) for x in range(torus.w)] for y in range(torus.h)]
    logger.debug(f"Offsets chosen after {nodes} nodes: {grid}")
    return OffsetAssignment(grid, levels)


def place_encoders(frame: Assembly, torus: TorusTiling, offsets: OffsetAssignment) -> Assembly:
    """
    Add one encoder per linker, lifted so its chosen level is the matching
    layer.
    """
    s = frame.tileset
    total = level_plan(s.n).total_levels
    placements = list(frame.placements)
    for p in frame.placements:
        if p.kind is not TileKind.LINKER:
            continue
        i, j = p.cell
        e = offsets.level(i, j)
        offset = (
            p.offset.x + ENCODER_SHIFT[0] * s.t,
            p.offset.y + ENCODER_SHIFT[1],
            p.offset.z + level_z(total - e + 1),
        )
        placements.append(Placement(TileKind.ENCODER, offset, (i, j)))
    logger.debug(f"Placed {len(placements) - len(frame.placements)} encoders")
    return evolve(frame, placements=placements, torus=torus, offsets=offsets)


def _matching_z(s: WangTileSet) -> int:
    return level_z(level_plan(s.n).total_levels) + MATCH_Z_IN_LEVEL


def check_packing(partial: Assembly) -> np.ndarray:
    """
    Residue coverage counts of a partial assembly.

    Raises
    ------
    AssemblyError
        ``"matching-layer overlap"`` when tiles overlap on the matching
        layer, ``"packing"`` for an overlap anywhere else.
    """
    rmap = ResidueMap(partial.basis)
    counts = residue_counts(partial.pieces(), rmap)
    bad = np.flatnonzero(counts >= 2)
    if len(bad):
        reps = rmap.point(bad)
        cells = CellSet(reps)
        if np.any(reps[:, 2] == _matching_z(partial.tileset)):
            stage = "matching-layer overlap"
        else:
            stage = "packing"
        logger.info(f"{len(bad)} residues covered twice ({stage})")
        raise AssemblyError(stage, f"{len(bad)} cells covered twice", cells)
    return counts


_CROSS_ARMS = np.array([(dx, dy, 0) for dx, dy in [(-2, 0), (-1, 0), (1, 0), (2, 0), (0, -2), (0, -1), (0, 1), (0, 2)]])
_NEIGHBOURS = np.array([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)])


def fill_gaps(partial: Assembly, counts: Optional[np.ndarray] = None) -> Assembly:
    """
    Put a filler into every uncovered residue component.

    Parameters
    ----------
    partial : Assembly
        Must not overlap.
    counts : numpy.ndarray, optional
        Coverage counts from :func:`check_packing`.

    Raises
    ------
    AssemblyError
        Stage ``"gap filling"`` when a component is not a plus sign.
    """
    rmap = ResidueMap(partial.basis)
    if counts is None:
        counts = check_packing(partial)
    gaps = np.flatnonzero(counts == 0)
    if not len(gaps):
        logger.debug("No gaps to fill")
        return partial
    points = rmap.point(gaps)

    # face adjacency between gap residues
    rows, cols = [], []
    for step in _NEIGHBOURS:
        nb = rmap.index(points + step)
        pos = np.searchsorted(gaps, nb)
        pos[pos == len(gaps)] = 0
        hit = gaps[pos] == nb
        rows.append(np.flatnonzero(hit))
        cols.append(pos[hit])
    rows, cols = np.concatenate(rows), np.concatenate(cols)
    graph = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(len(gaps),) * 2)
    ncomp, labels = connected_components(graph, directed=False)
    planar = np.zeros(len(gaps), dtype=np.int64)
    for step in _NEIGHBOURS[:4]:
        nb = rmap.index(points + step)
        pos = np.searchsorted(gaps, nb)
        pos[pos == len(gaps)] = 0
        planar += gaps[pos] == nb

    placements = list(partial.placements)
    order = np.argsort(labels, kind="stable")
    bounds = np.searchsorted(labels[order], np.arange(ncomp + 1))
    for k in range(ncomp):
        members = order[bounds[k] : bounds[k + 1]]
        centres = members[planar[members] == 4]
        ok = len(members) == 9 and len(centres) == 1
        if ok:
            centre = points[centres[0]]
            expected = np.sort(rmap.index(centre + _CROSS_ARMS))
            ok = np.array_equal(expected, np.sort(gaps[members][gaps[members] != gaps[centres[0]]]))
        if not ok:
            cells = CellSet(points[members])
            logger.info(f"Gap component of {len(members)} cells is not a plus sign")
            raise AssemblyError("gap filling", f"component of {len(members)} cells is not a plus sign", cells)
        placements.append(Placement(TileKind.FILLER, centre - np.array([2, 2, 0])))
    logger.debug(f"Filled {ncomp} gaps")
    return evolve(partial, placements=placements)


def flip_code_bit(encoder: CellSet, level: int, row: int, block: int, t: int) -> CellSet:
    """
    Turn one N block of an encoding level into F or back.

    Parameters
    ----------
    encoder : CellSet
    level : int
        1-based encoder level.
    row : int
        0 for the south row, 1 for the north row.
    block : int
        0-based, west to east, below ``2 t``.
    t : int

    Raises
    ------
    ValueError
        If the block carries no code bump.
    """
    if not 0 <= block < 2 * t or row not in (0, 1):
        logger.error(f"No block {block} in row {row} for t={t}")
        raise ValueError(f"No block {block} in row {row} for t={t}")
    facing = ROWS[row]
    near = feature_cells(BlockKind.N, "bump", facing) - feature_cells(BlockKind.F, "bump", facing)
    far = feature_cells(BlockKind.F, "bump", facing) - feature_cells(BlockKind.N, "bump", facing)
    origin = block_origin(row, block, level)
    near, far = translate(near, origin), translate(far, origin)
    if len(encoder & near) == len(near):
        return (encoder - near) | far
    if len(encoder & far) == len(far):
        return (encoder - far) | near
    logger.error(f"Block {block} of row {row} on level {level} has no code bump")
    raise ValueError(f"Block {block} of row {row} on level {level} has no code bump")


def decode_assembly(assembly: Assembly) -> TorusTiling:
    """
    Read the tiling off the matching layer.

    Every encoder's section at the matching layer is decoded and looked
    up in the tile set.

    Raises
    ------
    AssemblyError
        Stage ``"decode"`` if a section is not the code of any tile.
    """
    s, torus = assembly.tileset, assembly.torus
    match_z = _matching_z(s)
    grid = [[-1] * torus.w for _ in range(torus.h)]
    for p in assembly.placements:
        if p.kind is not TileKind.ENCODER:
            continue
        section = assembly.shape(p).layer(match_z - p.offset.z)
        try:
            tile = decode_encoding_layer(section, s.t)
        except ValueError as err:
            raise AssemblyError("decode", f"column {p.cell}: {err}") from err
        if tile is None or tile not in s.tiles:
            raise AssemblyError("decode", f"column {p.cell} shows no tile of the set")
        i, j = p.cell
        grid[j][i] = s.tiles.index(tile)
    return TorusTiling(torus.w, torus.h, grid)


def _partition_holds(full: Assembly, counts: np.ndarray) -> bool:
    """
    Finish the packing counts with the fillers and check that every residue
    class is covered once.
    """
    rmap = ResidueMap(full.basis)
    if full.volume != rmap.size:
        logger.debug(f"Placed volume {full.volume} differs from determinant {rmap.size}")
        return False
    residue_counts(full.pieces((TileKind.FILLER,)), rmap, out=counts)
    return bool(np.all(counts == 1))


def _assemble(s: WangTileSet, torus: TorusTiling, offsets: OffsetAssignment, reduction: Reduction) -> Assembly:
    with logStage("linker frame"):
        frame = linker_frame(s, (torus.w, torus.h), reduction)
    with logStage("packing"):
        partial = place_encoders(frame, torus, offsets)
        counts = check_packing(partial)
    with logStage("gap filling"):
        full = fill_gaps(partial, counts)
        logger.info(f"{full.count(TileKind.FILLER)} fillers placed")
    with logStage("partition"):
        if not _partition_holds(full, counts):
            raise AssemblyError("partition", "placements do not partition the fundamental domain")
    with logStage("decode"):
        decoded = decode_assembly(full)
        for x, y in torus.cells():
            if s[decoded[x, y]] != s[torus[x, y]]:
                raise AssemblyError("decode", f"cell ({x}, {y}) decodes to tile {decoded[x, y]}")
    return full


@logger.catch(reraise=True, exclude=(AssemblyError, OffsetError, ValueError))
def assemble_and_verify(
    s: WangTileSet,
    torus: TorusTiling,
    reduction: Optional[Reduction] = None,
    repeat_limit: int = 3,
    offset_budget: int = 100_000,
    check_torus: bool = True,
) -> Assembly:
    """
    Build and verify the periodic tiling of space simulating ``torus``.

    Parameters
    ----------
    s : WangTileSet
    torus : TorusTiling
    reduction : Reduction, optional
        Reused when given.
    repeat_limit : int
        When the offsets cannot close ``torus``, the ``k x k`` repetitions
        for ``k = 2 .. repeat_limit`` are tried.
    offset_budget : int
        Node budget of each offset search.
    check_torus : bool
        Refuse an invalid tiling up front. When off, the mismatch shows up
        as an overlap on the matching layer.

    Returns
    -------
    Assembly
        Verified: an exact periodic partition whose matching layer decodes
        to the tiling (possibly repeated).

    Raises
    ------
    ValueError
        If ``check_torus`` and the tiling is invalid.
    AssemblyError
        Naming the failing stage.
    """
    if check_torus and not valid_torus(s, torus):
        logger.error("Refusing an invalid torus tiling")
        raise ValueError("Refusing an invalid torus tiling")
    reduction = reduction or reduce(s)
    tried = [torus] + [repeat_torus(torus, k, k) for k in range(2, repeat_limit + 1)]
    for g in tried:
        try:
            with logStage("offsets"):
                offsets = choose_offsets(g, s, offset_budget)
        except OffsetError as err:
            logger.info(f"{g.w}x{g.h} torus: {err}")
            continue
        logger.info(f"Assembling a {g.w}x{g.h} torus")
        full = _assemble(s, g, offsets, reduction)
        logger.info(f"Verified partition of {full.basis.det} cells")
        return full
    raise AssemblyError("offsets", f"no offsets up to {repeat_limit}x repetition")


def section_labels(assembly: Assembly, z: int) -> np.ndarray:
    """
    Horizontal section of the fundamental domain at height ``z``.

    Returns
    -------
    numpy.ndarray
        ``[y, x]`` over the residue box, 0 for empty, then 1 + the index of
        the tile kind in ``(LINKER, ENCODER, FILLER)``.
    """
    rmap = ResidueMap(assembly.basis)
    d1, d2, d3 = rmap.d
    z = z % d3
    labels = np.zeros((d2, d1), dtype=np.int8)
    for code, kind in enumerate((TileKind.LINKER, TileKind.ENCODER, TileKind.FILLER), start=1):
        for shape, offset in assembly.pieces((kind,)):
            pts = rmap.reduce(shape.cells.astype(np.int64) + np.asarray(offset))
            pts = pts[pts[:, 2] == z]
            labels[pts[:, 1], pts[:, 0]] = code
    return labels


def assembly_manifest(assembly: Assembly) -> dict:
    """JSON-ready description of an assembly; shape overrides are not kept."""
    return {
        "tileset": format_wang_set(assembly.tileset),
        "torus": serialize_torus(assembly.torus) if assembly.torus else None,
        "basis": [list(v) for v in assembly.basis.vectors],
        "offsets": [list(r) for r in assembly.offsets.choices] if assembly.offsets else None,
        "placements": [
            {"kind": p.kind.value, "offset": list(p.offset), "cell": list(p.cell) if p.cell else None}
            for p in assembly.placements
        ],
    }


def assembly_from_manifest(data: dict, reduction: Optional[Reduction] = None) -> Assembly:
    """Inverse of :func:`assembly_manifest`; rebuilds the polycubes unless given."""
    s = parse_wang_set(data["tileset"])
    torus = parse_torus(data["torus"]) if data.get("torus") else None
    offsets = None
    if data.get("offsets") is not None and torus is not None:
        plan = level_plan(s.n)
        choices = data["offsets"]
        levels = [
            [plan.tile_levels(torus[x, y])[r] for x, r in enumerate(row)]
            for y, row in enumerate(choices)
        ]
        offsets = OffsetAssignment(choices, levels)
    placements = [
        Placement(p["kind"], p["offset"], tuple(p["cell"]) if p.get("cell") else None)
        for p in data["placements"]
    ]
    return Assembly(
        s,
        reduction or reduce(s),
        LatticeBasis(data["basis"]),
        placements,
        torus,
        offsets,
    )
