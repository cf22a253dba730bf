"""
Wang tiles and periodic tilings of finite tori.

Row 0 of a torus is its southmost row; north means row + 1 and east means
column + 1, both wrapping around.
"""

from __future__ import annotations

from enum import Enum
from itertools import product
from typing import Dict, Iterable, Iterator, Optional, Sequence, Tuple

from attrs import define, field
from loguru import logger


__all__ = [
    "WangTile",
    "WangTileSet",
    "TorusTiling",
    "WangParseError",
    "SolveStatus",
    "SolveOutcome",
    "parse_wang_set",
    "format_wang_set",
    "wang_set_from_tiles",
    "valid_torus",
    "solve_torus",
    "solve_any_torus",
    "enumerate_tori",
    "repeat_torus",
    "parse_torus",
    "serialize_torus",
]


class WangParseError(ValueError):
    """A malformed line in a tile-set or tiling file."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _nonneg(instance, attribute, value):
    if value < 0:
        raise ValueError(f"{attribute.name} color must be nonnegative, got {value}")


@define(frozen=True)
class WangTile:
    north: int = field(converter=int, validator=_nonneg)
    east: int = field(converter=int, validator=_nonneg)
    south: int = field(converter=int, validator=_nonneg)
    west: int = field(converter=int, validator=_nonneg)

    def edges(self) -> Tuple[int, int, int, int]:
        return self.north, self.east, self.south, self.west


def _tiles(value) -> Tuple[WangTile, ...]:
    return tuple(t if isinstance(t, WangTile) else WangTile(*t) for t in value)


@define(frozen=True)
class WangTileSet:
    """
    A nonempty list of Wang tiles over dense color ids ``0 .. m-1``.

    Attributes
    ----------
    tiles : tuple of WangTile
    labels : tuple of str
        Original color names, indexed by color id.
    """

    tiles: Tuple[WangTile, ...] = field(converter=_tiles)
    labels: Tuple[str, ...] = field(default=None)

    @tiles.validator
    def _check_tiles(self, attribute, value):
        if not value:
            raise ValueError("A Wang tile set needs at least one tile")
        used = {c for t in value for c in t.edges()}
        if used != set(range(len(used))):
            raise ValueError(f"Color ids must be dense from 0, got {sorted(used)}")

    def __attrs_post_init__(self):
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(str(c) for c in range(self.m)))

    @property
    def n(self) -> int:
        return len(self.tiles)

    @property
    def m(self) -> int:
        return len({c for t in self.tiles for c in t.edges()})

    @property
    def t(self) -> int:
        """Code length, never below 1."""
        return max(1, (self.m - 1).bit_length())

    def __len__(self):
        return self.n

    def __getitem__(self, i) -> WangTile:
        return self.tiles[i]


def wang_set_from_tiles(tiles: Iterable[Sequence]) -> WangTileSet:
    """
    Intern arbitrary color tokens to dense ids in order of first appearance.
    """
    ids: Dict[str, int] = {}
    dense = []
    for tile in tiles:
        row = []
        for token in tile:
            row.append(ids.setdefault(str(token), len(ids)))
        dense.append(WangTile(*row))
    return WangTileSet(dense, labels=tuple(ids))


def parse_wang_set(text: str) -> WangTileSet:
    """
    Parse one tile per nonblank line, four color tokens in order N E S W.

    Raises
    ------
    WangParseError
        With the offending line number.
    """
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4:
            logger.error(f"line {lineno}: expected 4 colors, got {len(parts)}")
            raise WangParseError(lineno, f"expected 4 colors, got {len(parts)}")
        rows.append(parts)
    if not rows:
        raise WangParseError(0, "no tiles")
    s = wang_set_from_tiles(rows)
    logger.debug(f"Parsed {s.n} tiles over {s.m} colors (t={s.t})")
    return s


def format_wang_set(s: WangTileSet) -> str:
    return "".join(
        " ".join(s.labels[c] for c in tile.edges()) + "\n" for tile in s.tiles
    )


def _grid(value) -> Tuple[Tuple[int, ...], ...]:
    return tuple(tuple(int(v) for v in row) for row in value)


@define(frozen=True)
class TorusTiling:
    """
    A ``w x h`` grid of tile indices; ``grid[y][x]`` with row 0 southmost.
    """

    w: int
    h: int
    grid: Tuple[Tuple[int, ...], ...] = field(converter=_grid)

    @grid.validator
    def _check_grid(self, attribute, value):
        if self.w < 1 or self.h < 1:
            raise ValueError(f"Torus sides must be positive, got {self.w}x{self.h}")
        if len(value) != self.h or any(len(row) != self.w for row in value):
            raise ValueError(f"Grid does not match {self.w}x{self.h}")

    def __getitem__(self, xy) -> int:
        x, y = xy
        return self.grid[y % self.h][x % self.w]

    def cells(self):
        for y in range(self.h):
            for x in range(self.w):
                yield x, y


def valid_torus(s: WangTileSet, g: TorusTiling) -> bool:
    """
    True iff every shared edge carries the same color on both sides.

    Raises
    ------
    ValueError
        If a grid entry is not a tile index of ``s``.
    """
    for x, y in g.cells():
        if not 0 <= g[x, y] < s.n:
            logger.error(f"Tile index {g[x, y]} at ({x}, {y}) out of range")
            raise ValueError(f"Tile index {g[x, y]} at ({x}, {y}) out of range")
    for x, y in g.cells():
        tile = s[g[x, y]]
        if tile.east != s[g[x + 1, y]].west:
            return False
        if tile.north != s[g[x, y + 1]].south:
            return False
    return True


class SolveStatus(str, Enum):
    FOUND = "found"
    NONE = "none"
    UNKNOWN = "unknown"


@define(frozen=True)
class SolveOutcome:
    status: SolveStatus
    tiling: Optional[TorusTiling] = None
    nodes: int = 0


class _Budget(Exception):
    pass


def solve_torus(s: WangTileSet, w: int, h: int, budget: int = 1_000_000) -> SolveOutcome:
    """
    Backtracking search for a valid ``w x h`` torus tiling.

    Cells are filled in row-major order from the southwest corner and tiles
    are tried in index order, so the returned grid is the lexicographically
    first valid one.

    Parameters
    ----------
    s : WangTileSet
    w, h : int
        Torus sides.
    budget : int
        Maximum number of tile placements tried.

    Returns
    -------
    SolveOutcome
        ``FOUND`` with a tiling, ``NONE`` when the search space is
        exhausted, ``UNKNOWN`` when the budget runs out first.
    """
    if w < 1 or h < 1:
        logger.error(f"Torus sides must be positive, got {w}x{h}")
        raise ValueError(f"Torus sides must be positive, got {w}x{h}")
    tiles = s.tiles
    grid = [[-1] * w for _ in range(h)]
    nodes = 0

    def fits(tile: WangTile, x: int, y: int) -> bool:
        if x > 0 and tiles[grid[y][x - 1]].east != tile.west:
            return False
        if y > 0 and tiles[grid[y - 1][x]].north != tile.south:
            return False
        if x == w - 1:
            east = tile if w == 1 else tiles[grid[y][0]]
            if tile.east != east.west:
                return False
        if y == h - 1:
            north = tile if h == 1 else tiles[grid[0][x]]
            if tile.north != north.south:
                return False
        return True

    def place(pos: int) -> bool:
        nonlocal nodes
        if pos == w * h:
            return True
        y, x = divmod(pos, w)
        for k, tile in enumerate(tiles):
            nodes += 1
            if nodes > budget:
                raise _Budget
            if not fits(tile, x, y):
                continue
            grid[y][x] = k
            if place(pos + 1):
                return True
            grid[y][x] = -1
        return False

    try:
        found = place(0)
    except _Budget:
        logger.info(f"Budget of {budget} nodes exhausted on {w}x{h}")
        return SolveOutcome(SolveStatus.UNKNOWN, None, nodes)
    if not found:
        logger.debug(f"No {w}x{h} torus tiling ({nodes} nodes)")
        return SolveOutcome(SolveStatus.NONE, None, nodes)
    tiling = TorusTiling(w, h, grid)
    logger.debug(f"Found {w}x{h} torus tiling after {nodes} nodes")
    return SolveOutcome(SolveStatus.FOUND, tiling, nodes)


def solve_any_torus(s: WangTileSet, max_side: int, budget: int = 1_000_000) -> SolveOutcome:
    """
    Try tori of increasing area (then width) up to ``max_side`` per side.

    Returns the first ``FOUND`` outcome; ``UNKNOWN`` if any size ran out of
    budget without a later success; ``NONE`` otherwise.
    """
    sizes = sorted(
        ((w, h) for w in range(1, max_side + 1) for h in range(1, max_side + 1)),
        key=lambda wh: (wh[0] * wh[1], wh[0]),
    )
    unknown = False
    nodes = 0
    for w, h in sizes:
        out = solve_torus(s, w, h, budget)
        nodes += out.nodes
        if out.status is SolveStatus.FOUND:
            return SolveOutcome(SolveStatus.FOUND, out.tiling, nodes)
        unknown |= out.status is SolveStatus.UNKNOWN
    return SolveOutcome(SolveStatus.UNKNOWN if unknown else SolveStatus.NONE, None, nodes)


def enumerate_tori(s: WangTileSet, w: int, h: int) -> Iterator[TorusTiling]:
    """
    Every valid ``w x h`` torus tiling, by brute force over all ``n**(w*h)`` grids.

    Grids come in lexicographic order of their row-major entries, so the
    first one equals the :func:`solve_torus` result.
    """
    for flat in product(range(s.n), repeat=w * h):
        g = TorusTiling(w, h, [flat[y * w : (y + 1) * w] for y in range(h)])
        if valid_torus(s, g):
            yield g


def repeat_torus(g: TorusTiling, kx: int, ky: int) -> TorusTiling:
    """The ``kx`` by ``ky`` repetition of a torus, again a valid torus."""
    if kx < 1 or ky < 1:
        raise ValueError(f"Repetition factors must be positive, got {kx}x{ky}")
    rows = [tuple(g.grid[y % g.h][x % g.w] for x in range(g.w * kx)) for y in range(g.h * ky)]
    return TorusTiling(g.w * kx, g.h * ky, rows)


def serialize_torus(g: TorusTiling) -> str:
    """``w h`` on the first line, then rows from row 0 upward."""
    lines = [f"{g.w} {g.h}"] + [" ".join(str(v) for v in row) for row in g.grid]
    return "\n".join(lines) + "\n"


def parse_torus(text: str) -> TorusTiling:
    """
    Inverse of :func:`serialize_torus`.

    Raises
    ------
    WangParseError
    """
    lines = [(k, ln.split("#", 1)[0].split()) for k, ln in enumerate(text.splitlines(), 1)]
    lines = [(k, parts) for k, parts in lines if parts]
    if not lines:
        raise WangParseError(0, "empty tiling")
    k0, head = lines[0]
    try:
        w, h = (int(v) for v in head)
    except ValueError:
        raise WangParseError(k0, f"expected 'w h', got {' '.join(head)!r}")
    rows = []
    for k, parts in lines[1:]:
        if len(parts) != w:
            raise WangParseError(k, f"expected {w} entries, got {len(parts)}")
        try:
            rows.append([int(v) for v in parts])
        except ValueError:
            raise WangParseError(k, "tile indices must be integers")
    if len(rows) != h:
        raise WangParseError(lines[-1][0], f"expected {h} rows, got {len(rows)}")
    return TorusTiling(w, h, rows)
