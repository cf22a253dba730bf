"""
Can a polyomino tile the plane by translations alone?

A simply connected polyomino tiles the plane by translations iff its
boundary word, read as a cyclic word over ``U, D, L, R``, factors as
``A B C A^ B^ C^`` where ``X^`` is ``X`` read backwards with every step
reversed and at most one factor is empty. This is decided by trying every
cyclic rotation and every split.

An independent check is an exact cover search: a translational tiling of
the plane restricts to a cover of every finite window by disjoint
translates, so a window that cannot be covered is a witness that no
tiling exists.
"""

from __future__ import annotations

from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from attrs import define
from loguru import logger

from polytile.blocks import build_cross


__all__ = [
    "UnsupportedPolyomino",
    "Factorization",
    "polyomino_from_text",
    "boundary_word",
    "hat",
    "bn_exact_factorization",
    "brute_force_region_tileable",
    "find_obstruction",
    "enumerate_polyominoes",
    "filler_projection",
]

Polyomino = FrozenSet[Tuple[int, int]]

_STEP = {"R": (1, 0), "U": (0, 1), "L": (-1, 0), "D": (0, -1)}
_REVERSE = {"R": "L", "L": "R", "U": "D", "D": "U"}


class UnsupportedPolyomino(ValueError):
    """The polyomino has a hole, a pinch point or several pieces."""


@define(frozen=True)
class Factorization:
    """``rotation`` steps are moved from the front of the word to the back."""

    rotation: int
    a: str
    b: str
    c: str

    def word(self) -> str:
        return self.a + self.b + self.c + hat(self.a) + hat(self.b) + hat(self.c)

    def periods(self) -> Tuple[Tuple[int, int], Tuple[int, int]]:
        """
        Two vectors spanning the lattice of the tiling the factorization
        gives: the displacements of ``a b`` and of ``b c``.
        """
        return _displacement(self.a + self.b), _displacement(self.b + self.c)


def _displacement(path: str) -> Tuple[int, int]:
    return (
        sum(_STEP[s][0] for s in path),
        sum(_STEP[s][1] for s in path),
    )


def polyomino_from_text(text: str) -> Polyomino:
    """
    Parse a polyomino.

    Either ASCII art with ``#`` for filled cells (the first line is the
    northmost row) or one ``x y`` pair per line.

    Raises
    ------
    ValueError
        On an empty or malformed description.
    """
    lines = [ln.rstrip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        logger.error("Empty polyomino")
        raise ValueError("Empty polyomino")
    if all(set(ln) <= set("#.") for ln in lines):
        h = len(lines)
        cells = frozenset(
            (x, h - 1 - j) for j, ln in enumerate(lines) for x, ch in enumerate(ln) if ch == "#"
        )
        if not cells:
            raise ValueError("Polyomino art has no filled cell")
        return cells
    cells = set()
    for lineno, ln in enumerate(lines, start=1):
        parts = ln.split()
        if len(parts) != 2:
            logger.error(f"Line {lineno}: expected 'x y', got {ln!r}")
            raise ValueError(f"Line {lineno}: expected 'x y', got {ln!r}")
        cells.add((int(parts[0]), int(parts[1])))
    return frozenset(cells)


def boundary_word(p: Iterable[Tuple[int, int]]) -> str:
    """
    Counterclockwise boundary of a polyomino.

    The trace starts at the lexicographically least boundary vertex and
    keeps the interior on its left.

    Parameters
    ----------
    p : iterable of (int, int)
        Cells, each the unit square with lower-left corner ``(x, y)``.

    Returns
    -------
    str
        Word over ``RULD``; the unit square gives ``"RULD"``.

    Raises
    ------
    UnsupportedPolyomino
        If the boundary is not one simple closed curve.
    """
    cells = set(p)
    if not cells:
        raise UnsupportedPolyomino("Empty polyomino")
    edges: Dict[Tuple[int, int], List[str]] = {}
    for x, y in cells:
        if (x, y - 1) not in cells:
            edges.setdefault((x, y), []).append("R")
        if (x + 1, y) not in cells:
            edges.setdefault((x + 1, y), []).append("U")
        if (x, y + 1) not in cells:
            edges.setdefault((x + 1, y + 1), []).append("L")
        if (x - 1, y) not in cells:
            edges.setdefault((x, y + 1), []).append("D")
    pinched = [v for v, out in edges.items() if len(out) > 1]
    if pinched:
        logger.error(f"Boundary touches itself at {sorted(pinched)[0]}")
        raise UnsupportedPolyomino(f"Boundary touches itself at {sorted(pinched)[0]}")

    start = min(edges)
    word = []
    v = start
    while True:
        step = edges[v][0]
        word.append(step)
        dx, dy = _STEP[step]
        v = (v[0] + dx, v[1] + dy)
        if v == start:
            break
    total = sum(len(out) for out in edges.values())
    if len(word) != total:
        logger.error(f"Boundary has several cycles ({len(word)} of {total} edges traced)")
        raise UnsupportedPolyomino(
            f"Boundary has several cycles ({len(word)} of {total} edges traced)"
        )
    return "".join(word)


def hat(w: str) -> str:
    """The same path walked backwards."""
    return "".join(_REVERSE[s] for s in reversed(w))


def bn_exact_factorization(w: str) -> Optional[Factorization]:
    """
    Find ``w = A B C A^ B^ C^`` up to rotation, at most one factor empty.

    Parameters
    ----------
    w : str
        Closed boundary word.

    Returns
    -------
    Factorization or None
        The first factorization by rotation, then ``len(A)``, then
        ``len(B)``; None when the polyomino is not an exact tile.
    """
    n = len(w)
    if n % 2:
        return None
    half = n // 2
    for r in range(n):
        rot = w[r:] + w[:r]
        first, second = rot[:half], rot[half:]
        for i in range(half + 1):
            for j in range(i, half + 1):
                a, b, c = first[:i], first[i:j], first[j:]
                if sum(not f for f in (a, b, c)) > 1:
                    continue
                if hat(a) + hat(b) + hat(c) == second:
                    logger.trace(f"Factorization of {w}: {a}|{b}|{c} at rotation {r}")
                    return Factorization(r, a, b, c)
    return None


def _anchored(tile: Polyomino) -> List[Tuple[int, int]]:
    return sorted(tile, key=lambda c: (c[1], c[0]))


def brute_force_region_tileable(tile: Iterable[Tuple[int, int]], region: Iterable[Tuple[int, int]]) -> bool:
    """
    True iff ``region`` is exactly partitioned by translates of ``tile``.

    The least uncovered cell (by row, then column) must be covered by the
    least cell of a translate, which leaves one candidate per step.
    """
    tile = _anchored(frozenset(tile))
    rest = set(region)
    if len(rest) % len(tile):
        return False
    ax, ay = tile[0]

    def cover() -> bool:
        if not rest:
            return True
        x, y = min(rest, key=lambda c: (c[1], c[0]))
        placed = [(x + tx - ax, y + ty - ay) for tx, ty in tile]
        if not all(c in rest for c in placed):
            return False
        rest.difference_update(placed)
        if cover():
            return True
        rest.update(placed)
        return False

    return cover()


def _window_coverable(tile: List[Tuple[int, int]], window: Set[Tuple[int, int]]) -> bool:
    """Cover every window cell exactly once; translates may stick out."""
    covered: Set[Tuple[int, int]] = set()

    def options(cell):
        x, y = cell
        out = []
        for ax, ay in tile:
            placed = [(x + tx - ax, y + ty - ay) for tx, ty in tile]
            if covered.isdisjoint(placed):
                out.append(placed)
        return out

    def search() -> bool:
        open_cells = window - covered
        if not open_cells:
            return True
        # most constrained cell first
        best = None
        for cell in sorted(open_cells):
            opts = options(cell)
            if best is None or len(opts) < len(best):
                best = opts
                if not opts:
                    return False
        for placed in best:
            covered.update(placed)
            if search():
                return True
            covered.difference_update(placed)
        return False

    return search()


def find_obstruction(tile: Iterable[Tuple[int, int]], max_window: int = 15) -> Optional[Polyomino]:
    """
    Smallest centred square window that no packing of translates covers.

    Parameters
    ----------
    tile : iterable of (int, int)
    max_window : int
        Largest window side tried.

    Returns
    -------
    frozenset of (int, int) or None
        The window cells, or None if every window up to ``max_window``
        can be covered.
    """
    tile = _anchored(frozenset(tile))
    for side in range(1, max_window + 1):
        lo = -(side // 2)
        window = {(x, y) for x in range(lo, lo + side) for y in range(lo, lo + side)}
        if not _window_coverable(tile, window):
            logger.debug(f"No cover of the {side}x{side} window")
            return frozenset(window)
    return None


def _canonical(cells: Iterable[Tuple[int, int]]) -> Polyomino:
    cells = list(cells)
    mx = min(x for x, _ in cells)
    my = min(y for _, y in cells)
    return frozenset((x - mx, y - my) for x, y in cells)


def enumerate_polyominoes(k: int) -> List[Polyomino]:
    """
    All fixed polyominoes with 1 to ``k`` cells.

    Returns
    -------
    list of frozenset
        Sorted by size, then by sorted cell list.
    """
    if k < 1:
        return []
    level = {frozenset({(0, 0)})}
    out = list(level)
    for _ in range(k - 1):
        grown = set()
        for p in level:
            for x, y in p:
                for dx, dy in _STEP.values():
                    c = (x + dx, y + dy)
                    if c not in p:
                        grown.add(_canonical(p | {c}))
        level = grown
        out.extend(level)
    return sorted(out, key=lambda p: (len(p), sorted(p)))


def filler_projection() -> Polyomino:
    """Horizontal projection of the filler, which is one voxel high."""
    return build_cross().layer(0)
