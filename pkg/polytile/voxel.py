"""
Integer voxel geometry.

Cells are unit cubes addressed by integer ``(x, y, z)`` with x pointing
east, y north and z up. A :class:`CellSet` keeps its cells in a single
``(k, 3)`` integer array sorted by ``(z, y, x)``, so equal sets compare and
hash equal and serialize identically.

Periodic packings are checked on a fundamental domain of a lattice: every
cell is reduced to its residue class with a Hermite normal form of the
lattice basis and coverage is counted in a dense array of residues.
"""

from __future__ import annotations

from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from attrs import define, field
from loguru import logger
from scipy import ndimage


__all__ = [
    "Cell",
    "CellSet",
    "Polycube",
    "LatticeBasis",
    "ResidueMap",
    "PackingReport",
    "translate",
    "overlaps",
    "is_connected",
    "components",
    "rotate_z_180",
    "rotate_axis_90",
    "volume",
    "bbox",
    "residue_counts",
    "linear_keys",
    "verify_packing",
    "verify_periodic_partition",
]

_DTYPE = np.int32
_FACE_NEIGHBOURS = ndimage.generate_binary_structure(3, 1)


class Cell(NamedTuple):
    x: int
    y: int
    z: int


def _as_array(cells) -> np.ndarray:
    if isinstance(cells, CellSet):
        return cells.cells
    if not isinstance(cells, np.ndarray):
        cells = list(cells)
    arr = np.asarray(cells)
    if arr.size == 0:
        return np.zeros((0, 3), dtype=_DTYPE)
    arr = arr.reshape(-1, 3)
    if not np.issubdtype(arr.dtype, np.integer):
        raise ValueError("Cell coordinates must be integers")
    return arr


def _zyx(cell) -> Tuple[int, int, int]:
    return int(cell[2]), int(cell[1]), int(cell[0])


def linear_keys(arrays: Sequence[np.ndarray]):
    """
    Map several (k, 3) arrays onto int64 keys ordered like (z, y, x).

    Returns the keys for each array and a decoder back to coordinates.
    """
    nonempty = [a for a in arrays if len(a)]
    if not nonempty:
        lo = np.zeros(3, dtype=np.int64)
        span = np.ones(3, dtype=np.int64)
    else:
        lo = np.min([a.min(axis=0) for a in nonempty], axis=0).astype(np.int64)
        hi = np.max([a.max(axis=0) for a in nonempty], axis=0).astype(np.int64)
        span = hi - lo + 1

    def encode(a):
        a = a.astype(np.int64) - lo
        return (a[:, 2] * span[1] + a[:, 1]) * span[0] + a[:, 0]

    def decode(keys):
        keys = np.asarray(keys, dtype=np.int64)
        x = keys % span[0]
        y = (keys // span[0]) % span[1]
        z = keys // (span[0] * span[1])
        return (np.stack([x, y, z], axis=1) + lo).astype(_DTYPE)

    return [encode(a) for a in arrays], decode


class CellSet:
    """
    Immutable finite set of unit cells.

    Parameters
    ----------
    cells : array-like of shape (k, 3), iterable of triples or CellSet
        Duplicates are dropped and cells are sorted by ``(z, y, x)``.
    """

    __slots__ = ("_cells", "_hash")

    def __init__(self, cells=()):
        arr = _as_array(cells)
        if isinstance(cells, CellSet):
            self._cells = cells._cells
        else:
            (keys,), decode = linear_keys([arr])
            self._cells = decode(np.unique(keys))
        self._cells.setflags(write=False)
        self._hash = None

    @classmethod
    def _from_sorted(cls, arr: np.ndarray) -> "CellSet":
        # caller guarantees (z, y, x) order and no duplicates
        obj = cls.__new__(cls)
        obj._cells = np.ascontiguousarray(arr, dtype=_DTYPE)
        obj._cells.setflags(write=False)
        obj._hash = None
        return obj

    @classmethod
    def from_grid(cls, grid: np.ndarray, origin=(0, 0, 0)) -> "CellSet":
        """
        Build from a boolean grid indexed ``[z, y, x]``.

        Parameters
        ----------
        grid : numpy.ndarray
            Boolean occupancy.
        origin : tuple of int
            Coordinates of ``grid[0, 0, 0]``.
        """
        zs, ys, xs = np.nonzero(grid)
        arr = np.stack([xs, ys, zs], axis=1).astype(_DTYPE) + np.asarray(
            origin, dtype=_DTYPE
        )
        return cls._from_sorted(arr)

    @classmethod
    def box(cls, lo, hi) -> "CellSet":
        """All cells with ``lo <= cell < hi`` componentwise."""
        shape = tuple(int(h - l) for l, h in zip(lo[::-1], hi[::-1]))
        return cls.from_grid(np.ones(shape, dtype=bool), origin=lo)

    @property
    def cells(self) -> np.ndarray:
        return self._cells

    def __len__(self):
        return len(self._cells)

    def __bool__(self):
        return len(self._cells) > 0

    def __iter__(self):
        for x, y, z in self._cells.tolist():
            yield Cell(x, y, z)

    def __contains__(self, cell):
        c = np.asarray(cell, dtype=_DTYPE).reshape(1, 3)
        return bool(np.any(np.all(self._cells == c, axis=1)))

    def __eq__(self, other):
        if not isinstance(other, CellSet):
            return NotImplemented
        return self._cells.shape == other._cells.shape and bool(
            np.array_equal(self._cells, other._cells)
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._cells.tobytes())
        return self._hash

    def __repr__(self):
        if len(self) <= 6:
            return f"CellSet({self._cells.tolist()})"
        return f"CellSet(<{len(self)} cells>)"

    def _combine(self, other, op) -> "CellSet":
        other = other if isinstance(other, CellSet) else CellSet(other)
        (ka, kb), decode = linear_keys([self._cells, other._cells])
        return CellSet._from_sorted(decode(op(ka, kb)))

    def __or__(self, other):
        other = other if isinstance(other, CellSet) else CellSet(other)
        if self and other and _zyx(self._cells[-1]) < _zyx(other._cells[0]):
            # other lies entirely after self in (z, y, x) order
            return CellSet._from_sorted(np.concatenate([self._cells, other._cells]))
        return self._combine(other, np.union1d)

    def __and__(self, other):
        return self._combine(other, np.intersect1d)

    def __sub__(self, other):
        return self._combine(other, np.setdiff1d)

    def isdisjoint(self, other) -> bool:
        return not overlaps(self, other)

    def translate(self, v) -> "CellSet":
        return translate(self, v)

    def canonical(self) -> "CellSet":
        """Translate so that the bounding-box corner sits at the origin."""
        if not self:
            return self
        return translate(self, -self._cells.min(axis=0))

    def to_grid(self) -> Tuple[np.ndarray, Cell]:
        """
        Dense boolean grid indexed ``[z, y, x]`` and the origin it starts at.
        """
        if not self:
            return np.zeros((0, 0, 0), dtype=bool), Cell(0, 0, 0)
        lo = self._cells.min(axis=0)
        hi = self._cells.max(axis=0)
        shape = tuple((hi - lo + 1)[::-1])
        grid = np.zeros(shape, dtype=bool)
        for start in range(0, len(self._cells), 1 << 20):
            rel = self._cells[start : start + (1 << 20)] - lo
            grid[rel[:, 2], rel[:, 1], rel[:, 0]] = True
        return grid, Cell(*(int(v) for v in lo))

    def layer(self, z: int) -> frozenset:
        """Cells of the horizontal section at height ``z`` as ``(x, y)`` pairs."""
        sel = self.zrange(z, z + 1).cells
        return frozenset((int(x), int(y)) for x, y in sel[:, :2].tolist())

    def zrange(self, z0: int, z1: int) -> "CellSet":
        """Cells with ``z0 <= z < z1``."""
        z = self._cells[:, 2]
        lo, hi = np.searchsorted(z, [z0, z1])
        return CellSet._from_sorted(self._cells[lo:hi])

    def within(self, lo, hi) -> "CellSet":
        """Cells inside the half-open box ``[lo, hi)``."""
        mask = np.all((self._cells >= lo) & (self._cells < hi), axis=1)
        return CellSet._from_sorted(self._cells[mask])


class Polycube(CellSet):
    """
    A nonempty, face-connected :class:`CellSet`.

    Raises
    ------
    ValueError
        If the cells are empty or split into several components.
    """

    __slots__ = ()

    def __init__(self, cells=()):
        super().__init__(cells)
        self._validate()

    def _validate(self):
        if not len(self):
            logger.error("A polycube cannot be empty")
            raise ValueError("A polycube cannot be empty")
        if not is_connected(self):
            logger.error(f"Cells of {self!r} are not face-connected")
            raise ValueError(f"Cells of {self!r} are not face-connected")

    @classmethod
    def of(cls, cells: CellSet, validate: bool = True) -> "Polycube":
        obj = cls.__new__(cls)
        obj._cells = cells.cells
        obj._hash = None
        if validate:
            obj._validate()
        return obj


def translate(c, v) -> CellSet:
    """
    Translate a cell set by a vector.

    Parameters
    ----------
    c : CellSet
    v : Cell or tuple of int

    Returns
    -------
    CellSet
    """
    c = c if isinstance(c, CellSet) else CellSet(c)
    out = CellSet._from_sorted(c.cells + np.asarray(v, dtype=_DTYPE))
    if isinstance(c, Polycube):
        return Polycube.of(out, validate=False)
    return out


def overlaps(a, b) -> bool:
    """True iff the two sets share a cell."""
    a = a if isinstance(a, CellSet) else CellSet(a)
    b = b if isinstance(b, CellSet) else CellSet(b)
    if not a or not b:
        return False
    (ka, kb), _ = linear_keys([a.cells, b.cells])
    return bool(np.isin(ka, kb, assume_unique=True).any())


def is_connected(c) -> bool:
    """
    True iff the cells form one face-connected component.

    The empty set counts as connected.
    """
    c = c if isinstance(c, CellSet) else CellSet(c)
    if len(c) <= 1:
        return True
    grid, _ = c.to_grid()
    _, num = ndimage.label(grid, structure=_FACE_NEIGHBOURS)
    return num == 1


def components(c) -> List[CellSet]:
    """Face-connected components, largest first."""
    c = c if isinstance(c, CellSet) else CellSet(c)
    if not c:
        return []
    grid, origin = c.to_grid()
    labels, num = ndimage.label(grid, structure=_FACE_NEIGHBOURS)
    parts = [CellSet.from_grid(labels == k, origin) for k in range(1, num + 1)]
    return sorted(parts, key=len, reverse=True)


def _rotated(c, matrix, renormalize) -> CellSet:
    c = c if isinstance(c, CellSet) else CellSet(c)
    arr = c.cells @ np.asarray(matrix, dtype=_DTYPE).T
    out = CellSet(arr)
    return out.canonical() if renormalize else out


def rotate_z_180(c, renormalize: bool = True) -> CellSet:
    """
    Half turn about the vertical axis, ``(x, y, z) -> (-x, -y, z)``.

    With ``renormalize`` the bounding-box corner is moved back to the origin.
    """
    return _rotated(c, [[-1, 0, 0], [0, -1, 0], [0, 0, 1]], renormalize)


_QUARTER_TURNS = {
    # direction +1 turns the first remaining axis toward the second
    "z": [[0, -1, 0], [1, 0, 0], [0, 0, 1]],  # x -> y
    "y": [[0, 0, -1], [0, 1, 0], [1, 0, 0]],  # x -> z
    "x": [[1, 0, 0], [0, 0, -1], [0, 1, 0]],  # y -> z
}


def rotate_axis_90(c, axis: str, direction: int = 1, renormalize: bool = True) -> CellSet:
    """
    Quarter turn about a coordinate axis.

    Parameters
    ----------
    c : CellSet
    axis : {'x', 'y', 'z'}
    direction : {1, -1}
        ``+1`` turns east into north about ``z``, east into up about ``y``
        and north into up about ``x``; ``-1`` is the inverse turn.
    renormalize : bool
        Move the bounding-box corner back to the origin.
    """
    if axis not in _QUARTER_TURNS or direction not in (1, -1):
        logger.error(f"Unknown rotation axis={axis!r} direction={direction!r}")
        raise ValueError(f"Unknown rotation axis={axis!r} direction={direction!r}")
    m = np.asarray(_QUARTER_TURNS[axis])
    if direction == -1:
        m = m.T
    return _rotated(c, m, renormalize)


def volume(c) -> int:
    return len(c)


def bbox(c) -> Tuple[Cell, Cell]:
    """Smallest and largest corner cells; raises on an empty set."""
    c = c if isinstance(c, CellSet) else CellSet(c)
    if not c:
        raise ValueError("Empty cell set has no bounding box")
    lo = c.cells.min(axis=0)
    hi = c.cells.max(axis=0)
    return Cell(*(int(v) for v in lo)), Cell(*(int(v) for v in hi))


def _to_vectors(value) -> Tuple[Tuple[int, int, int], ...]:
    vecs = tuple(tuple(int(x) for x in v) for v in value)
    if len(vecs) != 3 or any(len(v) != 3 for v in vecs):
        raise ValueError(f"A lattice basis needs three 3-vectors, got {value}")
    return vecs


def _det3(m) -> int:
    (a, b, c), (d, e, f), (g, h, i) = m
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


@define(frozen=True)
class LatticeBasis:
    """
    Three integer vectors spanning a full-rank sublattice of Z^3.

    Raises
    ------
    ValueError
        If the determinant is zero.
    """

    vectors: Tuple[Tuple[int, int, int], ...] = field(converter=_to_vectors)

    @vectors.validator
    def _check_det(self, attribute, value):
        if _det3(value) == 0:
            raise ValueError(f"Degenerate lattice basis {value}")

    @property
    def det(self) -> int:
        return abs(_det3(self.vectors))

    def scaled(self, k: int) -> "LatticeBasis":
        return LatticeBasis([[k * x for x in v] for v in self.vectors])

    def contains(self, v) -> bool:
        """True iff ``v`` is an integer combination of the basis vectors."""
        rmap = ResidueMap(self)
        return int(rmap.index(np.asarray([v]))[0]) == int(rmap.index(np.zeros((1, 3)))[0])


def _hermite_rows(vectors) -> List[List[int]]:
    """Upper-triangular integer basis of the same lattice."""
    m = [list(v) for v in vectors]
    for col in range(3):
        for r in range(col + 1, 3):
            while m[r][col] != 0:
                q = m[col][col] // m[r][col]
                m[col] = [a - q * b for a, b in zip(m[col], m[r])]
                m[col], m[r] = m[r], m[col]
        if m[col][col] < 0:
            m[col] = [-a for a in m[col]]
    return m


class ResidueMap:
    """
    Residue classes of Z^3 modulo a lattice.

    Every cell is reduced into the box ``[0, d1) x [0, d2) x [0, d3)``
    spanned by the diagonal of the Hermite form, which holds exactly one
    representative per class.
    """

    def __init__(self, basis):
        self.basis = basis if isinstance(basis, LatticeBasis) else LatticeBasis(basis)
        self.rows = np.asarray(_hermite_rows(self.basis.vectors), dtype=np.int64)
        self.d = tuple(int(self.rows[k, k]) for k in range(3))
        self.size = self.d[0] * self.d[1] * self.d[2]
        assert self.size == self.basis.det

    def reduce(self, points: np.ndarray) -> np.ndarray:
        """Representatives (in the box) of the given ``(k, 3)`` points."""
        p = np.array(points, dtype=np.int64).reshape(-1, 3)
        for k in range(3):
            q = np.floor_divide(p[:, k], self.d[k])
            p -= q[:, None] * self.rows[k]
        return p

    def index(self, points: np.ndarray) -> np.ndarray:
        p = self.reduce(points)
        d1, d2, d3 = self.d
        return (p[:, 0] * d2 + p[:, 1]) * d3 + p[:, 2]

    def point(self, index) -> np.ndarray:
        """Box representatives of residue indices."""
        idx = np.asarray(index, dtype=np.int64).reshape(-1)
        d1, d2, d3 = self.d
        z = idx % d3
        y = (idx // d3) % d2
        x = idx // (d2 * d3)
        return np.stack([x, y, z], axis=1)


@define(frozen=True)
class PackingReport:
    overlap_cells: CellSet
    multiplicity_ok: bool


def residue_counts(ps, rmap: ResidueMap, chunk: int = 1 << 20, out: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Coverage count of every residue class, clipped at 3.

    Cells of consecutive pieces are batched, so many small pieces cost
    about as much as one large one.

    Parameters
    ----------
    ps : iterable of (CellSet, offset)
    rmap : ResidueMap
    chunk : int
        Number of cells reduced at once.
    out : numpy.ndarray, optional
        Counts to add to, updated in place.

    Returns
    -------
    numpy.ndarray of uint8, length ``rmap.size``
    """
    counts = np.zeros(rmap.size, dtype=np.uint8) if out is None else out
    batch: List[np.ndarray] = []
    pending = 0

    def flush():
        idx, cnt = np.unique(rmap.index(np.concatenate(batch)), return_counts=True)
        counts[idx] = np.minimum(counts[idx] + cnt, 3)
        batch.clear()

    for shape, offset in ps:
        cells = shape.cells
        off = np.asarray(offset, dtype=np.int64)
        for start in range(0, len(cells), chunk):
            part = cells[start : start + chunk].astype(np.int64) + off
            batch.append(part)
            pending += len(part)
            if pending >= chunk:
                flush()
                pending = 0
    if batch:
        flush()
    return counts


def verify_packing(ps, basis=None) -> PackingReport:
    """
    Check that translated cell sets do not overlap.

    Parameters
    ----------
    ps : list of (CellSet, offset)
    basis : LatticeBasis, optional
        When given, the packing is the periodic one generated by the lattice
        and cells are compared by residue class.

    Returns
    -------
    PackingReport
        ``overlap_cells`` holds the cells (or residue representatives)
        covered at least twice.
    """
    ps = list(ps)
    if basis is not None:
        rmap = ResidueMap(basis)
        counts = residue_counts(ps, rmap)
        bad = np.flatnonzero(counts >= 2)
        over = CellSet(rmap.point(bad)) if len(bad) else CellSet()
    else:
        arrays = [s.cells.astype(np.int64) + np.asarray(o, dtype=np.int64) for s, o in ps]
        if arrays:
            keys, decode = linear_keys(arrays)
            uniq, cnt = np.unique(np.concatenate(keys), return_counts=True)
            over = CellSet._from_sorted(decode(uniq[cnt >= 2]))
        else:
            over = CellSet()
    if len(over):
        logger.debug(f"Packing has {len(over)} multiply covered cells")
    return PackingReport(overlap_cells=over, multiplicity_ok=not len(over))


def verify_periodic_partition(ps, basis) -> bool:
    """
    True iff the lattice translates of the placements partition space.

    Every residue class must be covered exactly once and the placed volume
    must equal the lattice determinant.

    Raises
    ------
    ValueError
        If the basis is degenerate.
    """
    rmap = ResidueMap(basis)
    ps = list(ps)
    total = sum(len(s) for s, _ in ps)
    if total != rmap.size:
        logger.debug(f"Placed volume {total} differs from determinant {rmap.size}")
        return False
    counts = residue_counts(ps, rmap)
    ok = bool(np.all(counts == 1))
    logger.debug(f"Periodic partition over {rmap.size} residues: {ok}")
    return ok
