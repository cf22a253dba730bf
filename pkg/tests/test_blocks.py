import pytest

from polytile.blocks import BAR
from polytile.blocks import CUBE
from polytile.blocks import BlockKind
from polytile.blocks import BumpShape
from polytile.blocks import Facing
from polytile.blocks import GeometryError
from polytile.blocks import axis_feature
from polytile.blocks import back_to_back
from polytile.blocks import build_block
from polytile.blocks import build_cross
from polytile.blocks import cavity
from polytile.blocks import check_mating_contract
from polytile.blocks import flanking_blocks
from polytile.blocks import load_geometry_table
from polytile.blocks import mating_offsets
from polytile.blocks import overlay_z_bump
from polytile.blocks import probe_cells
from polytile.voxel import Cell
from polytile.voxel import CellSet
from polytile.voxel import bbox
from polytile.voxel import is_connected
from polytile.voxel import rotate_axis_90
from polytile.voxel import rotate_z_180
from polytile.voxel import translate


@pytest.mark.parametrize(
    "kind, cells",
    [
        ("N", 1373),
        ("F", 1373),
        ("E", 1382),
        ("M", 1353),
        ("Mplus", 1371),
        ("Xplus", 348),
        ("Xminus", 338),
        ("Yplus", 348),
        ("Yminus", 338),
        ("Zplus", 348),
        ("Zminus", 338),
        ("Cross", 9),
    ],
)
def test_block_volumes(kind, cells):
    assert len(build_block(kind)) == cells


@pytest.mark.parametrize("kind", ["N", "F", "E", "M", "Mplus"])
def test_bar_facings_share_the_body_box(kind):
    body = CellSet.box((0, 0, 0), BAR)
    for facing in Facing:
        block = build_block(kind, facing)
        assert is_connected(block)
        assert len(block & body) == len(body - cavity(kind, facing))


def test_south_facing_is_the_half_turn():
    north = build_block("N", Facing.NORTH)
    south = build_block("N", Facing.SOUTH)
    flipped = CellSet([(BAR[0] - 1 - x, BAR[1] - 1 - y, z) for x, y, z in north])
    assert south == flipped


def test_cube_blocks_reject_a_facing():
    with pytest.raises(ValueError):
        build_block("Xplus", Facing.NORTH)
    with pytest.raises(ValueError):
        build_block("Cross", "south")


def test_cross_is_a_plus_sign():
    cross = build_cross()
    assert len(cross) == 9
    assert cross.layer(0) == frozenset(
        [(x, 2) for x in range(5)] + [(2, y) for y in (0, 1, 3, 4)]
    )
    assert cross.isdisjoint(translate(cross, (5, 0, 0)))
    assert not cross.isdisjoint(translate(cross, (3, 0, 0)))


def test_bump_shape_footprints():
    assert len(BumpShape.CrossBump.footprint) == 9
    assert len(BumpShape.LBump.footprint) == 10
    assert len(BumpShape.AxisBump.footprint) == 5
    assert len(BumpShape.LCrossCompound.footprint) == 19


def test_axis_features_are_five_cells():
    cube = CellSet.box((0, 0, 0), (CUBE,) * 3)
    for kind in ("Xplus", "Yplus", "Zplus"):
        bump = axis_feature(kind)
        assert len(bump) == 5 and bump.isdisjoint(cube)
    for kind in ("Xminus", "Yminus", "Zminus"):
        dent = axis_feature(kind)
        assert len(dent) == 5 and len(dent & cube) == 5
    assert axis_feature("Zplus").cells[:, 2].min() == CUBE


def test_probe_cells_sit_on_the_code_bumps():
    for facing in Facing:
        near, far = probe_cells(facing)
        assert near in build_block("N", facing) and near not in build_block("F", facing)
        assert far in build_block("F", facing) and far not in build_block("N", facing)
        assert near.z == far.z == 3


def test_geometry_table_columns():
    df = load_geometry_table()
    assert list(df.columns) == ["kind", "role", "shape", "x", "y", "z", "turn"]
    assert set(df["z"]) == {3}


def test_mating_contract_holds():
    assert check_mating_contract()


@pytest.mark.parametrize("south, north", [("N", "N"), ("F", "F")])
def test_matching_codes_fill_the_joint_cavity(south, north):
    pair, hole = back_to_back("M")
    found = mating_offsets(pair, flanking_blocks(south, north), hole, window=1)
    assert found == [(Cell(0, 0, 0), Cell(0, 0, 0))]


@pytest.mark.parametrize("south, north", [("N", "F"), ("F", "N"), ("E", "E")])
def test_mismatched_codes_never_mate(south, north):
    pair, hole = back_to_back("M")
    assert mating_offsets(pair, flanking_blocks(south, north), hole, window=1) == []


def test_z_bump_overlay():
    cube = CellSet.box((0, 0, 0), (CUBE,) * 3)
    topped = overlay_z_bump(cube, (0, 0, 0))
    assert len(topped) == len(cube) + 5
    with pytest.raises(GeometryError):
        overlay_z_bump(topped, (0, 0, 0))


@pytest.mark.parametrize("south, north", [("N", "N"), ("F", "F")])
def test_matching_codes_mate_only_in_place_within_two_voxels(south, north):
    pair, hole = back_to_back("M")
    found = mating_offsets(pair, flanking_blocks(south, north), hole, window=2)
    assert found == [(Cell(0, 0, 0), Cell(0, 0, 0))]


@pytest.mark.parametrize("axis", ["X", "Y", "Z"])
@pytest.mark.parametrize("shape", [BumpShape.CrossBump, BumpShape.LBump])
def test_axis_bumps_never_fill_code_dents(axis, shape):
    hole = CellSet([(x, y, 0) for x, y in shape.footprint])
    lo, hi = bbox(hole)
    host = CellSet.box((lo.x - 2, lo.y - 2, -2), (hi.x + 3, hi.y + 3, 1)) - hole
    bump = axis_feature(f"{axis}plus")
    corner = bbox(bump)[0]
    guest = translate(bump, Cell(-corner.x, -corner.y, -corner.z))
    for _ in range(4):
        placed = translate(guest, Cell(lo.x, lo.y, 0))
        assert mating_offsets(host, [placed], hole, window=2) == []
        guest = rotate_axis_90(guest, "z")


@pytest.mark.parametrize("kind", list(BlockKind))
def test_rotations_keep_volume_and_connectivity(kind):
    block = build_block(kind)
    for turned in (
        rotate_z_180(block),
        rotate_axis_90(block, "x"),
        rotate_axis_90(block, "y", -1),
        rotate_axis_90(block, "z"),
    ):
        assert len(turned) == len(block)
        assert is_connected(turned)


@pytest.mark.parametrize("axis", ["Y", "Z"])
def test_turned_axis_blocks_match_their_x_twin(axis):
    plus, minus = build_block(f"{axis}plus"), build_block(f"{axis}minus")
    assert len(plus) == len(build_block("Xplus"))
    assert len(minus) == len(build_block("Xminus"))
    assert is_connected(plus) and is_connected(minus)
    assert len(axis_feature(f"{axis}plus")) == len(axis_feature(f"{axis}minus")) == 5
