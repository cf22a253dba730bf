import random

import pytest

from polytile.blocks import BAR
from polytile.reduction import LevelRole
from polytile.reduction import _encoding_level
from polytile.reduction import block_origin
from polytile.reduction import build_encoder
from polytile.reduction import build_linker
from polytile.reduction import decode_encoding_layer
from polytile.reduction import decode_word
from polytile.reduction import encode_color
from polytile.reduction import encoder_section
from polytile.reduction import level_plan
from polytile.reduction import level_z
from polytile.reduction import linker_sites
from polytile.reduction import manifest
from polytile.voxel import Cell
from polytile.voxel import bbox
from polytile.voxel import is_connected
from polytile.wang import WangTile
from polytile.wang import wang_set_from_tiles


@pytest.mark.parametrize("n", range(1, 5))
def test_level_plan(n):
    plan = level_plan(n)
    assert plan.total_levels == 2 ** (3 * n + 1) + 2
    assert len(plan.encoding_levels) == 3 * n
    for k in range(n):
        assert plan.tile_levels(k) == tuple(2 ** (3 * k + 2 + r) for r in range(3))
    assert plan.role(1) is LevelRole.STRUCTURAL
    assert plan.role(2) is LevelRole.FUNCTIONAL
    assert plan.role(4) is LevelRole.ENCODING
    assert plan.role(plan.total_levels) is LevelRole.FUNCTIONAL


def test_level_plan_bounds():
    plan = level_plan(3)
    assert plan.total_levels == 1026
    assert plan.owner(1024) == 2 and plan.owner(6) is None
    with pytest.raises(ValueError):
        plan.role(0)
    with pytest.raises(ValueError):
        plan.role(1027)
    with pytest.raises(ValueError):
        plan.tile_levels(3)


@pytest.mark.parametrize(
    "color, t, word",
    [(0, 1, "N"), (1, 1, "F"), (0, 2, "NN"), (2, 2, "FN"), (3, 2, "FF"), (5, 3, "FNF")],
)
def test_color_words(color, t, word):
    assert encode_color(color, t) == word
    assert decode_word(word) == color


def test_color_must_fit():
    with pytest.raises(ValueError):
        encode_color(2, 1)
    with pytest.raises(ValueError):
        encode_color(-1, 2)


def test_frame_helpers():
    assert level_z(1) == 0 and level_z(4) == 21
    assert block_origin(1, 2, 3) == Cell(56, 7, 14)
    sites = linker_sites(2)
    assert sites["Xplus"] == Cell(105, 7, 0)
    assert sites["Yplus"] == Cell(56, 21, 0)


def test_uniform_reduction(uniform, uniform_reduction):
    filler, encoder, linker = uniform_reduction
    assert len(filler) == 9
    assert len(encoder) == 61_992
    assert len(linker) == 135_216
    assert is_connected(encoder) and is_connected(linker)
    # E bumps stick out seven voxels on both long sides
    assert bbox(encoder) == (Cell(0, -7, 0), Cell(55, 20, 7 * 18 - 1))
    # the Z+ bump reaches above the top level
    assert bbox(linker)[1].z > 7 * 18 - 1


def test_uniform_encoding_levels_decode(uniform, uniform_reduction):
    encoder = uniform_reduction.encoder
    plan = level_plan(uniform.n)
    for level in plan.tile_levels(0):
        assert decode_encoding_layer(encoder_section(encoder, level)) == WangTile(0, 0, 0, 0)
    assert decode_encoding_layer(encoder_section(encoder, 2), t=1) is None


def test_two_tile_encoder_decodes_every_tile(two_tile):
    encoder = build_encoder(two_tile, validate=False)
    plan = level_plan(two_tile.n)
    for k, tile in enumerate(two_tile.tiles):
        for level in plan.tile_levels(k):
            assert decode_encoding_layer(encoder_section(encoder, level), two_tile.t) == tile


def test_manifest(three_tile):
    data = manifest(three_tile)
    assert (data["n"], data["m"], data["t"]) == (3, 4, 2)
    assert data["levels"] == data["encoder_levels"] == data["linker_levels"] == 1026
    assert data["tile_levels"]["2"] == [256, 512, 1024]
    assert data["footprint"] == [4 * BAR[0], 2 * BAR[1]]
    assert "volumes" not in data


def test_manifest_volumes(uniform, uniform_reduction):
    data = manifest(uniform, uniform_reduction)
    assert data["volumes"] == {"filler": 9, "encoder": 61_992, "linker": 135_216}


@pytest.mark.parametrize("t", range(1, 5))
def test_color_words_decode_back(t):
    for c in range(2**t):
        assert decode_word(encode_color(c, t)) == c


@pytest.mark.parametrize("seed", range(20))
def test_encoding_layers_decode_back(seed):
    rng = random.Random(seed)
    m = rng.randint(1, 16)
    tiles = [[rng.randrange(m) for _ in range(4)] for _ in range(rng.randint(1, 6))]
    s = wang_set_from_tiles(tiles)
    for tile in s.tiles:
        section = _encoding_level(tile, s.t).layer(3)
        assert decode_encoding_layer(section, s.t) == tile
        assert decode_encoding_layer(section) == tile


def _top_level(c):
    return bbox(c)[1].z // 7 + 1


@pytest.mark.parametrize("n", [1, 2, pytest.param(3, marks=pytest.mark.slow)])
def test_encoder_and_linker_share_levels(n):
    s = wang_set_from_tiles([(k, k, k, k) for k in range(n)])
    total = level_plan(n).total_levels
    encoder = build_encoder(s, validate=False)
    linker = build_linker(s, validate=False)
    assert _top_level(encoder) == total
    # only the Z+ bump pokes above the linker's top level
    assert linker.layer(7 * total - 1)
    assert len(linker.zrange(7 * total, 7 * total + 7)) < len(linker.layer(7 * total - 1))
    assert not encoder.layer(7 * total)


@pytest.mark.slow
def test_three_tile_pieces_are_connected(three_tile):
    assert (three_tile.n, three_tile.m) == (3, 4)
    encoder = build_encoder(three_tile)
    linker = build_linker(three_tile)
    assert is_connected(encoder) and is_connected(linker)
    assert _top_level(encoder) == 1026
    assert linker.layer(7 * 1026 - 1)
    assert len(linker.zrange(7 * 1026, 7 * 1027)) < len(linker.layer(7 * 1026 - 1))
