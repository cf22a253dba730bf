import json
from itertools import product
from pathlib import Path

import numpy as np
import pytest
from attrs import evolve

from polytile.assembler import AssemblyError
from polytile.assembler import OffsetError
from polytile.assembler import Placement
from polytile.assembler import TileKind
from polytile.assembler import assemble_and_verify
from polytile.assembler import assembly_basis
from polytile.assembler import assembly_from_manifest
from polytile.assembler import assembly_manifest
from polytile.assembler import check_packing
from polytile.assembler import choose_offsets
from polytile.assembler import coincident_levels
from polytile.assembler import decode_assembly
from polytile.assembler import diagonal_pairs
from polytile.assembler import flip_code_bit
from polytile.assembler import linker_basis
from polytile.assembler import linker_frame
from polytile.assembler import linker_origin
from polytile.assembler import place_encoders
from polytile.assembler import published_linker_basis
from polytile.assembler import section_labels
from polytile.reduction import level_plan
from polytile.reduction import reduce
from polytile.utils import sample_path
from polytile.voxel import Cell
from polytile.voxel import verify_periodic_partition
from polytile.wang import TorusTiling
from polytile.wang import parse_torus
from polytile.wang import parse_wang_set
from polytile.wang import solve_torus


@pytest.fixture(scope="module")
def two_tile_reduction(two_tile):
    return reduce(two_tile, validate=False)


def test_lattices(uniform):
    assert linker_basis(uniform).det == 197_568
    assert assembly_basis(uniform, 1, 1).det == 197_568
    assert assembly_basis(uniform, 2, 3).det == 6 * 197_568
    assert published_linker_basis(uniform).det == 4 * 197_568
    assert linker_origin(2, 1, 0) == Cell(56, 28, 0)
    assert linker_origin(1, 0, 1) == Cell(-28, 28, 0)


def test_diagonal_pairs():
    g = TorusTiling(2, 1, [[0, 0]])
    pairs = diagonal_pairs(g)
    assert len(pairs) == 4
    assert ((1, 0), (0, 0), "east") in pairs
    assert ((0, 0), (0, 0), "north") in pairs


def test_coincident_levels_are_exclusive():
    plan = level_plan(2)
    for e_a, e_b in product(plan.encoding_levels, repeat=2):
        found = coincident_levels(plan, e_a, e_b)
        if e_a == e_b:
            assert found == [(a, a) for a in plan.encoding_levels]
        else:
            assert found == [(e_a, e_b)]


def _assert_single_coincidence(assembly):
    plan = level_plan(assembly.tileset.n)
    offsets = assembly.offsets
    for a, b, _ in diagonal_pairs(assembly.torus):
        if a == b:
            continue
        shared = coincident_levels(plan, offsets.level(*a), offsets.level(*b))
        assert len(shared) == 1


def test_choose_offsets_uniform(uniform):
    g = TorusTiling(2, 2, [[0, 0], [0, 0]])
    offsets = choose_offsets(g, uniform)
    assert offsets.choices == ((1, 0), (0, 1))
    assert offsets.level(1, 1) == 8
    plan = level_plan(uniform.n)
    for a, b, _ in diagonal_pairs(g):
        assert offsets.level(*a) != offsets.level(*b)
        assert len(coincident_levels(plan, offsets.level(*a), offsets.level(*b))) == 1
    with pytest.raises(OffsetError):
        choose_offsets(g, uniform, budget=1)


def test_choose_offsets_self_facing_column(uniform):
    # on a 1 x 1 torus every pair is the column against itself
    offsets = choose_offsets(TorusTiling(1, 1, [[0]]), uniform)
    assert offsets.choices == ((0,),)


def test_linker_frame_packs(uniform, uniform_reduction):
    frame = linker_frame(uniform, (1, 1), uniform_reduction)
    assert frame.count(TileKind.LINKER) == 1
    counts = check_packing(frame)
    assert counts.max() == 1


def test_uniform_assembly(uniform, uniform_torus, uniform_assembly):
    a = uniform_assembly
    assert a.basis.det == 197_568
    assert a.count(TileKind.LINKER) == 1
    assert a.count(TileKind.ENCODER) == 1
    assert a.count(TileKind.FILLER) == 40
    assert a.volume == a.basis.det
    assert verify_periodic_partition(a.pieces(), a.basis)
    assert decode_assembly(a) == uniform_torus


def test_section_labels(uniform_assembly):
    labels = section_labels(uniform_assembly, 10)
    assert labels.shape == (56, 28)
    assert (labels > 0).all()
    assert 3 in labels
    assert np.array_equal(section_labels(uniform_assembly, 10 + 126), labels)


def test_manifest_round_trip(uniform_assembly, uniform_reduction):
    data = json.loads(json.dumps(assembly_manifest(uniform_assembly)))
    again = assembly_from_manifest(data, uniform_reduction)
    assert again == uniform_assembly
    assert again.volume == uniform_assembly.volume


def test_two_tile_assembly(two_tile, two_tile_reduction):
    torus = solve_torus(two_tile, 2, 1).tiling
    a = assemble_and_verify(two_tile, torus, reduction=two_tile_reduction)
    assert (a.torus.w, a.torus.h) == (2, 1)
    assert a.volume == a.basis.det
    decoded = decode_assembly(a)
    assert decoded == torus
    _assert_single_coincidence(a)


def test_distinct_neighbours_round_trip():
    s = parse_wang_set("0 1 0 0\n0 0 0 1\n")
    torus = TorusTiling(2, 1, [[0, 1]])
    a = assemble_and_verify(s, torus)
    assert a.basis.det == 2_853_760
    assert a.volume == a.basis.det
    assert decode_assembly(a) == torus
    assert a.offsets.level(0, 0) != a.offsets.level(1, 0)
    _assert_single_coincidence(a)


def test_flipped_code_bit_overlaps_on_the_matching_layer(two_tile, two_tile_reduction):
    torus = TorusTiling(2, 1, [[0, 0]])
    offsets = choose_offsets(torus, two_tile)
    frame = linker_frame(two_tile, (2, 1), two_tile_reduction)
    partial = place_encoders(frame, torus, offsets)
    # east edge group of column (0, 0) sits in the north row, east half
    flipped = flip_code_bit(
        two_tile_reduction.encoder, offsets.level(0, 0), row=1, block=two_tile.t, t=two_tile.t
    )
    placements = [
        Placement(p.kind, p.offset, p.cell, shape=flipped)
        if p.kind is TileKind.ENCODER and p.cell == (0, 0)
        else p
        for p in partial.placements
    ]
    broken = evolve(partial, placements=placements)
    with pytest.raises(AssemblyError) as err:
        check_packing(broken)
    assert err.value.stage == "matching-layer overlap"
    assert len(err.value.cells) > 0


def test_flip_code_bit_needs_a_code_block(uniform, uniform_reduction):
    with pytest.raises(ValueError):
        flip_code_bit(uniform_reduction.encoder, 2, 0, 0, 1)
    with pytest.raises(ValueError):
        flip_code_bit(uniform_reduction.encoder, 4, 0, 5, 1)


def test_corrupt_torus(two_tile, two_tile_reduction):
    torus = parse_torus(Path(sample_path("two_tile_corrupt_torus.txt")).read_text())
    with pytest.raises(ValueError):
        assemble_and_verify(two_tile, torus, reduction=two_tile_reduction)
    with pytest.raises(AssemblyError) as err:
        assemble_and_verify(two_tile, torus, reduction=two_tile_reduction, check_torus=False)
    assert err.value.stage == "matching-layer overlap"


@pytest.mark.slow
def test_three_tile_two_by_two(three_tile):
    torus = solve_torus(three_tile, 2, 2).tiling
    a = assemble_and_verify(three_tile, torus)
    assert a.basis.det == a.volume
    assert decode_assembly(a) == torus
    _assert_single_coincidence(a)
