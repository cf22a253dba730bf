import random

import pytest

from polytile.wang import SolveStatus
from polytile.wang import TorusTiling
from polytile.wang import WangParseError
from polytile.wang import WangTile
from polytile.wang import WangTileSet
from polytile.wang import enumerate_tori
from polytile.wang import format_wang_set
from polytile.wang import parse_torus
from polytile.wang import parse_wang_set
from polytile.wang import repeat_torus
from polytile.wang import serialize_torus
from polytile.wang import solve_any_torus
from polytile.wang import solve_torus
from polytile.wang import valid_torus
from polytile.wang import wang_set_from_tiles


def test_parse_interns_colors():
    s = parse_wang_set("# comment\nred blue red blue\n\nblue blue blue blue  # tail\n")
    assert s.n == 2 and s.m == 2 and s.t == 1
    assert s.labels == ("red", "blue")
    assert s[0] == WangTile(0, 1, 0, 1)
    assert parse_wang_set(format_wang_set(s)) == s


@pytest.mark.parametrize(
    "text, lineno",
    [("0 1 0\n", 1), ("0 0 0 0\n\n1 1 1\n", 3), ("", 0)],
)
def test_parse_errors_name_the_line(text, lineno):
    with pytest.raises(WangParseError) as err:
        parse_wang_set(text)
    assert err.value.lineno == lineno


def test_code_length():
    assert WangTileSet([(0, 0, 0, 0)]).t == 1
    assert wang_set_from_tiles([("a", "b", "c", "d")]).t == 2
    assert wang_set_from_tiles([(0, 1, 2, 3), (4, 4, 4, 4)]).t == 3


def test_tile_set_validation():
    with pytest.raises(ValueError):
        WangTileSet([])
    with pytest.raises(ValueError):
        WangTileSet([(0, 2, 0, 2)])
    with pytest.raises(ValueError):
        WangTile(0, -1, 0, 0)


def test_valid_torus(two_tile):
    assert valid_torus(two_tile, TorusTiling(2, 1, [[0, 0]]))
    assert valid_torus(two_tile, TorusTiling(1, 1, [[1]]))
    assert not valid_torus(two_tile, TorusTiling(2, 1, [[0, 1]]))
    with pytest.raises(ValueError):
        valid_torus(two_tile, TorusTiling(1, 1, [[2]]))


def test_torus_shape_validation():
    with pytest.raises(ValueError):
        TorusTiling(2, 1, [[0]])
    with pytest.raises(ValueError):
        TorusTiling(0, 1, [])


def test_solver_finds_lexicographic_first(two_tile):
    out = solve_torus(two_tile, 2, 1)
    assert out.status is SolveStatus.FOUND
    assert out.tiling.grid == ((0, 0),)
    assert valid_torus(two_tile, out.tiling)


def test_solver_reports_none():
    s = wang_set_from_tiles([("a", "b", "a", "c")])
    assert solve_torus(s, 1, 1).status is SolveStatus.NONE
    assert solve_any_torus(s, 3).status is SolveStatus.NONE


def test_solver_budget():
    s = wang_set_from_tiles([("a", "b", "a", "c"), ("a", "c", "a", "d")])
    out = solve_torus(s, 3, 3, budget=5)
    assert out.status is SolveStatus.UNKNOWN
    assert out.nodes > 5


def test_solve_any_prefers_small_area():
    # the shift tiles need a width-2 cycle
    s = wang_set_from_tiles([("a", "x", "a", "y"), ("a", "y", "a", "x")])
    out = solve_any_torus(s, 3)
    assert out.status is SolveStatus.FOUND
    assert (out.tiling.w, out.tiling.h) == (2, 1)


def _random_set(rng):
    n = rng.randint(1, 3)
    colors = rng.randint(1, 3)
    return wang_set_from_tiles(
        [[rng.randrange(colors) for _ in range(4)] for _ in range(n)]
    )


@pytest.mark.parametrize("seed", range(100))
def test_solver_agrees_with_brute_force(seed):
    rng = random.Random(seed)
    s = _random_set(rng)
    if seed % 4 == 0:
        w, h = 3, 3
    else:
        w, h = rng.randint(1, 3), rng.randint(1, 3)
    out = solve_torus(s, w, h)
    first = next(enumerate_tori(s, w, h), None)
    if first is None:
        assert out.status is SolveStatus.NONE
    else:
        assert out.status is SolveStatus.FOUND
        assert out.tiling == first


def test_repeat_torus(two_tile):
    g = TorusTiling(2, 1, [[0, 0]])
    big = repeat_torus(g, 2, 3)
    assert (big.w, big.h) == (4, 3)
    assert valid_torus(two_tile, big)
    with pytest.raises(ValueError):
        repeat_torus(g, 0, 1)


def test_torus_text_format():
    g = TorusTiling(3, 2, [[0, 1, 2], [2, 1, 0]])
    text = serialize_torus(g)
    assert text == "3 2\n0 1 2\n2 1 0\n"
    assert parse_torus(text) == g
    assert g[3, 2] == 0 and g[-1, 1] == 0


@pytest.mark.parametrize("text", ["2 1\n0\n", "1 2\n0\n", "x 1\n0\n", "1 1\na\n", ""])
def test_bad_torus_text(text):
    with pytest.raises(WangParseError):
        parse_torus(text)
