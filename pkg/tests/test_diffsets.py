from itertools import combinations

import numpy as np
import pytest

from polytile.diffsets import DifferenceSet
from polytile.diffsets import differences
from polytile.diffsets import encoder_levels
from polytile.diffsets import is_golomb
from polytile.diffsets import is_modular_golomb
from polytile.diffsets import modular_powers_ruler
from polytile.diffsets import normalize
from polytile.diffsets import powers_ruler
from polytile.diffsets import search_min_ruler


@pytest.mark.parametrize("n", range(1, 21))
def test_powers_ruler_is_golomb(n):
    ruler = powers_ruler(n)
    assert ruler.elements == tuple(2**k for k in range(n))
    assert is_golomb(ruler)


@pytest.mark.parametrize("n", range(2, 17))
def test_modular_powers_ruler(n):
    ruler = modular_powers_ruler(n)
    assert ruler.modulus == 2**n + 2
    assert ruler.elements[0] == 4 and ruler.elements[-1] == 2**n
    assert is_modular_golomb(ruler)


def test_small_rulers_reject_bad_orders():
    with pytest.raises(ValueError):
        powers_ruler(0)
    with pytest.raises(ValueError):
        modular_powers_ruler(1)
    with pytest.raises(ValueError):
        encoder_levels(0)


def test_is_golomb_detects_repeated_difference():
    assert is_golomb([0, 1, 4, 6])
    assert not is_golomb([0, 1, 2])
    assert not is_golomb(DifferenceSet([1, 3, 5]))
    assert is_golomb([]) and is_golomb([7])


def test_is_modular_golomb():
    assert is_modular_golomb(DifferenceSet([4, 8, 16], modulus=18))
    # 1 - 0 == 0 - 6 mod 7
    assert not is_modular_golomb(DifferenceSet([0, 1, 6], modulus=7))
    with pytest.raises(ValueError):
        is_modular_golomb(DifferenceSet([1, 2, 4]))


def test_modular_differences_avoid_zero():
    ruler = modular_powers_ruler(7)
    for a, b in combinations(ruler.elements, 2):
        assert (a - b) % ruler.modulus != 0


def test_difference_set_validation():
    with pytest.raises(ValueError):
        DifferenceSet([3, 2])
    with pytest.raises(ValueError):
        DifferenceSet([1, 1])
    with pytest.raises(ValueError):
        DifferenceSet([-1, 2])
    with pytest.raises(ValueError):
        DifferenceSet([1, 5], modulus=5)
    assert str(DifferenceSet([4, 8, 16], modulus=18)) == "4,8,16 mod=18"
    assert DifferenceSet([2, 5, 9]).length == 7
    assert DifferenceSet([0, 1]).modulus is None


@pytest.mark.parametrize("n", range(1, 6))
def test_encoder_levels(n):
    levels, total = encoder_levels(n)
    assert total == 2 ** (3 * n + 1) + 2
    assert len(levels) == 3 * n
    assert levels == [2**k for k in range(2, 3 * n + 2)]
    assert all(lvl % 2 == 0 for lvl in levels)


def test_encoder_levels_three_tiles():
    levels, total = encoder_levels(3)
    assert total == 1026
    assert levels[:3] == [4, 8, 16]
    assert levels[-3:] == [256, 512, 1024]


def test_differences_and_normalize():
    assert differences([0, 1, 4]) == [1, 3, 4]
    assert normalize([3, 4, 7]).elements == (0, 1, 4)
    assert normalize([]).elements == ()


@pytest.mark.parametrize(
    "order, length",
    [(1, 0), (2, 1), (3, 3), (4, 6), (5, 11), (6, 17)],
)
def test_search_min_ruler_lengths(order, length):
    ruler = search_min_ruler(order, 20)
    assert ruler is not None
    assert len(ruler) == order
    assert ruler.length == length
    assert ruler.elements[0] == 0
    assert is_golomb(ruler)


def test_search_min_ruler_budget():
    assert search_min_ruler(5, 10) is None
    assert search_min_ruler(4, 6).elements == (0, 1, 4, 6)


def _all_pairs_golomb(values):
    # compares every two distinct pairs
    pairs = [(a, b) for a in values for b in values if a < b]
    for a, b in pairs:
        for c, d in pairs:
            if (a, b) != (c, d) and b - a == d - c:
                return False
    return True


@pytest.mark.parametrize("seed", range(50))
def test_is_golomb_matches_all_pairs(seed):
    rng = np.random.default_rng(seed)
    size = int(rng.integers(0, 13))
    if seed % 2:
        # subsets of a ruler stay rulers
        pool = list(powers_ruler(12).elements)
        values = sorted(rng.choice(pool, size=size, replace=False).tolist())
    else:
        values = sorted(set(rng.integers(0, 60, size=size).tolist()))
    assert is_golomb(values) == _all_pairs_golomb(values)
    assert is_golomb(DifferenceSet(values)) == _all_pairs_golomb(values)


def test_modular_golomb_sets_are_golomb():
    hits = 0
    for modulus in range(2, 14):
        for size in range(1, 5):
            for values in combinations(range(modulus), size):
                s = DifferenceSet(values, modulus)
                if is_modular_golomb(s):
                    assert is_golomb(s), s
                    hits += 1
    assert hits > 0


@pytest.mark.parametrize("n", range(2, 11))
def test_modular_powers_rulers_are_golomb(n):
    s = modular_powers_ruler(n)
    assert is_modular_golomb(s) and is_golomb(s)
