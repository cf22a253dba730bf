"""
Golomb rulers and their modular variant.

A ruler is a set of integers whose pairwise differences are all distinct.
The modular variant asks the signed differences to stay distinct modulo a
given modulus. The encoder level schedule is a modular ruler built from
powers of two.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, List, Optional, Tuple

from attrs import define, field
from loguru import logger


__all__ = [
    "DifferenceSet",
    "powers_ruler",
    "modular_powers_ruler",
    "is_golomb",
    "is_modular_golomb",
    "encoder_levels",
    "search_min_ruler",
    "normalize",
    "differences",
]


def _to_elements(values: Iterable[int]) -> Tuple[int, ...]:
    return tuple(int(v) for v in values)


@define(frozen=True)
class DifferenceSet:
    """
    A finite integer set with an optional modulus.

    Attributes
    ----------
    elements : tuple of int
        Strictly increasing, nonnegative. Rulers built here start at 1 or
        above; normalized search output starts at 0.
    modulus : int or None
        When given, must exceed every element.
    """

    elements: Tuple[int, ...] = field(converter=_to_elements)
    modulus: Optional[int] = field(default=None)

    @elements.validator
    def _check_elements(self, attribute, value):
        if any(v < 0 for v in value):
            raise ValueError(f"Negative element in {value}")
        if any(a >= b for a, b in zip(value, value[1:])):
            raise ValueError(f"Elements must be strictly increasing: {value}")

    @modulus.validator
    def _check_modulus(self, attribute, value):
        if value is None:
            return
        if value <= 0:
            raise ValueError(f"Modulus must be positive, got {value}")
        if self.elements and value <= self.elements[-1]:
            raise ValueError(
                f"Modulus {value} must exceed max element {self.elements[-1]}"
            )

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def length(self) -> int:
        """Span between the smallest and the largest element."""
        if not self.elements:
            return 0
        return self.elements[-1] - self.elements[0]

    def __str__(self):
        text = ",".join(str(e) for e in self.elements)
        if self.modulus is not None:
            text += f" mod={self.modulus}"
        return text


def powers_ruler(n: int) -> DifferenceSet:
    """
    The ruler {1, 2, 4, ..., 2**(n-1)}.

    Parameters
    ----------
    n : int
        Number of marks, at least 1.

    Returns
    -------
    DifferenceSet
        Ruler without modulus.

    Raises
    ------
    ValueError
        If ``n < 1``.
    """
    if n < 1:
        logger.error(f"powers_ruler needs n >= 1, got {n}")
        raise ValueError(f"powers_ruler needs n >= 1, got {n}")
    return DifferenceSet([2**k for k in range(n)])


def modular_powers_ruler(n: int) -> DifferenceSet:
    """
    The set {4, 8, ..., 2**n} taken modulo 2**n + 2.

    Parameters
    ----------
    n : int
        Largest exponent, at least 2.

    Returns
    -------
    DifferenceSet
        Ruler with modulus ``2**n + 2``.

    Raises
    ------
    ValueError
        If ``n < 2``.
    """
    if n < 2:
        logger.error(f"modular_powers_ruler needs n >= 2, got {n}")
        raise ValueError(f"modular_powers_ruler needs n >= 2, got {n}")
    return DifferenceSet([2**k for k in range(2, n + 1)], modulus=2**n + 2)


def differences(s) -> List[int]:
    """Sorted positive differences of all unordered pairs, with repeats."""
    return sorted(b - a for a, b in combinations(sorted(s), 2))


def is_golomb(s) -> bool:
    """
    True when every unordered pair of elements has its own difference.

    Parameters
    ----------
    s : DifferenceSet or iterable of int

    Returns
    -------
    bool
    """
    seen = set()
    for a, b in combinations(sorted(s), 2):
        d = b - a
        if d in seen:
            return False
        seen.add(d)
    return True


def is_modular_golomb(s: DifferenceSet) -> bool:
    """
    True when all signed differences of ordered pairs are distinct mod m.

    Parameters
    ----------
    s : DifferenceSet
        Must carry a modulus.

    Returns
    -------
    bool

    Raises
    ------
    ValueError
        If ``s`` has no modulus.
    """
    m = getattr(s, "modulus", None)
    if m is None:
        logger.error("is_modular_golomb needs a modulus")
        raise ValueError("is_modular_golomb needs a modulus")
    seen = set()
    for a in s.elements:
        for b in s.elements:
            if a == b:
                continue
            r = (a - b) % m
            if r in seen:
                return False
            seen.add(r)
    return True


def encoder_levels(n_tiles: int) -> Tuple[List[int], int]:
    """
    Encoding levels of the encoder of an ``n_tiles`` Wang set.

    Parameters
    ----------
    n_tiles : int
        Number of Wang tiles, at least 1.

    Returns
    -------
    levels : list of int
        ``2**k`` for ``2 <= k <= 3 * n_tiles + 1``. Tile ``i`` (1-based)
        owns ``2**(3i-1)``, ``2**(3i)`` and ``2**(3i+1)``.
    total_levels : int
        ``2**(3 * n_tiles + 1) + 2``.
    """
    if n_tiles < 1:
        logger.error(f"encoder_levels needs at least one tile, got {n_tiles}")
        raise ValueError(f"encoder_levels needs at least one tile, got {n_tiles}")
    ruler = modular_powers_ruler(3 * n_tiles + 1)
    return list(ruler.elements), ruler.modulus


def normalize(s) -> DifferenceSet:
    """Shift a set so that its smallest element is 0."""
    values = sorted(s)
    if not values:
        return DifferenceSet([])
    return DifferenceSet([v - values[0] for v in values])


def _extend(marks: List[int], used: set, order: int, length: int):
    # marks always contains 0; the last mark is pinned to `length`
    if len(marks) == order - 1:
        new = [length - m for m in marks]
        if len(set(new)) == len(new) and not used.intersection(new):
            return marks + [length]
        return None
    for x in range(marks[-1] + 1, length):
        new = [x - m for m in marks]
        if used.intersection(new) or len(set(new)) != len(new):
            continue
        logger.trace(f"Trying mark {x} after {marks}")
        found = _extend(marks + [x], used.union(new), order, length)
        if found is not None:
            return found
    return None


def search_min_ruler(order: int, length_budget: int) -> Optional[DifferenceSet]:
    """
    Shortest Golomb ruler with ``order`` marks, by exhaustive search.

    Lengths are tried in increasing order and marks in increasing order, so
    the first ruler found is the lexicographically least of minimal length.

    Parameters
    ----------
    order : int
        Number of marks.
    length_budget : int
        Largest length tried.

    Returns
    -------
    DifferenceSet or None
        Normalized ruler (starting at 0), or None when no ruler of the given
        order fits in the budget.
    """
    if order < 1:
        logger.error(f"Ruler order must be positive, got {order}")
        raise ValueError(f"Ruler order must be positive, got {order}")
    if order == 1:
        return DifferenceSet([0])
    for length in range(order - 1, length_budget + 1):
        logger.debug(f"Searching order-{order} rulers of length {length}")
        found = _extend([0], set(), order, length)
        if found is not None:
            return DifferenceSet(found)
    return None
