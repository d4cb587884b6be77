"""Grid enumeration and default grids."""

import math
from collections.abc import Iterable
from fractions import Fraction

from heydecheck.models.equation import GridKind, GridSpec
from heydecheck.models.groups import DualElement, Host
from heydecheck.models.settings import DEFAULT_BOX_BOUND, DEFAULT_BOX_POWER
from heydecheck.services import group_core


def grid_points(grid: GridSpec) -> list[DualElement]:
    """Grid elements in enumeration order, duplicates removed."""
    if grid.kind == GridKind.TORSION:
        assert grid.order is not None
        return group_core.torsion_elements(grid.host, grid.order)
    if grid.kind == GridKind.BOX:
        assert grid.numerator_bound is not None and grid.denominator is not None
        values: Iterable[Fraction] = (
            Fraction(m, grid.denominator)
            for m in range(-grid.numerator_bound, grid.numerator_bound + 1)
        )
    else:
        values = grid.points
    seen: set[Fraction] = set()
    points = []
    for value in values:
        element = grid.host.element(value)
        if element.value not in seen:
            seen.add(element.value)
            points.append(element)
    return points


def box_grid(
    host: Host,
    primes: Iterable[int],
    bound: int = DEFAULT_BOX_BOUND,
    power: int = DEFAULT_BOX_POWER,
) -> GridSpec:
    """{m / prod r^power : |m| <= bound} over the given primes."""
    denominator = math.prod(r**power for r in primes)
    return GridSpec.box(host, bound, denominator)


def prufer_level(prime: int, level: int) -> GridSpec:
    """Full truncation Z(prime^level) inside Z(prime^inf)."""
    return GridSpec.torsion(Host.prufer(prime), prime**level)
