"""Named example grids and digit measures used in docs, tests, and the CLI.

Cell and weight tables below are written in visual order (top row first),
matching the JSON spec file layout; constructors flip them into the
package's bottom-to-top convention.
"""

from __future__ import annotations

from fractions import Fraction

from .grid import GridSpec
from .measures import MarginalIFS


def sierpinski_carpet() -> GridSpec:
    """3x3 grid, center removed, equal weights 1/8 on the eight kept cells."""
    cells = [
        [1, 1, 1],
        [1, 0, 1],
        [1, 1, 1],
    ]
    w = Fraction(1, 8)
    weights = [
        [w, w, w],
        [w, 0, w],
        [w, w, w],
    ]
    return GridSpec.from_top_rows(cells, weights)


def weighted_carpet() -> GridSpec:
    """Carpet pattern with non-uniform weights (denominator 900).

    Column totals are (332/900, 236/900, 332/900), so the largest column
    total gamma = 332/900 sits strictly below the square-grid threshold
    3/8 = 337.5/900.
    """
    cells = [
        [1, 1, 1],
        [1, 0, 1],
        [1, 1, 1],
    ]
    weights = [
        [Fraction(91, 900), Fraction(118, 900), Fraction(91, 900)],
        [Fraction(150, 900), 0, Fraction(150, 900)],
        [Fraction(91, 900), Fraction(118, 900), Fraction(91, 900)],
    ]
    return GridSpec.from_top_rows(cells, weights)


def sierpinski_triangle() -> GridSpec:
    """2x2 grid keeping bottom-left, bottom-right, top-left; equal weights 1/3."""
    cells = [
        [1, 0],
        [1, 1],
    ]
    w = Fraction(1, 3)
    weights = [
        [w, 0],
        [w, w],
    ]
    return GridSpec.from_top_rows(cells, weights)


def weighted_triangle() -> GridSpec:
    """Triangle pattern weighted to make the x-marginal exactly uniform.

    Weights 1/4 (bottom-left), 1/2 (bottom-right), 1/4 (top-left): column
    totals are (1/2, 1/2) -- an essentially Lebesgue x-marginal -- while the
    row totals (3/4, 1/4) stay singular.
    """
    cells = [
        [1, 0],
        [1, 1],
    ]
    weights = [
        [Fraction(1, 4), 0],
        [Fraction(1, 4), Fraction(1, 2)],
    ]
    return GridSpec.from_top_rows(cells, weights)


def full_grid_4x4() -> GridSpec:
    """Full 4x4 grid, non-uniform weights (denominator 32).

    Every column total is 8/32 (uniform x-marginal); the row totals
    (12, 6, 6, 8)/32 top-to-bottom are non-uniform, the largest being
    beta_max = 12/32, and exactly b = 2 rows (the top and bottom ones) have
    all weights equal.
    """
    cells = [[1, 1, 1, 1] for _ in range(4)]
    d = 32
    weights = [
        [Fraction(3, d), Fraction(3, d), Fraction(3, d), Fraction(3, d)],
        [Fraction(1, d), Fraction(1, d), Fraction(2, d), Fraction(2, d)],
        [Fraction(2, d), Fraction(2, d), Fraction(1, d), Fraction(1, d)],
        [Fraction(2, d), Fraction(2, d), Fraction(2, d), Fraction(2, d)],
    ]
    return GridSpec.from_top_rows(cells, weights)


def lebesgue_grid(m: int, n: int) -> GridSpec:
    """Full m x n grid with uniform weights: mu is Lebesgue measure."""
    cells = [[1] * n for _ in range(m)]
    w = Fraction(1, m * n)
    weights = [[w] * n for _ in range(m)]
    return GridSpec.from_top_rows(cells, weights)


def ternary_cantor() -> MarginalIFS:
    """The 1/2-1/2 Bernoulli measure on the middle-thirds Cantor set."""
    return MarginalIFS(base=3, digit_weights=(Fraction(1, 2), Fraction(0), Fraction(1, 2)))


def quaternary_cantor() -> MarginalIFS:
    """Base-4 Cantor measure on digits {0, 2}: the classical spectral measure."""
    return MarginalIFS(base=4, digit_weights=(Fraction(1, 2), Fraction(0), Fraction(1, 2), Fraction(0)))
