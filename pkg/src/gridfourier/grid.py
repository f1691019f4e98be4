"""Grid iterated-function-system measures on the unit square.

A grid IFS is described by an m x n pattern of kept cells and a matching
table of probability weights.  Cell (i, j) -- column i counted left to
right, row j counted **bottom to top** -- carries the affine contraction

    tau_ij(x, y) = (x/n + i/n, y/m + j/m),

and the invariant (Hutchinson) measure mu is the unique probability measure
with mu = sum_ij p_ij * (tau_ij)_* mu.  Spec files on disk list rows in
visual order (top row first); everything in memory uses the bottom-to-top
convention above.

This module holds the combinatorial layer: parsing and validation, exact
cell statistics, the box-dimension formula for the attractor, exact measures
of adic rectangles, deterministic sampling of the measure, and exact raster
renderings with PGM export.
"""

from __future__ import annotations

import json
import math
import random
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

from .errors import BudgetError, InputError

# Refuse rasters that would not fit in memory (exact rationals per cell).
MAX_RASTER_CELLS = 10**8

_UNIFORM_BITS = 53  # uniform draws are 53-bit integers compared exactly


def _as_fraction(value: object, where: str) -> Fraction:
    """Parse a weight entry: "a/b", an integer string, or an int."""
    if isinstance(value, bool):
        raise InputError(f"{where}: weight must be a rational string or integer")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"{where}: cannot parse weight {value!r}") from exc
    if isinstance(value, Fraction):
        return value
    raise InputError(f"{where}: weight must be a rational string or integer, got {type(value).__name__}")


@dataclass(frozen=True)
class GridSpec:
    """An m x n grid IFS: kept-cell pattern plus probability weights.

    cells[j][i] and weights[j][i] address column i (left to right) and row j
    (bottom to top).  Invariants enforced on construction:

    * shapes are m rows of n entries, m, n >= 1, at least one kept cell;
    * weights[j][i] == 0 exactly when cells[j][i] == 0;
    * weights are nonnegative rationals summing to 1.
    """

    m: int
    n: int
    cells: tuple[tuple[int, ...], ...]
    weights: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if not (isinstance(self.m, int) and isinstance(self.n, int)) or self.m < 1 or self.n < 1:
            raise InputError("grid dimensions must be integers >= 1")
        cells = tuple(tuple(int(t) for t in row) for row in self.cells)
        weights = tuple(tuple(_as_fraction(w, f"weights[{j}][{i}]") for i, w in enumerate(row)) for j, row in enumerate(self.weights))
        if len(cells) != self.m or any(len(row) != self.n for row in cells):
            raise InputError(f"cells table must be {self.m} rows of {self.n} entries")
        if len(weights) != self.m or any(len(row) != self.n for row in weights):
            raise InputError(f"weights table must be {self.m} rows of {self.n} entries")
        total = Fraction(0)
        kept = 0
        for j in range(self.m):
            for i in range(self.n):
                t = cells[j][i]
                if t not in (0, 1):
                    raise InputError(f"cells[{j}][{i}] must be 0 or 1, got {t}")
                w = weights[j][i]
                if w < 0:
                    raise InputError(f"weights[{j}][{i}] is negative")
                if t == 0 and w != 0:
                    raise InputError(f"weights[{j}][{i}] is nonzero but the cell is absent")
                if t == 1 and w == 0:
                    raise InputError(f"cells[{j}][{i}] is kept but its weight is zero")
                total += w
                kept += t
        if kept == 0:
            raise InputError("grid keeps no cells")
        if total != 1:
            raise InputError(f"weights sum to {total}, expected 1")
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_top_rows(cls, cells_top: Sequence[Sequence[int]], weights_top: Sequence[Sequence[object]]) -> "GridSpec":
        """Build from rows listed in visual order (top row first)."""
        cells = tuple(tuple(row) for row in reversed(list(cells_top)))
        weights = tuple(tuple(row) for row in reversed(list(weights_top)))
        return cls(m=len(cells), n=len(cells[0]) if cells else 0, cells=cells, weights=weights)

    def kept(self) -> Iterator[tuple[int, int, Fraction]]:
        """Kept cells as (i, j, weight), rows bottom to top, columns left to right."""
        for j in range(self.m):
            for i in range(self.n):
                if self.cells[j][i]:
                    yield i, j, self.weights[j][i]

    @property
    def cell_count(self) -> int:
        return sum(sum(row) for row in self.cells)

    def is_full(self) -> bool:
        """True when every cell of the m x n grid is kept."""
        return self.cell_count == self.m * self.n

    def is_uniform(self) -> bool:
        """True when all kept cells carry the same weight."""
        kept_weights = {w for _, _, w in self.kept()}
        return len(kept_weights) == 1

    def transpose(self) -> "GridSpec":
        """Swap the two coordinates: cell (i, j) becomes cell (j, i)."""
        cells = tuple(tuple(self.cells[j][i] for j in range(self.m)) for i in range(self.n))
        weights = tuple(tuple(self.weights[j][i] for j in range(self.m)) for i in range(self.n))
        return GridSpec(m=self.n, n=self.m, cells=cells, weights=weights)


def parse_spec(text: str) -> GridSpec:
    """Parse the JSON spec format.

    Expected document: an object with integer fields "rows" (m) and "cols"
    (n), a "cells" table of 0/1 entries listed top row first, and a
    "weights" table of rational strings ("a/b" or integers) in the same
    order.  Raises InputError on malformed documents; the row order is
    flipped so the returned GridSpec rows run bottom to top.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"spec is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("spec document must be a JSON object")
    missing = [key for key in ("rows", "cols", "cells", "weights") if key not in doc]
    if missing:
        raise InputError(f"spec is missing required fields: {', '.join(missing)}")
    rows, cols = doc["rows"], doc["cols"]
    if not isinstance(rows, int) or not isinstance(cols, int) or isinstance(rows, bool) or isinstance(cols, bool):
        raise InputError("rows and cols must be integers")
    cells, weights = doc["cells"], doc["weights"]
    if not isinstance(cells, list) or not all(isinstance(r, list) for r in cells):
        raise InputError("cells must be an array of arrays")
    if not isinstance(weights, list) or not all(isinstance(r, list) for r in weights):
        raise InputError("weights must be an array of arrays")
    if len(cells) != rows or any(len(r) != cols for r in cells):
        raise InputError(f"cells table must be {rows} rows of {cols} entries")
    if len(weights) != rows or any(len(r) != cols for r in weights):
        raise InputError(f"weights table must be {rows} rows of {cols} entries")
    return GridSpec.from_top_rows(cells, weights)


def load_spec(path: str) -> GridSpec:
    """Read and parse a spec file from disk."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read spec file {path}: {exc}") from exc
    return parse_spec(text)


@dataclass(frozen=True)
class GridStats:
    """Exact cell statistics of a grid spec.

    row_counts[j] is the number of kept cells in row j (bottom to top);
    col_weights/row_weights are the exact marginal weight vectors;
    max_col_weight and max_row_weight are the largest column/row totals
    (gamma_1 and gamma_2); equal_weight_rows counts rows with at least one
    kept cell whose kept weights are all equal (the quantity b in the
    full-grid slice criterion); xi1/xi2 are the dimension-weighted row-count
    aggregates

        xi2 = sum_j r_j ** (ln m / ln n),    xi1 = xi2 ** (ln n / ln m),

    defined for 2 <= m and 2 <= n (NaN for degenerate grids).
    """

    cell_count: int
    row_counts: tuple[int, ...]
    col_weights: tuple[Fraction, ...]
    row_weights: tuple[Fraction, ...]
    max_col_weight: Fraction
    max_row_weight: Fraction
    equal_weight_rows: int
    xi1: float
    xi2: float

    @property
    def beta_max(self) -> Fraction:
        """Largest total weight in a row (alias used by the slice criteria)."""
        return self.max_row_weight


def grid_stats(spec: GridSpec) -> GridStats:
    """Compute exact GridStats for a valid spec."""
    row_counts = tuple(sum(row) for row in spec.cells)
    col_weights = tuple(sum((spec.weights[j][i] for j in range(spec.m)), Fraction(0)) for i in range(spec.n))
    row_weights = tuple(sum(row, Fraction(0)) for row in spec.weights)
    equal_rows = 0
    for j in range(spec.m):
        kept_weights = [spec.weights[j][i] for i in range(spec.n) if spec.cells[j][i]]
        if kept_weights and len(set(kept_weights)) == 1:
            equal_rows += 1
    if spec.m >= 2 and spec.n >= 2:
        s = math.log(spec.m) / math.log(spec.n)
        xi2 = math.fsum(r**s for r in row_counts if r > 0)
        xi1 = xi2 ** (1.0 / s)
    else:
        xi1 = xi2 = float("nan")
    return GridStats(
        cell_count=spec.cell_count,
        row_counts=row_counts,
        col_weights=col_weights,
        row_weights=row_weights,
        max_col_weight=max(col_weights),
        max_row_weight=max(row_weights),
        equal_weight_rows=equal_rows,
        xi1=xi1,
        xi2=xi2,
    )


def mcmullen_dimension(spec: GridSpec) -> float:
    """Hausdorff dimension of the attractor of a grid IFS.

    With 2 <= m <= n and r_j the number of kept cells in row j,

        dim_H(K) = ln( sum_j r_j ** (ln m / ln n) ) / ln m .

    Grids with m > n are transposed first (the attractor's dimension is
    symmetric in the two coordinates).  A full grid returns exactly 2.0
    (the attractor is the whole square).  Degenerate grids (m == 1 or
    n == 1) are not covered by the formula and raise InputError; callers
    that need a number can fall back to the one-dimensional similarity
    dimension of the nonzero direction.
    """
    if spec.m == 1 or spec.n == 1:
        raise InputError("dimension formula requires m >= 2 and n >= 2")
    if spec.is_full():
        return 2.0
    if spec.m > spec.n:
        spec = spec.transpose()
    s = math.log(spec.m) / math.log(spec.n)
    total = math.fsum(r**s for r in (sum(row) for row in spec.cells) if r > 0)
    return math.log(total) / math.log(spec.m)


@dataclass(frozen=True)
class AdicRectangle:
    """A depth-k adic rectangle addressed by its digit word.

    digits is a tuple of (d_t, c_t) pairs, t = 1..k: d_t the base-n digit of
    the x side, c_t the base-m digit of the y side.  The rectangle is

        [x0, x0 + n**-k) x [y0, y0 + m**-k),
        x0 = sum_t d_t / n**t,   y0 = sum_t c_t / m**t.
    """

    digits: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "digits", tuple((int(d), int(c)) for d, c in self.digits))

    @property
    def depth(self) -> int:
        return len(self.digits)

    def corner(self, n: int, m: int) -> tuple[Fraction, Fraction]:
        """Exact lower-left corner for bases (n, m)."""
        x0 = sum((Fraction(d, n ** (t + 1)) for t, (d, _) in enumerate(self.digits)), Fraction(0))
        y0 = sum((Fraction(c, m ** (t + 1)) for t, (_, c) in enumerate(self.digits)), Fraction(0))
        return x0, y0


def rectangle_measure(spec: GridSpec, rect: AdicRectangle) -> Fraction:
    """Exact mu-measure of an adic rectangle: the product of cell weights.

    The self-affine recursion gives mu(R) = prod_t p[c_t][d_t]; an empty
    word addresses the whole square and has measure 1.  Digits outside the
    grid raise InputError; words through absent cells simply have measure 0.
    """
    value = Fraction(1)
    for t, (d, c) in enumerate(rect.digits):
        if not (0 <= d < spec.n and 0 <= c < spec.m):
            raise InputError(f"rectangle digit {t} out of range for a {spec.m}x{spec.n} grid: ({d}, {c})")
        value *= spec.weights[c][d]
        if value == 0:
            return Fraction(0)
    return value


class _CellSampler:
    """Exact categorical draws over kept cells.

    Cells are ordered by (row, column), rows bottom to top.  A draw takes a
    53-bit uniform integer u and selects the first cell whose scaled
    cumulative weight exceeds u * D, where D is the common denominator of
    the cumulative weights -- pure integer comparisons, so the selection is
    exactly faithful to the rational weights.
    """

    def __init__(self, spec: GridSpec):
        self.support = [(i, j) for i, j, _ in spec.kept()]
        cums: list[Fraction] = []
        acc = Fraction(0)
        for _, _, w in spec.kept():
            acc += w
            cums.append(acc)
        denom = math.lcm(*(c.denominator for c in cums))
        self.denom = denom
        self.thresholds = [(c.numerator * (denom // c.denominator)) << _UNIFORM_BITS for c in cums]

    def draw(self, rng: random.Random) -> tuple[int, int]:
        u = rng.getrandbits(_UNIFORM_BITS) * self.denom
        return self.support[bisect_right(self.thresholds, u)]


def sample_points(spec: GridSpec, count: int, depth: int = 32, seed: int = 0) -> list[tuple[float, float]]:
    """Draw `count` points of mu via truncated digit addresses.

    Each point draws `depth` cells (i_t, j_t) independently with the grid
    weights and evaluates the truncated coding map

        x = sum_t i_t / n**(t+1),   y = sum_t j_t / m**(t+1),  t = 0..depth-1.

    The generator is the named Mersenne Twister behind random.Random (a
    twisted generalized feedback shift register), seeded with `seed`;
    draws consume one 53-bit uniform per digit in point-major order, so
    output is identical for identical seeds on every platform.
    """
    if count < 0:
        raise InputError("sample count must be nonnegative")
    if depth < 1:
        raise InputError("sampling depth must be >= 1")
    rng = random.Random(seed)
    sampler = _CellSampler(spec)
    points: list[tuple[float, float]] = []
    for _ in range(count):
        word = [sampler.draw(rng) for _ in range(depth)]
        x = y = 0.0
        for i, j in reversed(word):
            x = (x + i) / spec.n
            y = (y + j) / spec.m
        points.append((x, y))
    return points


@dataclass(frozen=True)
class Raster:
    """Exact depth-K raster of mu: one rational mass per depth-K cell.

    rows[Y][X] is the measure of the adic rectangle with x-index X and
    y-index Y, Y counted bottom to top (row 0 at the bottom).  width = n**K,
    height = m**K, and the values sum to 1.  PGM export writes rows top to
    bottom with pixel = round(255 * (1 - v / vmax)): zero mass renders
    white, the heaviest cell black.
    """

    width: int
    height: int
    depth: int
    rows: tuple[tuple[Fraction, ...], ...]

    @cached_property
    def vmax(self) -> Fraction:
        return max(max(row) for row in self.rows)

    def value_at(self, x_index: int, y_index: int) -> Fraction:
        return self.rows[y_index][x_index]

    def _pixels(self) -> Iterator[int]:
        vmax = self.vmax
        for row in reversed(self.rows):  # PGM rows run top to bottom
            for v in row:
                yield round(255 * (1 - v / vmax))

    def to_pgm(self) -> bytes:
        """Binary PGM (P5), maxval 255."""
        header = f"P5\n{self.width} {self.height}\n255\n".encode("ascii")
        return header + bytes(self._pixels())

    def to_plain_pgm(self) -> str:
        """Plain-text PGM (P2), maxval 255, one raster row per line."""
        lines = [f"P2\n{self.width} {self.height}\n255"]
        pixels = list(self._pixels())
        for start in range(0, len(pixels), self.width):
            lines.append(" ".join(str(p) for p in pixels[start : start + self.width]))
        return "\n".join(lines) + "\n"


def render_raster(spec: GridSpec, iterations: int) -> Raster:
    """Exact raster of mu at the given subdivision depth.

    Refines the unit square `iterations` times; the value of the cell with
    digit word W equals rectangle_measure(spec, W) exactly.  Raises
    BudgetError before allocating if n**K * m**K exceeds MAX_RASTER_CELLS.
    """
    if iterations < 0:
        raise InputError("iterations must be nonnegative")
    cells = (spec.n * spec.m) ** iterations
    if cells > MAX_RASTER_CELLS:
        raise BudgetError(f"raster would hold {cells} cells, budget is {MAX_RASTER_CELLS}")
    rows: list[list[Fraction]] = [[Fraction(1)]]
    zero = Fraction(0)
    kept_cells = list(spec.kept())
    for _ in range(iterations):
        height, width = len(rows), len(rows[0])
        new_rows: list[list[Fraction]] = [[zero] * (width * spec.n) for _ in range(height * spec.m)]
        for y_index in range(height):
            for x_index in range(width):
                v = rows[y_index][x_index]
                if v == 0:
                    continue
                for i, j, w in kept_cells:
                    new_rows[y_index * spec.m + j][x_index * spec.n + i] = v * w
        rows = new_rows
    return Raster(
        width=spec.n**iterations,
        height=spec.m**iterations,
        depth=iterations,
        rows=tuple(tuple(row) for row in rows),
    )
