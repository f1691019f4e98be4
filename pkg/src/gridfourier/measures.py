"""One-dimensional digit measures attached to a grid IFS, and discretizations.

The x-marginal of a grid IFS measure is itself the invariant measure of a
base-n digit IFS whose weights are the column totals (symmetrically for y
with row totals).  Slicing mu along a horizontal line with base-m digit
stream (c_0, c_1, ...) yields another digit-type measure on [0, 1) whose
digit distribution at position k is row c_k renormalized.

This module classifies such digit measures exactly (Lebesgue / singular /
atomic, with the witnessing reason), computes Kakutani affinities and
product curves, Frostman regularity pairs with randomized verification, and
finite depth-K discretizations used as quadrature throughout the package.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from .errors import BudgetError, InputError
from .grid import GridSpec

# Refuse discretizations that would not fit in memory.
MAX_ATOMS = 10**7


class MeasureTag(enum.Enum):
    LEBESGUE = "Lebesgue"
    SINGULAR = "Singular"
    ATOMIC = "Atomic"


class MeasureReason(enum.Enum):
    UNIFORM_FULL_DIGITS = "UniformFullDigits"  # every digit present with weight 1/base
    MISSING_DIGIT = "MissingDigit"  # some digit has weight zero
    KAKUTANI_NONUNIFORM = "KakutaniNonuniform"  # all digits present, weights nonuniform
    FULL_WEIGHT_DIGIT = "FullWeightDigit"  # one digit carries all the mass


@dataclass(frozen=True)
class MeasureClass:
    """Exact measure-class verdict for a digit IFS measure."""

    tag: MeasureTag
    reason: MeasureReason


@dataclass(frozen=True)
class MarginalIFS:
    """Invariant measure of a base-b digit IFS: x -> (x + i) / b with weight w_i.

    digit_weights is exact, nonnegative, and sums to 1.  base >= 1; base 1 is
    the degenerate single-digit case (point mass at 0) that arises from 1xN
    or Nx1 grids.
    """

    base: int
    digit_weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.base < 1:
            raise InputError("digit IFS base must be >= 1")
        weights = tuple(Fraction(w) for w in self.digit_weights)
        if len(weights) != self.base:
            raise InputError(f"expected {self.base} digit weights, got {len(weights)}")
        if any(w < 0 for w in weights):
            raise InputError("digit weights must be nonnegative")
        if sum(weights) != 1:
            raise InputError(f"digit weights sum to {sum(weights)}, expected 1")
        object.__setattr__(self, "digit_weights", weights)

    def support_digits(self) -> tuple[int, ...]:
        return tuple(i for i, w in enumerate(self.digit_weights) if w > 0)


def project_marginal(spec: GridSpec, axis: str) -> MarginalIFS:
    """Exact marginal of mu: column totals for axis "x", row totals for "y"."""
    if axis == "x":
        weights = tuple(sum((spec.weights[j][i] for j in range(spec.m)), Fraction(0)) for i in range(spec.n))
        return MarginalIFS(base=spec.n, digit_weights=weights)
    if axis == "y":
        weights = tuple(sum(row, Fraction(0)) for row in spec.weights)
        return MarginalIFS(base=spec.m, digit_weights=weights)
    raise InputError(f"axis must be 'x' or 'y', got {axis!r}")


def classify_marginal(marg: MarginalIFS) -> MeasureClass:
    """Trichotomy for digit IFS measures, decided by exact rational comparisons.

    * some w_i == 1      -> Atomic (point mass; full-weight digit);
    * all w_i == 1/base  -> Lebesgue on [0, 1];
    * otherwise Singular: by Kakutani's dichotomy applied to the digit
      product representation, a digit measure with non-uniform weights is
      mutually singular with Lebesgue.  The reason distinguishes a missing
      digit (support is a strict Cantor subset) from non-uniform weights on
      a full digit set.
    """
    weights = marg.digit_weights
    if any(w == 1 for w in weights):
        return MeasureClass(MeasureTag.ATOMIC, MeasureReason.FULL_WEIGHT_DIGIT)
    uniform = Fraction(1, marg.base)
    if all(w == uniform for w in weights):
        return MeasureClass(MeasureTag.LEBESGUE, MeasureReason.UNIFORM_FULL_DIGITS)
    if any(w == 0 for w in weights):
        return MeasureClass(MeasureTag.SINGULAR, MeasureReason.MISSING_DIGIT)
    return MeasureClass(MeasureTag.SINGULAR, MeasureReason.KAKUTANI_NONUNIFORM)


def _weight_vector(values: Sequence[object], name: str) -> tuple[Fraction, ...]:
    weights = tuple(Fraction(v) for v in values)
    if any(w < 0 for w in weights):
        raise InputError(f"{name} has a negative entry")
    if sum(weights) != 1:
        raise InputError(f"{name} must sum to 1, got {sum(weights)}")
    return weights


def kakutani_affinity(p: Sequence[object], q: Sequence[object]) -> float:
    """Affinity rho(p, q) = sum_i sqrt(p_i q_i) of two digit distributions.

    Requires equal lengths, exact unit sums, and q_i == 0 => p_i == 0 (the
    factor measure p must be absolutely continuous with respect to q for
    Kakutani's criterion on the product measures to apply).  Returns a float
    in (0, 1], equal to 1 exactly when p == q.
    """
    pw = _weight_vector(p, "p")
    qw = _weight_vector(q, "q")
    if len(pw) != len(qw):
        raise InputError(f"weight vectors have different lengths: {len(pw)} vs {len(qw)}")
    for i, (pi, qi) in enumerate(zip(pw, qw)):
        if qi == 0 and pi != 0:
            raise InputError(f"support violation at digit {i}: q is zero where p is not")
    return math.fsum(math.sqrt(float(pi * qi)) for pi, qi in zip(pw, qw))


def kakutani_product_curve(marg: MarginalIFS, reference: MarginalIFS, terms: int) -> list[float]:
    """Partial Kakutani products rho**k, k = 1..terms, for two digit IFS measures.

    Both measures are infinite products of i.i.d. digit factors, so the
    partial affinity over the first k digit positions is rho(p, q)**k.  The
    product measures are mutually singular iff the curve tends to 0, and
    equivalent iff it stays bounded away from 0; the curve is nonincreasing.
    """
    if marg.base != reference.base:
        raise InputError("product curve requires equal bases")
    if terms < 0:
        raise InputError("terms must be nonnegative")
    rho = kakutani_affinity(marg.digit_weights, reference.digit_weights)
    curve: list[float] = []
    acc = 1.0
    for _ in range(terms):
        acc *= rho
        curve.append(acc)
    return curve


@dataclass(frozen=True)
class FrostmanBound:
    """A certified pair (alpha, C) with mu(I) <= C |I|**alpha for adic intervals I.

    For a digit IFS with maximal digit weight gamma < 1 the pair

        alpha = -ln(gamma) / ln(base),    C = base + 1

    works: a depth-k adic interval has measure at most gamma**k =
    (base**-k)**alpha, and an arbitrary interval meets at most base + 1
    adic intervals of comparable length.  Atomic measures admit no positive
    exponent; they are flagged and get alpha = 0.
    """

    alpha: float
    C: float
    atomic: bool = False


def frostman_bound(marg: MarginalIFS) -> FrostmanBound:
    gamma = max(marg.digit_weights)
    if gamma == 1:
        return FrostmanBound(alpha=0.0, C=float(marg.base + 1), atomic=True)
    alpha = -math.log(float(gamma)) / math.log(marg.base)
    return FrostmanBound(alpha=alpha, C=float(marg.base + 1), atomic=False)


@dataclass(frozen=True)
class FrostmanCheck:
    """Outcome of randomized verification of a Frostman pair.

    margin of an interval I = mu(I) / (C |I|**alpha); a margin above 1 is a
    violation of the claimed bound.  worst_word is the digit word of the
    interval realizing worst_margin.
    """

    trials: int
    max_depth: int
    violations: int
    worst_margin: float
    worst_word: tuple[int, ...]

    @property
    def passed(self) -> bool:
        return self.violations == 0


def verify_frostman(
    marg: MarginalIFS,
    bound: FrostmanBound,
    trials: int = 10_000,
    max_depth: int = 10,
    seed: int = 0,
) -> FrostmanCheck:
    """Sample random adic intervals and test mu(I) <= C |I|**alpha.

    Depths are uniform on 1..max_depth and digits uniform on 0..base-1; the
    interval measure is the exact digit product.  A violation is a failed
    bound, not an error -- callers inspect the report.
    """
    if trials < 0:
        raise InputError("trials must be nonnegative")
    if max_depth < 1:
        raise InputError("max_depth must be >= 1")
    rng = random.Random(seed)
    worst_margin = 0.0
    worst_word: tuple[int, ...] = ()
    violations = 0
    for _ in range(trials):
        depth = rng.randint(1, max_depth)
        word = tuple(rng.randrange(marg.base) for _ in range(depth))
        measure = Fraction(1)
        for d in word:
            measure *= marg.digit_weights[d]
            if measure == 0:
                break
        cap = bound.C * float(marg.base) ** (-depth * bound.alpha)
        margin = float(measure) / cap
        if margin > worst_margin:
            worst_margin = margin
            worst_word = word
        if margin > 1.0:
            violations += 1
    return FrostmanCheck(
        trials=trials,
        max_depth=max_depth,
        violations=violations,
        worst_margin=worst_margin,
        worst_word=worst_word,
    )


@dataclass(frozen=True)
class DigitStream:
    """An eventually periodic digit stream: preperiod then repeating period."""

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "preperiod", tuple(int(d) for d in self.preperiod))
        object.__setattr__(self, "period", tuple(int(d) for d in self.period))
        if len(self.period) < 1:
            raise InputError("digit stream period must be nonempty")
        if any(d < 0 for d in self.preperiod + self.period):
            raise InputError("digits must be nonnegative")

    def digit(self, k: int) -> int:
        if k < len(self.preperiod):
            return self.preperiod[k]
        return self.period[(k - len(self.preperiod)) % len(self.period)]

    def digits_used(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.preperiod) | set(self.period)))

    @classmethod
    def from_word(cls, word: Sequence[int]) -> "DigitStream":
        """A finite word extended by zeros."""
        return cls(preperiod=tuple(word), period=(0,))

    @classmethod
    def from_rational(cls, y: Fraction, base: int) -> "DigitStream":
        """Exact base-`base` expansion of y in [0, 1) by long division.

        Remainders repeat after at most denominator steps, so the expansion
        is eventually periodic; the detected cycle becomes the period.
        """
        y = Fraction(y)
        if not (0 <= y < 1):
            raise InputError(f"y must lie in [0, 1), got {y}")
        if base < 2:
            raise InputError("digit expansion requires base >= 2")
        den = y.denominator
        seen: dict[int, int] = {}
        digits: list[int] = []
        r = y.numerator
        while r not in seen:
            seen[r] = len(digits)
            r *= base
            digits.append(r // den)
            r %= den
        start = seen[r]
        return cls(preperiod=tuple(digits[:start]), period=tuple(digits[start:]))


@dataclass(frozen=True)
class SliceMeasure:
    """Horizontal slice of a grid IFS measure along a fixed y digit stream.

    The conditional measure of mu on the line with base-m digits
    (c_0, c_1, ...) is the digit-type measure on [0, 1) whose digit
    distribution at position k is row c_k renormalized:

        P(digit_k = i) = p[c_k][i] / beta[c_k],

    where beta[c] is the total weight of row c.  Undefined when the stream
    passes through a weightless row (the line misses the support of mu).
    """

    base: int
    stream: DigitStream
    row_vectors: tuple[tuple[Fraction, ...] | None, ...]

    def position_vector(self, k: int) -> tuple[Fraction, ...]:
        vec = self.row_vectors[self.stream.digit(k)]
        assert vec is not None  # guaranteed by slice_measure validation
        return vec

    def position_support(self, k: int) -> tuple[int, ...]:
        return tuple(i for i, w in enumerate(self.position_vector(k)) if w > 0)


YLike = Union[DigitStream, Fraction, Sequence[int]]


def slice_measure(spec: GridSpec, y: YLike) -> SliceMeasure:
    """Slice of mu along y: a digit stream, an exact rational in [0, 1), or a
    finite digit word (extended by zeros).

    Raises InputError when any digit of the stream indexes a row of total
    weight zero -- such lines lie outside the support of mu.
    """
    if isinstance(y, DigitStream):
        stream = y
    elif isinstance(y, Fraction):
        stream = DigitStream.from_rational(y, spec.m)
    else:
        stream = DigitStream.from_word(tuple(y))
    row_weights = [sum(row, Fraction(0)) for row in spec.weights]
    vectors: list[tuple[Fraction, ...] | None] = []
    for j, beta in enumerate(row_weights):
        if beta == 0:
            vectors.append(None)
        else:
            vectors.append(tuple(spec.weights[j][i] / beta for i in range(spec.n)))
    for c in stream.digits_used():
        if c >= spec.m:
            raise InputError(f"digit {c} out of range for base {spec.m}")
        if vectors[c] is None:
            raise InputError(f"y digit {c} hits a weightless row: the line lies outside the support")
    return SliceMeasure(base=spec.n, stream=stream, row_vectors=tuple(vectors))


Location = Union[Fraction, tuple[Fraction, Fraction]]


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finite atomic approximation of a measure at digit depth K.

    Atoms sit at the left endpoints of the depth-K adic cells of the
    support; the weight of an atom is the exact digit-product measure of
    its cell, so weights sum to 1.  Atoms are ordered by location
    (for 2D: by y-word, then x-word), which fixes every downstream
    quadrature and export order.
    """

    dim: int
    depth: int
    locations: tuple[Location, ...]
    weights: tuple[Fraction, ...]
    provenance: str = ""

    def __len__(self) -> int:
        return len(self.locations)

    @cached_property
    def xs(self) -> np.ndarray:
        if self.dim == 1:
            return np.array([float(x) for x in self.locations], dtype=float)
        return np.array([float(x) for x, _ in self.locations], dtype=float)

    @cached_property
    def ys(self) -> np.ndarray:
        if self.dim != 2:
            raise InputError("ys is defined for 2D discretizations only")
        return np.array([float(y) for _, y in self.locations], dtype=float)

    @cached_property
    def weights_float(self) -> np.ndarray:
        return np.array([float(w) for w in self.weights], dtype=float)

    def to_csv(self) -> str:
        """Exact CSV: locations and weights as rational strings."""
        if self.dim == 1:
            lines = ["x,weight"]
            lines += [f"{x},{w}" for x, w in zip(self.locations, self.weights)]
        else:
            lines = ["x,y,weight"]
            lines += [f"{x},{y},{w}" for (x, y), w in zip(self.locations, self.weights)]
        return "\n".join(lines) + "\n"


def _check_atom_budget(count: int) -> None:
    if count > MAX_ATOMS:
        raise BudgetError(f"discretization would hold {count} atoms, budget is {MAX_ATOMS}")


def _enumerate_levels(levels: list[list[tuple[int, Fraction]]], base: int) -> tuple[list[Fraction], list[Fraction]]:
    """All digit words over per-position supports, with product weights.

    Returns (locations, weights) in lexicographic word order, which equals
    increasing-location order at fixed depth.  Locations are exact:
    word (d_0..d_{K-1}) sits at sum_t d_t / base**(t+1).
    """
    depth = len(levels)
    scale = base**depth
    locations: list[Fraction] = []
    weights: list[Fraction] = []

    def recurse(t: int, numerator: int, weight: Fraction) -> None:
        if t == depth:
            locations.append(Fraction(numerator, scale))
            weights.append(weight)
            return
        for digit, w in levels[t]:
            recurse(t + 1, numerator * base + digit, weight * w)

    recurse(0, 0, Fraction(1))
    return locations, weights


def discretize(measure: Union[MarginalIFS, SliceMeasure, GridSpec], depth: int) -> DiscreteMeasure:
    """Depth-K left-endpoint discretization with exact digit-product weights.

    One atom per depth-K digit word of positive weight.  The discrete
    transform of the result equals the K-truncated infinite-product
    transform of the underlying measure, which keeps quadrature and Gram
    computations mutually consistent.
    """
    if depth < 0:
        raise InputError("depth must be nonnegative")
    if isinstance(measure, MarginalIFS):
        support = [(i, measure.digit_weights[i]) for i in measure.support_digits()]
        _check_atom_budget(len(support) ** depth)
        locations, weights = _enumerate_levels([support] * depth, measure.base)
        return DiscreteMeasure(
            dim=1,
            depth=depth,
            locations=tuple(locations),
            weights=tuple(weights),
            provenance=f"marginal base {measure.base} depth {depth}",
        )
    if isinstance(measure, SliceMeasure):
        levels = []
        count = 1
        for k in range(depth):
            vec = measure.position_vector(k)
            level = [(i, w) for i, w in enumerate(vec) if w > 0]
            count *= len(level)
            levels.append(level)
        _check_atom_budget(count)
        locations, weights = _enumerate_levels(levels, measure.base)
        return DiscreteMeasure(
            dim=1,
            depth=depth,
            locations=tuple(locations),
            weights=tuple(weights),
            provenance=f"slice base {measure.base} depth {depth}",
        )
    if isinstance(measure, GridSpec):
        return _discretize_grid(measure, depth)
    raise InputError(f"cannot discretize {type(measure).__name__}")


def _discretize_grid(spec: GridSpec, depth: int) -> DiscreteMeasure:
    """2D discretization grouped by y-word (fiber), then x-word."""
    _check_atom_budget(spec.cell_count**depth)
    row_weights = [sum(row, Fraction(0)) for row in spec.weights]
    y_support = [j for j in range(spec.m) if row_weights[j] > 0]
    locations: list[tuple[Fraction, Fraction]] = []
    weights: list[Fraction] = []
    x_scale = spec.n**depth
    y_scale = spec.m**depth

    def recurse_x(levels: list[int], t: int, numerator: int, weight: Fraction, y_loc: Fraction) -> None:
        if t == len(levels):
            locations.append((Fraction(numerator, x_scale), y_loc))
            weights.append(weight)
            return
        row = levels[t]
        for i in range(spec.n):
            if spec.cells[row][i]:
                recurse_x(levels, t + 1, numerator * spec.n + i, weight * spec.weights[row][i], y_loc)

    def recurse_y(t: int, numerator: int, word: list[int]) -> None:
        if t == depth:
            recurse_x(word, 0, 0, Fraction(1), Fraction(numerator, y_scale))
            return
        for j in y_support:
            word.append(j)
            recurse_y(t + 1, numerator * spec.m + j, word)
            word.pop()

    recurse_y(0, 0, [])
    return DiscreteMeasure(
        dim=2,
        depth=depth,
        locations=tuple(locations),
        weights=tuple(weights),
        provenance=f"grid {spec.m}x{spec.n} depth {depth}",
    )
