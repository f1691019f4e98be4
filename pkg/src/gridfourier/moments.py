"""Fourier-Stieltjes transforms of grid IFS measures, with certified error.

Convention (fixed package-wide): mu_hat(xi) = integral of exp(-2*pi*i*xi*x)
d mu(x).  Self-similarity turns the transform of a digit IFS measure into an
infinite product over digit positions,

    mu_hat(k) = prod_{t>=1} W(k / base**t),    W(u) = sum_i w_i e^{-2 pi i u i},

and truncating the product after T factors costs at most
2*pi*|k| * base**(-T) (each factor differs from 1 by at most
2*pi*|k|*(base-1)/base**t, and the tail sums geometrically).  Every
transform here returns the truncated value together with that certified
bound.  The depth-K discretization of a measure has exactly the K-truncated
product as its transform, which is what keeps quadrature and moment tables
consistent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import InputError
from .grid import GridSpec
from .measures import DiscreteMeasure, MarginalIFS, SliceMeasure

DEFAULT_EPS = 1e-9


@dataclass(frozen=True)
class MomentValue:
    """A truncated transform value with its certified truncation bound."""

    value: complex
    error_bound: float
    truncation_depth: int


def truncation_depth(base: int, k: int, eps: float) -> int:
    """Smallest T >= 1 with 2*pi*|k| * base**(-T) <= eps (0 when exact).

    k == 0 or base == 1 make every factor exactly 1, so T = 0 suffices and
    the error is zero.
    """
    if k == 0 or base == 1:
        return 0
    if eps <= 0:
        raise InputError("eps must be positive")
    target = 2 * math.pi * abs(k) / eps
    if target <= 1:
        return 1
    return max(1, math.ceil(math.log(target) / math.log(base)))


def _tail_bound(base: int, k: int, depth: int) -> float:
    if k == 0 or base == 1:
        return 0.0
    return 2 * math.pi * abs(k) * float(base) ** (-depth)


def _digit_factor(weights_float: np.ndarray, digits: np.ndarray, u: float) -> complex:
    """W(u) = sum_i w_i exp(-2 pi i u digit_i)."""
    return complex(np.exp(-2j * math.pi * u * digits) @ weights_float)


def marginal_transform(marg: MarginalIFS, k: int, eps: float = DEFAULT_EPS, depth: int | None = None) -> MomentValue:
    """Transform of a digit IFS measure at integer frequency k.

    Computes the product truncated at depth T chosen from eps (or forced by
    `depth`); the reported error_bound is the certified tail bound, which is
    <= eps on the eps-driven path.  k = 0 returns exactly 1 with zero error.
    """
    T = truncation_depth(marg.base, k, eps) if depth is None else depth
    if T == 0 or k == 0 or marg.base == 1:
        return MomentValue(value=1.0 + 0.0j, error_bound=0.0, truncation_depth=0)
    support = marg.support_digits()
    digits = np.array(support, dtype=float)
    weights = np.array([float(marg.digit_weights[i]) for i in support], dtype=float)
    value = 1.0 + 0.0j
    for t in range(1, T + 1):
        value *= _digit_factor(weights, digits, k / marg.base**t)
    return MomentValue(value=value, error_bound=_tail_bound(marg.base, k, T), truncation_depth=T)


def slice_transform(sl: SliceMeasure, k: int, eps: float = DEFAULT_EPS, depth: int | None = None) -> MomentValue:
    """Transform of a slice measure: the product over digit positions

        prod_{t=1..T} sum_i v_i^{(t-1)} e^{-2 pi i k i / n**t}

    with v^{(t)} the position-t digit distribution.  Same truncation rule
    and certificate as marginal_transform.
    """
    T = truncation_depth(sl.base, k, eps) if depth is None else depth
    if T == 0 or k == 0 or sl.base == 1:
        return MomentValue(value=1.0 + 0.0j, error_bound=0.0, truncation_depth=0)
    value = 1.0 + 0.0j
    for t in range(1, T + 1):
        vec = sl.position_vector(t - 1)
        support = [i for i, w in enumerate(vec) if w > 0]
        digits = np.array(support, dtype=float)
        weights = np.array([float(vec[i]) for i in support], dtype=float)
        value *= _digit_factor(weights, digits, k / sl.base**t)
    return MomentValue(value=value, error_bound=_tail_bound(sl.base, k, T), truncation_depth=T)


def transform_2d(spec: GridSpec, k: int, l: int, eps: float = DEFAULT_EPS, depth: int | None = None) -> MomentValue:
    """2D transform mu_hat(k, l) = integral e^{-2 pi i (k x + l y)} d mu.

    Product over levels of the joint digit factor
    sum_ij p_ij e^{-2 pi i (k i / n**t + l j / m**t)}.  The truncation depth
    is at least the max of the per-axis 1D rules (each run at eps/2), so the
    combined certified bound 2*pi*(|k| n**-T + |l| m**-T) is <= eps.
    """
    if depth is None:
        T = max(
            truncation_depth(spec.n, k, eps / 2),
            truncation_depth(spec.m, l, eps / 2),
        )
    else:
        T = depth
    if T == 0:
        return MomentValue(value=1.0 + 0.0j, error_bound=0.0, truncation_depth=0)
    cols = np.array([i for i, _, _ in spec.kept()], dtype=float)
    rows = np.array([j for _, j, _ in spec.kept()], dtype=float)
    weights = np.array([float(w) for _, _, w in spec.kept()], dtype=float)
    value = 1.0 + 0.0j
    for t in range(1, T + 1):
        phases = np.exp(-2j * math.pi * (k * cols / spec.n**t + l * rows / spec.m**t))
        value *= complex(phases @ weights)
    bound = _tail_bound(spec.n, k, T) + _tail_bound(spec.m, l, T)
    return MomentValue(value=value, error_bound=bound, truncation_depth=T)


def discrete_transform(dm: DiscreteMeasure, k: Union[int, tuple[int, int]]) -> complex:
    """Exact finite sum sum_a w_a e^{-2 pi i k . x_a} over the atoms."""
    if dm.dim == 1:
        if not isinstance(k, int):
            raise InputError("1D discrete transform takes an integer frequency")
        phases = np.exp(-2j * math.pi * k * dm.xs)
    else:
        if isinstance(k, int):
            raise InputError("2D discrete transform takes a frequency pair (k, l)")
        kx, ky = k
        phases = np.exp(-2j * math.pi * (kx * dm.xs + ky * dm.ys))
    return complex(phases @ dm.weights_float)


@dataclass(frozen=True)
class MomentTable:
    """Indexed transform values over a frequency range, with one shared bound.

    For 1D tables keys are integers k_min..k_max; for 2D tables keys are
    (k, l) pairs over the stated rectangle.  error_bound is the largest
    certified truncation bound over the table.  Tables double as Gram
    sources: <e_a, e_b> = transform(b - a) under the package convention.
    """

    descriptor: str
    values: dict
    error_bound: float

    def __getitem__(self, key) -> complex:
        try:
            return self.values[key]
        except KeyError:
            raise InputError(f"frequency {key} outside the table range ({self.descriptor})") from None

    def gram(self, a: int, b: int) -> complex:
        return self[b - a]


def moment_table(measure: Union[MarginalIFS, SliceMeasure], k_min: int, k_max: int, eps: float = DEFAULT_EPS) -> MomentTable:
    """1D table of transform values for k in [k_min, k_max]."""
    if k_min > k_max:
        raise InputError("k_min must be <= k_max")
    transform: Callable[[int], MomentValue]
    if isinstance(measure, MarginalIFS):
        transform = lambda k: marginal_transform(measure, k, eps)
        descriptor = f"marginal base {measure.base}"
    else:
        transform = lambda k: slice_transform(measure, k, eps)
        descriptor = f"slice base {measure.base}"
    values: dict[int, complex] = {}
    bound = 0.0
    for k in range(k_min, k_max + 1):
        mv = transform(k)
        values[k] = mv.value
        bound = max(bound, mv.error_bound)
    return MomentTable(descriptor=f"{descriptor}, k in [{k_min}, {k_max}]", values=values, error_bound=bound)


def moment_table_2d(
    spec: GridSpec,
    k_range: tuple[int, int],
    l_range: tuple[int, int],
    eps: float = DEFAULT_EPS,
) -> MomentTable:
    """2D table of transform values over a frequency rectangle."""
    (k_min, k_max), (l_min, l_max) = k_range, l_range
    if k_min > k_max or l_min > l_max:
        raise InputError("frequency ranges must be nonempty")
    values: dict[tuple[int, int], complex] = {}
    bound = 0.0
    for k in range(k_min, k_max + 1):
        for l in range(l_min, l_max + 1):
            mv = transform_2d(spec, k, l, eps)
            values[(k, l)] = mv.value
            bound = max(bound, mv.error_bound)
    return MomentTable(
        descriptor=f"grid {spec.m}x{spec.n}, k in [{k_min}, {k_max}], l in [{l_min}, {l_max}]",
        values=values,
        error_bound=bound,
    )
