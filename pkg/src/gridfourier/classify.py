"""Which Fourier series type does L^2(mu) admit, and why.

Three outcomes, in the package's vocabulary:

* Type2 -- an expansion with both indices over the nonnegative integers,
  available once mu is slice-singular in some direction (the conditional
  measures along that direction's lines are singular AND that direction's
  marginal is singular);
* Type3 -- an expansion with one nonnegative and one bi-infinite index,
  available when mu is singular-fibered in one direction while the
  conditioning marginal is (essentially) Lebesgue;
* Inconclusive -- no criterion fired (in particular, a full uniform grid is
  Lebesgue measure on the square and the classical basis applies).

Each sufficient criterion is evaluated with exact rational arithmetic where
the inequality is rational, and with a declared borderline band of 1e-12
where floats (dimensions, xi aggregates) enter; borderline comparisons are
reported as NOT satisfied, with a warning note.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import InputError
from .grid import GridSpec, grid_stats, mcmullen_dimension
from .measures import (
    MeasureClass,
    MeasureTag,
    classify_marginal,
    frostman_bound,
    project_marginal,
)

BORDERLINE_BAND = 1e-12

# Canonical criterion names, in canonical trace order.
COR_COLLECT_1 = "CorCollect1"
COR_COLLECT_2 = "CorCollect2"
COR_COLLECT_3 = "CorCollect3"
THM_A = "ThmA"
COR_A_COL = "CorA_col"
COR_A_ROW = "CorA_row"
SQUARE_CARPET = "SquareCarpet"
FULL_GRID_X = "FullGrid_x"
FULL_GRID_Y = "FullGrid_y"

VERDICT_TYPE2 = "Type2"
VERDICT_TYPE3 = "Type3"
VERDICT_INCONCLUSIVE = "Inconclusive"

DIRECTION_X = "xSlices"
DIRECTION_Y = "ySlices"
DIRECTION_BOTH = "both"
DIRECTION_NONE = "none"


@dataclass(frozen=True)
class CriterionResult:
    """Outcome of one sufficient criterion.

    quantities holds the numbers the decision was made from: exact rationals
    stay Fraction, genuinely irrational quantities are floats.  borderline
    means the decisive comparison landed inside the 1e-12 band and was
    reported unsatisfied.
    """

    name: str
    applicable: bool
    satisfied: bool
    borderline: bool = False
    quantities: dict = field(default_factory=dict)
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class AdmissibilityReport:
    """Full classification outcome with the per-criterion trace."""

    marginal_x: MeasureClass
    marginal_y: MeasureClass
    mu_singular: bool
    verdict: str
    slice_direction: str
    trace: tuple[CriterionResult, ...]
    notes: tuple[str, ...]

    def criterion(self, name: str, axis: Optional[str] = None) -> CriterionResult:
        """Look up a trace entry by name (and axis, where names repeat)."""
        for entry in self.trace:
            if entry.name == name and (axis is None or entry.quantities.get("axis") == axis):
                return entry
        raise KeyError(name)


def _float_less(lhs: float, rhs: float) -> tuple[bool, bool]:
    """Strict comparison with the declared borderline band.

    Returns (satisfied, borderline); inside the band the comparison is
    reported unsatisfied and flagged.
    """
    if abs(lhs - rhs) <= BORDERLINE_BAND:
        return False, True
    return lhs < rhs, False


def check_cor_collect(class_x: MeasureClass, class_y: MeasureClass, mu_singular: bool) -> list[CriterionResult]:
    """The three collected marginal-based criteria.

    1. both marginals singular (non-atomic)         -> Type2, both directions;
    2. one marginal singular, the other Lebesgue    -> Type3;
    3. both marginals Lebesgue and mu singular      -> Type3.
    """
    atomic = MeasureTag.ATOMIC in (class_x.tag, class_y.tag)
    quantities = {"marginalX": class_x.tag.value, "marginalY": class_y.tag.value}
    if atomic:
        note = ("inapplicable: an atomic marginal places mu on a line",)
        return [
            CriterionResult(name, applicable=False, satisfied=False, quantities=dict(quantities), notes=note)
            for name in (COR_COLLECT_1, COR_COLLECT_2, COR_COLLECT_3)
        ]
    both_singular = class_x.tag is MeasureTag.SINGULAR and class_y.tag is MeasureTag.SINGULAR
    mixed = {class_x.tag, class_y.tag} == {MeasureTag.SINGULAR, MeasureTag.LEBESGUE}
    both_lebesgue = class_x.tag is MeasureTag.LEBESGUE and class_y.tag is MeasureTag.LEBESGUE
    q3 = dict(quantities)
    q3["muSingular"] = mu_singular
    return [
        CriterionResult(COR_COLLECT_1, applicable=True, satisfied=both_singular, quantities=dict(quantities)),
        CriterionResult(COR_COLLECT_2, applicable=True, satisfied=mixed, quantities=dict(quantities)),
        CriterionResult(COR_COLLECT_3, applicable=True, satisfied=both_lebesgue and mu_singular, quantities=q3),
    ]


def check_thm_a(spec: GridSpec, axis: str) -> CriterionResult:
    """Frostman/dimension slice criterion for one axis.

    Applicable when the axis marginal is singular (non-atomic) and the
    attractor dimension formula is defined.  With the marginal's certified
    Frostman exponent alpha, the criterion asks dim_H(K) < alpha + 1; the
    comparison involves floats, so the 1e-12 borderline band applies.
    """
    marg = project_marginal(spec, axis)
    cls = classify_marginal(marg)
    quantities: dict = {"axis": axis, "marginalClass": cls.tag.value}
    if cls.tag is not MeasureTag.SINGULAR:
        return CriterionResult(
            THM_A,
            applicable=False,
            satisfied=False,
            quantities=quantities,
            notes=(f"inapplicable: {axis}-marginal is {cls.tag.value}, criterion requires a singular marginal",),
        )
    try:
        dim = mcmullen_dimension(spec)
    except InputError:
        return CriterionResult(
            THM_A,
            applicable=False,
            satisfied=False,
            quantities=quantities,
            notes=("inapplicable: attractor dimension formula undefined for degenerate grids",),
        )
    bound = frostman_bound(marg)
    quantities.update(alpha=bound.alpha, C=bound.C, dimension=dim, threshold=bound.alpha + 1.0)
    satisfied, borderline = _float_less(dim, bound.alpha + 1.0)
    notes = ()
    if borderline:
        notes = (f"borderline: dim_H(K) equals alpha + 1 within {BORDERLINE_BAND}; reported unsatisfied",)
    return CriterionResult(THM_A, applicable=True, satisfied=satisfied, borderline=borderline, quantities=quantities, notes=notes)


def _cor_a_pair(spec: GridSpec) -> tuple[CriterionResult, CriterionResult, bool]:
    """Column/row aggregate criteria; returns (col, row, transposed)."""
    base_q: dict = {}
    if spec.m == 1 or spec.n == 1:
        note = ("inapplicable: requires m >= 2 and n >= 2",)
        return (
            CriterionResult(COR_A_COL, applicable=False, satisfied=False, quantities=dict(base_q), notes=note),
            CriterionResult(COR_A_ROW, applicable=False, satisfied=False, quantities=dict(base_q), notes=note),
            False,
        )
    if spec.is_full():
        # With every cell kept, both thresholds collapse to the pigeonhole
        # minimum of the corresponding marginal, so the strict inequalities
        # cannot hold for any weight table.
        note = ("inapplicable by arithmetic: full grids make the threshold unattainable",)
        return (
            CriterionResult(COR_A_COL, applicable=False, satisfied=False, quantities=dict(base_q), notes=note),
            CriterionResult(COR_A_ROW, applicable=False, satisfied=False, quantities=dict(base_q), notes=note),
            False,
        )
    transposed = spec.m > spec.n
    work = spec.transpose() if transposed else spec
    stats = grid_stats(work)
    col_q: dict = {
        "transposed": transposed,
        "gamma1": stats.max_col_weight,
        "xi1": stats.xi1,
        "threshold": work.n / stats.xi1,
    }
    row_q: dict = {
        "transposed": transposed,
        "gamma2": stats.max_row_weight,
        "xi2": stats.xi2,
        "threshold": work.m / stats.xi2,
    }
    col_ok, col_border = _float_less(float(stats.max_col_weight), work.n / stats.xi1)
    row_ok, row_border = _float_less(float(stats.max_row_weight), work.m / stats.xi2)
    col_notes = ("borderline: gamma1 equals n/xi1 within the band; reported unsatisfied",) if col_border else ()
    row_notes = ("borderline: gamma2 equals m/xi2 within the band; reported unsatisfied",) if row_border else ()
    return (
        CriterionResult(COR_A_COL, applicable=True, satisfied=col_ok, borderline=col_border, quantities=col_q, notes=col_notes),
        CriterionResult(COR_A_ROW, applicable=True, satisfied=row_ok, borderline=row_border, quantities=row_q, notes=row_notes),
        transposed,
    )


def check_cor_a(spec: GridSpec) -> tuple[CriterionResult, CriterionResult]:
    """Aggregate (xi-based) criteria for the column and row directions.

    Works in the orientation with m <= n (transposing when necessary; the
    results record `transposed`).  The column criterion gamma1 < n / xi1
    certifies that the conditional measures on vertical lines are singular
    for almost every x of the working orientation; the row criterion is the
    analogue for horizontal lines.
    """
    col, row, _ = _cor_a_pair(spec)
    return col, row


def check_square_carpet(spec: GridSpec) -> CriterionResult:
    """Square-grid specialization: for m == n, gamma < m / N suffices.

    gamma is the largest column total and N the number of kept cells; the
    comparison is exact rational arithmetic.  The series type then follows
    from the x-marginal (singular -> Type2, Lebesgue -> Type3).
    """
    if spec.m != spec.n:
        return CriterionResult(
            SQUARE_CARPET,
            applicable=False,
            satisfied=False,
            notes=("inapplicable: requires a square grid (m == n)",),
        )
    stats = grid_stats(spec)
    gamma = stats.max_col_weight
    threshold = Fraction(spec.m, stats.cell_count)
    quantities = {"gamma": gamma, "threshold": threshold, "N": stats.cell_count}
    return CriterionResult(
        SQUARE_CARPET,
        applicable=True,
        satisfied=gamma < threshold,
        quantities=quantities,
    )


def check_fullgrid(spec: GridSpec, axis: str) -> CriterionResult:
    """Full-grid slice criterion for one axis, exact rational arithmetic.

    For axis "y": requires every cell kept and a singular y-marginal; with
    beta_max the largest row total and b the number of rows whose weights
    are all equal, beta_max < 1/b (or b == 0) certifies y-slice-singularity.
    Axis "x" is the transposed statement over columns.
    """
    if axis not in ("x", "y"):
        raise InputError(f"axis must be 'x' or 'y', got {axis!r}")
    name = FULL_GRID_Y if axis == "y" else FULL_GRID_X
    quantities: dict = {"axis": axis}
    if not spec.is_full():
        return CriterionResult(name, applicable=False, satisfied=False, quantities=quantities, notes=("inapplicable: grid is not full",))
    marg = project_marginal(spec, axis)
    cls = classify_marginal(marg)
    quantities["marginalClass"] = cls.tag.value
    if cls.tag is not MeasureTag.SINGULAR:
        return CriterionResult(
            name,
            applicable=False,
            satisfied=False,
            quantities=quantities,
            notes=(f"inapplicable: {axis}-marginal is {cls.tag.value}, criterion requires a singular marginal",),
        )
    work = spec if axis == "y" else spec.transpose()
    stats = grid_stats(work)
    beta_max = stats.max_row_weight
    b = stats.equal_weight_rows
    quantities.update(betaMax=beta_max, b=b)
    if b == 0:
        satisfied = True
    else:
        quantities["threshold"] = Fraction(1, b)
        satisfied = beta_max < Fraction(1, b)
    return CriterionResult(name, applicable=True, satisfied=satisfied, quantities=quantities)


def classify_grid(spec: GridSpec) -> AdmissibilityReport:
    """Run every criterion in canonical order and collect the verdict.

    Trace order: CorCollect1..3, ThmA (x then y), CorA_col, CorA_row,
    SquareCarpet, FullGrid_x, FullGrid_y.  Type2 wins over Type3 when both
    are established (the doubly-nonnegative expansion is the stronger
    conclusion); atomic marginals short-circuit to Inconclusive.
    """
    class_x = classify_marginal(project_marginal(spec, "x"))
    class_y = classify_marginal(project_marginal(spec, "y"))
    mu_singular = not (spec.is_full() and spec.is_uniform())
    notes: list[str] = []
    if not mu_singular:
        notes.append("measure not singular: full uniform grid is Lebesgue measure on the square; the classical Fourier basis applies")

    trace: list[CriterionResult] = []
    trace.extend(check_cor_collect(class_x, class_y, mu_singular))
    atomic = MeasureTag.ATOMIC in (class_x.tag, class_y.tag)
    if atomic:
        which = "x" if class_x.tag is MeasureTag.ATOMIC else "y"
        notes.append(f"{which}-marginal is atomic (a full-weight row or column): classification inconclusive")
        inapplicable = ("inapplicable: atomic marginal",)
        for name, axis in ((THM_A, "x"), (THM_A, "y"), (COR_A_COL, None), (COR_A_ROW, None), (SQUARE_CARPET, None), (FULL_GRID_X, "x"), (FULL_GRID_Y, "y")):
            q = {"axis": axis} if axis else {}
            trace.append(CriterionResult(name, applicable=False, satisfied=False, quantities=q, notes=inapplicable))
        return AdmissibilityReport(
            marginal_x=class_x,
            marginal_y=class_y,
            mu_singular=mu_singular,
            verdict=VERDICT_INCONCLUSIVE,
            slice_direction=DIRECTION_NONE,
            trace=tuple(trace),
            notes=tuple(notes),
        )

    thm_a_x = check_thm_a(spec, "x")
    thm_a_y = check_thm_a(spec, "y")
    cor_a_col, cor_a_row, transposed = _cor_a_pair(spec)
    square = check_square_carpet(spec)
    full_x = check_fullgrid(spec, "x")
    full_y = check_fullgrid(spec, "y")
    trace.extend([thm_a_x, thm_a_y, cor_a_col, cor_a_row, square, full_x, full_y])

    cc1, cc2, cc3 = trace[0], trace[1], trace[2]
    singular_x = class_x.tag is MeasureTag.SINGULAR
    singular_y = class_y.tag is MeasureTag.SINGULAR
    lebesgue_x = class_x.tag is MeasureTag.LEBESGUE
    lebesgue_y = class_y.tag is MeasureTag.LEBESGUE

    # Directions with certified slice-singularity (Type2 witnesses).
    type2_x = False
    type2_y = False
    if cc1.satisfied:
        type2_x = type2_y = True
    if thm_a_x.satisfied:
        type2_x = True
    if thm_a_y.satisfied:
        type2_y = True
    # CorA conclusions attach to the working orientation; map back.
    col_direction, row_direction = ("y", "x") if transposed else ("x", "y")
    if cor_a_col.satisfied:
        if (singular_x if col_direction == "x" else singular_y):
            type2_x, type2_y = type2_x or col_direction == "x", type2_y or col_direction == "y"
    if cor_a_row.satisfied:
        if (singular_x if row_direction == "x" else singular_y):
            type2_x, type2_y = type2_x or row_direction == "x", type2_y or row_direction == "y"
    if square.satisfied and singular_x:
        type2_x = True
    if full_x.satisfied:
        type2_x = True
    if full_y.satisfied:
        type2_y = True

    # Type3 witnesses: singular-fibered in one direction with an essentially
    # Lebesgue conditioning marginal.
    type3 = cc2.satisfied or cc3.satisfied
    if cor_a_col.satisfied and (lebesgue_x if col_direction == "x" else lebesgue_y):
        type3 = True
    if cor_a_row.satisfied and (lebesgue_x if row_direction == "x" else lebesgue_y):
        type3 = True
    if square.satisfied and lebesgue_x:
        type3 = True

    if type2_x or type2_y:
        verdict = VERDICT_TYPE2
        if type2_x and type2_y:
            direction = DIRECTION_BOTH
        elif type2_x:
            direction = DIRECTION_X
        else:
            direction = DIRECTION_Y
        if direction != DIRECTION_BOTH:
            axis = "x" if direction == DIRECTION_X else "y"
            notes.append(f"{axis}-slice-singular established; bi-slice-singularity not established")
    elif type3:
        verdict = VERDICT_TYPE3
        direction = DIRECTION_NONE
    else:
        verdict = VERDICT_INCONCLUSIVE
        direction = DIRECTION_NONE

    for entry in trace:
        if entry.borderline:
            notes.append(f"{entry.name}: borderline comparison inside the {BORDERLINE_BAND} band reported unsatisfied")

    return AdmissibilityReport(
        marginal_x=class_x,
        marginal_y=class_y,
        mu_singular=mu_singular,
        verdict=verdict,
        slice_direction=direction,
        trace=tuple(trace),
        notes=tuple(notes),
    )


def _quantity_to_json(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float) and (math.isnan(value) or math.isinf(value)):
        return repr(value)
    return value


def report_to_dict(report: AdmissibilityReport, spec: GridSpec) -> dict:
    """JSON-ready report: exact rationals as strings, floats as numbers."""
    marg_x = project_marginal(spec, "x")
    marg_y = project_marginal(spec, "y")
    return {
        "kind": "classify",
        "verdict": report.verdict,
        "sliceDirection": report.slice_direction,
        "muSingular": report.mu_singular,
        "marginals": {
            "x": {
                "tag": report.marginal_x.tag.value,
                "reason": report.marginal_x.reason.value,
                "base": marg_x.base,
                "weights": [str(w) for w in marg_x.digit_weights],
            },
            "y": {
                "tag": report.marginal_y.tag.value,
                "reason": report.marginal_y.reason.value,
                "base": marg_y.base,
                "weights": [str(w) for w in marg_y.digit_weights],
            },
        },
        "trace": [
            {
                "name": entry.name,
                "applicable": entry.applicable,
                "satisfied": entry.satisfied,
                "borderline": entry.borderline,
                "quantities": {key: _quantity_to_json(value) for key, value in entry.quantities.items()},
                "notes": list(entry.notes),
            }
            for entry in report.trace
        ],
        "notes": list(report.notes),
    }
