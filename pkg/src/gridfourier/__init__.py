"""Fourier expansions for grid IFS measures on the unit square.

The package decides which type of 2D Fourier series L^2(mu) admits for a
grid iterated-function-system measure, computes Fourier-Stieltjes
transforms with certified truncation error, and constructs Kaczmarz
effective-sequence expansions with reconstruction diagnostics.
"""

from .catalog import (
    full_grid_4x4,
    lebesgue_grid,
    quaternary_cantor,
    sierpinski_carpet,
    sierpinski_triangle,
    ternary_cantor,
    weighted_carpet,
    weighted_triangle,
)
from .classify import (
    BORDERLINE_BAND,
    COR_A_COL,
    COR_A_ROW,
    COR_COLLECT_1,
    COR_COLLECT_2,
    COR_COLLECT_3,
    DIRECTION_BOTH,
    DIRECTION_NONE,
    DIRECTION_X,
    DIRECTION_Y,
    FULL_GRID_X,
    FULL_GRID_Y,
    SQUARE_CARPET,
    THM_A,
    VERDICT_INCONCLUSIVE,
    VERDICT_TYPE2,
    VERDICT_TYPE3,
    AdmissibilityReport,
    CriterionResult,
    check_cor_a,
    check_cor_collect,
    check_fullgrid,
    check_square_carpet,
    check_thm_a,
    classify_grid,
    report_to_dict,
)
from .errors import BudgetError, InputError
from .grid import (
    MAX_RASTER_CELLS,
    AdicRectangle,
    GridSpec,
    GridStats,
    Raster,
    grid_stats,
    load_spec,
    mcmullen_dimension,
    parse_spec,
    rectangle_measure,
    render_raster,
    sample_points,
)
from .kaczmarz import (
    MAX_EXPANSION_OPS,
    EffectiveSequence,
    Expansion1D,
    Expansion2D,
    FrameDiagnostics,
    effective_sequence,
    expand_1d,
    expand_2d,
    frame_diagnostics,
    slice_effective_cache,
    synthesize,
)
from .measures import (
    MAX_ATOMS,
    DigitStream,
    DiscreteMeasure,
    FrostmanBound,
    FrostmanCheck,
    MarginalIFS,
    MeasureClass,
    MeasureReason,
    MeasureTag,
    SliceMeasure,
    classify_marginal,
    discretize,
    frostman_bound,
    kakutani_affinity,
    kakutani_product_curve,
    project_marginal,
    slice_measure,
    verify_frostman,
)
from .moments import (
    DEFAULT_EPS,
    MomentTable,
    MomentValue,
    discrete_transform,
    marginal_transform,
    moment_table,
    moment_table_2d,
    slice_transform,
    transform_2d,
    truncation_depth,
)

__version__ = "0.1.0"

__all__ = [
    "AdicRectangle",
    "AdmissibilityReport",
    "BORDERLINE_BAND",
    "BudgetError",
    "COR_A_COL",
    "COR_A_ROW",
    "COR_COLLECT_1",
    "COR_COLLECT_2",
    "COR_COLLECT_3",
    "CriterionResult",
    "DEFAULT_EPS",
    "DIRECTION_BOTH",
    "DIRECTION_NONE",
    "DIRECTION_X",
    "DIRECTION_Y",
    "DigitStream",
    "DiscreteMeasure",
    "EffectiveSequence",
    "Expansion1D",
    "Expansion2D",
    "FULL_GRID_X",
    "FULL_GRID_Y",
    "FrameDiagnostics",
    "FrostmanBound",
    "FrostmanCheck",
    "GridSpec",
    "GridStats",
    "InputError",
    "MAX_ATOMS",
    "MAX_EXPANSION_OPS",
    "MAX_RASTER_CELLS",
    "MarginalIFS",
    "MeasureClass",
    "MeasureReason",
    "MeasureTag",
    "MomentTable",
    "MomentValue",
    "Raster",
    "SQUARE_CARPET",
    "SliceMeasure",
    "THM_A",
    "VERDICT_INCONCLUSIVE",
    "VERDICT_TYPE2",
    "VERDICT_TYPE3",
    "check_cor_a",
    "check_cor_collect",
    "check_fullgrid",
    "check_square_carpet",
    "check_thm_a",
    "classify_grid",
    "classify_marginal",
    "discrete_transform",
    "discretize",
    "effective_sequence",
    "expand_1d",
    "expand_2d",
    "frame_diagnostics",
    "frostman_bound",
    "full_grid_4x4",
    "grid_stats",
    "kakutani_affinity",
    "kakutani_product_curve",
    "lebesgue_grid",
    "load_spec",
    "marginal_transform",
    "mcmullen_dimension",
    "moment_table",
    "moment_table_2d",
    "parse_spec",
    "project_marginal",
    "quaternary_cantor",
    "rectangle_measure",
    "render_raster",
    "report_to_dict",
    "sample_points",
    "sierpinski_carpet",
    "sierpinski_triangle",
    "slice_effective_cache",
    "slice_measure",
    "slice_transform",
    "synthesize",
    "ternary_cantor",
    "transform_2d",
    "truncation_depth",
    "verify_frostman",
    "weighted_carpet",
    "weighted_triangle",
]
