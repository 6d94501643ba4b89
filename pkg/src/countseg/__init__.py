"""countseg: exact multiple change-point detection for long count series.

Pruned dynamic programming over convex one-parameter losses (negative
binomial, Poisson, Gaussian mean, Gaussian variance), with dispersion
estimation, penalized model selection and a simulation/benchmark harness.
"""

from ._accel import NUMBA_ACTIVE
from .constrained import ConstrainedCosts, best_segmentation
from .dispersion import DispersionEstimate, estimate_phi
from .engine import SegmentationResult, backtrack, naive_dp, segment
from .errors import (
    ArgumentError,
    CountsegError,
    DispersionError,
    InputError,
    InternalError,
    MemoryCapError,
)
from .intervals import IntervalUnion, interval_complement, interval_intersect, interval_union
from .losses import (
    LossFamily,
    SegmentStats,
    pointwise_loss,
    segment_cost,
    segment_mle,
    sublevel_interval,
)
from .selection import (
    SelectionResult,
    oracle_penshape,
    select_ic,
    select_mbic,
    select_oracle,
)
from .simulate import (
    LabeledSeries,
    SimulationSpec,
    breakpoints_to_labels,
    rand_index,
    run_benchmark,
    simulate,
)

__version__ = "0.1.0"

__all__ = [
    "ArgumentError",
    "ConstrainedCosts",
    "CountsegError",
    "DispersionError",
    "DispersionEstimate",
    "InputError",
    "InternalError",
    "IntervalUnion",
    "LabeledSeries",
    "LossFamily",
    "MemoryCapError",
    "NUMBA_ACTIVE",
    "SegmentStats",
    "SegmentationResult",
    "SelectionResult",
    "SimulationSpec",
    "backtrack",
    "best_segmentation",
    "breakpoints_to_labels",
    "estimate_phi",
    "interval_complement",
    "interval_intersect",
    "interval_union",
    "naive_dp",
    "oracle_penshape",
    "pointwise_loss",
    "rand_index",
    "run_benchmark",
    "segment",
    "segment_cost",
    "segment_mle",
    "select_ic",
    "select_mbic",
    "select_oracle",
    "simulate",
    "sublevel_interval",
]
