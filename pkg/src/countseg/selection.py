"""Choosing the number of segments from the per-k optimal costs.

Criteria: AIC, BIC, a slope-heuristic-calibrated oracle penalty of the
form K * (1 + 4*sqrt(1.1 + log(n/K)))^2, and (for Poisson/Gaussian only)
a modified-BIC variant that also penalizes uneven segment lengths.

All criteria are invariant to adding a constant to every cost, so the
data-dependent constants dropped from the count losses do not matter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError
from .losses import GAUSSIAN_MEAN, GAUSSIAN_VARIANCE, POISSON, LossFamily

AIC = "aic"
BIC = "bic"
ORACLE = "oracle"
MBIC = "mbic"

# regression range for the slope heuristic: the upper half of the k grid,
# where cost is close to linear in the penalty shape
_SLOPE_FRACTION = 0.5
MIN_KMAX_FOR_ORACLE = 10


@dataclass(frozen=True)
class SelectionResult:
    k_hat: int
    criterion: str
    values: np.ndarray  # criterion value per k = 1..kmax
    beta: float | None = None  # tuned penalty constant (oracle only)
    penshape: np.ndarray | None = None  # penalty shape per k (oracle only)


def oracle_penshape(k: int, n: int) -> float:
    """Penalty shape K * (1 + 4*sqrt(1.1 + log(n/K)))^2."""
    if not 1 <= k <= n:
        raise ArgumentError(f"need 1 <= k <= n, got k={k}, n={n}")
    root = math.sqrt(1.1 + math.log(n / k))
    return k * (1.0 + 4.0 * root) ** 2


def _as_cost_vector(costs) -> np.ndarray:
    c = np.asarray(costs, dtype=np.float64)
    if c.ndim != 1 or c.size < 1:
        raise ArgumentError("costs must be a vector of per-k optimal costs")
    return c


_TIE_REL = 1e-10


def _argmin_smallest_k(values: np.ndarray) -> int:
    # ties (within float-noise tolerance, like the engine's) go to the
    # smallest k, so constant signals never pick a spurious extra segment
    vmin = float(values.min())
    cut = vmin + _TIE_REL * (1.0 + abs(vmin))
    return int(np.argmax(values <= cut)) + 1


def fit_slope_beta(costs: np.ndarray, penshape: np.ndarray) -> float:
    """Slope-heuristic constant: -2x the OLS slope of cost against shape.

    The regression runs over the upper half of the k range, where the
    optimal cost decreases roughly linearly in the penalty shape.
    """
    kmax = costs.size
    k_lo = max(1, math.ceil(kmax * _SLOPE_FRACTION))
    x = penshape[k_lo - 1 :]
    ycost = costs[k_lo - 1 :]
    xm = x.mean()
    ym = ycost.mean()
    denom = float(((x - xm) ** 2).sum())
    if denom <= 0:
        raise ArgumentError("degenerate penalty shape in the slope regression")
    slope = float(((x - xm) * (ycost - ym)).sum()) / denom
    beta = -2.0 * slope
    if not beta > 0:
        # non-decreasing cost curve (e.g. structureless data); any tiny
        # positive constant makes the argmin fall to k = 1
        beta = np.finfo(np.float64).tiny
    return beta


def select_oracle(costs, n: int) -> SelectionResult:
    """Pick k by the oracle penalty with slope-heuristic calibration."""
    c = _as_cost_vector(costs)
    kmax = c.size
    if kmax < MIN_KMAX_FOR_ORACLE:
        raise ArgumentError(
            f"the slope heuristic needs kmax >= {MIN_KMAX_FOR_ORACLE}, got {kmax}; "
            "rerun the segmentation with a larger kmax"
        )
    shape = np.array([oracle_penshape(k, n) for k in range(1, kmax + 1)])
    beta = fit_slope_beta(c, shape)
    values = c + beta * shape
    return SelectionResult(_argmin_smallest_k(values), ORACLE, values, beta, shape)


def select_ic(costs, n: int, criterion: str) -> SelectionResult:
    """AIC / BIC with p(k) = 2k - 1 free parameters."""
    c = _as_cost_vector(costs)
    k = np.arange(1, c.size + 1)
    p = 2 * k - 1
    if criterion == AIC:
        values = 2.0 * c + 2.0 * p
    elif criterion == BIC:
        values = 2.0 * c + p * math.log(n)
    else:
        raise ArgumentError(f"unknown information criterion {criterion!r}")
    return SelectionResult(_argmin_smallest_k(values), criterion, values)


def select_mbic(costs, breakpoints, n: int, family: LossFamily) -> SelectionResult:
    """Modified BIC, which additionally charges for uneven segment lengths.

    Only defined here for the Poisson and Gaussian families;
    ``breakpoints`` is the per-k list of interior breakpoints (k-1 each).
    """
    if family.code not in (POISSON, GAUSSIAN_MEAN, GAUSSIAN_VARIANCE):
        raise ArgumentError(
            "the modified BIC is only available for Poisson and Gaussian models"
        )
    c = _as_cost_vector(costs)
    if len(breakpoints) < c.size:
        raise ArgumentError("need breakpoints for every k in 1..kmax")
    values = np.empty(c.size)
    for k in range(1, c.size + 1):
        edges = [0] + list(breakpoints[k - 1]) + [n]
        lengths = np.diff(edges)
        if lengths.size != k or np.any(lengths < 1):
            raise ArgumentError(f"invalid breakpoint vector for k={k}")
        values[k - 1] = (
            2.0 * c[k - 1] + float(np.log(lengths).sum()) + (2 * k - 1) * math.log(n)
        )
    return SelectionResult(_argmin_smallest_k(values), MBIC, values)
