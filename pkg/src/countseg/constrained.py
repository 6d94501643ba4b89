"""Constrained segmentation diagnostics.

For a fixed number of segments K, the optimal K-segment cost with its
j-th change-point pinned at position t decomposes as

    best_cost[j][t] = F_j(t) + B_{K-j}(t)

where F_j(t) is the optimal cost of cutting 1..t into j segments and
B_{K-j}(t) the optimal cost of cutting t+1..n into K-j segments.  Both
come out of the same engine: F from a forward run, B from a run on the
reversed series (every loss here is order-independent within a segment).
Plotting best_cost[j] against t shows how sharply the data pin down the
j-th change-point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import SegmentationResult, backtrack, segment
from .errors import ArgumentError
from .losses import LossFamily


@dataclass
class ConstrainedCosts:
    K: int
    n: int
    family: LossFamily
    best_cost: np.ndarray  # (K, n+1); row j holds the curve over t, inf where infeasible
    _forward: SegmentationResult
    _backward: SegmentationResult

    def curve(self, j: int) -> np.ndarray:
        self._check_j(j)
        return self.best_cost[j]

    def segmentation_at(self, j: int, t: int) -> list[int]:
        """Breakpoints of the best K-segmentation with t as j-th change-point."""
        self._check_j(j)
        if not 1 <= t <= self.n - 1:
            raise ArgumentError(f"t must be an interior position, got {t}")
        if not np.isfinite(self.best_cost[j, t]):
            raise ArgumentError(f"t={t} cannot be the change-point number {j}")
        left = backtrack(self._forward.argmin_matrix, j, t)
        right_rev = backtrack(self._backward.argmin_matrix, self.K - j, self.n - t)
        right = sorted(self.n - rb for rb in right_rev)
        return left + [t] + right

    def _check_j(self, j: int) -> None:
        if not 1 <= j <= self.K - 1:
            raise ArgumentError(f"j must be in [1, K-1], got {j}")


def best_segmentation(series, family: LossFamily, K: int, j: int | None = None) -> ConstrainedCosts:
    """Cost of the best K-segmentation as a function of each change-point location.

    Rows are filled for every j in 1..K-1 (one forward and one backward
    engine run cover them all); pass j to validate a specific row exists.
    """
    y = np.asarray(series, dtype=np.float64)
    n = y.size
    if not 2 <= K <= n:
        raise ArgumentError(f"K must be in [2, n={n}], got {K}")
    if j is not None and not 1 <= j <= K - 1:
        raise ArgumentError(f"j must be in [1, K-1], got {j}")

    fwd = segment(y, family, K - 1)
    bwd = segment(y[::-1], family, K - 1)

    best = np.full((K, n + 1), np.inf)
    t = np.arange(1, n)
    for jj in range(1, K):
        best[jj, 1:n] = fwd.cost_matrix[jj, 1:n] + bwd.cost_matrix[K - jj, n - t]
    return ConstrainedCosts(K, n, family, best, fwd, bwd)
