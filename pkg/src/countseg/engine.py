"""Pruned dynamic programming for exact multi-segment partitioning.

``segment`` runs the pruned recursion: it maintains, per number of
segments k, a list of candidate last change-points tau, each carrying the
set of parameter values for which tau is still optimal.  When a new data
point arrives every candidate's set is intersected with the region where
it beats the newest candidate; candidates with empty sets are discarded
for good.  The optimal cost C(k, t) is read off the surviving candidates'
closed-form segment costs.

``naive_dp`` is the unpruned O(Kmax n^2) recursion over the same cost
primitives, used as the correctness oracle in the test suite.  Both share
tie-breaking (smallest tau wins) and evaluate segment costs from the same
cumulative statistics, so costs and breakpoints agree exactly wherever
both run.

Candidates are kept as struct-of-arrays inside the compiled kernel
(position, base cost, surviving-interval components); the per-candidate
surviving set is capped at 16 components and conservatively widened if it
would ever exceed that, which can only delay a pruning decision, never
change a result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._accel import njit
from .errors import ArgumentError, InternalError, MemoryCapError
from .losses import (
    GAUSSIAN_MEAN,
    GAUSSIAN_VARIANCE,
    NEGATIVE_BINOMIAL,
    POISSON,
    LossFamily,
    SegmentStats,
    _seg_cost,
    _sublevel,
    segment_mle,
)

_MAXC = 16  # per-candidate surviving-set component cap
_SLACK_REL = 1e-10  # value-space margin that keeps pruning conservative
_TIE_REL = 1e-10  # costs closer than this are a tie; the smaller tau wins

DEFAULT_MEMORY_CAP = 4 << 30  # bytes


@njit
def _domain_bounds(code):
    if code == 0:
        return (0.0, 1.0)
    elif code == 2:
        return (-math.inf, math.inf)
    return (0.0, math.inf)


@njit
def _complement_into(ilo, ihi, n_iv, dlo, dhi, out):
    """Complement of the union of n_iv intervals, written into out.

    Returns the component count.  If more than out.shape[0] components
    would be needed, the tail is merged into one spanning component
    (a superset, which is the safe direction for pruning).
    """
    maxc = out.shape[0]
    if n_iv == 0:
        out[0, 0] = dlo
        out[0, 1] = dhi
        return 1
    # insertion sort by lower endpoint (candidate lists stay short)
    for i in range(1, n_iv):
        lo = ilo[i]
        hi = ihi[i]
        j = i - 1
        while j >= 0 and ilo[j] > lo:
            ilo[j + 1] = ilo[j]
            ihi[j + 1] = ihi[j]
            j -= 1
        ilo[j + 1] = lo
        ihi[j + 1] = hi
    w = 0
    prev = dlo
    for i in range(n_iv):
        lo = ilo[i]
        hi = ihi[i]
        if hi < prev:
            continue
        if lo > prev and lo > dlo:
            if w == maxc - 1:
                # out of room: swallow everything to the right into one piece
                out[w, 0] = prev
                out[w, 1] = dhi
                return w + 1
            out[w, 0] = prev
            out[w, 1] = lo
            w += 1
        if hi > prev:
            prev = hi
        if prev >= dhi:
            return w
    if prev < dhi:
        out[w, 0] = prev
        out[w, 1] = dhi
        w += 1
    return w


@njit
def _pdp_core(csum, css, code, phi, kmax, costs, amin, ccnt):
    n = csum.shape[0] - 1
    dlo, dhi = _domain_bounds(code)

    for t in range(1, n + 1):
        costs[1, t] = _seg_cost(code, phi, float(t), csum[t], css[t])
        amin[1, t] = 0
        ccnt[1, t] = 1

    if kmax < 2:
        return

    taus = np.empty(n + 1, np.int64)
    bases = np.empty(n + 1, np.float64)
    comps = np.empty((n + 1, _MAXC, 2), np.float64)
    ncmp = np.empty(n + 1, np.int64)
    ilo = np.empty(n + 1, np.float64)
    ihi = np.empty(n + 1, np.float64)

    for k in range(2, kmax + 1):
        m = 0
        for t in range(k, n + 1):
            tn = t - 1  # newest candidate position
            bn = costs[k - 1, tn]
            appended = False
            if math.isfinite(bn):
                n_iv = 0
                for i in range(m):
                    tau = taus[i]
                    cntd = float(tn - tau)
                    sd = csum[tn] - csum[tau]
                    ssd = css[tn] - css[tau]
                    d = bases[i] - bn
                    if code == 0:
                        a = phi * cntd
                        b = sd
                    elif code == 1:
                        a = cntd
                        b = sd
                    elif code == 2:
                        a = cntd
                        b = sd
                        d = d + 0.5 * ssd
                    else:
                        a = 0.5 * cntd
                        b = 0.5 * ssd
                    slack = _SLACK_REL * (a + abs(b) + abs(d))
                    lo, hi = _sublevel(code, a, b, d, slack)
                    if lo <= hi:
                        ilo[n_iv] = lo
                        ihi[n_iv] = hi
                        n_iv += 1
                        # shrink the candidate's surviving set to S & I
                        w = 0
                        for c in range(ncmp[i]):
                            clo = comps[i, c, 0]
                            chi = comps[i, c, 1]
                            if clo < lo:
                                clo = lo
                            if chi > hi:
                                chi = hi
                            if clo <= chi:
                                comps[i, w, 0] = clo
                                comps[i, w, 1] = chi
                                w += 1
                        ncmp[i] = w
                    else:
                        # tau beats the new candidate nowhere: prune it
                        ncmp[i] = 0
                # drop emptied candidates, preserving tau order
                w = 0
                for i in range(m):
                    if ncmp[i] > 0:
                        if w != i:
                            taus[w] = taus[i]
                            bases[w] = bases[i]
                            nc = ncmp[i]
                            ncmp[w] = nc
                            for c in range(nc):
                                comps[w, c, 0] = comps[i, c, 0]
                                comps[w, c, 1] = comps[i, c, 1]
                        w += 1
                m = w
                # newest candidate survives wherever nobody else beats it
                nc = _complement_into(ilo, ihi, n_iv, dlo, dhi, comps[m])
                if nc > 0:
                    taus[m] = tn
                    bases[m] = bn
                    ncmp[m] = nc
                    m += 1
                    appended = True

            best = math.inf
            bref = math.inf
            barg = -1
            for i in range(m):
                tau = taus[i]
                v = bases[i] + _seg_cost(
                    code, phi, float(t - tau), csum[t] - csum[tau], css[t] - css[tau]
                )
                if v < best:
                    best = v
                if barg < 0 or v < bref - _TIE_REL * (1.0 + abs(bref)):
                    bref = v
                    barg = tau
            if not appended and math.isfinite(bn):
                # dominated at birth, but still a legal choice at this t
                v = bn + _seg_cost(code, phi, 1.0, csum[t] - csum[tn], css[t] - css[tn])
                if v < best:
                    best = v
                if barg < 0 or v < bref - _TIE_REL * (1.0 + abs(bref)):
                    bref = v
                    barg = tn
            costs[k, t] = best
            amin[k, t] = barg
            ccnt[k, t] = m


@njit
def _naive_core(csum, css, code, phi, kmax, costs, amin):
    n = csum.shape[0] - 1
    for t in range(1, n + 1):
        costs[1, t] = _seg_cost(code, phi, float(t), csum[t], css[t])
        amin[1, t] = 0
    for k in range(2, kmax + 1):
        for t in range(k, n + 1):
            best = math.inf
            bref = math.inf
            barg = -1
            for tau in range(k - 1, t):
                base = costs[k - 1, tau]
                if not math.isfinite(base):
                    continue
                v = base + _seg_cost(
                    code, phi, float(t - tau), csum[t] - csum[tau], css[t] - css[tau]
                )
                if v < best:
                    best = v
                if barg < 0 or v < bref - _TIE_REL * (1.0 + abs(bref)):
                    bref = v
                    barg = tau
            costs[k, t] = best
            amin[k, t] = barg


def backtrack(argmin_table: np.ndarray, k: int, t: int) -> list[int]:
    """Recover the k-1 interior breakpoints ending at position t.

    Breakpoints are reported 1-based as the last index of each segment
    except the final one.
    """
    if k < 1:
        raise ArgumentError(f"segment count must be >= 1, got {k}")
    breaks = []
    cur = t
    for j in range(k, 1, -1):
        tau = int(argmin_table[j, cur])
        if tau < j - 1 or tau >= cur:
            raise InternalError(f"malformed backtracking table at k={j}, t={cur}")
        breaks.append(tau)
        cur = tau
    breaks.reverse()
    return breaks


@dataclass
class SegmentationResult:
    """Optimal costs and breakpoints for every k up to kmax."""

    n: int
    kmax: int
    family: LossFamily
    cost_matrix: np.ndarray  # (kmax+1, n+1); [k, t] = optimal cost of 1..t in k segments
    argmin_matrix: np.ndarray  # int32 best last change-point per (k, t)
    candidate_counts: np.ndarray  # int32 surviving candidates per (k, t)
    _csum: np.ndarray = field(repr=False, default=None)
    _css: np.ndarray = field(repr=False, default=None)

    @property
    def final_costs(self) -> np.ndarray:
        """Vector of C(k, n) for k = 1..kmax."""
        return self.cost_matrix[1:, self.n].copy()

    def cost(self, k: int) -> float:
        self._check_k(k)
        return float(self.cost_matrix[k, self.n])

    def breaks(self, k: int) -> list[int]:
        self._check_k(k)
        return backtrack(self.argmin_matrix, k, self.n)

    def segment_bounds(self, k: int) -> list[tuple[int, int]]:
        """1-based inclusive (start, end) per segment."""
        edges = [0] + self.breaks(k) + [self.n]
        return [(edges[i] + 1, edges[i + 1]) for i in range(k)]

    def params(self, k: int) -> list[float]:
        """Fitted per-segment parameters for the k-segment solution."""
        out = []
        for lo, hi in self.segment_bounds(k):
            stats = SegmentStats(
                hi - lo + 1,
                float(self._csum[hi] - self._csum[lo - 1]),
                float(self._css[hi] - self._css[lo - 1]),
            )
            out.append(segment_mle(stats, self.family))
        return out

    def _check_k(self, k: int) -> None:
        if not 1 <= k <= self.kmax:
            raise ArgumentError(f"k must be in [1, {self.kmax}], got {k}")


def _prepare(series, family: LossFamily):
    y = np.asarray(series, dtype=np.float64)
    if y.ndim != 1:
        raise ArgumentError("series must be one-dimensional")
    if y.size == 0:
        raise ArgumentError("series is empty")
    if not np.all(np.isfinite(y)):
        raise ArgumentError("series contains non-finite values")
    if family.is_count_model:
        if np.any(y < 0) or not np.all(y == np.floor(y)):
            raise ArgumentError(
                f"the {family.name} model needs non-negative integer counts"
            )
    csum = np.zeros(y.size + 1)
    css = np.zeros(y.size + 1)
    np.cumsum(y, out=csum[1:])
    np.cumsum(y * y, out=css[1:])
    return y, csum, css


def _check_kmax(kmax, n):
    kmax = int(kmax)
    if not 1 <= kmax <= n:
        raise ArgumentError(f"kmax must be in [1, n={n}], got {kmax}")
    return kmax


def segment(
    series,
    family: LossFamily,
    kmax: int,
    memory_cap: int | None = DEFAULT_MEMORY_CAP,
) -> SegmentationResult:
    """Exact optimal segmentations in 1..kmax segments, with pruning.

    ``memory_cap`` bounds the table allocations in bytes (default 4 GiB);
    pass None to disable the check.
    """
    y, csum, css = _prepare(series, family)
    n = y.size
    kmax = _check_kmax(kmax, n)
    need = (kmax + 1) * (n + 1) * (8 + 4 + 4) + (n + 1) * (_MAXC * 2 + 5) * 8
    if memory_cap is not None and need > memory_cap:
        raise MemoryCapError(
            f"run needs about {need / 2**30:.1f} GiB of tables, above the "
            f"{memory_cap / 2**30:.1f} GiB cap; raise memory_cap to override"
        )
    costs = np.full((kmax + 1, n + 1), np.inf)
    amin = np.full((kmax + 1, n + 1), -1, dtype=np.int32)
    ccnt = np.zeros((kmax + 1, n + 1), dtype=np.int32)
    _pdp_core(csum, css, family.code, family.phi, kmax, costs, amin, ccnt)
    return SegmentationResult(n, kmax, family, costs, amin, ccnt, csum, css)


def naive_dp(
    series,
    family: LossFamily,
    kmax: int,
    max_n: int = 10_000,
    force: bool = False,
) -> SegmentationResult:
    """Unpruned quadratic DP over the same cost primitives (test oracle)."""
    y, csum, css = _prepare(series, family)
    n = y.size
    kmax = _check_kmax(kmax, n)
    if n > max_n and not force:
        raise ArgumentError(
            f"naive_dp is quadratic; n={n} exceeds the {max_n} guard (force=True to override)"
        )
    costs = np.full((kmax + 1, n + 1), np.inf)
    amin = np.full((kmax + 1, n + 1), -1, dtype=np.int32)
    ccnt = np.zeros((kmax + 1, n + 1), dtype=np.int32)
    _naive_core(csum, css, family.code, family.phi, kmax, costs, amin)
    return SegmentationResult(n, kmax, family, costs, amin, ccnt, csum, css)
