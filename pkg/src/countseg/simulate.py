"""Synthetic benchmark signals, the Rand index, and the runtime/quality harness.

Signals alternate between a low-signal success probability on
even-numbered segments and a high-signal one on odd-numbered segments;
draws are negative binomial with common dispersion phi, so the two
segment means are phi*(1-p)/p for each p.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .dispersion import estimate_phi
from .engine import segment
from .errors import ArgumentError, CountsegError
from .losses import LossFamily
from .selection import select_oracle

LAYOUT_EQUAL = "equal"
LAYOUT_RANDOM = "random"


@dataclass(frozen=True)
class SimulationSpec:
    n: int
    k: int
    phi: float
    p_even: float = 0.8  # low signal
    p_odd: float = 0.2  # high signal
    layout: str = LAYOUT_EQUAL
    min_len: int = 10
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise ArgumentError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if not (0.0 < self.p_even < 1.0 and 0.0 < self.p_odd < 1.0):
            raise ArgumentError("success probabilities must lie in (0, 1)")
        if self.phi <= 0 or not math.isfinite(self.phi):
            raise ArgumentError("phi must be positive and finite")
        if self.layout not in (LAYOUT_EQUAL, LAYOUT_RANDOM):
            raise ArgumentError(f"unknown layout {self.layout!r}")
        if self.min_len < 1:
            raise ArgumentError("minimum segment length must be >= 1")


@dataclass(frozen=True)
class LabeledSeries:
    series: np.ndarray
    labels: np.ndarray  # 1-based true segment index per position
    true_breakpoints: tuple[int, ...]


def _segment_lengths(spec: SimulationSpec, rng: np.random.Generator) -> np.ndarray:
    n, k = spec.n, spec.k
    if spec.layout == LAYOUT_EQUAL:
        base, rem = divmod(n, k)
        return np.array([base + (1 if i < rem else 0) for i in range(k)])
    min_len = spec.min_len
    slack = n - k * min_len
    if slack < 0:
        raise ArgumentError(
            f"layout infeasible: {k} segments of at least {min_len} need more than n={n}"
        )
    cuts = np.sort(rng.integers(0, slack + 1, size=k - 1))
    edges = np.concatenate(([0], cuts, [slack]))
    return min_len + np.diff(edges)


def simulate(spec: SimulationSpec, rng: np.random.Generator | None = None) -> LabeledSeries:
    """Draw one labeled series; deterministic given the spec's seed."""
    if rng is None:
        rng = np.random.default_rng(np.random.SeedSequence(spec.seed))
    lengths = _segment_lengths(spec, rng)
    parts = []
    labels = np.empty(spec.n, dtype=np.int64)
    pos = 0
    for i, ln in enumerate(lengths):
        p = spec.p_odd if (i + 1) % 2 == 1 else spec.p_even
        parts.append(rng.negative_binomial(spec.phi, p, size=int(ln)))
        labels[pos : pos + ln] = i + 1
        pos += ln
    series = np.concatenate(parts).astype(np.float64)
    breaks = tuple(int(b) for b in np.cumsum(lengths)[:-1])
    return LabeledSeries(series, labels, breaks)


def breakpoints_to_labels(breaks, n: int) -> np.ndarray:
    """Expand interior breakpoints (1-based segment-end positions) to labels."""
    edges = [0] + sorted(int(b) for b in breaks) + [n]
    if any(edges[i] >= edges[i + 1] for i in range(len(edges) - 1)):
        raise ArgumentError(f"invalid breakpoints {breaks} for n={n}")
    labels = np.empty(n, dtype=np.int64)
    for i in range(len(edges) - 1):
        labels[edges[i] : edges[i + 1]] = i + 1
    return labels


def rand_index(true_labels, est_labels) -> float:
    """Pair-agreement Rand index in [0, 1], via an O(n + k*k') contingency table."""
    t = np.asarray(true_labels)
    e = np.asarray(est_labels)
    if t.shape != e.shape or t.ndim != 1:
        raise ArgumentError("labelings must be 1-d and of equal length")
    n = t.size
    if n < 2:
        raise ArgumentError("need at least two positions")
    _, ti = np.unique(t, return_inverse=True)
    _, ei = np.unique(e, return_inverse=True)
    ncols = int(ei.max()) + 1
    cont = np.bincount(ti * ncols + ei, minlength=(int(ti.max()) + 1) * ncols).astype(
        np.float64
    )
    pairs = n * (n - 1) / 2.0
    s_both = float((cont * (cont - 1)).sum()) / 2.0
    a = np.bincount(ti).astype(np.float64)
    b = np.bincount(ei).astype(np.float64)
    s_true = float((a * (a - 1)).sum()) / 2.0
    s_est = float((b * (b - 1)).sum()) / 2.0
    return (pairs + 2.0 * s_both - s_true - s_est) / pairs


def _bench_cell(args):
    spec, cell_idx, rep, master_seed, phi_mode, kmax = args
    rng = np.random.default_rng(np.random.SeedSequence((master_seed, cell_idx, rep)))
    sim = simulate(spec, rng)
    row = {
        "cell": cell_idx,
        "rep": rep,
        "n": spec.n,
        "k_true": spec.k,
        "phi_true": spec.phi,
        "phi_mode": phi_mode,
        "kmax": kmax,
    }
    try:
        if phi_mode == "estimated":
            est = estimate_phi(sim.series)
            phi = est.phi_hat
            row["phi_used"] = phi
            row["phi_window"] = est.window_used
        else:
            phi = spec.phi
            row["phi_used"] = phi
        family = LossFamily.negative_binomial(phi)
        t0 = time.perf_counter()
        res = segment(sim.series, family, kmax)
        elapsed = time.perf_counter() - t0
        sel = select_oracle(res.final_costs, spec.n)
        est_labels = breakpoints_to_labels(res.breaks(sel.k_hat), spec.n)
        row.update(
            time_seconds=elapsed,
            time_per_kmax=elapsed / kmax,
            k_hat=sel.k_hat,
            k_err=sel.k_hat - spec.k,
            rand_index=rand_index(sim.labels, est_labels),
        )
    except CountsegError as exc:
        row["error"] = str(exc)
    return row


def run_benchmark(
    grid,
    repetitions: int,
    phi_mode: str = "known",
    master_seed: int = 0,
    jobs: int = 1,
) -> list[dict]:
    """Simulate/segment/select over a grid of specs; one row per (cell, rep).

    kmax is ceil(sqrt(n)) per cell; selection uses the oracle penalty.
    Cell RNGs derive from (master_seed, cell, rep), so results do not
    depend on the worker count.  A failing cell yields a row with an
    ``error`` field instead of aborting the run.
    """
    grid = list(grid)
    if not grid:
        raise ArgumentError("benchmark grid is empty")
    if phi_mode not in ("known", "estimated"):
        raise ArgumentError(f"phi_mode must be 'known' or 'estimated', got {phi_mode!r}")
    tasks = [
        (spec, ci, rep, master_seed, phi_mode, math.ceil(math.sqrt(spec.n)))
        for ci, spec in enumerate(grid)
        for rep in range(repetitions)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_bench_cell, tasks))
    else:
        rows = [_bench_cell(t) for t in tasks]
    rows.sort(key=lambda r: (r["cell"], r["rep"]))
    return rows
