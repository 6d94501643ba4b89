"""Sliding-window moment estimation of the negative binomial dispersion.

For a window width h, every length-h window of the series yields the
moment estimate phi_w = mean^2 / (var - mean); the overall estimate is the
median over windows.  Windows whose sample variance does not exceed the
mean carry no overdispersion information and are excluded; when too few
windows remain (or the median is not a positive finite number) the width
is doubled and the procedure repeats, until it runs out of data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, DispersionError

MIN_VALID_WINDOWS = 10


@dataclass(frozen=True)
class DispersionEstimate:
    phi_hat: float
    window_used: int
    windows_total: int
    windows_valid: int


def _lower_median(values: np.ndarray) -> float:
    # deterministic median without interpolation: element at rank
    # floor((v+1)/2) in sorted order
    idx = (values.size - 1) // 2
    return float(np.partition(values, idx)[idx])


def _window_moment_estimates(csum, css, n, h):
    """phi_w for every window start, from cumulative sums; O(n)."""
    s = csum[h:] - csum[: n - h + 1]
    ss = css[h:] - css[: n - h + 1]
    m = s / h
    v = (ss - h * m * m) / (h - 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        phi_w = m * m / (v - m)
    valid = (v > m) & np.isfinite(phi_w) & (phi_w > 0)
    return phi_w, valid


def estimate_phi(series, h0: int = 15) -> DispersionEstimate:
    """Windowed median-of-moments dispersion estimate.

    Starts at window width h0 and doubles the width whenever the current
    width does not produce a positive finite median (fewer than
    MIN_VALID_WINDOWS usable windows counts as failure too).  Raises
    DispersionError with per-width diagnostics when no width fits in the
    series; that signals data without measurable overdispersion.
    """
    y = np.asarray(series, dtype=np.float64)
    if y.ndim != 1:
        raise ArgumentError("series must be one-dimensional")
    n = y.size
    h0 = int(h0)
    if h0 < 2:
        raise ArgumentError(f"window width must be at least 2, got {h0}")
    if n < h0:
        raise ArgumentError(f"series of length {n} is shorter than the window {h0}")

    csum = np.zeros(n + 1)
    css = np.zeros(n + 1)
    np.cumsum(y, out=csum[1:])
    np.cumsum(y * y, out=css[1:])

    attempts = []
    h = h0
    while h <= n:
        phi_w, valid = _window_moment_estimates(csum, css, n, h)
        total = phi_w.size
        nvalid = int(valid.sum())
        attempts.append((h, total, nvalid))
        if nvalid >= MIN_VALID_WINDOWS:
            med = _lower_median(phi_w[valid])
            if np.isfinite(med) and med > 0:
                return DispersionEstimate(med, h, total, nvalid)
        h *= 2
    raise DispersionError(
        "no window width produced a positive dispersion estimate; the data "
        "show no consistent overdispersion (constant or underdispersed series)",
        attempts=attempts,
    )
