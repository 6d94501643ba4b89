"""One-parameter loss families and their sufficient-statistics cost forms.

Every supported family writes the cost of fitting a single parameter theta
to a data slice as an affine combination of two fixed basis functions,

    cost(theta) = a * u(theta) + b * v(theta) + const,

with coefficients (a, b) accumulated from the slice's sufficient
statistics (length, sum, sum of squares).  That shared shape gives us

  * closed-form segment minimizers and costs,
  * convexity of every cost difference that the pruning engine compares,
  * a single sublevel-set solver {theta : g(theta) <= 0} whose answer is
    always one interval.

Bases per family (theta is the natural segment parameter):

  negative binomial   u = -log(theta),     v = -log(1 - theta),  theta in (0,1)
  poisson             u = lambda,          v = -log(lambda),     lambda in (0,inf)
  gaussian mean       u = mu^2 / 2,        v = -mu,              mu in (-inf,inf)
  gaussian variance   u = -log(theta),     v = theta,            precision theta in (0,inf)

Reported costs drop data-only constants (log y! and the NB normalizing
term), so they are negative log-likelihoods up to an additive constant
that cancels in any comparison across segmentations of the same data.
The Gaussian-mean family keeps its y^2/2 constant so that segment costs
are genuine residual sums of squares.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ._accel import njit
from .errors import ArgumentError
from .intervals import IntervalUnion

NEGATIVE_BINOMIAL = 0
POISSON = 1
GAUSSIAN_MEAN = 2
GAUSSIAN_VARIANCE = 3

_NAMES = {
    NEGATIVE_BINOMIAL: "nb",
    POISSON: "poisson",
    GAUSSIAN_MEAN: "gauss-mean",
    GAUSSIAN_VARIANCE: "gauss-var",
}

# Root location tolerances (see sublevel_interval): absolute for bounded
# parameter domains, relative for unbounded ones.
TOL_ABS = 1e-12
TOL_REL = 1e-10


@dataclass(frozen=True)
class LossFamily:
    """A segment loss family, optionally carrying the NB dispersion phi."""

    code: int
    phi: float = 0.0

    def __post_init__(self):
        if self.code not in _NAMES:
            raise ArgumentError(f"unknown loss family code {self.code}")
        if self.code == NEGATIVE_BINOMIAL:
            if not (math.isfinite(self.phi) and self.phi > 0.0):
                raise ArgumentError(
                    f"negative binomial dispersion must be positive and finite, got {self.phi}"
                )

    @classmethod
    def negative_binomial(cls, phi: float) -> "LossFamily":
        return cls(NEGATIVE_BINOMIAL, float(phi))

    @classmethod
    def poisson(cls) -> "LossFamily":
        return cls(POISSON)

    @classmethod
    def gaussian_mean(cls) -> "LossFamily":
        return cls(GAUSSIAN_MEAN)

    @classmethod
    def gaussian_variance(cls) -> "LossFamily":
        return cls(GAUSSIAN_VARIANCE)

    @classmethod
    def from_name(cls, name: str, phi: float | None = None) -> "LossFamily":
        name = name.strip().lower()
        for code, nm in _NAMES.items():
            if nm == name:
                if code == NEGATIVE_BINOMIAL:
                    if phi is None:
                        raise ArgumentError("the nb model requires a dispersion phi")
                    return cls(code, float(phi))
                if phi is not None:
                    raise ArgumentError(f"model {name!r} does not take a dispersion")
                return cls(code)
        raise ArgumentError(f"unknown model name {name!r}")

    @property
    def name(self) -> str:
        return _NAMES[self.code]

    @property
    def domain(self) -> tuple[float, float]:
        """Closure of the parameter domain."""
        if self.code == NEGATIVE_BINOMIAL:
            return (0.0, 1.0)
        if self.code == GAUSSIAN_MEAN:
            return (-math.inf, math.inf)
        return (0.0, math.inf)

    @property
    def is_count_model(self) -> bool:
        return self.code in (NEGATIVE_BINOMIAL, POISSON)

    def __repr__(self):
        if self.code == NEGATIVE_BINOMIAL:
            return f"LossFamily(nb, phi={self.phi})"
        return f"LossFamily({self.name})"


@dataclass(frozen=True)
class SegmentStats:
    """Sufficient statistics of a contiguous data slice.

    Additive: stats of adjacent disjoint slices add componentwise.
    """

    count: int = 0
    sum: float = 0.0
    sumsq: float = 0.0

    def __post_init__(self):
        if self.count < 0:
            raise ArgumentError("segment length cannot be negative")
        if self.count == 0 and (self.sum != 0.0 or self.sumsq != 0.0):
            raise ArgumentError("empty slice must have zero sums")

    def __add__(self, other: "SegmentStats") -> "SegmentStats":
        return SegmentStats(
            self.count + other.count, self.sum + other.sum, self.sumsq + other.sumsq
        )

    def add_value(self, y: float) -> "SegmentStats":
        return SegmentStats(self.count + 1, self.sum + y, self.sumsq + y * y)

    @classmethod
    def from_values(cls, values) -> "SegmentStats":
        s = 0.0
        ss = 0.0
        n = 0
        for y in values:
            y = float(y)
            s += y
            ss += y * y
            n += 1
        return cls(n, s, ss)


def pointwise_loss(y: float, theta: float, family: LossFamily) -> float:
    """Per-observation loss at parameter theta (convex in theta)."""
    y = float(y)
    if not math.isfinite(y):
        raise ArgumentError(f"non-finite observation {y}")
    if family.is_count_model and y < 0:
        raise ArgumentError(f"count models need non-negative data, got {y}")
    lo, hi = family.domain
    if not (lo < theta < hi):
        raise ArgumentError(f"parameter {theta} outside the open domain of {family.name}")
    code = family.code
    if code == NEGATIVE_BINOMIAL:
        return -family.phi * math.log(theta) - y * math.log1p(-theta)
    if code == POISSON:
        return theta - y * math.log(theta)
    if code == GAUSSIAN_MEAN:
        return 0.5 * (y - theta) * (y - theta)
    return -0.5 * math.log(theta) + 0.5 * y * y * theta


@njit
def _seg_cost(code, phi, cnt, s, ss):
    """Optimal cost of a segment from its sufficient statistics.

    Boundary maximum-likelihood cases (all-zero count segments) take the
    continuous-extension limit, which is 0.  A Gaussian-variance segment
    with zero sum of squares has no finite minimizer; its cost is +inf.
    """
    if code == 0:  # negative binomial
        if s <= 0.0:
            return 0.0
        a = cnt * phi
        th = a / (a + s)
        return -a * math.log(th) - s * math.log1p(-th)
    elif code == 1:  # poisson
        if s <= 0.0:
            return 0.0
        return s - s * math.log(s / cnt)
    elif code == 2:  # gaussian mean
        return 0.5 * (ss - s * s / cnt)
    else:  # gaussian variance (precision parametrization)
        if ss <= 0.0:
            return math.inf
        return -0.5 * cnt * math.log(cnt / ss) + 0.5 * cnt


def segment_mle(stats: SegmentStats, family: LossFamily) -> float:
    """Minimizer of the segment cost; boundary cases return the closure limit.

    All-zero count segments report the boundary value (theta=1 for NB,
    lambda=0 for Poisson); a zero-sumsq Gaussian-variance segment reports
    +inf precision.  ``mle_is_boundary`` flags those cases.
    """
    if stats.count < 1:
        raise ArgumentError("segment must contain at least one point")
    code = family.code
    if code == NEGATIVE_BINOMIAL:
        a = stats.count * family.phi
        return a / (a + stats.sum)
    if code == POISSON:
        return stats.sum / stats.count
    if code == GAUSSIAN_MEAN:
        return stats.sum / stats.count
    if stats.sumsq <= 0.0:
        return math.inf
    return stats.count / stats.sumsq


def mle_is_boundary(stats: SegmentStats, family: LossFamily) -> bool:
    if stats.count < 1:
        raise ArgumentError("segment must contain at least one point")
    if family.code in (NEGATIVE_BINOMIAL, POISSON):
        return stats.sum <= 0.0
    if family.code == GAUSSIAN_VARIANCE:
        return stats.sumsq <= 0.0
    return False


def segment_cost(stats: SegmentStats, family: LossFamily) -> float:
    """Cost of the segment at its own maximum-likelihood parameter."""
    if stats.count < 1:
        raise ArgumentError("segment must contain at least one point")
    return _seg_cost(family.code, family.phi, float(stats.count), stats.sum, stats.sumsq)


@njit
def _g_val(code, a, b, th):
    if code == 0:
        return -a * math.log(th) - b * math.log1p(-th)
    elif code == 1:
        return a * th - b * math.log(th)
    elif code == 2:
        return 0.5 * a * th * th - b * th
    else:
        return -a * math.log(th) + b * th


@njit
def _g_prime(code, a, b, th):
    if code == 0:
        return -a / th + b / (1.0 - th)
    elif code == 1:
        return a - b / th
    else:  # code 3; the quadratic family never gets here
        return -a / th + b


@njit
def _bisect_edge(code, a, b, d, x_out, x_in):
    # Invariant: g(x_out) + d > 0 >= g(x_in) + d.  Newton iteration
    # safeguarded by the bracket (the derivative needs no log calls, so
    # each step is cheap); falls back to bisection whenever the Newton
    # step leaves the bracket.  Returns a point within TOL_ABS (bounded
    # domains) / TOL_REL (unbounded) of the true root.
    x = 0.5 * (x_out + x_in)
    for _ in range(200):
        gv = _g_val(code, a, b, x) + d
        if gv > 0.0:
            x_out = x
        else:
            x_in = x
        gp = _g_prime(code, a, b, x)
        if gp != 0.0:
            xn = x - gv / gp
        else:
            xn = 0.5 * (x_out + x_in)
        if x_out < x_in:
            blo, bhi = x_out, x_in
        else:
            blo, bhi = x_in, x_out
        if not (blo < xn < bhi):
            xn = 0.5 * (x_out + x_in)
        if abs(xn - x) <= max(TOL_ABS, TOL_REL * abs(xn)):
            return xn
        if abs(x_in - x_out) <= max(TOL_ABS, TOL_REL * abs(xn)):
            return x_in
        x = xn
    return x_in


@njit
def _sublevel(code, a, b, d, slack):
    """Solve {theta in domain : a*u + b*v + d <= slack} for convex g.

    Returns (lo, hi); emptiness is signalled by lo > hi.  Endpoints that
    reach the domain boundary are reported as the closure value (0, 1 or
    +/-inf).  ``slack > 0`` enlarges the set in value space, which is how
    the engine keeps pruning conservative against root-location error.
    """
    d = d - slack
    empty = (1.0, 0.0)

    if code == 2:  # quadratic: a*th^2/2 - b*th + d <= 0
        if a <= 0.0:
            if b > 0.0:
                return (d / b, math.inf)
            if b < 0.0:
                return (-math.inf, d / b)
            if d <= 0.0:
                return (-math.inf, math.inf)
            return empty
        disc = b * b - 2.0 * a * d
        if disc < 0.0:
            return empty
        r = math.sqrt(disc)
        return ((b - r) / a, (b + r) / a)

    if a <= 0.0 and b <= 0.0:
        # constant d over the domain
        if d > 0.0:
            return empty
        if code == 0:
            return (0.0, 1.0)
        return (0.0, math.inf)

    if code == 0:  # domain (0, 1)
        if a <= 0.0:
            # increasing from d at 0+
            if d >= 0.0:
                return empty
            return (0.0, -math.expm1(d / b))
        if b <= 0.0:
            # decreasing toward 0 at 1-
            x = math.exp(d / a)
            if x >= 1.0:
                return empty
            return (x, 1.0)
        m = a / (a + b)
        if _g_val(0, a, b, m) + d > 0.0:
            return empty
        # d < 0 here (otherwise the minimum value could not be <= 0), and
        # dropping the non-blowing-up log term of g gives guaranteed outer
        # bracket points: theta_left >= exp(d/a), theta_right <= 1 - exp(d/b)
        lo = 0.0
        x = math.exp(d / a)
        if x < 1e-300:
            x = 1e-300
        if x < m:
            if _g_val(0, a, b, x) + d > 0.0:
                lo = _bisect_edge(0, a, b, d, x, m)
            # else: the set effectively reaches the boundary at this precision
        hi = 1.0
        w = math.exp(d / b)
        if w < 1e-16:
            w = 1e-16
        x = 1.0 - w
        if x > m:
            if _g_val(0, a, b, x) + d > 0.0:
                hi = _bisect_edge(0, a, b, d, x, m)
        return (lo, hi)

    # poisson (code 1) and gaussian variance (code 3): domain (0, inf)
    if code == 1:
        if a <= 0.0:
            # -b*log(th) + d, decreasing
            x = math.exp(d / b)
            if not math.isfinite(x):
                return empty
            return (x, math.inf)
        if b <= 0.0:
            # a*th + d, increasing from d at 0+
            if d >= 0.0:
                return empty
            return (0.0, -d / a)
        clog = b
        clin = a
    else:
        if b <= 0.0:
            x = math.exp(d / a)
            if not math.isfinite(x):
                return empty
            return (x, math.inf)
        if a <= 0.0:
            if d >= 0.0:
                return empty
            return (0.0, -d / b)
        clog = a
        clin = b

    m = clog / clin
    if _g_val(code, a, b, m) + d > 0.0:
        return empty
    # left edge: the -clog*log term blows up toward 0, and dropping the
    # (positive) linear term at the root gives root >= exp(d/clog)
    lo = 0.0
    x = math.exp(d / clog)
    if x < 1e-300:
        x = 1e-300
    if x < m:
        if _g_val(code, a, b, x) + d > 0.0:
            lo = _bisect_edge(code, a, b, d, x, m)
        # else: the set effectively reaches 0 at this precision
    # right edge: bounding log by its tangent at 2m gives
    # root <= 2*(clog*log(2m) - clog - d)/clin, always finite here
    x = 2.0 * (clog * math.log(2.0 * m) - clog - d) / clin
    if _g_val(code, a, b, x) + d > 0.0:
        hi = _bisect_edge(code, a, b, d, x, m)
    else:
        hi = x
    return (lo, hi)


def sublevel_interval(a: float, b: float, d: float, family: LossFamily) -> IntervalUnion:
    """{theta : a*u(theta) + b*v(theta) + d <= 0} as an interval union.

    For convex coefficient combinations (a >= 0, and b >= 0 for the
    families whose v-basis is itself convex) the result is a single
    interval, possibly empty or unbounded.  Endpoints are located by
    bisection and rounded outward by one tolerance unit, so the returned
    set never under-covers the true one.
    """
    a = float(a)
    b = float(b)
    d = float(d)
    if __debug__:
        if a < 0.0 or (b < 0.0 and family.code != GAUSSIAN_MEAN):
            raise ArgumentError("coefficients do not give a convex objective")
    lo, hi = _sublevel(family.code, a, b, d, 0.0)
    if lo > hi:
        return IntervalUnion.empty()
    dlo, dhi = family.domain
    lo = max(dlo, lo - max(TOL_ABS, TOL_REL * abs(lo)))
    hi = min(dhi, hi + max(TOL_ABS, TOL_REL * abs(hi)))
    return IntervalUnion.single(lo, hi)
