"""Unions of disjoint closed intervals with exact set algebra.

The pruning engine tracks, per candidate change-point, the set of
parameter values for which that candidate is still optimal.  Those sets
live in a family closed under complement, intersection and union; for
one-parameter convex losses, finite unions of closed intervals are such
a family, and that is what this module implements.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence, Tuple

Pair = Tuple[float, float]


def _normalize(pairs: Iterable[Pair]) -> tuple[Pair, ...]:
    kept = [(float(lo), float(hi)) for lo, hi in pairs if lo <= hi]
    kept.sort()
    merged: list[Pair] = []
    for lo, hi in kept:
        if merged and lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    return tuple(merged)


class IntervalUnion:
    """An ordered union of disjoint, non-touching closed intervals."""

    __slots__ = ("intervals",)

    def __init__(self, intervals: Iterable[Pair] = (), *, _normalized: bool = False):
        if _normalized:
            self.intervals = tuple(intervals)
        else:
            self.intervals = _normalize(intervals)

    @classmethod
    def empty(cls) -> "IntervalUnion":
        return cls((), _normalized=True)

    @classmethod
    def single(cls, lo: float, hi: float) -> "IntervalUnion":
        if lo > hi:
            return cls.empty()
        return cls(((float(lo), float(hi)),), _normalized=True)

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def contains(self, x: float) -> bool:
        for lo, hi in self.intervals:
            if lo <= x <= hi:
                return True
            if x < lo:
                return False
        return False

    def __contains__(self, x: float) -> bool:
        return self.contains(x)

    def __len__(self) -> int:
        return len(self.intervals)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntervalUnion):
            return NotImplemented
        return self.intervals == other.intervals

    def __hash__(self) -> int:
        return hash(self.intervals)

    def __repr__(self) -> str:
        if self.is_empty:
            return "IntervalUnion(empty)"
        body = " U ".join(f"[{lo:g}, {hi:g}]" for lo, hi in self.intervals)
        return f"IntervalUnion({body})"


def interval_union(s1: IntervalUnion, s2: IntervalUnion) -> IntervalUnion:
    return IntervalUnion(s1.intervals + s2.intervals)


def interval_intersect(s1: IntervalUnion, s2: IntervalUnion) -> IntervalUnion:
    out: list[Pair] = []
    i = j = 0
    a, b = s1.intervals, s2.intervals
    while i < len(a) and j < len(b):
        lo = max(a[i][0], b[j][0])
        hi = min(a[i][1], b[j][1])
        if lo <= hi:
            out.append((lo, hi))
        if a[i][1] < b[j][1]:
            i += 1
        else:
            j += 1
    return IntervalUnion(tuple(out), _normalized=True)


def interval_complement(s: IntervalUnion, domain: Pair) -> IntervalUnion:
    """Complement within the closure of the parameter domain."""
    dlo, dhi = float(domain[0]), float(domain[1])
    out: list[Pair] = []
    prev = dlo
    for lo, hi in s.intervals:
        if hi < dlo:
            continue
        if lo > dhi:
            break
        if lo > prev:
            out.append((prev, lo))
        prev = max(prev, hi)
    if prev < dhi:
        out.append((prev, dhi))
    elif not s.intervals and dlo <= dhi and not out:
        out.append((dlo, dhi))
    # re-normalize: a degenerate point interval in s leaves two touching
    # complement pieces that merge under closed-set semantics
    return IntervalUnion(out)
