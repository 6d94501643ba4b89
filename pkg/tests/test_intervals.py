"""Interval-union set algebra, checked against pointwise membership."""

import math

import numpy as np
import pytest

from countseg import (
    IntervalUnion,
    interval_complement,
    interval_intersect,
    interval_union,
)


def member(pairs, x):
    return any(lo <= x <= hi for lo, hi in pairs)


class TestNormalization:
    def test_merge_overlapping(self):
        u = IntervalUnion([(0.0, 2.0), (1.0, 3.0), (5.0, 6.0)])
        assert u.intervals == ((0.0, 3.0), (5.0, 6.0))

    def test_merge_touching(self):
        u = IntervalUnion([(0.0, 1.0), (1.0, 2.0)])
        assert u.intervals == ((0.0, 2.0),)

    def test_drop_inverted(self):
        u = IntervalUnion([(2.0, 1.0)])
        assert u.is_empty

    def test_single_and_empty(self):
        assert IntervalUnion.single(3.0, 2.0).is_empty
        assert IntervalUnion.empty().is_empty
        assert not IntervalUnion.single(0.0, 0.0).is_empty

    def test_contains(self):
        u = IntervalUnion([(0.0, 1.0), (2.0, 3.0)])
        assert 0.5 in u and 2.0 in u and 3.0 in u
        assert 1.5 not in u and -1.0 not in u

    def test_equality_and_hash(self):
        a = IntervalUnion([(0.0, 1.0)])
        b = IntervalUnion([(0.0, 0.5), (0.5, 1.0)])
        assert a == b
        assert hash(a) == hash(b)


class TestComplement:
    def test_three_interval_example(self):
        s = IntervalUnion([(0.1, 0.2), (0.4, 0.5), (0.7, 0.8)])
        c = interval_complement(s, (0.0, 1.0))
        assert len(c) == 4
        for x in np.linspace(0.0, 1.0, 1000):
            assert c.contains(x) != s.contains(x) or x in (
                0.1, 0.2, 0.4, 0.5, 0.7, 0.8,
            )

    def test_point_interval_leaves_merged_complement(self):
        # a degenerate member must not split the complement in two
        s = IntervalUnion([(0.5, 0.5)])
        c = interval_complement(s, (0.0, 1.0))
        assert c.intervals == ((0.0, 1.0),)

    def test_covering_set(self):
        s = IntervalUnion([(0.0, 1.0)])
        assert interval_complement(s, (0.0, 1.0)).is_empty

    def test_empty_set(self):
        c = interval_complement(IntervalUnion.empty(), (0.0, 1.0))
        assert c.intervals == ((0.0, 1.0),)

    def test_unbounded_domain(self):
        s = IntervalUnion([(0.0, 2.0)])
        c = interval_complement(s, (-math.inf, math.inf))
        assert c.intervals == ((-math.inf, 0.0), (2.0, math.inf))

    def test_gaps_strictly_positive_invariant(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            k = int(rng.integers(0, 5))
            pts = np.sort(rng.uniform(0, 1, 2 * k))
            s = IntervalUnion(list(zip(pts[0::2], pts[1::2])))
            c = interval_complement(s, (0.0, 1.0))
            for (_, hi), (lo2, _) in zip(c.intervals, c.intervals[1:]):
                assert lo2 > hi


class TestAlgebra:
    def test_intersect_example(self):
        a = IntervalUnion([(0.0, 2.0), (3.0, 5.0)])
        b = IntervalUnion([(1.0, 4.0)])
        assert interval_intersect(a, b).intervals == ((1.0, 2.0), (3.0, 4.0))

    def test_union_example(self):
        a = IntervalUnion([(0.0, 1.0)])
        b = IntervalUnion([(0.5, 2.0), (3.0, 4.0)])
        assert interval_union(a, b).intervals == ((0.0, 2.0), (3.0, 4.0))

    def test_randomized_membership_oracle(self):
        rng = np.random.default_rng(4)
        xs = np.linspace(-0.1, 1.1, 601)
        for _ in range(150):
            ka, kb = rng.integers(0, 4, 2)
            pa = np.sort(rng.uniform(0, 1, 2 * int(ka)))
            pb = np.sort(rng.uniform(0, 1, 2 * int(kb)))
            a = IntervalUnion(list(zip(pa[0::2], pa[1::2])))
            b = IntervalUnion(list(zip(pb[0::2], pb[1::2])))
            inter = interval_intersect(a, b)
            uni = interval_union(a, b)
            comp = interval_complement(a, (0.0, 1.0))
            for x in xs:
                ina, inb = a.contains(x), b.contains(x)
                assert inter.contains(x) == (ina and inb)
                assert uni.contains(x) == (ina or inb)
                if 0.0 <= x <= 1.0 and x not in {p for iv in a.intervals for p in iv}:
                    assert comp.contains(x) == (not ina)
