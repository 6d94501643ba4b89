"""Model selection: oracle penalty, slope heuristic, information criteria."""

import math

import mpmath
import numpy as np
import pytest

from countseg import (
    ArgumentError,
    LossFamily,
    oracle_penshape,
    segment,
    select_ic,
    select_mbic,
    select_oracle,
)
from countseg.selection import AIC, BIC, MIN_KMAX_FOR_ORACLE, fit_slope_beta

POIS = LossFamily.poisson()
NB03 = LossFamily.negative_binomial(0.3)


class TestPenshape:
    def test_formula_value(self):
        with mpmath.workdps(40):
            want = float(
                10 * (1 + 4 * mpmath.sqrt(mpmath.mpf("1.1") + mpmath.log(mpmath.mpf(100))))
                ** 2
            )
        assert oracle_penshape(10, 1000) == pytest.approx(want, rel=1e-14)

    def test_k_equals_n(self):
        n = 500
        assert oracle_penshape(n, n) == pytest.approx(
            n * (1 + 4 * math.sqrt(1.1)) ** 2, rel=1e-14
        )

    def test_log_argument_exact(self):
        # n/k = e^2.9 makes the inner sqrt exactly sqrt(4) = 2 -> shape 81k
        n = 1000
        k = n / math.exp(2.9)
        shape = k * (1 + 4 * math.sqrt(1.1 + math.log(n / k))) ** 2
        assert shape == pytest.approx(81 * k, rel=1e-12)

    def test_bounds(self):
        with pytest.raises(ArgumentError):
            oracle_penshape(0, 10)
        with pytest.raises(ArgumentError):
            oracle_penshape(11, 10)


class TestSlopeHeuristic:
    def test_affine_costs_recover_beta(self):
        n = 1000
        kmax = 40
        s = 3.7
        shape = np.array([oracle_penshape(k, n) for k in range(1, kmax + 1)])
        costs = 123.0 - s * shape
        beta = fit_slope_beta(costs, shape)
        assert beta == pytest.approx(2 * s, rel=0.05)
        sel = select_oracle(costs, n)
        # penalized values rise in k once beta = 2s, so k_hat = 1
        assert sel.k_hat == 1
        assert sel.beta == pytest.approx(2 * s, rel=0.05)

    def test_noisy_affine_costs(self):
        rng = np.random.default_rng(30)
        n = 2000
        shape = np.array([oracle_penshape(k, n) for k in range(1, 31)])
        costs = 50.0 - 1.5 * shape + rng.normal(0, 0.1, 30)
        assert fit_slope_beta(costs, shape) == pytest.approx(3.0, rel=0.05)

    def test_flat_costs_fall_back_to_tiny_beta(self):
        n = 100
        shape = np.array([oracle_penshape(k, n) for k in range(1, 13)])
        costs = np.zeros(12)
        beta = fit_slope_beta(costs, shape)
        assert beta > 0
        assert select_oracle(costs, n).k_hat == 1

    def test_kmax_too_small(self):
        with pytest.raises(ArgumentError):
            select_oracle(np.zeros(MIN_KMAX_FOR_ORACLE - 1), 100)


class TestOnSignals:
    def test_constant_signal_selects_one(self):
        y = np.full(200, 7.0)
        res = segment(y, POIS, 14)
        assert select_oracle(res.final_costs, 200).k_hat == 1
        assert select_ic(res.final_costs, 200, AIC).k_hat == 1
        assert select_ic(res.final_costs, 200, BIC).k_hat == 1

    def test_two_step_signal_bic(self):
        rng = np.random.default_rng(31)
        y = np.concatenate([rng.poisson(2.0, 30), rng.poisson(40.0, 30)]).astype(float)
        res = segment(y, POIS, 5)
        sel = select_ic(res.final_costs, 60, BIC)
        assert sel.k_hat == 2
        # agreement with the criterion evaluated by hand
        values = 2.0 * res.final_costs + (2 * np.arange(1, 6) - 1) * math.log(60)
        assert np.allclose(sel.values, values)
        assert int(np.argmin(values)) + 1 == 2

    def test_eleven_segment_recovery_single_seed(self):
        # single-seed version of the acceptance Monte-Carlo (which passed
        # 100/100 in calibration)
        from countseg import SimulationSpec, simulate

        rng = np.random.default_rng(np.random.SeedSequence((12, 0)))
        sim = simulate(SimulationSpec(1000, 11, 0.3), rng)
        res = segment(sim.series, NB03, 32)
        sel = select_oracle(res.final_costs, 1000)
        assert 9 <= sel.k_hat <= 13


class TestCriteria:
    def test_aic_bic_formulas(self):
        costs = np.array([10.0, 6.0, 5.5, 5.4])
        aic = select_ic(costs, 50, AIC)
        bic = select_ic(costs, 50, BIC)
        assert np.allclose(aic.values, 2 * costs + 2 * (2 * np.arange(1, 5) - 1))
        assert np.allclose(
            bic.values, 2 * costs + (2 * np.arange(1, 5) - 1) * math.log(50)
        )

    def test_unknown_criterion(self):
        with pytest.raises(ArgumentError):
            select_ic(np.zeros(5), 50, "hqc")

    def test_ties_pick_smallest_k(self):
        sel = select_ic(np.array([1.0, 0.0, 0.0]), math.e ** 2, AIC)
        # values strictly ordered here; build an exact tie instead
        costs = np.array([3.0, 1.0, -1.0])  # AIC values: 8, 8, 8
        sel = select_ic(costs, 50, AIC)
        assert np.allclose(sel.values, sel.values[0])
        assert sel.k_hat == 1

    def test_mbic_rejects_nb(self):
        with pytest.raises(ArgumentError):
            select_mbic(np.zeros(3), [[], [1], [1, 2]], 10, NB03)

    def test_mbic_agrees_on_obvious_signal(self):
        rng = np.random.default_rng(32)
        y = np.concatenate([rng.poisson(2.0, 50), rng.poisson(60.0, 50)]).astype(float)
        res = segment(y, POIS, 6)
        breaks = [res.breaks(k) for k in range(1, 7)]
        sel = select_mbic(res.final_costs, breaks, 100, POIS)
        assert sel.k_hat == select_ic(res.final_costs, 100, BIC).k_hat == 2

    def test_mbic_validates_breakpoints(self):
        with pytest.raises(ArgumentError):
            select_mbic(np.zeros(3), [[]], 10, POIS)
        with pytest.raises(ArgumentError):
            select_mbic(np.zeros(2), [[], [10]], 10, POIS)  # zero-length segment
