from __future__ import annotations

import itertools

import numpy as np
import pytest

from layoutstress import ConstantSeriesError, average_ranks, isotonic_regression, spearman

from conftest import isotonic_by_enumeration


class TestAverageRanks:
    def test_distinct(self):
        assert average_ranks([10, 20, 30]).ranks.tolist() == [1, 2, 3]

    def test_pair_tie(self):
        assert average_ranks([5, 5]).ranks.tolist() == [1.5, 1.5]

    def test_mixed_ties(self):
        assert average_ranks([1, 2, 2, 3]).ranks.tolist() == [1, 2.5, 2.5, 4]

    def test_order_independent_of_position(self):
        assert average_ranks([2, 2, 1]).ranks.tolist() == [2.5, 2.5, 1]

    def test_ranks_sum_invariant(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            n = int(rng.integers(1, 40))
            vals = rng.integers(0, 6, size=n).astype(float)
            ranks = average_ranks(vals).ranks
            assert ranks.sum() == pytest.approx(n * (n + 1) / 2)
            # equal values share a rank
            for a, b in itertools.combinations(range(n), 2):
                if vals[a] == vals[b]:
                    assert ranks[a] == ranks[b]

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            average_ranks([1.0, np.inf])

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            average_ranks([])


class TestSpearman:
    def test_monotone(self):
        assert spearman([1, 2, 3], [2, 4, 6]) == 1.0

    def test_reversed(self):
        assert spearman([1, 2, 3], [3, 2, 1]) == -1.0

    def test_tie_case_hand_value(self):
        # ranks [1, 2.5, 2.5, 4] vs [1, 2, 3, 4]
        assert spearman([1, 2, 2, 3], [1, 2, 3, 4]) == pytest.approx(0.9486832980505138)

    def test_symmetry_and_self(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            xs = rng.normal(size=12)
            ys = rng.normal(size=12)
            assert spearman(xs, ys) == pytest.approx(spearman(ys, xs), abs=1e-15)
            assert spearman(xs, xs) == 1.0

    def test_invariant_under_increasing_transform(self):
        rng = np.random.default_rng(5)
        xs = rng.normal(size=15)
        ys = rng.normal(size=15)
        base = spearman(xs, ys)
        assert spearman(np.exp(xs), ys) == pytest.approx(base, abs=1e-12)
        assert spearman(xs, 3 * ys + 7) == pytest.approx(base, abs=1e-12)

    def test_constant_series_rejected(self):
        with pytest.raises(ConstantSeriesError):
            spearman([1, 1, 1], [1, 2, 3])
        with pytest.raises(ConstantSeriesError):
            spearman([1, 2, 3], [5, 5, 5])

    def test_length_checks(self):
        with pytest.raises(ValueError):
            spearman([1, 2], [1, 2, 3])
        with pytest.raises(ValueError):
            spearman([1], [2])

    def test_bounded(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            xs = rng.integers(0, 4, size=10).astype(float)
            ys = rng.integers(0, 4, size=10).astype(float)
            if len(set(xs)) == 1 or len(set(ys)) == 1:
                continue
            assert -1.0 <= spearman(xs, ys) <= 1.0


class TestIsotonicRegression:
    def test_already_monotone(self):
        assert isotonic_regression([1, 2, 3]).fitted.tolist() == [1, 2, 3]

    def test_full_pool(self):
        assert isotonic_regression([3, 1, 2]).fitted.tolist() == [2, 2, 2]

    def test_middle_violation(self):
        assert isotonic_regression([1, 3, 2, 4]).fitted.tolist() == [1, 2.5, 2.5, 4]

    def test_weighted_pool(self):
        fit = isotonic_regression([3.0, 1.0], weights=[1.0, 3.0]).fitted
        assert fit.tolist() == [1.5, 1.5]

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            isotonic_regression([])

    def test_bad_weights_rejected(self):
        with pytest.raises(ValueError):
            isotonic_regression([1, 2], weights=[1.0])
        with pytest.raises(ValueError):
            isotonic_regression([1, 2], weights=[1.0, 0.0])

    def test_fit_is_monotone_and_blockwise_mean(self):
        rng = np.random.default_rng(8)
        for _ in range(60):
            n = int(rng.integers(1, 30))
            ys = rng.normal(size=n)
            w = rng.uniform(0.5, 3.0, size=n)
            fit = isotonic_regression(ys, w).fitted
            assert np.all(np.diff(fit) >= 0)
            # each constant block averages its inputs
            start = 0
            for k in range(1, n + 1):
                if k == n or fit[k] != fit[start]:
                    block_mean = np.sum(w[start:k] * ys[start:k]) / np.sum(w[start:k])
                    assert fit[start] == pytest.approx(block_mean, rel=1e-12)
                    start = k

    def test_matches_enumeration_oracle_small(self):
        rng = np.random.default_rng(9)
        for _ in range(40):
            n = int(rng.integers(1, 7))
            ys = rng.integers(0, 3, size=n).astype(float)
            w = rng.uniform(0.5, 2.0, size=n)
            expected = isotonic_by_enumeration(ys, w)
            assert isotonic_regression(ys, w).fitted == pytest.approx(expected, abs=1e-10)

    def test_residual_optimality_under_perturbation(self):
        rng = np.random.default_rng(10)
        for _ in range(30):
            n = int(rng.integers(2, 20))
            ys = rng.normal(size=n)
            w = rng.uniform(0.5, 2.0, size=n)
            fit = isotonic_regression(ys, w).fitted
            best = float(np.sum(w * (ys - fit) ** 2))
            # nudge each block up/down where monotonicity allows
            blocks = []
            start = 0
            for k in range(1, n + 1):
                if k == n or fit[k] != fit[start]:
                    blocks.append((start, k))
                    start = k
            for idx, (a, b) in enumerate(blocks):
                for eps in (1e-3, -1e-3):
                    cand = fit.copy()
                    cand[a:b] += eps
                    if np.all(np.diff(cand) >= 0):
                        obj = float(np.sum(w * (ys - cand) ** 2))
                        assert obj >= best - 1e-12
