import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import graphs, naive_independent_sets, naive_marginals
from csma_fugacity._simplex import LPError, minimize_ge
from csma_fugacity.exact import (
    enumerate_independent_sets,
    exact_marginals,
    gibbs_distribution,
    independent_set_masks,
    max_symmetric_rate,
    maximal_independent_sets,
)
from csma_fugacity.exceptions import ParameterError, TooLarge
from csma_fugacity.graph import ConflictGraph, chordal6, complete, fig8, grid, ring

PATH3 = ConflictGraph.from_edges(3, [(0, 1), (1, 2)])


class TestEnumeration:
    def test_k2(self):
        assert list(enumerate_independent_sets(complete(2))) == [(), (1,), (0,)]

    def test_path3(self):
        assert sorted(enumerate_independent_sets(PATH3)) == [(), (0,), (0, 2), (1,), (2,)]

    def test_grid_count_matches_subset_filter(self):
        g = grid(4, 4)
        assert len(list(enumerate_independent_sets(g))) == len(naive_independent_sets(g))
        assert independent_set_masks(g).size == len(naive_independent_sets(g))

    def test_guard(self):
        with pytest.raises(TooLarge):
            next(enumerate_independent_sets(ConflictGraph.from_edges(31, [])))
        with pytest.raises(TooLarge):
            exact_marginals(ConflictGraph.from_edges(31, []), np.zeros(31))

    @settings(max_examples=60, deadline=None)
    @given(graphs(max_n=9))
    def test_masks_match_dfs(self, g):
        dfs = sorted(sum(1 << i for i in s) for s in enumerate_independent_sets(g))
        assert dfs == sorted(independent_set_masks(g).tolist()) == naive_independent_sets(g)


class TestMarginals:
    def test_single_vertex(self):
        out = exact_marginals(ConflictGraph.from_edges(1, []), [0.0])
        assert out.marginals[0] == 0.5
        assert out.logZ == pytest.approx(math.log(2), abs=1e-15)

    def test_path3(self):
        out = exact_marginals(PATH3, np.zeros(3))
        np.testing.assert_allclose(out.marginals, [0.4, 0.2, 0.4], atol=1e-15)
        assert out.logZ == pytest.approx(math.log(5), abs=1e-15)
        assert out.n_sets == 5

    def test_logistic_scaling(self):
        g = ConflictGraph.from_edges(1, [])
        for c in (-5.0, -1.0, 0.3, 4.0):
            assert exact_marginals(g, [c]).marginals[0] == pytest.approx(1 / (1 + math.exp(-c)), rel=1e-14)

    def test_large_fugacities_finite(self):
        out = exact_marginals(complete(3), [800.0, 800.0, 0.0])
        np.testing.assert_allclose(out.marginals, [0.5, 0.5, 0.0], atol=1e-15)

    def test_negative_infinity_silences_link(self):
        out = exact_marginals(PATH3, [0.0, -np.inf, 0.0])
        np.testing.assert_allclose(out.marginals, [0.5, 0.0, 0.5], atol=1e-15)

    def test_rejects_nan(self):
        with pytest.raises(ParameterError):
            exact_marginals(PATH3, [0.0, np.nan, 0.0])

    def test_distribution_sums_to_one(self):
        masks, probs = gibbs_distribution(fig8(), np.linspace(-1, 1, 8))
        assert probs.sum() == pytest.approx(1.0, abs=1e-14)
        assert masks.size == probs.size

    @settings(max_examples=40, deadline=None)
    @given(graphs(max_n=9), st.integers(0, 2**31))
    def test_matches_naive(self, g, seed):
        v = np.random.default_rng(seed).normal(0, 2, g.n)
        marg, logZ = naive_marginals(g, v)
        out = exact_marginals(g, v)
        np.testing.assert_allclose(out.marginals, marg, rtol=0, atol=1e-12)
        assert out.logZ == pytest.approx(logZ, abs=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(graphs(min_n=2, max_n=8), st.integers(0, 2**31))
    def test_monotone(self, g, seed):
        rng = np.random.default_rng(seed)
        v = rng.normal(0, 1, g.n)
        i = int(rng.integers(g.n))
        before = exact_marginals(g, v).marginals
        v[i] += 0.5
        after = exact_marginals(g, v).marginals
        assert after[i] > before[i]
        for j in g.neighbors(i):
            assert after[j] <= before[j] + 1e-15


class TestMaxSymmetricRate:
    @pytest.mark.parametrize("n", range(1, 8))
    def test_complete(self, n):
        assert max_symmetric_rate(complete(n)) == pytest.approx(1 / n, abs=1e-12)

    @pytest.mark.parametrize("g, expected", [(ring(5), 0.4), (grid(4, 4), 0.5), (ring(7), 3 / 7), (chordal6(), 1 / 3)])
    def test_named(self, g, expected):
        assert max_symmetric_rate(g) == pytest.approx(expected, abs=1e-12)

    def test_maximal_independent_sets_ring5(self):
        assert maximal_independent_sets(ring(5)) == [(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)]

    @settings(max_examples=30, deadline=None)
    @given(graphs(max_n=8))
    def test_matches_scipy(self, g):
        from scipy.optimize import linprog

        sets = maximal_independent_sets(g)
        A = np.zeros((g.n, len(sets)))
        for k, s in enumerate(sets):
            A[list(s), k] = 1
        res = linprog(np.ones(len(sets)), A_ub=-A, b_ub=-np.ones(g.n), bounds=(0, None), method="highs")
        assert max_symmetric_rate(g) == pytest.approx(1 / res.fun, abs=1e-9)


class TestSimplex:
    def test_small(self):
        value, x = minimize_ge([1, 1], [[1, 2], [3, 1]], [4, 6])
        assert value == pytest.approx(2.8)
        np.testing.assert_allclose(x, [1.6, 1.2])

    def test_infeasible(self):
        with pytest.raises(LPError):
            minimize_ge([1.0], [[0.0]], [1.0])

    def test_unbounded(self):
        with pytest.raises(LPError):
            minimize_ge([-1.0], [[1.0]], [1.0])

    @pytest.mark.parametrize("seed", range(40))
    def test_random_against_scipy(self, seed):
        from scipy.optimize import linprog

        rng = np.random.default_rng(seed)
        m, k = rng.integers(2, 8, size=2)
        A = rng.integers(0, 3, size=(m, k)).astype(float)
        A[:, 0] += 1  # keeps the program feasible
        b = rng.uniform(0, 3, m)
        c = rng.uniform(0.1, 2, k)
        value, x = minimize_ge(c, A, b)
        ref = linprog(c, A_ub=-A, b_ub=-b, bounds=(0, None), method="highs")
        assert value == pytest.approx(ref.fun, abs=1e-9)
        assert np.all(A @ x >= b - 1e-9) and np.all(x >= -1e-12)
