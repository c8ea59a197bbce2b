"""Inertia counting, bisection eigenvalues, and stabilized truncation."""

import math

import numpy as np
import pytest

from conftest import dense_count_below, dense_eigenvalues, dense_mode_count
from hypmag import (CountOptions, TridiagonalOperator, count_below,
                    count_stable, discretize, lowest_eigenvalues)


def random_tridiagonal(rng):
    n = int(rng.integers(1, 201))
    diag = rng.uniform(-5.0, 5.0, n)
    off = rng.uniform(-3.0, 3.0, max(n - 1, 0))
    return TridiagonalOperator(diag=diag, off=off, t_lo=0.0, t_hi=1.0,
                               h=1.0 / (n + 1))


class TestDiscretize:
    def test_structure(self):
        T = discretize(lambda t: t, 0.0, 1.0, 4)
        h = 0.2
        assert T.h == pytest.approx(h)
        assert T.n == 4
        grid = 0.2 * np.arange(1, 5)
        assert np.allclose(T.diag, 2.0 / h**2 + grid)
        assert np.allclose(T.off, -1.0 / h**2)
        assert T.t_lo == 0.0 and T.t_hi == 1.0

    def test_scalar_only_potentials_accepted(self):
        def V(t):
            return float(t) ** 2  # chokes on arrays
        T = discretize(V, 0.0, 1.0, 8)
        assert np.allclose(T.diag - 2.0 / T.h**2, (T.h * np.arange(1, 9)) ** 2)

    def test_validation(self):
        with pytest.raises(ValueError):
            discretize(lambda t: t, 1.0, 1.0, 4)
        with pytest.raises(ValueError):
            discretize(lambda t: t, 0.0, 1.0, 0)
        with pytest.raises(ValueError):
            discretize(lambda t: np.full_like(t, math.inf), 0.0, 1.0, 4)

    def test_operator_shape_validation(self):
        with pytest.raises(ValueError):
            TridiagonalOperator(diag=np.array([1.0, 2.0]), off=np.array([]),
                                t_lo=0.0, t_hi=1.0, h=0.5)


class TestCountBelow:
    def test_matches_dense_oracle_random(self):
        rng = np.random.default_rng(42)
        for _ in range(25):
            T = random_tridiagonal(rng)
            evals = dense_eigenvalues(T.diag, T.off)
            for lam in rng.uniform(-8.0, 8.0, 4):
                assert count_below(T, lam) == int(np.sum(evals < lam))

    def test_strict_at_exact_eigenvalue(self):
        T = TridiagonalOperator(diag=np.array([1.0, 3.0]),
                                off=np.array([0.0]),
                                t_lo=0.0, t_hi=1.0, h=0.5)
        assert count_below(T, 1.0) == 0
        assert count_below(T, 3.0) == 1
        assert count_below(T, 3.0 + 1e-9) == 2

    def test_toeplitz_zero_pivot_chain(self):
        # diag 2, off -1: eigenvalues 2 - 2 cos(j pi / (n+1)); lam = 2 sits
        # exactly on the middle eigenvalue for odd n and the LDL^T sweep
        # hits a zero pivot chain that must resolve to the strict count
        for n in (5, 7, 51):
            T = TridiagonalOperator(diag=np.full(n, 2.0),
                                    off=np.full(n - 1, -1.0),
                                    t_lo=0.0, t_hi=1.0, h=1.0 / (n + 1))
            expected = dense_count_below(T.diag, T.off, 2.0)
            assert expected == (n - 1) // 2
            assert count_below(T, 2.0) == expected

    def test_single_entry(self):
        T = TridiagonalOperator(diag=np.array([4.0]), off=np.array([]),
                                t_lo=0.0, t_hi=1.0, h=0.5)
        assert count_below(T, 4.0) == 0
        assert count_below(T, 4.5) == 1


class TestGershgorin:
    def test_contains_spectrum(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            T = random_tridiagonal(rng)
            lo, hi = T.gershgorin()
            evals = dense_eigenvalues(T.diag, T.off)
            assert lo <= evals.min() and evals.max() <= hi


class TestLowestEigenvalues:
    def test_matches_dense(self):
        rng = np.random.default_rng(3)
        for _ in range(8):
            T = random_tridiagonal(rng)
            k = min(T.n, 5)
            got = lowest_eigenvalues(T, k, tol=1e-9)
            expected = np.sort(dense_eigenvalues(T.diag, T.off))[:k]
            assert np.allclose(got, expected, atol=1e-8)

    def test_repeated_eigenvalues(self):
        T = TridiagonalOperator(diag=np.array([1.0, 1.0]),
                                off=np.array([0.0]),
                                t_lo=0.0, t_hi=1.0, h=0.5)
        got = lowest_eigenvalues(T, 2, tol=1e-10)
        assert got[0] == pytest.approx(1.0, abs=1e-9)
        assert got[1] == pytest.approx(1.0, abs=1e-9)

    def test_dirichlet_laplacian_modes(self):
        # -u'' on (0, pi): eigenvalues k^2
        T = discretize(lambda t: 0.0 * t, 0.0, math.pi, 4000)
        got = lowest_eigenvalues(T, 3, tol=1e-9)
        assert np.allclose(got, [1.0, 4.0, 9.0], atol=5e-5)

    def test_validation(self):
        T = discretize(lambda t: 0.0 * t, 0.0, 1.0, 8)
        with pytest.raises(ValueError):
            lowest_eigenvalues(T, 0)
        with pytest.raises(ValueError):
            lowest_eigenvalues(T, 9)
        with pytest.raises(ValueError):
            lowest_eigenvalues(T, 1, tol=0.0)


class TestCountStable:
    def test_harmonic_oscillator(self):
        # V = t^2 with the left wall far out mimics the full line:
        # levels 1, 3, 5, 7, 9, so 5 below 10
        res = count_stable(lambda t: t * t, -8.0, 10.0)
        assert res.converged
        assert res.count == 5
        assert res.count == dense_mode_count(lambda t: t * t, -8.0, 8.0,
                                             6000, 10.0)

    def test_threshold_on_eigenvalue_is_strict(self):
        # lam = 9 hits the 5th level; the count must stay at 4
        res = count_stable(lambda t: t * t, -8.0, 9.0)
        assert res.converged
        assert res.count == 4

    def test_offset_well(self):
        res = count_stable(lambda t: (t - 5.0) ** 2, 0.0, 8.0)
        assert res.converged
        assert res.count == 4
        assert res.count == dense_mode_count(lambda t: (t - 5.0) ** 2, 0.0,
                                             12.0, 6000, 8.0)

    def test_positivity_shortcut(self):
        res = count_stable(lambda t: t * t + 100.0, 0.0, 5.0)
        assert res.converged
        assert res.count == 0

    def test_no_truncation_point_raises(self):
        with pytest.raises(ValueError):
            count_stable(lambda t: 0.0 * t, 0.0, 1.0,
                         CountOptions(search_limit=30.0))

    def test_explicit_truncation_honored(self):
        res = count_stable(lambda t: t * t, -8.0, 10.0,
                           CountOptions(t_hi0=6.0))
        assert res.t_hi >= 6.0
        assert res.count == 5

    def test_result_fields(self):
        res = count_stable(lambda t: t * t, -8.0, 10.0)
        assert res.lam == 10.0
        assert res.n >= 2
        assert res.mode_range is None
