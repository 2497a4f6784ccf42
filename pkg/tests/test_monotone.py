import numpy as np
import pytest

from qslgeo import (
    LOG_MEAN,
    RLD,
    SLD,
    WIGNER_YANASE,
    MonotoneFunction,
    NonPositiveArgument,
    beta_grid,
    mean_matrix,
)
from conftest import diag_density

BETA_GRID = beta_grid(0.01)
X_LOG_GRID = np.logspace(-6, 6, 49)


class TestFamilyMembers:
    def test_normalization_at_one(self):
        for beta in BETA_GRID:
            assert MonotoneFunction(float(beta))(1.0) == 1.0

    def test_arithmetic_member(self):
        assert SLD(3.0) == pytest.approx(2.0, rel=1e-14)

    def test_harmonic_member(self):
        assert RLD(3.0) == pytest.approx(1.5, rel=1e-14)

    def test_wigner_yanase_value(self):
        # ((1 + sqrt(4)) / 2)^2
        assert WIGNER_YANASE(4.0) == pytest.approx(2.25, rel=1e-14)

    def test_log_mean_member(self):
        assert LOG_MEAN(np.e) == pytest.approx(np.e - 1.0, rel=1e-14)

    def test_rejects_nonpositive_argument(self):
        for bad in (0.0, -1.0, float("nan")):
            with pytest.raises(NonPositiveArgument):
                SLD(bad)

    def test_rejects_beta_out_of_range(self):
        for bad in (-1.0000001, 1.5, float("nan")):
            with pytest.raises(ValueError):
                MonotoneFunction(bad)

    def test_aliases(self):
        assert MonotoneFunction.from_spec("sld").beta == 1.0
        assert MonotoneFunction.from_spec("WY").beta == 0.5
        assert MonotoneFunction.from_spec("rld").beta == -1.0
        assert MonotoneFunction.from_spec("log").beta == 0.0
        assert MonotoneFunction.from_spec("-0.25").beta == -0.25
        assert MonotoneFunction.from_spec(0.75).beta == 0.75
        with pytest.raises(ValueError):
            MonotoneFunction.from_spec("fast")


class TestFunctionProperties:
    def test_symmetry(self):
        # x f(1/x) = f(x); tolerance relative to the function value, which
        # grows like x/2 at large x
        for beta in beta_grid(0.1):
            f = MonotoneFunction(float(beta))
            for x in X_LOG_GRID:
                lhs = x * f(1.0 / x)
                rhs = f(x)
                assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))

    def test_monotone_in_x(self):
        xs = np.sort(np.concatenate([X_LOG_GRID, np.linspace(0.2, 5.0, 60)]))
        for beta in beta_grid(0.1):
            f = MonotoneFunction(float(beta))
            vals = np.array([f(float(x)) for x in xs])
            assert np.all(np.diff(vals) >= -1e-14 * np.abs(vals[1:]))

    def test_taylor_crossover_is_smooth(self):
        # direct branch and the near-1 expansion agree at the crossover
        for beta in (-1.0, -0.6, 0.0, 0.3, 0.49):
            f = MonotoneFunction(beta)
            g = beta * (1.0 - beta)
            for x in (1.0 + 2.00001e-6, 1.0 - 2.00001e-6):
                t = np.log(x)
                taylor = 1.0 + t / 2.0 + (2.0 + g) * t * t / 12.0
                assert f(x) == pytest.approx(taylor, abs=1e-13)

    def test_piecewise_continuity_in_beta(self):
        delta = 1e-6
        for edge in (0.0, 0.5):
            for x in (0.05, 0.7, 1.3, 20.0):
                lo = MonotoneFunction(edge - delta)(x)
                hi = MonotoneFunction(edge + delta)(x)
                assert abs(lo - hi) <= 1e-4


class TestMeans:
    def test_mean_of_equal_arguments(self):
        for beta in beta_grid(0.1):
            assert MonotoneFunction(float(beta)).mean(0.3, 0.3) == 0.3

    def test_arithmetic_mean(self):
        assert SLD.mean(0.1, 0.4) == pytest.approx(0.25, rel=1e-14)

    def test_harmonic_mean(self):
        assert RLD.mean(0.1, 0.4) == pytest.approx(0.16, rel=1e-14)

    def test_mean_symmetric_exactly(self, rng):
        for _ in range(50):
            x, y = np.exp(rng.uniform(-8, 1, size=2))
            beta = float(rng.uniform(-1, 1))
            f = MonotoneFunction(beta)
            assert f.mean(x, y) == f.mean(y, x)

    def test_mean_sandwich(self, rng):
        for _ in range(40):
            x, y = np.exp(rng.uniform(-8, 1, size=2))
            lo, hi = RLD.mean(x, y), SLD.mean(x, y)
            for beta in beta_grid(0.1):
                m = MonotoneFunction(float(beta)).mean(x, y)
                assert lo - 1e-12 * hi <= m <= hi + 1e-12 * hi

    def test_betweenness(self, rng):
        for _ in range(40):
            x, y = np.exp(rng.uniform(-6, 0, size=2))
            lo, hi = min(x, y), max(x, y)
            for beta in (-1.0, -0.3, 0.0, 0.5, 1.0):
                m = MonotoneFunction(beta).mean(x, y)
                assert lo - 1e-14 <= m <= hi + 1e-14

    def test_continuity_under_perturbation(self, rng):
        for _ in range(20):
            x, y = np.exp(rng.uniform(-4, 0, size=2))
            for beta in (-1.0, 0.0, 0.5, 1.0):
                f = MonotoneFunction(beta)
                base = f.mean(x, y)
                shifted = f.mean(x * (1 + 1e-9), y)
                assert abs(shifted - base) <= 1e-7 * max(x, y)

    def test_joint_monotonicity(self, rng):
        for _ in range(40):
            x, y = np.exp(rng.uniform(-6, 0, size=2))
            dx, dy = np.exp(rng.uniform(-6, 0, size=2)) * 0.1
            for beta in (-1.0, -0.5, 0.0, 0.5, 1.0):
                f = MonotoneFunction(beta)
                assert f.mean(x + dx, y + dy) >= f.mean(x, y) - 1e-14

    def test_near_degenerate_guard(self):
        x = 0.37
        y = x * (1.0 + 5e-9)
        for beta in (-1.0, 0.0, 0.5, 1.0):
            assert MonotoneFunction(beta).mean(x, y) == 0.5 * (x + y)

    def test_rejects_nonpositive(self):
        with pytest.raises(NonPositiveArgument):
            SLD.mean(0.0, 0.5)
        with pytest.raises(NonPositiveArgument):
            SLD.mean(0.5, -0.1)


class TestMeanMatrix:
    def test_maximally_mixed(self):
        rho = diag_density([0.5, 0.5])
        for beta in (-1.0, 0.0, 1.0):
            mm = mean_matrix(MonotoneFunction(beta), rho)
            assert np.allclose(mm.values, 0.5)

    def test_arithmetic_off_diagonal(self):
        mm = mean_matrix(SLD, diag_density([0.7, 0.3]))
        assert mm.values[0, 1] == pytest.approx(0.5)

    def test_harmonic_off_diagonal(self):
        mm = mean_matrix(RLD, diag_density([0.7, 0.3]))
        assert mm.values[0, 1] == pytest.approx(0.42)

    def test_invariants(self, rng):
        from conftest import random_density

        for _ in range(10):
            dim = int(rng.integers(2, 7))
            rho = random_density(rng, dim)
            beta = float(rng.uniform(-1, 1))
            mm = mean_matrix(MonotoneFunction(beta), rho)
            p = rho.eigenvalues
            assert np.array_equal(mm.values, mm.values.T)
            assert np.array_equal(np.diag(mm.values), p)
            assert np.all(mm.values > 0.0)
            for i in range(dim):
                for j in range(dim):
                    lo, hi = min(p[i], p[j]), max(p[i], p[j])
                    assert lo - 1e-14 <= mm.values[i, j] <= hi + 1e-14


class TestBetaGrid:
    def test_endpoints_exact(self):
        g = beta_grid(0.01)
        assert len(g) == 201
        assert g[0] == -1.0 and g[-1] == 1.0

    def test_bad_step(self):
        with pytest.raises(ValueError):
            beta_grid(0.0)
        with pytest.raises(ValueError):
            beta_grid(1.5)
