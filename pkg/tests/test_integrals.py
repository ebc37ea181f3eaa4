"""Bracket estimators: classical anchors, exact identities, dual-route checks."""

import math

import numpy as np
import pytest

from stablesub import (
    ExpKernel,
    FracMomentQuery,
    SeedSpec,
    SingularKernel,
    StableParams,
    SubordinatorPath,
    TimeGrid,
    abel_identity_check,
    deterministic_path,
    dyadic_block_estimate,
    exp_kernel_integral,
    frac_moment_closed_form,
    ibp_estimate,
    sample_path,
    sample_path_values,
    stieltjes_bracket,
    time_integral_bracket,
)

GRID = TimeGrid.geometric(1.0, levels=40, q=0.5)
PARAMS = StableParams(0.5)


def random_paths(n, grid=GRID, alpha=0.5, master=1001):
    values = sample_path_values(StableParams(alpha), grid, SeedSpec(master, 0), n)
    return [SubordinatorPath(grid=grid, values=row) for row in values]


class TestKernels:
    def test_domains(self):
        with pytest.raises(ValueError):
            SingularKernel(theta=-0.1)
        with pytest.raises(ValueError):
            SingularKernel(theta=1.0, T=0.0)
        with pytest.raises(ValueError):
            ExpKernel(lam=0.0)
        SingularKernel(theta=0.0)  # degenerate constant kernel is allowed

    def test_horizon_mismatch_rejected(self):
        path = deterministic_path(GRID)
        with pytest.raises(ValueError):
            stieltjes_bracket(path, SingularKernel(theta=0.5, T=2.0))
        with pytest.raises(ValueError):
            exp_kernel_integral(path, ExpKernel(lam=1.0, T=2.0))


class TestClassicalAnchors:
    def test_power_integral_on_identity_path(self):
        # int_eps^1 t^(-1/2) dt = 2 (1 - sqrt(eps)) ~ 2 must sit inside the bracket.
        det = deterministic_path(GRID)
        bracket = stieltjes_bracket(det, SingularKernel(theta=0.5, T=1.0))
        target = 2.0 * (1.0 - math.sqrt(GRID.epsilon))
        assert bracket.contains(target)
        assert bracket.contains(2.0 - 1e-5)

    def test_gap_shrinks_under_midpoint_refinement(self):
        kernel = SingularKernel(theta=0.5, T=1.0)
        gaps = []
        for factor in (1, 2, 4, 8):
            det = deterministic_path(GRID.refined(factor))
            bracket = stieltjes_bracket(det, kernel)
            gaps.append(bracket.gap)
            assert bracket.contains(2.0 * (1.0 - math.sqrt(GRID.epsilon)))
        assert gaps[1] < gaps[0] and gaps[2] < gaps[1] and gaps[3] < gaps[2]
        # halving cells halves the kernel variation per cell
        assert gaps[1] == pytest.approx(gaps[0] / 2.0, rel=0.1)

    def test_exp_integral_on_identity_path(self):
        grid = TimeGrid.uniform(1.0, levels=64)
        bracket = exp_kernel_integral(deterministic_path(grid), ExpKernel(lam=1.0, T=1.0))
        assert bracket.contains(1.0 - math.exp(-(1.0 - grid.epsilon)))
        assert bracket.gap < 0.02

    def test_exp_kernel_vanishing_rate_collapses(self):
        path = sample_path(PARAMS, GRID, SeedSpec(5, 1))
        bracket = exp_kernel_integral(path, ExpKernel(lam=1e-12, T=1.0))
        total = path.values[-1] - path.values[0]
        assert bracket.lower == pytest.approx(total, rel=1e-9)
        assert bracket.upper == pytest.approx(total, rel=1e-9)

    def test_constant_kernel_telescopes(self):
        path = sample_path(PARAMS, GRID, SeedSpec(5, 2))
        bracket = stieltjes_bracket(path, SingularKernel(theta=0.0, T=1.0))
        total = path.values[-1] - path.values[0]
        assert bracket.lower == bracket.upper == pytest.approx(total, rel=1e-12)

    def test_ibp_constant_kernel_is_boundary_terms(self):
        path = sample_path(PARAMS, GRID, SeedSpec(5, 3))
        bracket = ibp_estimate(path, SingularKernel(theta=0.0, T=1.0))
        total = path.values[-1] - path.values[0]
        assert bracket.lower == pytest.approx(total, rel=1e-12)
        assert bracket.upper == pytest.approx(total, rel=1e-12)

    def test_ibp_identity_path_matches_classical(self):
        det = deterministic_path(GRID.refined(8))
        bracket = ibp_estimate(det, SingularKernel(theta=0.5, T=1.0))
        assert bracket.contains(2.0 * (1.0 - math.sqrt(GRID.epsilon)))


class TestBracketValidity:
    def test_lower_le_upper_everywhere(self):
        rng = np.random.default_rng(7)
        for path in random_paths(200):
            theta = 0.05 + 4.0 * rng.random()
            b = stieltjes_bracket(path, SingularKernel(theta=theta, T=1.0))
            assert b.lower <= b.upper
            e = exp_kernel_integral(path, ExpKernel(lam=0.1 + 3.0 * rng.random(), T=1.0))
            assert e.lower <= e.upper
            t = time_integral_bracket(path, SingularKernel(theta=theta, T=1.0))
            assert t.lower <= t.upper

    def test_brackets_enclose_fine_resolution_value(self):
        # The bracket from the coarse view of a path must contain the sums
        # computed at full resolution (coupled subsampling).
        kernel = SingularKernel(theta=1.0, T=1.0)
        fine_grid = GRID.refined(4)
        for seed in range(50):
            fine = sample_path(PARAMS, fine_grid, SeedSpec(31, seed))
            coarse = SubordinatorPath(grid=GRID, values=fine.values[::4])
            fine_bracket = stieltjes_bracket(fine, kernel)
            coarse_bracket = stieltjes_bracket(coarse, kernel)
            assert coarse_bracket.lower <= fine_bracket.lower
            assert fine_bracket.upper <= coarse_bracket.upper

    def test_refinement_shrinks_gap_pathwise_and_in_mean(self):
        kernel = SingularKernel(theta=1.0, T=1.0)
        fine_grid = GRID.refined(2)
        coarse_gaps, fine_gaps = [], []
        for seed in range(1000):
            fine = sample_path(PARAMS, fine_grid, SeedSpec(33, seed))
            coarse = SubordinatorPath(grid=GRID, values=fine.values[::2])
            gap_fine = stieltjes_bracket(fine, kernel).gap
            gap_coarse = stieltjes_bracket(coarse, kernel).gap
            assert gap_fine <= gap_coarse
            fine_gaps.append(gap_fine)
            coarse_gaps.append(gap_coarse)
        assert np.mean(fine_gaps) < np.mean(coarse_gaps)
        # distributional version on independent replicates: medians halve
        ind_fine = [
            stieltjes_bracket(sample_path(PARAMS, fine_grid, SeedSpec(34, s)), kernel).gap
            for s in range(1000)
        ]
        assert np.median(ind_fine) < np.median(coarse_gaps)

    def test_lower_sum_stabilizes_for_subcritical_exponent(self):
        # Monotone in the truncation: deepening epsilon only adds terms, and
        # the additions become negligible for theta < 1/alpha.
        kernel_theta = 1.0
        deep = TimeGrid.geometric(1.0, levels=40)
        values = sample_path_values(PARAMS, deep, SeedSpec(35, 0), 400)
        tail_terms = np.diff(values, axis=1) * deep.points[1:] ** -kernel_theta
        suffix = np.cumsum(tail_terms[:, ::-1], axis=1)[:, ::-1]
        med_20 = np.median(suffix[:, 20])  # truncation at 2^-20
        med_40 = np.median(suffix[:, 0])  # truncation at 2^-40
        assert med_40 >= med_20
        assert (med_40 - med_20) / med_20 < 0.01


class TestAbelIdentity:
    def test_discrepancy_tiny_on_random_pairs(self):
        rng = np.random.default_rng(17)
        worst = 0.0
        for path in random_paths(300, master=1003):
            theta = 0.05 + 4.0 * rng.random()
            worst = max(worst, abel_identity_check(path, SingularKernel(theta=theta, T=1.0)))
        assert worst <= 1e-10

    def test_identity_path(self):
        det = deterministic_path(GRID)
        assert abel_identity_check(det, SingularKernel(theta=0.5, T=1.0)) <= 1e-10

    def test_single_interval_grid(self):
        grid = TimeGrid(points=np.array([0.5, 1.0]))
        path = sample_path(PARAMS, grid, SeedSpec(4, 4))
        assert abel_identity_check(path, SingularKernel(theta=1.3, T=1.0)) <= 1e-10


class TestDualRoute:
    def test_ibp_and_stieltjes_intersect(self):
        kernel = SingularKernel(theta=1.0, T=1.0)
        for path in random_paths(1000, master=1005):
            assert stieltjes_bracket(path, kernel).intersects(ibp_estimate(path, kernel))

    def test_intersection_across_exponents(self):
        rng = np.random.default_rng(23)
        for path in random_paths(200, master=1007):
            kernel = SingularKernel(theta=0.05 + 4.0 * rng.random(), T=1.0)
            assert stieltjes_bracket(path, kernel).intersects(ibp_estimate(path, kernel))


class TestLogSpaceGuard:
    def test_flag_and_values(self):
        path = sample_path(PARAMS, GRID, SeedSpec(6, 6))
        kernel = SingularKernel(theta=30.0, T=1.0)  # theta |ln eps| ~ 832 > 700
        bracket = stieltjes_bracket(path, kernel)
        assert bracket.log_scale
        assert bracket.lower <= bracket.upper
        # cross-check the log-space sum against a high-headroom direct sum
        inc = path.increments().astype(np.longdouble)
        pts = path.grid.points.astype(np.longdouble)
        direct = np.log(np.sum(pts[1:] ** np.longdouble(-30.0) * inc))
        assert float(direct) == pytest.approx(bracket.lower, rel=1e-10)

    def test_linear_scale_below_threshold(self):
        path = sample_path(PARAMS, GRID, SeedSpec(6, 7))
        bracket = stieltjes_bracket(path, SingularKernel(theta=5.0, T=1.0))
        assert not bracket.log_scale


class TestDyadicBlocks:
    def test_requires_halving_grid(self):
        path = deterministic_path(TimeGrid.uniform(1.0, levels=8, epsilon=0.1))
        with pytest.raises(ValueError):
            dyadic_block_estimate(path, SingularKernel(theta=1.0, T=1.0), 0.25)

    def test_identity_path_closed_form(self):
        # With S_t = t each block term is (2^(k+1) theta-power * 2^-k)^p.
        theta, p = 0.5, 0.5
        det = deterministic_path(GRID)
        expected = sum(
            (2.0 ** ((k + 1) * theta) * 2.0**-k) ** p for k in range(len(GRID) - 1)
        )
        value = dyadic_block_estimate(det, SingularKernel(theta=theta, T=1.0), p)
        assert value == pytest.approx(expected, rel=1e-12)

    def test_order_zero_limit_counts_blocks(self):
        det = deterministic_path(GRID)
        value = dyadic_block_estimate(det, SingularKernel(theta=1.0, T=1.0), 1e-9)
        assert value == pytest.approx(len(GRID) - 1, rel=1e-6)

    def test_dominates_time_integral_pathwise(self):
        theta, p = 1.0, 0.2
        kernel = SingularKernel(theta=theta, T=1.0)
        for path in random_paths(500, master=1011):
            blocks = dyadic_block_estimate(path, kernel, p)
            time_part = time_integral_bracket(path, kernel)
            assert blocks >= time_part.upper**p

    def test_mc_mean_matches_block_moment_series(self):
        # E sum_k (block majorant)^p equals the partial sum of the scaled
        # geometric series with ratio 2^(p (theta - 1/alpha)); p < alpha/2
        # keeps the variance finite so a 4-sigma band is meaningful.
        theta, p, alpha = 1.0, 0.2, 0.5
        kernel = SingularKernel(theta=theta, T=1.0)
        samples = [
            dyadic_block_estimate(path, kernel, p)
            for path in random_paths(3000, alpha=alpha, master=1013)
        ]
        mean = np.mean(samples)
        se = np.std(samples, ddof=1) / math.sqrt(len(samples))
        moment = frac_moment_closed_form(FracMomentQuery(alpha, p, 1.0))
        truncated = moment * 2.0 ** (theta * p) * sum(
            2.0 ** (k * p * (theta - 1.0 / alpha)) for k in range(len(GRID) - 1)
        )
        infinite = moment * 2.0 ** (theta * p) / (1.0 - 2.0 ** (p * (theta - 1.0 / alpha)))
        assert abs(mean - truncated) <= 4.0 * se
        assert mean - 3.0 * se <= infinite
