"""Monte Carlo experiments turning pathwise estimators into statistical verdicts.

Replicates are generated in fixed-size batches, each batch keyed by its own
counter-based stream, and reduced in batch order.  Worker count therefore
never changes a single number: it only changes which process evaluates which
batch.

Heavy tails dictate the statistics: expectations of the raw integrals are
infinite for alpha < 1, so divergence diagnostics use medians of scaled
quantities, while the moment-bound checks apply p-th powers (p < alpha)
before averaging.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .integrals import (
    ExpKernel,
    SingularKernel,
    abel_identity_check,
    exp_bracket_sums,
    exp_kernel_integral,
    ibp_estimate,
    power_bracket_sums,
    stieltjes_bracket,
)
from .special import FracMomentQuery, frac_moment_closed_form, levy_half_cdf
from .subordinator import (
    SeedSpec,
    StableParams,
    SubordinatorPath,
    TimeGrid,
    deterministic_path,
    sample_path_values,
    sample_standard_stable_batch,
)

__all__ = [
    "BATCH_SIZE",
    "BoundCheckReport",
    "CdfCheckReport",
    "LaplaceCell",
    "LaplaceCheckReport",
    "MomentEstimate",
    "ScalingCheckReport",
    "SlopeReport",
    "IbpConsistencyReport",
    "classify_power_kernel",
    "default_grid",
    "draw_standard_samples",
    "exp_kernel_moment_bound",
    "ks_distance",
    "power_integral_diverges",
    "power_kernel_moment_bound",
    "run_blowup_diagnostic",
    "run_cdf_check",
    "run_ibp_consistency",
    "run_laplace_check",
    "run_moment_check",
    "run_scaling_check",
]

# Fixed replicate batching unit; batch boundaries must not depend on the
# worker count or reproducibility across worker counts would break.
BATCH_SIZE = 4096
# Batch streams are keyed by replicate_index = (cell << 32) | batch.
_CELL_SHIFT = 32

DEFAULT_MASTER_SEED = 12345


# --------------------------------------------------------------------------
# closed-form bounds and the analytic kernel classifier


def power_kernel_moment_bound(alpha: float, theta: float, p: float, T: float = 1.0) -> float:
    """Closed-form majorant of E (int_0^T t^-theta dS)^p, valid for theta < 1/alpha.

        (2^(p/alpha + p*theta) * E S_1^p / (2^(p/alpha) - 2^(p*theta)) + 1)
            * T^((1/alpha - theta) * p)

    with E S_1^p from the validated closed form.
    """
    _check_alpha(alpha)
    _check_order(p, alpha)
    if not 0.0 < theta < 1.0 / alpha:
        raise ValueError(f"theta must lie in (0, 1/alpha): got theta={theta}, alpha={alpha}")
    if not T > 0.0:
        raise ValueError(f"T must be > 0, got {T}")
    moment = frac_moment_closed_form(FracMomentQuery(alpha, p, 1.0))
    numerator = 2.0 ** (p / alpha + p * theta) * moment
    denominator = 2.0 ** (p / alpha) - 2.0 ** (p * theta)
    return (numerator / denominator + 1.0) * T ** ((1.0 / alpha - theta) * p)


def exp_kernel_moment_bound(alpha: float, p: float, lam: float) -> float:
    """Horizon-independent majorant of E (int_0^T e^(-lam (T-t)) dS)^p.

    Equals e^(p*lam) / (e^(p*lam) - 1) * E S_1^p, evaluated in the
    overflow-safe form E S_1^p / (1 - e^(-p*lam)).
    """
    _check_alpha(alpha)
    _check_order(p, alpha)
    if not lam > 0.0:
        raise ValueError(f"lambda must be > 0, got {lam}")
    moment = frac_moment_closed_form(FracMomentQuery(alpha, p, 1.0))
    return moment / -math.expm1(-p * lam)


def classify_power_kernel(alpha: float, c: float) -> str:
    """Short-time comparison of the subordinator against the power t^c.

    Returns "limsup_infinite" when c * alpha >= 1 (S_t / t^c has infinite
    limsup as t -> 0) and "ratio_vanishes" when c * alpha < 1 (the ratio
    tends to 0).  Purely analytic; alpha = 1 is admitted for the
    deterministic path analogue.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    if not c > 0.0:
        raise ValueError(f"c must be > 0, got {c}")
    return "limsup_infinite" if c * alpha >= 1.0 else "ratio_vanishes"


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")


def _check_order(p: float, alpha: float) -> None:
    if not 0.0 < p < alpha:
        raise ValueError(f"p must lie in (0, alpha): got p={p}, alpha={alpha}")


# --------------------------------------------------------------------------
# estimates and reports


@dataclass(frozen=True)
class MomentEstimate:
    """Monte Carlo mean of a p-th power functional with its standard error."""

    mean: float
    std_error: float
    n_replicates: int
    estimator_side: str  # "lower" | "upper"

    def __post_init__(self) -> None:
        if self.n_replicates < 2:
            raise ValueError("n_replicates must be >= 2")
        if self.estimator_side not in ("lower", "upper"):
            raise ValueError(f"estimator_side must be 'lower' or 'upper', got {self.estimator_side!r}")
        if not self.std_error >= 0.0:
            raise ValueError("std_error must be >= 0")

    @classmethod
    def from_samples(cls, samples: np.ndarray, side: str) -> "MomentEstimate":
        samples = np.asarray(samples, dtype=float)
        n = samples.size
        if n < 2:
            raise ValueError("need at least 2 replicates")
        return cls(
            mean=float(samples.mean()),
            std_error=float(samples.std(ddof=1) / math.sqrt(n)),
            n_replicates=n,
            estimator_side=side,
        )


@dataclass(frozen=True)
class BoundCheckReport:
    """One-sided comparison of an estimated p-th moment against its bound.

    The verdict uses the upper-bracket estimate plus three standard errors,
    so a pass is conservative against both discretization and Monte Carlo
    noise; the lower-bracket estimate is carried for bracket-tightness
    reporting.
    """

    estimate: MomentEstimate
    lower_estimate: MomentEstimate
    bound_value: float
    margin: float
    verdict: str

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


@dataclass(frozen=True)
class LaplaceCell:
    alpha: float
    lam: float
    mc_mean: float
    std_error: float
    target: float
    within_3se: bool


@dataclass(frozen=True)
class LaplaceCheckReport:
    """Per-cell Laplace-transform fidelity of the sampler.

    Statistical acceptance: at most one cell of the grid may fall outside
    three standard errors of its target.
    """

    cells: tuple[LaplaceCell, ...]
    n_within: int
    passed: bool


@dataclass(frozen=True)
class CdfCheckReport:
    n_replicates: int
    ks_distance: float
    critical_value: float
    passed: bool


@dataclass(frozen=True)
class ScalingCheckReport:
    """Normalized moments E S_t^p / t^(p/alpha) across horizons.

    Consistency means every pairwise difference stays within three combined
    standard errors; `reference` is the closed-form value they all target.
    """

    times: tuple[float, ...]
    normalized_means: tuple[float, ...]
    std_errors: tuple[float, ...]
    reference: float
    max_deviation_sigmas: float
    passed: bool


@dataclass(frozen=True)
class SlopeReport:
    """Blow-up diagnostic across geometrically decreasing truncation levels.

    `medians` holds the per-level sample medians of epsilon^(-theta) *
    S_epsilon, whose log-log slope against log(1/epsilon) targets
    theta - 1/alpha.  `lower_sum_medians` tracks the truncated lower sums of
    the full integral (stabilizing when theta < 1/alpha).  At the boundary
    theta = 1/alpha the slope carries no information and the report is
    flagged inconclusive rather than asserting divergence.
    """

    epsilons: tuple[float, ...]
    medians: tuple[float, ...]
    median_ci_lower: tuple[float, ...]
    median_ci_upper: tuple[float, ...]
    lower_sum_medians: tuple[float, ...]
    lower_sum_ci_lower: tuple[float, ...]
    lower_sum_ci_upper: tuple[float, ...]
    fitted_slope: float
    expected_slope: float
    residual: float
    lower_sum_slope: float
    boundary_inconclusive: bool
    n_replicates: int


# --------------------------------------------------------------------------
# batched replication machinery


def _batch_layout(n_replicates: int) -> list[tuple[int, int]]:
    """(batch_index, count) pairs covering n_replicates in BATCH_SIZE chunks."""
    layout = []
    index = 0
    remaining = int(n_replicates)
    while remaining > 0:
        count = min(BATCH_SIZE, remaining)
        layout.append((index, count))
        index += 1
        remaining -= count
    return layout


def _stream(master_seed: int, cell: int, batch: int) -> SeedSpec:
    return SeedSpec(master_seed, (cell << _CELL_SHIFT) | batch)


def _run_batches(task, args_list: list, workers: int) -> list:
    """Evaluate `task` over `args_list`, preserving order; optionally in processes."""
    if workers <= 1 or len(args_list) <= 1:
        return [task(args) for args in args_list]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, args_list))


def _stable_batch_task(args) -> np.ndarray:
    alpha, master_seed, cell, batch, count = args
    seed = _stream(master_seed, cell, batch)
    return sample_standard_stable_batch(StableParams(alpha), seed, count)


def _draw_cell(alpha: float, master_seed: int, cell: int, n: int, workers: int) -> np.ndarray:
    args = [(alpha, master_seed, cell, batch, count) for batch, count in _batch_layout(n)]
    return np.concatenate(_run_batches(_stable_batch_task, args, workers))


def draw_standard_samples(
    alpha: float,
    n_replicates: int,
    master_seed: int = DEFAULT_MASTER_SEED,
    cell: int = 0,
    workers: int = 1,
) -> np.ndarray:
    """Batched i.i.d. S_1 draws; `cell` separates streams of one experiment."""
    _check_alpha(alpha)
    return _draw_cell(alpha, master_seed, cell, int(n_replicates), workers)


def _bracket_batch_task(args):
    alpha, grid, kernel, master_seed, cell, batch, count = args
    values = sample_path_values(StableParams(alpha), grid, _stream(master_seed, cell, batch), count)
    if isinstance(kernel, SingularKernel):
        return power_bracket_sums(grid.points, values, kernel.theta)
    return exp_bracket_sums(grid.points, values, kernel.lam, kernel.T)


def _blowup_batch_task(args):
    alpha, grid, theta, level_columns, master_seed, cell, batch, count = args
    values = sample_path_values(StableParams(alpha), grid, _stream(master_seed, cell, batch), count)
    pts = grid.points
    endpoint = values[:, level_columns] * pts[level_columns] ** -theta
    terms = np.diff(values, axis=1) * pts[1:] ** -theta
    suffix = np.cumsum(terms[:, ::-1], axis=1)[:, ::-1]
    # Truncating at the last grid point leaves an empty sum.
    suffix = np.concatenate([suffix, np.zeros((suffix.shape[0], 1))], axis=1)
    return endpoint, suffix[:, level_columns]


# --------------------------------------------------------------------------
# experiment drivers


def default_grid(kernel) -> TimeGrid:
    """Grid matched to the kernel: dyadic refinement toward the power-kernel
    singularity, uniform cells for the bounded exponential kernel."""
    if isinstance(kernel, SingularKernel):
        return TimeGrid.geometric(kernel.T, levels=40, q=0.5)
    return TimeGrid.uniform(kernel.T, levels=40)


def run_laplace_check(
    alphas=(0.3, 0.5, 0.7),
    lams=(0.5, 1.0, 2.0),
    n_replicates: int = 100_000,
    master_seed: int = DEFAULT_MASTER_SEED,
    workers: int = 1,
) -> LaplaceCheckReport:
    """Check E e^(-lam S_1) = e^(-lam^alpha) cell by cell, 3-sigma acceptance."""
    if n_replicates < 2:
        raise ValueError("n_replicates must be >= 2")
    cells = []
    cell_index = 0
    for alpha in alphas:
        _check_alpha(alpha)
        for lam in lams:
            draws = _draw_cell(alpha, master_seed, cell_index, n_replicates, workers)
            transformed = np.exp(-lam * draws)
            est = MomentEstimate.from_samples(transformed, "upper")
            target = math.exp(-(lam**alpha))
            cells.append(
                LaplaceCell(
                    alpha=alpha,
                    lam=lam,
                    mc_mean=est.mean,
                    std_error=est.std_error,
                    target=target,
                    within_3se=abs(est.mean - target) <= 3.0 * est.std_error,
                )
            )
            cell_index += 1
    n_within = sum(c.within_3se for c in cells)
    return LaplaceCheckReport(
        cells=tuple(cells), n_within=n_within, passed=n_within >= len(cells) - 1
    )


def ks_distance(samples: np.ndarray, cdf) -> float:
    """Kolmogorov-Smirnov distance between a sample and a CDF callable."""
    ordered = np.sort(np.asarray(samples, dtype=float))
    n = ordered.size
    theoretical = cdf(ordered)
    grid_hi = np.arange(1, n + 1) / n
    grid_lo = np.arange(0, n) / n
    return float(max(np.max(grid_hi - theoretical), np.max(theoretical - grid_lo)))


def run_cdf_check(
    n_replicates: int = 100_000,
    master_seed: int = DEFAULT_MASTER_SEED,
    workers: int = 1,
    critical_coefficient: float = 1.63,
) -> CdfCheckReport:
    """KS test of alpha = 1/2 draws against the closed-form CDF erfc(1/(2 sqrt(x))).

    The default coefficient 1.63/sqrt(n) is the asymptotic 1% critical value.
    """
    draws = _draw_cell(0.5, master_seed, 0, n_replicates, workers)
    distance = ks_distance(draws, levy_half_cdf)
    critical = critical_coefficient / math.sqrt(n_replicates)
    return CdfCheckReport(
        n_replicates=int(n_replicates),
        ks_distance=distance,
        critical_value=critical,
        passed=distance < critical,
    )


def run_scaling_check(
    params: StableParams,
    p: float,
    times=(0.25, 1.0, 4.0),
    n_replicates: int = 100_000,
    master_seed: int = DEFAULT_MASTER_SEED,
    workers: int = 1,
) -> ScalingCheckReport:
    """Self-similarity collapse: E S_t^p / t^(p/alpha) constant across horizons."""
    _check_order(p, params.alpha)
    if not times:
        raise ValueError("times must be nonempty")
    normalized, errors = [], []
    for cell, t in enumerate(times):
        if not t > 0.0:
            raise ValueError(f"times must be positive, got {t}")
        draws = _draw_cell(params.alpha, master_seed, cell, n_replicates, workers)
        scaled = (t ** (1.0 / params.alpha) * draws) ** p
        est = MomentEstimate.from_samples(scaled, "upper")
        norm = t ** (p / params.alpha)
        normalized.append(est.mean / norm)
        errors.append(est.std_error / norm)
    max_sigmas = 0.0
    for i in range(len(times)):
        for j in range(i + 1, len(times)):
            combined = math.hypot(errors[i], errors[j])
            if combined > 0.0:
                max_sigmas = max(max_sigmas, abs(normalized[i] - normalized[j]) / combined)
    reference = frac_moment_closed_form(FracMomentQuery(params.alpha, p, 1.0))
    return ScalingCheckReport(
        times=tuple(float(t) for t in times),
        normalized_means=tuple(normalized),
        std_errors=tuple(errors),
        reference=reference,
        max_deviation_sigmas=max_sigmas,
        passed=max_sigmas <= 3.0,
    )


def run_moment_check(
    params: StableParams,
    kernel,
    p: float,
    n_replicates: int = 100_000,
    master_seed: int = DEFAULT_MASTER_SEED,
    grid: TimeGrid | None = None,
    workers: int = 1,
) -> BoundCheckReport:
    """Estimate E (bracket of the kernel integral)^p and compare to its bound."""
    _check_order(p, params.alpha)
    if isinstance(kernel, SingularKernel):
        bound = power_kernel_moment_bound(params.alpha, kernel.theta, p, kernel.T)
    elif isinstance(kernel, ExpKernel):
        bound = exp_kernel_moment_bound(params.alpha, p, kernel.lam)
    else:
        raise TypeError(f"unsupported kernel type: {type(kernel).__name__}")
    if grid is None:
        grid = default_grid(kernel)
    if not math.isclose(grid.T, kernel.T, rel_tol=1e-12):
        raise ValueError(f"grid horizon {grid.T} does not match kernel horizon {kernel.T}")
    args = [
        (params.alpha, grid, kernel, master_seed, 0, batch, count)
        for batch, count in _batch_layout(n_replicates)
    ]
    parts = _run_batches(_bracket_batch_task, args, workers)
    lower = np.concatenate([part[0] for part in parts])
    upper = np.concatenate([part[1] for part in parts])
    est_upper = MomentEstimate.from_samples(upper**p, "upper")
    est_lower = MomentEstimate.from_samples(lower**p, "lower")
    margin = bound - (est_upper.mean + 3.0 * est_upper.std_error)
    return BoundCheckReport(
        estimate=est_upper,
        lower_estimate=est_lower,
        bound_value=bound,
        margin=margin,
        verdict="pass" if margin >= 0.0 else "fail",
    )


def run_blowup_diagnostic(
    params: StableParams,
    theta: float,
    T: float = 1.0,
    min_level: int = 10,
    max_level: int = 30,
    n_replicates: int = 10_000,
    master_seed: int = DEFAULT_MASTER_SEED,
    workers: int = 1,
) -> SlopeReport:
    """Median growth of the scaled near-origin statistic across epsilon levels.

    For epsilon = T 2^-j the statistic epsilon^(-theta) S_epsilon has median
    proportional to epsilon^(1/alpha - theta); the report fits the log-log
    slope against log(1/epsilon) and compares it with theta - 1/alpha.
    Medians, not means: the raw integrals have infinite expectation.
    """
    if n_replicates < 100:
        raise ValueError("n_replicates must be at least 100 for stable medians")
    if not theta > 0.0:
        raise ValueError(f"theta must be > 0, got {theta}")
    if not 1 <= min_level < max_level:
        raise ValueError(f"need 1 <= min_level < max_level, got {min_level}, {max_level}")
    grid = TimeGrid.geometric(T, levels=max_level, q=0.5)
    levels = np.arange(min_level, max_level + 1)
    level_columns = max_level - levels  # grid index of epsilon_j = T * 2^-j
    args = [
        (params.alpha, grid, theta, level_columns, master_seed, 0, batch, count)
        for batch, count in _batch_layout(n_replicates)
    ]
    parts = _run_batches(_blowup_batch_task, args, workers)
    endpoint = np.concatenate([part[0] for part in parts], axis=0)
    lower_sums = np.concatenate([part[1] for part in parts], axis=0)
    epsilons = grid.points[level_columns]

    med_e, lo_e, hi_e = _median_with_ci(endpoint)
    med_s, lo_s, hi_s = _median_with_ci(lower_sums)

    x = np.log(1.0 / epsilons)
    fitted, residual = _ols_slope(x, np.log(med_e))
    lower_sum_slope, _ = _ols_slope(x, np.log(med_s))
    expected = theta - 1.0 / params.alpha
    return SlopeReport(
        epsilons=tuple(float(e) for e in epsilons),
        medians=tuple(med_e),
        median_ci_lower=tuple(lo_e),
        median_ci_upper=tuple(hi_e),
        lower_sum_medians=tuple(med_s),
        lower_sum_ci_lower=tuple(lo_s),
        lower_sum_ci_upper=tuple(hi_s),
        fitted_slope=fitted,
        expected_slope=expected,
        residual=residual,
        lower_sum_slope=lower_sum_slope,
        boundary_inconclusive=abs(expected) <= 1e-9,
        n_replicates=int(n_replicates),
    )


def _median_with_ci(matrix: np.ndarray):
    """Column medians with distribution-free ~95% order-statistic intervals."""
    ordered = np.sort(matrix, axis=0)
    n = ordered.shape[0]
    med = np.median(ordered, axis=0)
    half_width = 0.98 * math.sqrt(n)  # 1.96 * sqrt(n) / 2
    lo = max(0, int(math.floor(n / 2 - half_width)))
    hi = min(n - 1, int(math.ceil(n / 2 + half_width)))
    return (
        [float(v) for v in med],
        [float(v) for v in ordered[lo]],
        [float(v) for v in ordered[hi]],
    )


def _ols_slope(x: np.ndarray, y: np.ndarray):
    slope, intercept = np.polyfit(x, y, 1)
    fit = slope * x + intercept
    residual = float(np.sqrt(np.mean((y - fit) ** 2)))
    return float(slope), residual


@dataclass(frozen=True)
class IbpConsistencyReport:
    """Cross-validation of the two integral routes plus classical-calculus anchors."""

    n_paths: int
    all_brackets_intersect: bool
    max_abel_discrepancy: float
    det_power_bracket: tuple[float, float]
    det_power_target: float
    det_exp_bracket: tuple[float, float]
    det_exp_target: float
    convergence_rows: tuple[tuple[int, float, float, float], ...]
    passed: bool


def run_ibp_consistency(
    params: StableParams,
    theta: float = 0.5,
    T: float = 1.0,
    n_paths: int = 1000,
    master_seed: int = DEFAULT_MASTER_SEED,
    grid: TimeGrid | None = None,
    abel_tolerance: float = 1e-10,
) -> IbpConsistencyReport:
    """Check that both bracket routes enclose the same truncated integral.

    On every sampled path the endpoint-sum bracket and the
    boundary-plus-time-integral bracket must intersect, and the discrete
    summation-by-parts identity must hold to rounding accuracy, each with an
    independently drawn exponent.  Deterministic-path anchors pin the
    estimators to classical integrals, and a midpoint-refinement sweep
    records how the deterministic bracket tightens.
    """
    if n_paths < 1:
        raise ValueError("n_paths must be >= 1")
    if grid is None:
        grid = TimeGrid.geometric(T, levels=40, q=0.5)
    kernel = SingularKernel(theta=theta, T=T)
    values = sample_path_values(params, grid, _stream(master_seed, 0, 0), n_paths)
    theta_rng = _stream(master_seed, 1, 0).generator()
    random_thetas = 0.05 + theta_rng.random(n_paths) * 4.0
    all_intersect = True
    max_abel = 0.0
    for row, random_theta in zip(values, random_thetas):
        path = SubordinatorPath(grid=grid, values=row)
        if not stieltjes_bracket(path, kernel).intersects(ibp_estimate(path, kernel)):
            all_intersect = False
        probe = SingularKernel(theta=float(random_theta), T=T)
        max_abel = max(max_abel, abel_identity_check(path, probe))

    det = deterministic_path(grid)
    power_bracket = stieltjes_bracket(det, SingularKernel(theta=0.5, T=T))
    eps = grid.epsilon
    power_target = 2.0 * (math.sqrt(T) - math.sqrt(eps))
    exp_grid = TimeGrid.uniform(T, levels=max(len(grid) - 1, 1), epsilon=eps)
    exp_bracket = exp_kernel_integral(deterministic_path(exp_grid), ExpKernel(lam=1.0, T=T))
    exp_target = 1.0 - math.exp(-(T - eps))

    rows = []
    for factor in (1, 2, 4, 8):
        fine = grid.refined(factor)
        bracket = stieltjes_bracket(deterministic_path(fine), SingularKernel(theta=0.5, T=T))
        rows.append((len(fine), bracket.lower, bracket.upper, bracket.gap))

    passed = (
        all_intersect
        and max_abel <= abel_tolerance
        and power_bracket.contains(power_target)
        and exp_bracket.contains(exp_target)
    )
    return IbpConsistencyReport(
        n_paths=int(n_paths),
        all_brackets_intersect=all_intersect,
        max_abel_discrepancy=max_abel,
        det_power_bracket=(power_bracket.lower, power_bracket.upper),
        det_power_target=power_target,
        det_exp_bracket=(exp_bracket.lower, exp_bracket.upper),
        det_exp_target=exp_target,
        convergence_rows=tuple(rows),
        passed=passed,
    )


# --------------------------------------------------------------------------
# numeric companion to the analytic classifier (used by tests and verify-all)


def power_integral_diverges(alpha: float, c: float, shells: int = 12, shell_factor: float = 2.0**-8) -> bool:
    """Numeric convergence classification of int_delta^1 t^(-c*alpha) dt as delta -> 0.

    Integrates shell by shell over [f^(k+1), f^k] with adaptive quadrature and
    declares divergence when the shell contributions fail to decay.  This is
    the independent check that classify_power_kernel is wired the right way
    around.
    """
    exponent = c * alpha
    contributions = []
    hi = 1.0
    for _ in range(shells):
        lo = hi * shell_factor
        value = integrate.quad(lambda t: t**-exponent, lo, hi, limit=200)[0]
        contributions.append(value)
        hi = lo
    # Convergent integrals have geometrically decaying shells; divergent ones
    # have flat (exponent 1) or growing shells.
    return contributions[-1] > 0.5 * contributions[0]
