"""Empirical distances between sample batches and the analytic limit laws."""
import math

import numpy as np
from scipy import stats

from src.config import settings
from src.config.logging import sampling_logger
from src.core.lattice import gap_y
from src.laws.limit_laws import build_law, default_u_grid, law_cdf, law_cf, law_label
from src.laws.schemas import CurveTable
from src.sampling.engine import derive_seed, generate_batch
from src.sampling.schemas import ComparisonReport, SampleBatch, ScenarioCase
from src.utils.errors import ArgumentError

# u values per block of the outer product in empirical_cf
_CF_BLOCK = 32


def _samples(samples):
    arr = np.asarray(samples, dtype=float).ravel()
    if arr.size == 0:
        sampling_logger.error("Empty sample set")
        raise ArgumentError("samples must be non-empty")
    return arr


def empirical_cf(samples, u_grid, label=None):
    """(1/N) sum_k exp(iu z_k) on u_grid; real part in `values`, imaginary part in `imag_values`."""
    z = _samples(samples)
    u = np.asarray(u_grid, dtype=float).ravel()
    if u.size == 0:
        raise ArgumentError("u grid must be non-empty")

    real = np.empty_like(u)
    imag = np.empty_like(u)
    for lo in range(0, u.size, _CF_BLOCK):
        phase = np.outer(u[lo:lo + _CF_BLOCK], z)
        real[lo:lo + _CF_BLOCK] = np.cos(phase).mean(axis=1)
        imag[lo:lo + _CF_BLOCK] = np.sin(phase).mean(axis=1)
    return CurveTable(
        abscissae=u.tolist(),
        values=real.tolist(),
        imag_values=imag.tolist(),
        kind='cf',
        label=label,
    )


def ks_distance(samples, cdf):
    """Two-sided one-sample Kolmogorov-Smirnov statistic sup |F_N - F| against a vectorised cdf."""
    z = _samples(samples)
    return float(stats.kstest(z, cdf).statistic)


def default_law(scenario, name=None):
    """Reference law for a scenario; theorem1 for diagonal, theorem2 for iid_uniform unless named."""
    if name is None:
        name = 'theorem1' if scenario.case == ScenarioCase.DIAGONAL else 'theorem2'
    return build_law(name, scenario.d, scenario.x0)


def check_law_matches(scenario, law):
    if law.d != scenario.d:
        raise ArgumentError(f"law dimension {law.d} does not match scenario dimension {scenario.d}")
    if scenario.case == ScenarioCase.DIAGONAL:
        if law.name != 'theorem1':
            raise ArgumentError(f"diagonal scenario needs the theorem1 law, got {law.name}")
        if not math.isclose(law.y, gap_y(scenario.x0), abs_tol=1e-12):
            raise ArgumentError(f"law y={law.y} does not match gap_y(x0)={gap_y(scenario.x0)}")
    elif law.name not in ('theorem2', 'shared'):
        raise ArgumentError(f"iid_uniform scenario needs the theorem2 or shared law, got {law.name}")


def compare_batch(batch: SampleBatch, law, u_grid=None):
    """
    KS distances, CF sup-gap and moments of a batch against a limit law.

    Raises:
        ArgumentError: if the law does not belong to the batch's scenario
    """
    try:
        check_law_matches(batch.scenario, law)
    except ArgumentError as e:
        sampling_logger.error(f"Law/scenario mismatch: {e}")
        raise

    u = default_u_grid() if u_grid is None else np.asarray(u_grid, dtype=float)
    cdf = lambda z: law_cdf(law, z)
    emp = empirical_cf(batch.delta_samples, u)
    analytic = np.asarray(law_cf(law, u), dtype=float)
    gap = np.hypot(np.asarray(emp.values) - analytic, np.asarray(emp.imag_values))

    report = ComparisonReport(
        T=batch.T,
        N=batch.N,
        seed=batch.seed,
        law=law_label(law),
        ks_delta=ks_distance(batch.delta_samples, cdf),
        ks_error=ks_distance(batch.normalized_error_samples, cdf),
        cf_sup_gap=float(gap.max()),
        cf_imag_sup=float(np.abs(emp.imag_values).max()),
        mean=float(np.mean(batch.delta_samples)),
        variance=float(np.var(batch.delta_samples)),
    )
    sampling_logger.info(
        f"T={batch.T} N={batch.N}: ks_delta={report.ks_delta:.4g} ks_error={report.ks_error:.4g} "
        f"cf_sup_gap={report.cf_sup_gap:.4g}"
    )
    return report


def convergence_sweep(scenario, rho, T_grid, N, seed, law=None, u_grid=None, **batch_options):
    """One ComparisonReport per T; run k uses derive_seed(seed, k)."""
    T_grid = [float(T) for T in T_grid]
    if len(T_grid) < 2:
        sampling_logger.error(f"Convergence sweep needs at least 2 horizons, got {T_grid}")
        raise ArgumentError("T grid must hold at least 2 values")
    if any(b <= a for a, b in zip(T_grid, T_grid[1:])):
        raise ArgumentError("T grid must be strictly increasing")

    law = default_law(scenario) if law is None else law
    check_law_matches(scenario, law)
    reports = []
    for k, T in enumerate(T_grid):
        batch = generate_batch(scenario, T, N, rho, derive_seed(seed, k), **batch_options)
        reports.append(compare_batch(batch, law, u_grid))
    return reports


def trend_is_non_increasing(values, N, allowance=None):
    """values[k+1] <= values[k] + allowance * 1.36 / sqrt(N) for every k."""
    allowance = settings.TREND_ALLOWANCE if allowance is None else allowance
    noise = allowance * settings.KS_NOISE_CONSTANT / math.sqrt(N)
    return all(b <= a + noise for a, b in zip(values, values[1:]))
