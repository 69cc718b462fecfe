"""run_* operations behind the CLI subcommands; each returns an ExitCode."""
import json

import numpy as np

from src import __version__
from src.cli import verify
from src.cli.schemas import RunConfig
from src.config.logging import cli_logger
from src.core import lattice
from src.core.schemas import BoxSpec
from src.laws.limit_laws import build_law, default_u_grid, law_cf, law_label, tabulate_law
from src.sampling.analysis import (
    compare_batch,
    convergence_sweep,
    default_law,
    empirical_cf,
    trend_is_non_increasing,
)
from src.sampling.engine import generate_batch, generator_name
from src.sampling.rho import parse_rho_option
from src.utils.errors import ExitCode
from src.utils.writers import STDOUT, ResultWriter, format_cell

COUNT_HEADER = [
    'd', 'a', 't', 'x', 'count', 'volume', 'error', 'normalized_error', 'delta', 'boundary_degenerate'
]
SAMPLE_HEADER = ['index', 't', 'delta', 'normalized_error']
CF_HEADER = ['u', 'analytic_cf', 'empirical_cf_real', 'empirical_cf_imag', 'abs_gap']
LAW_HEADER = ['z', 'pdf', 'cdf']
CONVERGENCE_HEADER = [
    'T', 'N', 'seed', 'law', 'ks_delta', 'ks_error', 'cf_sup_gap', 'cf_imag_sup', 'mean', 'variance'
]


def _metadata(config: RunConfig, rho, T):
    return {
        'tool_version': __version__,
        'generator': generator_name(),
        'seed': config.seed,
        'scenario': json.loads(config.scenario().json()),
        'T': T,
        'N': config.N,
        'rho': json.loads(rho.json()),
        'rho_description': rho.describe(),
    }


def _summary(path, line):
    # keep stdout a clean table when the table itself goes there
    if path == STDOUT:
        cli_logger.info(line)
    else:
        print(line)


def run_count(config: RunConfig):
    box = BoxSpec(d=config.d, a=config.a)
    result = lattice.count_result(box, config.t, config.x)
    writer = ResultWriter(fmt=config.format)
    path = config.output or STDOUT

    if config.format == 'json':
        writer.write_json(path, result)
    else:
        writer.write_csv(path, COUNT_HEADER, [[
            result.d, result.a, result.t,
            ';'.join(format_cell(x) for x in result.coords),
            result.count, result.volume, result.error, result.normalized_error,
            result.delta, result.boundary_degenerate,
        ]])
    if result.boundary_degenerate:
        cli_logger.warning(f"at +/- x_i within tolerance of an integer for t={config.t}, X={config.x}")
    return ExitCode.SUCCESS


def _batch(config: RunConfig, rho):
    return generate_batch(
        config.scenario(), config.T, config.N, rho, config.seed,
        workers=config.workers, backend=config.backend,
    )


def run_sample(config: RunConfig):
    rho = parse_rho_option(config.rho)
    batch = _batch(config, rho)
    writer = ResultWriter(fmt=config.format)
    path = writer.resolve(config.output, 'sample')

    if config.format == 'json':
        writer.write_json(path, batch)
    else:
        rows = zip(
            range(batch.N),
            batch.t_samples.tolist(),
            batch.delta_samples.tolist(),
            batch.normalized_error_samples.tolist(),
        )
        writer.write_csv(path, SAMPLE_HEADER, rows)
    writer.write_metadata(path, _metadata(config, rho, batch.T))
    cli_logger.info(f"Sample batch of {batch.N} written to {path}")
    return ExitCode.SUCCESS


def run_cf(config: RunConfig):
    u = default_u_grid(config.u_min, config.u_max, config.u_step)
    scenario = config.scenario()
    law = default_law(scenario, config.law)
    rho = parse_rho_option(config.rho)
    batch = _batch(config, rho)

    emp = empirical_cf(batch.delta_samples, u, label=f"empirical(T={batch.T:.17g},N={batch.N})")
    analytic = np.asarray(law_cf(law, u), dtype=float)
    real = np.asarray(emp.values)
    imag = np.asarray(emp.imag_values)
    gap = np.hypot(real - analytic, imag)
    sup_gap = float(gap.max())

    writer = ResultWriter(fmt=config.format)
    path = writer.resolve(config.output, 'cf')
    if config.format == 'json':
        writer.write_json(path, {
            'law': law_label(law),
            'analytic': tabulate_law(law, 'cf', u_grid=u),
            'empirical': emp,
            'sup_gap': sup_gap,
            'tol': config.tol,
        })
    else:
        writer.write_csv(path, CF_HEADER, zip(u.tolist(), analytic.tolist(), real.tolist(),
                                              imag.tolist(), gap.tolist()))
    writer.write_metadata(path, _metadata(config, rho, batch.T))

    _summary(path, f"sup_gap={format_cell(sup_gap)} tol={format_cell(config.tol)} law={law_label(law)}")
    if sup_gap > config.tol:
        cli_logger.warning(f"CF sup gap {sup_gap:.4g} above tolerance {config.tol}")
        return ExitCode.FAILURE
    return ExitCode.SUCCESS


def run_law(config: RunConfig):
    law = build_law(config.law_name(), config.d, config.x0)
    pdf = tabulate_law(law, 'pdf', config.steps)
    cdf = tabulate_law(law, 'cdf', config.steps)

    writer = ResultWriter(fmt=config.format)
    path = writer.resolve(config.output, 'law')
    if config.format == 'json':
        u = default_u_grid(config.u_min, config.u_max, config.u_step)
        writer.write_json(path, {'pdf': pdf, 'cdf': cdf, 'cf': tabulate_law(law, 'cf', u_grid=u)})
    else:
        writer.write_csv(path, LAW_HEADER, zip(pdf.abscissae, pdf.values, cdf.values))
    return ExitCode.SUCCESS


def run_convergence(config: RunConfig):
    scenario = config.scenario()
    rho = parse_rho_option(config.rho)
    law = default_law(scenario, config.law)
    u = default_u_grid(config.u_min, config.u_max, config.u_step)
    reports = convergence_sweep(
        scenario, rho, config.T_grid, config.N, config.seed, law=law, u_grid=u,
        workers=config.workers, backend=config.backend,
    )

    writer = ResultWriter(fmt=config.format)
    path = writer.resolve(config.output, 'convergence')
    if config.format == 'json':
        writer.write_json(path, reports)
    else:
        writer.write_csv(path, CONVERGENCE_HEADER, (
            [r.T, r.N, r.seed, r.law, r.ks_delta, r.ks_error, r.cf_sup_gap, r.cf_imag_sup, r.mean, r.variance]
            for r in reports
        ))
    writer.write_metadata(path, _metadata(config, rho, list(config.T_grid)))

    trend = trend_is_non_increasing([r.ks_delta for r in reports], config.N)
    _summary(path, f"ks_delta_non_increasing={format_cell(trend)}")
    return ExitCode.SUCCESS


def run_verify(config: RunConfig):
    results = verify.run_suites(quick=config.quick)
    print(verify.format_table(results))
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"FAILED: {', '.join(failed)}")
        return ExitCode.FAILURE
    return ExitCode.SUCCESS


COMMANDS = {
    'count': run_count,
    'sample': run_sample,
    'cf': run_cf,
    'law': run_law,
    'convergence': run_convergence,
    'verify': run_verify,
}
