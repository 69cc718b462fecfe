"""Draw dilations t from (1/T) rho(t/T) dt."""
import csv
import math

import numpy as np
from pydantic import ValidationError

from src.config.logging import sampling_logger
from src.sampling.schemas import RhoKind, RhoSpec
from src.utils.errors import ConfigError, DomainError


def _check_T(T):
    if not math.isfinite(T) or T <= 0:
        sampling_logger.error(f"Invalid horizon T={T!r}")
        raise DomainError(f"T must be a positive finite real, got {T!r}")


def _inverse_cdf(rho: RhoSpec, p):
    """Exact inverse of the piecewise-quadratic CDF of a piecewise-linear density."""
    knots = np.asarray(rho.knots, dtype=float)
    dens = np.asarray(rho.values, dtype=float)
    widths = np.diff(knots)
    masses = 0.5 * (dens[:-1] + dens[1:]) * widths
    total = masses.sum()
    if total <= 0:
        raise ConfigError("tabulated rho has zero mass")
    dens = dens / total
    cum = np.concatenate([[0.0], np.cumsum(masses / total)])
    cum[-1] = 1.0

    # zero-mass segments are skipped by taking the right-most segment start <= p
    j = np.clip(np.searchsorted(cum, p, side='right') - 1, 0, len(knots) - 2)
    q = np.clip(p - cum[j], 0.0, None)
    v = dens[j]
    slope = (dens[j + 1] - dens[j]) / widths[j]
    # root of v*s + slope*s^2/2 = q in the form that stays stable when slope ~ 0
    root = v + np.sqrt(np.clip(v * v + 2.0 * slope * q, 0.0, None))
    step = np.where(root > 0, 2.0 * q / np.where(root > 0, root, 1.0), 0.0)
    return knots[j] + np.minimum(step, widths[j])


def sample_ts(T, rho: RhoSpec, rng: np.random.Generator, size):
    """`size` dilations in (0, T]; consumes exactly `size` uniforms from rng."""
    _check_T(T)
    # 1 - U lies in (0, 1], so t never hits 0
    p = 1.0 - rng.random(size)
    if rho.kind == RhoKind.UNIFORM01:
        return T * p
    return T * _inverse_cdf(rho, p)


def sample_t(T, rho: RhoSpec, rng: np.random.Generator):
    return float(sample_ts(T, rho, rng, 1)[0])


def load_rho_csv(path):
    """
    Read a two-column (knot, value) CSV with a header row into a tabulated RhoSpec.

    Raises:
        ConfigError: if the file is unreadable or the table is invalid
    """
    try:
        with open(path, newline='') as f:
            rows = list(csv.reader(f))
    except OSError as e:
        sampling_logger.error(f"Cannot read rho table {path}: {e}")
        raise ConfigError(f"cannot read rho table {path}: {e}") from e

    knots, values = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise ConfigError(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
        try:
            knots.append(float(row[0]))
            values.append(float(row[1]))
        except ValueError as e:
            raise ConfigError(f"{path}:{lineno}: {e}") from e

    try:
        return RhoSpec.tabulated(knots, values)
    except ValidationError as e:
        sampling_logger.error(f"Invalid rho table {path}: {e}")
        raise ConfigError(f"invalid rho table {path}: {e}") from e


def parse_rho_option(value):
    """`uniform` (default) or a path to a rho CSV."""
    if value is None or value in ('uniform', 'uniform01'):
        return RhoSpec.uniform()
    return load_rho_csv(value)
