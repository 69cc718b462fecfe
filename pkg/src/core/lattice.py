"""
Exact counting of Z^d points in the dilated, translated cube tC(a) + X.

Scalar operations take a BoxSpec, a dilation t and a Translation (or any
sequence of d floats). The ``*_array`` helpers are the vectorised a = 1 forms
used by the sampler: they take t of shape (n,) and X of shape (n, d).
"""
import math
from functools import reduce

import numpy as np

from src.config import settings
from src.config.logging import lattice_logger
from src.core.schemas import BoxSpec, LatticeCountResult, Translation
from src.utils.errors import ArgumentError, DomainError, ResourceError

# Largest binary64 value below 1
_ONE_MINUS = float(np.nextafter(1.0, 0.0))


def _finite(x, name):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        lattice_logger.error(f"Non-finite input for {name}: {x!r}")
        raise DomainError(f"{name} must be finite")
    return arr


def _unwrap(value, like):
    if np.ndim(like) == 0:
        return float(value)
    return value


def _check_t(t):
    if not math.isfinite(t) or t <= 0:
        lattice_logger.error(f"Invalid dilation t={t!r}")
        raise DomainError(f"t must be a positive finite real, got {t!r}")
    return float(t)


def _coords(box, X):
    coords = list(X.coords) if isinstance(X, Translation) else [float(v) for v in X]
    if len(coords) != box.d:
        lattice_logger.error(f"Translation has {len(coords)} coordinates but d={box.d}")
        raise ArgumentError(
            f"translation length {len(coords)} does not match dimension d={box.d}"
        )
    _finite(coords, 'X')
    return coords


def fractional_part(x):
    """{x} = x - floor(x), in [0, 1) for every finite real (negatives included)."""
    arr = _finite(x, 'x')
    frac = arr - np.floor(arr)
    # x - floor(x) rounds up to 1.0 for tiny negative x
    frac = np.where(frac >= 1.0, _ONE_MINUS, frac)
    return _unwrap(frac, x)


def gap_y(x):
    """Spacing y = |1 - 2{x}| between the two boundary-crossing time grids."""
    return _unwrap(np.abs(1.0 - 2.0 * np.asarray(fractional_part(x))), x)


def _axis_factor(ta, x):
    return math.floor(ta + x) - math.ceil(-ta + x) + 1


def count_points_formula(box: BoxSpec, t, X):
    """N(tC(a)+X) as the product of per-axis integer counts, with t rescaled to a*t."""
    t = _check_t(t)
    coords = _coords(box, X)
    ta = box.a * t
    count = 1
    for x in coords:
        # an axis interval shorter than 1 may hold no integer
        count *= max(0, _axis_factor(ta, x))
    return count


def count_points_bruteforce(box: BoxSpec, t, X, budget=None):
    """
    Count integer points by enumerating every candidate tuple of the bounding box.

    Independent of the closed form: each candidate n is tested with |n_i - x_i| <= a*t.

    Raises:
        ResourceError: if (2at+1)^d exceeds the enumeration budget
    """
    t = _check_t(t)
    coords = _coords(box, X)
    budget = settings.BRUTEFORCE_BUDGET if budget is None else budget
    ta = box.a * t

    if (2.0 * ta + 1.0) ** box.d > budget:
        lattice_logger.error(
            f"Brute-force enumeration of (2at+1)^d={(2.0 * ta + 1.0) ** box.d:.3g} "
            f"points exceeds budget {budget:.3g}"
        )
        raise ResourceError(f"enumeration exceeds budget of {budget} candidates")

    hits = []
    for x in coords:
        candidates = np.arange(math.floor(x - ta) - 1, math.ceil(x + ta) + 2, dtype=float)
        hits.append(np.abs(candidates - x) <= ta)

    # broadcast to the full candidate grid, one cell per integer tuple
    grid = reduce(np.logical_and, np.ix_(*hits))
    return int(np.count_nonzero(grid))


def volume(box: BoxSpec, t):
    return (2.0 * box.a * _check_t(t)) ** box.d


def error_term(box: BoxSpec, t, X):
    """R = N - (2at)^d."""
    return count_points_formula(box, t, X) - volume(box, t)


def normalized_error(box: BoxSpec, t, X):
    """R / t^(d-1)."""
    t = _check_t(t)
    return error_term(box, t, X) / t ** (box.d - 1)


def normalized_error_telescoped(box: BoxSpec, t, X):
    """
    R / t^(d-1) through the telescoped sum over axes.

    With t' = a*t and L_j the per-axis counts,
    R / t'^(d-1) = sum_i 2^(i-1) delta_tilde(t', x_i) prod_{j>i} L_j / t'.
    Avoids the cancellation in N - (2at)^d for large t.
    """
    t = _check_t(t)
    coords = _coords(box, X)
    ta = box.a * t
    total = 0.0
    tail = 1.0
    # walk from the last axis so the tail product is available at each step
    for i in range(box.d - 1, -1, -1):
        factor = max(0, _axis_factor(ta, coords[i]))
        total += 2.0 ** i * (factor - 2.0 * ta) * tail
        tail *= factor / ta
    return total * box.a ** (box.d - 1)


def delta_tilde(t, x):
    """Per-axis discrepancy floor(t+x) - ceil(-t+x) + 1 - 2t, valued in (-1, 1]."""
    t_arr = _finite(t, 't')
    x_arr = _finite(x, 'x')
    if np.any(t_arr <= 0):
        lattice_logger.error(f"Invalid dilation t={t!r}")
        raise DomainError("t must be positive")
    value = np.floor(t_arr + x_arr) - np.ceil(-t_arr + x_arr) + 1.0 - 2.0 * t_arr
    if np.ndim(t) == 0 and np.ndim(x) == 0:
        return float(value)
    return value


def delta(box: BoxSpec, t, X):
    """Delta(t,X) = 2^(d-1) * sum_i delta_tilde(t, x_i); defined for a = 1 only."""
    if box.a != 1:
        lattice_logger.error(f"delta requested for a={box.a}")
        raise ArgumentError(
            f"delta is defined for a = 1; rescale the dilation to t' = a*t = {box.a}*t "
            f"and use BoxSpec(d={box.d}, a=1)"
        )
    t = _check_t(t)
    coords = _coords(box, X)
    return 2.0 ** (box.d - 1) * sum(delta_tilde(t, x) for x in coords)


def reduction_gap_bound(d, t):
    """
    Envelope for |R/t^(d-1) - Delta(t,X)|, uniform in X:

        sum_{i=1}^{d-1} 2^(i-1) [(2t+1)^(d-i) - (2t-1)^(d-i)] / t^(d-i)

    Accepts scalar or array t; requires t >= 1/2.
    """
    t_arr = _finite(t, 't')
    if d < 1:
        raise ArgumentError(f"d must be a positive integer, got {d}")
    if np.any(t_arr < 0.5):
        lattice_logger.error(f"reduction_gap_bound needs t >= 1/2, got {t!r}")
        raise DomainError("reduction_gap_bound requires t >= 1/2")

    inv = 1.0 / t_arr
    bound = np.zeros_like(t_arr)
    for i in range(1, d):
        k = d - i
        # [(2t+1)^k - (2t-1)^k] / t^k written without the large powers
        bound = bound + 2.0 ** (i - 1) * ((2.0 + inv) ** k - (2.0 - inv) ** k)
    return _unwrap(bound, t)


def is_boundary_degenerate(box: BoxSpec, t, X, tol=None):
    """True when some a*t +/- x_i lies within tol of an integer."""
    tol = settings.BOUNDARY_TOLERANCE if tol is None else tol
    t = _check_t(t)
    coords = np.asarray(_coords(box, X))
    ta = box.a * t
    ends = np.concatenate([ta + coords, -ta + coords])
    return bool(np.any(np.abs(ends - np.round(ends)) < tol))


def count_result(box: BoxSpec, t, X):
    """Assemble every counting statistic for (box, t, X) into one LatticeCountResult."""
    t = _check_t(t)
    coords = _coords(box, X)
    count = count_points_formula(box, t, coords)
    vol = volume(box, t)
    err = count - vol

    delta_value = None
    per_axis = None
    if box.a == 1:
        per_axis = [delta_tilde(t, x) for x in coords]
        delta_value = 2.0 ** (box.d - 1) * sum(per_axis)

    degenerate = is_boundary_degenerate(box, t, coords)
    if degenerate:
        lattice_logger.info(f"Boundary-degenerate input d={box.d} a={box.a} t={t} X={coords}")

    return LatticeCountResult(
        d=box.d,
        a=box.a,
        t=t,
        coords=coords,
        count=count,
        volume=vol,
        error=err,
        normalized_error=err / t ** (box.d - 1),
        delta=delta_value,
        per_axis_delta_tilde=per_axis,
        boundary_degenerate=degenerate,
    )


def axis_counts_array(t, X):
    """Per-axis integer counts floor(t+x) - ceil(-t+x) + 1 for a = 1, shape (n, d)."""
    t = np.asarray(t, dtype=float)[:, None]
    X = np.asarray(X, dtype=float)
    return np.floor(t + X) - np.ceil(-t + X) + 1.0


def delta_tilde_array(t, X):
    """Vectorised delta_tilde for a = 1: t shape (n,), X shape (n, d) -> (n, d)."""
    t = np.asarray(t, dtype=float)
    return axis_counts_array(t, X) - 2.0 * t[:, None]


def delta_array(t, X):
    """Vectorised Delta(t, X) for a = 1."""
    X = np.asarray(X, dtype=float)
    return 2.0 ** (X.shape[1] - 1) * delta_tilde_array(t, X).sum(axis=1)


def normalized_error_array(t, X):
    """Vectorised R/t^(d-1) for a = 1, through the telescoped sum."""
    t = np.asarray(t, dtype=float)
    counts = axis_counts_array(t, X)
    dt = counts - 2.0 * t[:, None]
    d = dt.shape[1]
    total = np.zeros_like(t)
    tail = np.ones_like(t)
    for i in range(d - 1, -1, -1):
        total += 2.0 ** i * dt[:, i] * tail
        tail *= counts[:, i] / t
    return total
