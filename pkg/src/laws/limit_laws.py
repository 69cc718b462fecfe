"""
Analytic limit laws of Delta(t, X) when t is spread over [0, T] and T -> infinity.

Characteristic functions are the primary objects. Densities and distribution
functions are derived from them (uniform mixtures, scaled Irwin-Hall, and the
binomial-uniform mixture of the shared-dilation law) and are checked against
the CFs by quadrature in ``src.laws.quadrature``.
"""
import math

import numpy as np
from scipy import special

from src.config import settings
from src.config.logging import laws_logger
from src.core.lattice import delta_tilde, fractional_part, gap_y
from src.laws.irwin_hall import irwin_hall_cdf, irwin_hall_pdf
from src.laws.schemas import (
    CurveTable,
    LimitLawTheorem1,
    LimitLawTheorem2,
    SharedDilationLaw,
)
from src.utils.errors import ArgumentError, DomainError, ResourceError


def _real(x, name):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        laws_logger.error(f"Non-finite input for {name}: {x!r}")
        raise DomainError(f"{name} must be finite")
    return arr


def _unwrap(value, like):
    return float(value) if np.ndim(like) == 0 else value


def sinc(v):
    """sin(v)/v with sinc(0) = 1; 4th-order Taylor polynomial below the series threshold."""
    w = np.asarray(v, dtype=float)
    small = np.abs(w) < settings.SERIES_THRESHOLD
    safe = np.where(small, 1.0, w)
    series = 1.0 - w * w / 6.0 + w ** 4 / 120.0
    return _unwrap(np.where(small, series, np.sin(safe) / safe), v)


def cf_delta_tilde_fixed_x(u, y):
    """(sin(uy) + sin(u(1-y))) / u, the limit CF of delta_tilde(t, x) with y = |1 - 2{x}|."""
    u_arr = _real(u, 'u')
    y = float(_real(y, 'y'))
    if not 0.0 <= y <= 1.0:
        laws_logger.error(f"Gap parameter outside [0, 1]: y={y}")
        raise DomainError(f"y must lie in [0, 1], got {y}")
    # sin(uy)/u = y * sinc(uy)
    value = y * sinc(u_arr * y) + (1.0 - y) * sinc(u_arr * (1.0 - y))
    return _unwrap(value, u)


def cf_theorem1(u, law: LimitLawTheorem1):
    u_arr = _real(u, 'u')
    return _unwrap(np.asarray(cf_delta_tilde_fixed_x(law.b * u_arr, law.y)), u)


def cf_delta_tilde_uniform(u):
    """2(1 - cos u) / u^2, written as sinc(u/2)^2 to stay accurate near 0."""
    u_arr = _real(u, 'u')
    return _unwrap(sinc(u_arr / 2.0) ** 2, u)


def cf_theorem2(u, law: LimitLawTheorem2):
    """Product form [cf_delta_tilde_uniform(2^(d-1) u)]^d."""
    u_arr = _real(u, 'u')
    return _unwrap(np.asarray(cf_delta_tilde_uniform(law.s * u_arr)) ** law.d, u)


GAUSS_NODES = 16
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(GAUSS_NODES)
MAX_PANELS = 1 << 16
# complex cells per evaluation block of cf_shared_dilation
_CF_CELLS = 1 << 21


def gauss_legendre_rule(a, b, panels):
    """Nodes and weights of composite Gauss-Legendre with `panels` equal panels on [a, b]."""
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * _GL_NODES).ravel()
    weights = (half[:, None] * _GL_WEIGHTS).ravel()
    return nodes, weights


def cf_shared_dilation(u, law: SharedDilationLaw):
    """
    Integral over f in [0, 1) of Re[((1-f) e^{-ivf} + f e^{iv(1-f)})^d], v = 2^(d-1) u.

    The integrand is a degree-d polynomial in f times a phase of frequency at
    most d|v|, so composite Gauss-Legendre with d|v| h <= 2 is exact to rounding.

    Raises:
        ResourceError: if |v| is so large that the panel count exceeds MAX_PANELS
    """
    u_arr = _real(u, 'u')
    v = law.s * np.atleast_1d(u_arr).ravel()
    d = law.d
    panels = max(1, math.ceil(d * float(np.max(np.abs(v))) / 2.0)) if v.size else 1
    if panels > MAX_PANELS:
        laws_logger.error(f"Shared-dilation CF needs {panels} panels for d={d}, max |u|={np.max(np.abs(u_arr))}")
        raise ResourceError(f"u too large for the shared-dilation CF at d={d}")
    f, w = gauss_legendre_rule(0.0, 1.0, panels)
    rows = max(1, _CF_CELLS // f.size)

    values = np.empty_like(v)
    for lo in range(0, v.size, rows):
        block = v[lo:lo + rows, None]
        z = (1.0 - f) * np.exp(-1j * block * f) + f * np.exp(1j * block * (1.0 - f))
        values[lo:lo + rows] = (z ** d).real @ w
    return _unwrap(values[0], u) if np.ndim(u) == 0 else values.reshape(np.shape(u_arr))


def density_theorem1(z, law: LimitLawTheorem1):
    """(1/(2b)) * (1{|z| <= by} + 1{|z| <= b(1-y)}); a zero-width component carries no mass."""
    z_arr = _real(z, 'z')
    inner = law.b * law.y
    outer = law.b * (1.0 - law.y)
    dens = ((np.abs(z_arr) <= inner) & (inner > 0)).astype(float)
    dens += ((np.abs(z_arr) <= outer) & (outer > 0)).astype(float)
    return _unwrap(dens / (2.0 * law.b), z)


def cdf_theorem1(z, law: LimitLawTheorem1):
    z_arr = _real(z, 'z')
    inner = law.b * law.y
    outer = law.b * (1.0 - law.y)
    cdf = 0.5 + (np.clip(z_arr, -inner, inner) + np.clip(z_arr, -outer, outer)) / (2.0 * law.b)
    return _unwrap(np.clip(cdf, 0.0, 1.0), z)


def density_theorem2(z, law: LimitLawTheorem2):
    """(1/s) * f_IH(z/s + d; 2d)."""
    z_arr = _real(z, 'z')
    return _unwrap(np.asarray(irwin_hall_pdf(z_arr / law.s + law.d, law.n)) / law.s, z)


def cdf_theorem2(z, law: LimitLawTheorem2):
    z_arr = _real(z, 'z')
    return _unwrap(np.asarray(irwin_hall_cdf(z_arr / law.s + law.d, law.n)), z)


def density_shared_dilation(z, law: SharedDilationLaw):
    """
    (1/(s d)) * sum_k C(d,k) f_k^k (1-f_k)^(d-k) over 0 < f_k <= 1, f_k = (k - z/s)/d.

    Keeping f_k = 1 makes the value right-continuous where a term switches on.
    """
    z_arr = _real(z, 'z')
    w = np.asarray(z_arr / law.s)[..., None]
    k = np.arange(law.d + 1)
    f = (k - w) / law.d
    inside = (f > 0.0) & (f <= 1.0)
    binom = np.array([math.comb(law.d, j) for j in k], dtype=float)
    fc = np.clip(f, 0.0, 1.0)
    terms = np.where(inside, binom * fc ** k * (1.0 - fc) ** (law.d - k), 0.0)
    return _unwrap(terms.sum(axis=-1) / (law.s * law.d), z)


def cdf_shared_dilation(z, law: SharedDilationLaw):
    """(1/(d+1)) * sum_k [1 - I_{f_k}(k+1, d-k+1)] with the regularised incomplete beta."""
    z_arr = _real(z, 'z')
    w = np.asarray(z_arr / law.s)[..., None]
    k = np.arange(law.d + 1)
    f = np.clip((k - w) / law.d, 0.0, 1.0)
    cdf = (1.0 - special.betainc(k + 1, law.d - k + 1, f)).sum(axis=-1) / (law.d + 1)
    return _unwrap(np.clip(cdf, 0.0, 1.0), z)


_CF = {
    'theorem1': cf_theorem1,
    'theorem2': cf_theorem2,
    'shared': cf_shared_dilation,
}
_PDF = {
    'theorem1': density_theorem1,
    'theorem2': density_theorem2,
    'shared': density_shared_dilation,
}
_CDF = {
    'theorem1': cdf_theorem1,
    'theorem2': cdf_theorem2,
    'shared': cdf_shared_dilation,
}


def law_cf(law, u):
    return _CF[law.name](u, law)


def law_pdf(law, z):
    return _PDF[law.name](z, law)


def law_cdf(law, z):
    return _CDF[law.name](z, law)


def law_moments(law):
    """Closed-form (mean, variance); every law here is symmetric about 0."""
    if law.name == 'theorem1':
        return 0.0, law.b ** 2 * (law.y ** 3 + (1.0 - law.y) ** 3) / 3.0
    if law.name in ('theorem2', 'shared'):
        return 0.0, law.d * 4.0 ** (law.d - 1) / 6.0
    raise ArgumentError(f"unknown law {law.name!r}")


def law_label(law):
    if law.name == 'theorem1':
        return f"theorem1(d={law.d},y={law.y:.17g})"
    return f"{law.name}(d={law.d})"


def law_for_diagonal(d, x0):
    """theorem1 law for X = (x0, ..., x0)."""
    return LimitLawTheorem1(d=d, y=gap_y(x0))


def build_law(name, d, x0=None):
    """Construct a law by name; 'theorem1' needs the diagonal coordinate x0."""
    if name == 'theorem1':
        if x0 is None:
            raise ArgumentError("theorem1 law needs x0")
        return law_for_diagonal(d, x0)
    if name == 'theorem2':
        return LimitLawTheorem2(d=d)
    if name == 'shared':
        return SharedDilationLaw(d=d)
    raise ArgumentError(f"unknown law {name!r}; expected theorem1, theorem2 or shared")


def tabulate_law(law, kind, steps=None, u_grid=None):
    """CurveTable of the law's pdf or cdf over its support, or of its CF over u_grid."""
    if kind == 'cf':
        if u_grid is None:
            u_grid = default_u_grid()
        abscissae = np.asarray(u_grid, dtype=float)
        values = np.asarray(law_cf(law, abscissae))
    else:
        steps = settings.LAW_TABLE_STEPS if steps is None else steps
        if steps < 2:
            raise ArgumentError(f"steps must be at least 2, got {steps}")
        lo, hi = law.support
        abscissae = np.linspace(lo, hi, steps)
        values = np.asarray(law_pdf(law, abscissae) if kind == 'pdf' else law_cdf(law, abscissae))
        if kind == 'cdf':
            # the curve is monotone; remove last-ulp wiggles from the alternating sums
            values = np.maximum.accumulate(values)
    return CurveTable(
        abscissae=abscissae.tolist(),
        values=values.tolist(),
        kind=kind,
        label=law_label(law),
    )


def default_u_grid(u_min=None, u_max=None, step=None):
    """Evenly spaced u grid from u_min to u_max inclusive."""
    u_min = settings.CF_GRID_MIN if u_min is None else u_min
    u_max = settings.CF_GRID_MAX if u_max is None else u_max
    step = settings.CF_GRID_STEP if step is None else step
    if step <= 0 or u_max < u_min:
        raise ArgumentError(f"empty u grid: min={u_min}, max={u_max}, step={step}")
    count = int(math.floor((u_max - u_min) / step + 1e-9)) + 1
    return u_min + step * np.arange(count)


def cf_delta_tilde_finite_horizon(u, x, T):
    """
    Exact CF of delta_tilde(t, x) when t is uniform on [0, T].

    delta_tilde(., x) has period 1 in t, so [0, T] splits into floor(T) full
    periods, each contributing the limit CF, and a remainder [0, r) that is
    integrated exactly on the linear pieces of delta_tilde (slope -2).
    Returns a complex value (array for array u).
    """
    u_arr = _real(u, 'u')
    x = float(_real(x, 'x'))
    T = float(_real(T, 'T'))
    if T <= 0:
        raise DomainError(f"T must be positive, got {T}")

    periods = math.floor(T)
    r = T - periods
    limit = np.asarray(cf_delta_tilde_fixed_x(u_arr, gap_y(x)), dtype=complex)

    # crossings of t + x and -t + x through the integers inside (0, r)
    cuts = {0.0, r}
    for c in (fractional_part(-x), fractional_part(x)):
        if 0.0 < c < r:
            cuts.add(c)
    cuts = sorted(cuts)

    partial = np.zeros_like(limit)
    for a, b in zip(cuts, cuts[1:]):
        if b <= a:
            continue
        mid = 0.5 * (a + b)
        level = delta_tilde(mid, x) + 2.0 * mid  # integer count, constant on the piece
        # integral of exp(iu(level - 2t)) over [a, b]
        partial += np.exp(1j * u_arr * (level - a - b)) * (b - a) * sinc(u_arr * (b - a))

    value = (periods * limit + partial) / T
    return complex(value) if np.ndim(u) == 0 else value
