"""Numeric back-checks of the analytic densities: CF by quadrature and moments."""
import math

import numpy as np
from scipy import integrate

from src.config import settings
from src.config.logging import laws_logger
from src.laws.limit_laws import gauss_legendre_rule, law_pdf
from src.utils.errors import NumericError


def _pieces(law):
    points = sorted(set(law.breakpoints))
    lo, hi = law.support
    points = [p for p in points if lo <= p <= hi]
    return [(a, b) for a, b in zip(points, points[1:]) if b > a]


def _cos_transform(law, u, panel_factor):
    u_max = float(np.max(np.abs(u))) if u.size else 0.0
    total = np.zeros_like(u)
    for a, b in _pieces(law):
        # keep u*h <= 2 so each panel holds well under one oscillation
        panels = max(1, math.ceil(u_max * (b - a) / 2.0)) * panel_factor
        nodes, weights = gauss_legendre_rule(a, b, panels)
        dens = np.asarray(law_pdf(law, nodes))
        total += np.cos(np.outer(u, nodes)) @ (weights * dens)
    return total


def cf_numeric_from_density(law, u, tol=None):
    """
    Integral of cos(uz) f(z) over the support of the law's density.

    Each smooth piece between breakpoints gets composite Gauss-Legendre; the
    result is recomputed with twice the panels and the difference is the error
    estimate.

    Raises:
        NumericError: if the estimated error exceeds tol
    """
    tol = settings.QUAD_TOLERANCE * 100 if tol is None else tol
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    coarse = _cos_transform(law, u_arr, 1)
    fine = _cos_transform(law, u_arr, 2)
    err = float(np.max(np.abs(fine - coarse))) if u_arr.size else 0.0
    if err > tol:
        laws_logger.error(f"CF quadrature for {law.name} did not converge: error {err:.3g} > {tol:.3g}")
        raise NumericError(f"CF quadrature error estimate {err:.3g} exceeds tolerance {tol:.3g}")
    laws_logger.debug(f"CF quadrature for {law.name} over {u_arr.size} points, error {err:.3g}")
    return float(fine[0]) if np.ndim(u) == 0 else fine


def law_moments_numeric(law):
    """(mean, variance) from scipy quad of z f(z) and z^2 f(z), split at the breakpoints."""
    mean = 0.0
    second = 0.0
    for a, b in _pieces(law):
        m1, e1 = integrate.quad(lambda z: z * law_pdf(law, z), a, b,
                                limit=settings.QUAD_LIMIT, epsabs=settings.QUAD_TOLERANCE)
        m2, e2 = integrate.quad(lambda z: z * z * law_pdf(law, z), a, b,
                                limit=settings.QUAD_LIMIT, epsabs=settings.QUAD_TOLERANCE)
        if max(e1, e2) > 1e3 * settings.QUAD_TOLERANCE:
            raise NumericError(f"moment quadrature error {max(e1, e2):.3g} on [{a}, {b}]")
        mean += m1
        second += m2
    return mean, second - mean * mean
