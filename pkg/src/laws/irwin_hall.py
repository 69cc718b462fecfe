"""Irwin-Hall law: sum of n independent Uniform[0, 1] variables."""
import math

import numpy as np


def _terms(x, n, power):
    # alternating inclusion-exclusion terms, summed along the last (contiguous) axis
    k = np.arange(n + 1)
    signs = np.where(k % 2 == 0, 1.0, -1.0)
    binom = np.array([math.comb(n, j) for j in k], dtype=float)
    diff = np.clip(x[..., None] - k, 0.0, None)
    return (signs * binom * diff ** power).sum(axis=-1)


def irwin_hall_pdf(x, n):
    """Density of the Irwin-Hall law, evaluated on the lower half by symmetry."""
    x = np.asarray(x, dtype=float)
    if n == 1:
        pdf = np.where((x >= 0) & (x <= 1), 1.0, 0.0)
    else:
        half = np.minimum(x, n - x)
        pdf = _terms(half, n, n - 1) / math.factorial(n - 1)
        pdf = np.where((x < 0) | (x > n), 0.0, np.clip(pdf, 0.0, None))
    return float(pdf) if pdf.ndim == 0 else pdf


def irwin_hall_cdf(x, n):
    """Distribution function of the Irwin-Hall law; F(x) = 1 - F(n - x)."""
    x = np.asarray(x, dtype=float)
    half = np.clip(np.minimum(x, n - x), 0.0, n / 2.0)
    lower = np.clip(_terms(half, n, n) / math.factorial(n), 0.0, 0.5)
    cdf = np.where(x <= n / 2.0, lower, 1.0 - lower)
    cdf = np.where(x <= 0, 0.0, np.where(x >= n, 1.0, cdf))
    return float(cdf) if cdf.ndim == 0 else cdf
