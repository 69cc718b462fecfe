"""
Oracle-equivalence and invariant suites behind `verify`.

Every suite calls through the module objects (``lattice.delta`` and so on)
so that a broken implementation is caught wherever it is patched in.
"""
import math
import time
from typing import List

import numpy as np
from pydantic import BaseModel, Field

from src.config.logging import cli_logger
from src.core import lattice
from src.core.schemas import BoxSpec
from src.laws import limit_laws, quadrature
from src.laws.schemas import LimitLawTheorem1, LimitLawTheorem2, SharedDilationLaw

VERIFY_SEED = 20240611
CF_TOL = 1e-6
MOMENT_TOL = 1e-8
AXIOM_TOL = 1e-12


class SuiteResult(BaseModel):
    name: str
    passed: bool
    detail: str = Field('', description="Counts or the first failure")
    seconds: float = 0.0


def suite_oracle(rng, per_dim):
    """Closed-form count against brute-force enumeration."""
    mismatches = 0
    first = ''
    for d in (1, 2, 3):
        for _ in range(per_dim):
            t = 15.0 * (1.0 - rng.random())
            a = float(rng.choice([0.5, 1.0, 2.0]))
            X = rng.uniform(-2.0, 2.0, d).tolist()
            box = BoxSpec(d=d, a=a)
            formula = lattice.count_points_formula(box, t, X)
            brute = lattice.count_points_bruteforce(box, t, X)
            if formula != brute:
                mismatches += 1
                first = first or f"d={d} a={a} t={t!r} X={X}: {formula} != {brute}"
    return mismatches == 0, first or f"{3 * per_dim} instances match"


def suite_range(rng, n):
    """delta_tilde(t, x) in (-1, 1]."""
    t = 100.0 * (1.0 - rng.random(n))
    x = rng.uniform(-5.0, 5.0, n)
    values = np.asarray(lattice.delta_tilde(t, x))
    bad = (values <= -1.0) | (values > 1.0)
    if np.any(bad):
        k = int(np.argmax(bad))
        return False, f"{int(bad.sum())} violations, first t={t[k]!r} x={x[k]!r} -> {values[k]!r}"
    return True, f"{n} draws in range"


def _gap(d, t, X):
    box = BoxSpec(d=d, a=1.0)
    return abs(lattice.normalized_error(box, t, X) - lattice.delta(box, t, X))


def suite_reduction(rng, n):
    """|R/t^(d-1) - Delta| under the envelope, and the sup gap shrinking with t."""
    for _ in range(n):
        d = int(rng.integers(1, 6))
        t = float(rng.uniform(1.0, 1000.0))
        X = rng.uniform(-2.0, 2.0, d).tolist()
        gap = _gap(d, t, X)
        bound = lattice.reduction_gap_bound(d, t)
        if gap > bound + 1e-9 * (1.0 + bound):
            return False, f"d={d} t={t!r} X={X}: gap {gap!r} > {bound!r}"

    sups = []
    for k in range(1, 5):
        gaps = [
            _gap(3, 10.0 ** k * (1.0 + 0.01 * rng.random()), rng.uniform(-0.5, 0.5, 3).tolist())
            for _ in range(max(50, n // 20))
        ]
        sups.append(max(gaps))
    if any(b >= a for a, b in zip(sups, sups[1:])):
        return False, f"sup gap not decreasing in t: {sups}"
    return True, f"{n} draws under the envelope; sup gaps {['%.3g' % s for s in sups]}"


def _laws():
    laws = [LimitLawTheorem1(d=d, y=y) for d in (1, 2, 3) for y in (0.0, 0.25, 0.5, 1.0)]
    laws += [LimitLawTheorem2(d=d) for d in (1, 2, 3)]
    laws += [SharedDilationLaw(d=d) for d in (1, 2, 3)]
    return laws


def suite_cf_axioms(rng, n):
    """phi(0) = 1, |phi| <= 1, phi(-u) = phi(u), moments, and the finite-horizon CF."""
    u = limit_laws.default_u_grid()
    for law in _laws():
        name = limit_laws.law_label(law)
        phi = np.asarray(limit_laws.law_cf(law, u))
        if abs(limit_laws.law_cf(law, 0.0) - 1.0) > AXIOM_TOL:
            return False, f"{name}: phi(0) != 1"
        if np.max(np.abs(phi)) > 1.0 + AXIOM_TOL:
            return False, f"{name}: |phi| > 1"
        if np.max(np.abs(phi - phi[::-1])) > AXIOM_TOL:
            return False, f"{name}: phi not even"
        mean, var = limit_laws.law_moments(law)
        qmean, qvar = quadrature.law_moments_numeric(law)
        if abs(mean - qmean) > MOMENT_TOL or abs(var - qvar) > MOMENT_TOL * max(1.0, var):
            return False, f"{name}: moments ({mean}, {var}) vs quadrature ({qmean}, {qvar})"

    for law in _laws()[:12]:
        direct = np.asarray(limit_laws.cf_delta_tilde_fixed_x(law.b * u, law.y))
        if np.max(np.abs(np.asarray(limit_laws.cf_theorem1(u, law)) - direct)) > AXIOM_TOL:
            return False, f"{limit_laws.law_label(law)}: cf is not cf_delta_tilde_fixed_x(b u, y)"

    for _ in range(n):
        x = float(rng.uniform(-2.0, 2.0))
        T = float(rng.uniform(0.5, 50.0))
        limit = np.asarray(limit_laws.cf_delta_tilde_fixed_x(u, lattice.gap_y(x)))
        finite = np.asarray(limit_laws.cf_delta_tilde_finite_horizon(u, x, T))
        if np.max(np.abs(finite - limit)) > 2.0 / T + AXIOM_TOL:
            return False, f"finite-horizon CF off by more than 2/T at x={x!r} T={T!r}"
        whole = np.asarray(limit_laws.cf_delta_tilde_finite_horizon(u, x, float(math.ceil(T))))
        if np.max(np.abs(whole - limit)) > 1e-10:
            return False, f"finite-horizon CF differs from the limit at integer T={math.ceil(T)}"
    return True, f"{len(_laws())} laws, {n} finite-horizon draws"


def suite_density_cf(step):
    """Quadrature CF of each derived density against the analytic CF on [-50, 50]."""
    u = np.round(np.arange(-50.0, 50.0 + step / 2, step), 10)
    worst = 0.0
    for law in _laws():
        numeric = quadrature.cf_numeric_from_density(law, u)
        gap = float(np.max(np.abs(numeric - np.asarray(limit_laws.law_cf(law, u)))))
        worst = max(worst, gap)
        if gap > CF_TOL:
            return False, f"{limit_laws.law_label(law)}: sup gap {gap:.3g} > {CF_TOL}"
    return True, f"sup gap {worst:.3g} over {len(_laws())} laws"


def run_suites(quick=False):
    rng = np.random.default_rng(VERIFY_SEED)
    if quick:
        plan = [
            ('oracle', lambda: suite_oracle(rng, 100)),
            ('range', lambda: suite_range(rng, 10 ** 5)),
            ('reduction', lambda: suite_reduction(rng, 1000)),
            ('cf_axioms', lambda: suite_cf_axioms(rng, 20)),
            ('density_cf', lambda: suite_density_cf(1.0)),
        ]
    else:
        plan = [
            ('oracle', lambda: suite_oracle(rng, 1000)),
            ('range', lambda: suite_range(rng, 10 ** 6)),
            ('reduction', lambda: suite_reduction(rng, 10 ** 4)),
            ('cf_axioms', lambda: suite_cf_axioms(rng, 200)),
            ('density_cf', lambda: suite_density_cf(0.1)),
        ]

    results: List[SuiteResult] = []
    for name, suite in plan:
        start = time.time()
        try:
            passed, detail = suite()
        except Exception as e:
            cli_logger.error(f"Suite {name} raised: {e}", exc_info=True)
            passed, detail = False, f"raised {type(e).__name__}: {e}"
        results.append(SuiteResult(name=name, passed=passed, detail=detail,
                                   seconds=round(time.time() - start, 3)))
        cli_logger.info(f"Suite {name}: {'pass' if passed else 'FAIL'} ({detail})")
    return results


def format_table(results):
    width = max(len(r.name) for r in results)
    lines = [f"{'suite':<{width}}  status  seconds  detail"]
    for r in results:
        lines.append(f"{r.name:<{width}}  {'pass' if r.passed else 'FAIL':<6}  {r.seconds:>7.3f}  {r.detail}")
    return '\n'.join(lines)
