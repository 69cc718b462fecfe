import math

import numpy as np
import pytest

from src.laws.limit_laws import cdf_theorem1, law_cdf
from src.laws.schemas import LimitLawTheorem1, LimitLawTheorem2, SharedDilationLaw
from src.sampling.analysis import (
    check_law_matches,
    compare_batch,
    convergence_sweep,
    default_law,
    empirical_cf,
    ks_distance,
    trend_is_non_increasing,
)
from src.sampling.engine import generate_batch
from src.sampling.schemas import RhoSpec, Scenario
from src.utils.errors import ArgumentError

UNIT_UNIFORM = LimitLawTheorem1(d=1, y=1.0)


def uniform_cdf(z):
    return cdf_theorem1(z, UNIT_UNIFORM)


def test_ks_distance_examples():
    assert ks_distance(np.zeros(10), uniform_cdf) == pytest.approx(0.5)
    assert ks_distance([-0.5, 0.5], uniform_cdf) == pytest.approx(0.25)
    assert ks_distance([5.0], uniform_cdf) == pytest.approx(1.0)


def test_ks_distance_of_reference_draws(seed_policy):
    n = 10 ** 5

    def check(seed):
        z = np.random.default_rng(seed).uniform(-1.0, 1.0, n)
        return ks_distance(z, uniform_cdf) <= 1.5 * 1.36 / math.sqrt(n)

    assert seed_policy(check, 2024)


def test_ks_distance_rejects_empty_samples():
    with pytest.raises(ArgumentError):
        ks_distance([], uniform_cdf)


def test_empirical_cf_examples():
    table = empirical_cf([-1.0, 1.0], [math.pi])
    assert table.values[0] == pytest.approx(-1.0)
    assert table.imag_values[0] == pytest.approx(0.0, abs=1e-15)
    single = empirical_cf([0.0], [-3.0, 0.0, 7.5])
    assert single.values == [1.0, 1.0, 1.0]
    assert single.kind == 'cf'


def test_empirical_cf_of_uniform_draws():
    z = np.random.default_rng(99).uniform(-1.0, 1.0, 10 ** 5)
    table = empirical_cf(z, np.linspace(-20.0, 20.0, 161))
    assert table.values[84] == pytest.approx(math.sin(1.0), abs=0.01)  # u = 1
    assert max(abs(v) for v in table.imag_values) <= 4.0 / math.sqrt(10 ** 5)


def test_empirical_cf_errors():
    with pytest.raises(ArgumentError):
        empirical_cf([], [1.0])
    with pytest.raises(ArgumentError):
        empirical_cf([0.0], [])


def test_default_law():
    assert default_law(Scenario(case='diagonal', d=2, x0=0.25)) == LimitLawTheorem1(d=2, y=0.5)
    assert default_law(Scenario(case='iid_uniform', d=3)) == LimitLawTheorem2(d=3)
    assert default_law(Scenario(case='iid_uniform', d=3), 'shared') == SharedDilationLaw(d=3)


def test_check_law_matches():
    diagonal = Scenario(case='diagonal', d=2, x0=0.25)
    check_law_matches(diagonal, LimitLawTheorem1(d=2, y=0.5))
    with pytest.raises(ArgumentError):
        check_law_matches(diagonal, LimitLawTheorem1(d=2, y=0.4))
    with pytest.raises(ArgumentError):
        check_law_matches(diagonal, LimitLawTheorem2(d=2))
    with pytest.raises(ArgumentError):
        check_law_matches(Scenario(case='iid_uniform', d=2), LimitLawTheorem1(d=2, y=0.5))


def test_compare_batch_report():
    scenario = Scenario(case='diagonal', d=1, x0=0.0)
    batch = generate_batch(scenario, 1000.0, 20000, RhoSpec.uniform(), seed=42)
    report = compare_batch(batch, UNIT_UNIFORM)
    assert report.law == "theorem1(d=1,y=1)"
    assert report.N == 20000 and report.seed == 42
    assert report.ks_delta <= 0.03
    assert abs(report.ks_error - report.ks_delta) <= 0.02
    assert report.cf_imag_sup <= report.cf_sup_gap + 1e-12
    assert report.variance == pytest.approx(1.0 / 3.0, rel=0.05)


def test_compare_batch_rejects_mismatched_law():
    batch = generate_batch(Scenario(case='iid_uniform', d=2), 100.0, 100, RhoSpec.uniform(), seed=1)
    with pytest.raises(ArgumentError):
        compare_batch(batch, LimitLawTheorem2(d=3))


def test_convergence_sweep_validation():
    scenario = Scenario(case='diagonal', d=2, x0=0.25)
    with pytest.raises(ArgumentError):
        convergence_sweep(scenario, RhoSpec.uniform(), [100.0], 100, seed=1)
    with pytest.raises(ArgumentError):
        convergence_sweep(scenario, RhoSpec.uniform(), [100.0, 10.0], 100, seed=1)
    with pytest.raises(ArgumentError):
        convergence_sweep(scenario, RhoSpec.uniform(), [10.0, 100.0], 100, seed=1, law=LimitLawTheorem2(d=2))


def test_convergence_sweep_is_reproducible():
    scenario = Scenario(case='iid_uniform', d=2)
    first = convergence_sweep(scenario, RhoSpec.uniform(), [10.0, 100.0], 2000, seed=5)
    second = convergence_sweep(scenario, RhoSpec.uniform(), [10.0, 100.0], 2000, seed=5)
    assert first == second
    assert [r.T for r in first] == [10.0, 100.0]
    assert first[0].seed != first[1].seed
    assert {r.N for r in first} == {2000}


def test_trend_rule():
    assert trend_is_non_increasing([0.1, 0.05, 0.02], 10 ** 4)
    assert trend_is_non_increasing([0.02, 0.03], 10 ** 4)  # within 1.5 * 1.36 / 100
    assert not trend_is_non_increasing([0.01, 0.05], 10 ** 4)
    assert trend_is_non_increasing([0.5], 10)


def test_cdf_of_shared_law_used_for_ks():
    # the exact iid law is a valid KS reference
    z = np.linspace(-4.0, 4.0, 9)
    cdf = np.asarray(law_cdf(SharedDilationLaw(d=2), z))
    assert np.all(np.diff(cdf) >= 0) and cdf[0] == pytest.approx(0.0, abs=1e-12)
