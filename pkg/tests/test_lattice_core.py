import math

import numpy as np
import pytest

from src.core import lattice
from src.core.schemas import BoxSpec, Translation
from src.utils.errors import ArgumentError, DomainError, ResourceError


def box(d, a=1.0):
    return BoxSpec(d=d, a=a)


@pytest.mark.parametrize("x, expected", [(0.25, 0.25), (-0.3, 0.7), (3.0, 0.0)])
def test_fractional_part(x, expected):
    assert lattice.fractional_part(x) == pytest.approx(expected, abs=1e-15)


def test_fractional_part_tiny_negative_stays_below_one():
    assert lattice.fractional_part(-1e-20) < 1.0


@pytest.mark.parametrize("x, expected", [(0.0, 1.0), (0.25, 0.5), (-0.3, 0.4)])
def test_gap_y(x, expected):
    assert lattice.gap_y(x) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
def test_non_finite_inputs_raise_domain_error(bad):
    with pytest.raises(DomainError):
        lattice.fractional_part(bad)
    with pytest.raises(DomainError):
        lattice.gap_y(bad)


@pytest.mark.parametrize("d, t, X, expected", [
    (1, 2.5, [0.0], 5),
    (2, 1.0, [0.0, 0.0], 9),
    (2, 1.2, [0.3, -0.4], 4),
])
def test_count_points_formula(d, t, X, expected):
    assert lattice.count_points_formula(box(d), t, X) == expected


@pytest.mark.parametrize("d, t, X, expected", [
    (2, 1.0, [0.0, 0.0], 9),
    (1, 0.4, [0.45], 0),
    (3, 2.0, [0.0, 0.0, 0.0], 125),
])
def test_count_points_bruteforce(d, t, X, expected):
    assert lattice.count_points_bruteforce(box(d), t, X) == expected


def test_count_accepts_translation_model():
    assert lattice.count_points_formula(box(2), 1.0, Translation.diagonal(0.0, 2)) == 9


def test_count_dimension_mismatch():
    with pytest.raises(ArgumentError):
        lattice.count_points_formula(box(2), 1.0, [0.0])


def test_count_rejects_non_positive_t():
    with pytest.raises(DomainError):
        lattice.count_points_formula(box(1), 0.0, [0.0])


def test_bruteforce_budget():
    with pytest.raises(ResourceError):
        lattice.count_points_bruteforce(box(3), 50.0, [0.0, 0.0, 0.0], budget=1000)


def test_formula_matches_bruteforce_on_random_instances(rng):
    for d in (1, 2, 3):
        for _ in range(200):
            t = 15.0 * (1.0 - rng.random())
            a = float(rng.choice([0.5, 1.0, 2.0]))
            X = rng.uniform(-2.0, 2.0, d).tolist()
            b = box(d, a)
            assert lattice.count_points_formula(b, t, X) == lattice.count_points_bruteforce(b, t, X)


@pytest.mark.parametrize("d, t, X, expected", [
    (2, 1.0, [0.0, 0.0], 5.0),
    (1, 2.5, [0.0], 0.0),
    (2, 1.2, [0.3, -0.4], -1.76),
])
def test_error_term(d, t, X, expected):
    assert lattice.error_term(box(d), t, X) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("t, x, expected", [(2.5, 0.0, 0.0), (1.0, 0.0, 1.0), (1.2, 0.3, -0.4)])
def test_delta_tilde(t, x, expected):
    assert lattice.delta_tilde(t, x) == pytest.approx(expected, abs=1e-12)


def test_delta_tilde_range_and_periodicity(rng):
    t = 50.0 * (1.0 - rng.random(20000))
    x = rng.uniform(-3.0, 3.0, 20000)
    values = lattice.delta_tilde(t, x)
    assert np.all(values > -1.0) and np.all(values <= 1.0)
    assert np.allclose(lattice.delta_tilde(t, x + 1.0), values, atol=1e-9)
    assert np.allclose(lattice.delta_tilde(t + 1.0, x), values, atol=1e-9)


@pytest.mark.parametrize("d, t, X, expected", [
    (2, 1.0, [0.0, 0.0], 4.0),
    (1, 2.5, [0.0], 0.0),
    (3, 2.5, [0.0, 0.0, 0.0], 0.0),
])
def test_delta(d, t, X, expected):
    assert lattice.delta(box(d), t, X) == pytest.approx(expected, abs=1e-12)


def test_delta_requires_unit_half_side():
    with pytest.raises(ArgumentError, match="rescale"):
        lattice.delta(box(2, 2.0), 1.0, [0.0, 0.0])


def test_delta_diagonal_identity(rng):
    for d in (1, 2, 3, 4):
        for _ in range(50):
            t = float(rng.uniform(0.5, 100.0))
            x = float(rng.uniform(-2.0, 2.0))
            expected = d * 2 ** (d - 1) * lattice.delta_tilde(t, x)
            assert lattice.delta(box(d), t, [x] * d) == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("d, t, X, expected", [
    (2, 1.0, [0.0, 0.0], 5.0),
    (2, 10.0, [0.0, 0.0], 4.1),
    (1, 2.5, [0.0], 0.0),
])
def test_normalized_error(d, t, X, expected):
    assert lattice.normalized_error(box(d), t, X) == pytest.approx(expected, abs=1e-12)


def test_telescoped_form_matches_direct_form(rng):
    for _ in range(300):
        d = int(rng.integers(1, 5))
        a = float(rng.choice([0.5, 1.0, 2.0]))
        t = float(rng.uniform(0.6, 200.0))
        X = rng.uniform(-2.0, 2.0, d).tolist()
        direct = lattice.normalized_error(box(d, a), t, X)
        telescoped = lattice.normalized_error_telescoped(box(d, a), t, X)
        assert telescoped == pytest.approx(direct, rel=1e-9, abs=1e-8)


@pytest.mark.parametrize("d, t, expected", [(1, 3.7, 0.0), (2, 1.0, 2.0), (3, 10.0, 1.2)])
def test_reduction_gap_bound(d, t, expected):
    assert lattice.reduction_gap_bound(d, t) == pytest.approx(expected, abs=1e-12)


def test_reduction_gap_bound_rejects_small_t():
    with pytest.raises(DomainError):
        lattice.reduction_gap_bound(2, 0.4)


def test_reduction_bound_holds(rng):
    for _ in range(2000):
        d = int(rng.integers(1, 6))
        t = float(rng.uniform(1.0, 1000.0))
        X = rng.uniform(-2.0, 2.0, d).tolist()
        gap = abs(lattice.normalized_error(box(d), t, X) - lattice.delta(box(d), t, X))
        assert gap <= lattice.reduction_gap_bound(d, t) + 1e-9


def test_reduction_gap_shrinks_with_t(rng):
    sups = []
    for k in range(1, 5):
        gaps = []
        for X in rng.uniform(-0.5, 0.5, (200, 3)).tolist():
            # integer t with |x_i| < 1/2 gives L_j = 2t exactly and a zero gap
            t = 10.0 ** k * (1.0 + 0.01 * rng.random())
            gaps.append(abs(lattice.normalized_error(box(3), t, X) - lattice.delta(box(3), t, X)))
        sups.append(max(gaps))
    assert all(b < a for a, b in zip(sups, sups[1:]))


def test_count_result_fields():
    result = lattice.count_result(box(2), 1.0, [0.0, 0.0])
    assert result.count == 9
    assert result.volume == 4.0
    assert result.error == 5.0
    assert result.normalized_error == 5.0
    assert result.delta == 4.0
    assert result.per_axis_delta_tilde == [1.0, 1.0]
    assert result.delta == 2 ** (result.d - 1) * sum(result.per_axis_delta_tilde)
    assert result.boundary_degenerate


def test_count_result_omits_delta_for_general_a():
    result = lattice.count_result(box(2, 0.5), 2.0, [0.3, -0.4])
    assert result.delta is None and result.per_axis_delta_tilde is None
    assert result.count == lattice.count_points_bruteforce(box(2, 0.5), 2.0, [0.3, -0.4])
    assert not result.boundary_degenerate


def test_boundary_degenerate_detection():
    assert lattice.is_boundary_degenerate(box(1), 2.5, [0.5])
    assert not lattice.is_boundary_degenerate(box(1), 1.0, [0.3])
    # 1.3 sits 0.3 from an integer
    assert lattice.is_boundary_degenerate(box(1), 1.0, [0.3], tol=0.31)
    assert lattice.is_boundary_degenerate(box(2, 0.5), 2.0, [0.3, 0.0])


def test_array_forms_match_scalar_forms(rng):
    t = 100.0 * (1.0 - rng.random(500)) + 0.5
    X = rng.uniform(-0.5, 0.5, (500, 3))
    delta = lattice.delta_array(t, X)
    nerr = lattice.normalized_error_array(t, X)
    for k in range(0, 500, 25):
        assert delta[k] == pytest.approx(lattice.delta(box(3), t[k], X[k].tolist()), abs=1e-9)
        assert nerr[k] == pytest.approx(lattice.normalized_error(box(3), t[k], X[k].tolist()), abs=1e-8)


def test_box_spec_validation():
    with pytest.raises(ValueError):
        BoxSpec(d=0, a=1.0)
    with pytest.raises(ValueError):
        BoxSpec(d=1, a=-1.0)
    with pytest.raises(ValueError):
        BoxSpec(d=1, a=math.inf)
