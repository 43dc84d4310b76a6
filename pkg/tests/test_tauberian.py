import math

import numpy as np
import pytest

from heavytail_pa import (
    DomainError,
    InvalidK,
    LatticeMeasure,
    ScalingFunctions,
    SupportExceeded,
    build_derivative_measure,
    derivative_limit_rect,
    derivative_marginal_normalizer,
    marginal_condition,
    measure_scaling,
    transform_scaling,
    truncation_condition,
    uhat_limit_rhs,
)


@pytest.fixture(scope="module")
def scaling(params):
    return ScalingFunctions.for_derivative_measure(params, 3)


def test_k_validation(params):
    # alpha_in - 1 = 1.875, so k = 3 works and k = 1 does not
    build_derivative_measure(3, params)
    with pytest.raises(InvalidK):
        build_derivative_measure(1, params)
    with pytest.raises(InvalidK):
        build_derivative_measure(0, params)


def test_corner_atom_is_k_factorial_times_pmf(deriv_measure, dist):
    assert deriv_measure.atom(0, 0) == pytest.approx(
        6.0 * dist.pmf_component(1, 3, 0), rel=1e-10
    )


def test_dense_atoms_match_definition(deriv_measure):
    table = deriv_measure.dense_atoms(12, 8)
    for i, j in [(0, 0), (1, 2), (5, 3), (12, 8)]:
        assert table[i, j] == pytest.approx(deriv_measure.atom(i, j), rel=1e-9)


def test_series_rectangles_match_dense_atoms(deriv_measure):
    """The factorized termwise series equals the materialized atom sums."""
    table = deriv_measure.dense_atoms(60, 40)
    assert deriv_measure.rect_mass_below(60, 40) == pytest.approx(table.sum(), rel=1e-9)
    assert deriv_measure.rect_mass_below(25, 10) == pytest.approx(
        table[:26, :11].sum(), rel=1e-9
    )


def test_partial_sums_diverge(deriv_measure):
    """Total mass grows without plateau over increasing square supports."""
    sums = [deriv_measure.captured_mass(s) for s in (100, 200, 400, 800)]
    assert all(b > a for a, b in zip(sums, sums[1:]))
    increments = np.diff(sums)
    assert all(b > 0.5 * a for a, b in zip(increments, increments[1:]))


def test_marginal_mass_matches_row_sums(deriv_measure):
    table = deriv_measure.dense_atoms(40, 3000)
    series = deriv_measure.marginal_mass(1, 40)
    assert series == pytest.approx(table.sum(), rel=1e-6)


def test_out_marginal_infinite_at_k3(deriv_measure):
    # k = 3 >= alpha_in - 1 + a*delta_out = 2.75: column sums diverge
    with pytest.raises(DomainError, match="infinite"):
        deriv_measure.marginal_mass(2, 5.0)


def test_out_marginal_finite_at_k2(params):
    u2 = build_derivative_measure(2, params)
    val = u2.marginal_mass(2, 10.0)
    table = u2.dense_atoms(20000, 10)
    assert val > 0
    # column sums decay like i^(-1.75), so truncating the table at
    # i = 2e4 still leaves just under one percent in the tail
    assert table.sum() < val
    assert table.sum() == pytest.approx(val, rel=2e-2)


def test_scaling_function_indices(params, scaling):
    assert scaling.gamma1 == pytest.approx(3 - 2.875 + 1.0)
    assert scaling.gamma2 == pytest.approx(scaling.gamma1 * (22 / 7 - 1) / 1.875)
    assert scaling.b1(100.0) == pytest.approx(100.0 ** (1.0 / scaling.gamma1))
    with pytest.raises(DomainError):
        ScalingFunctions(gamma1=-1.0, gamma2=1.0)


def test_measure_scaling_single_atom_at_origin():
    u = LatticeMeasure.from_dict({(0, 0): 2.5})
    b = ScalingFunctions(gamma1=1.0, gamma2=1.0)
    for t in (1.0, 10.0, 300.0):
        assert measure_scaling(u, b, t, 0.7, 5.0) == pytest.approx(2.5 / t)


def test_measure_scaling_plain_rectangle_at_t1():
    table = np.arange(12, dtype=float).reshape(3, 4)
    u = LatticeMeasure(table)
    b = ScalingFunctions(gamma1=1.0, gamma2=1.0)
    assert measure_scaling(u, b, 1.0, 1.0, 2.0) == pytest.approx(table[:2, :3].sum())


def test_transform_scaling_single_atom():
    u = LatticeMeasure.from_dict({(1, 1): 0.8})
    b = ScalingFunctions(gamma1=1.0, gamma2=1.0)
    t, l1, l2 = 50.0, 1.3, 0.4
    expected = (0.8 / t) * math.exp(-(l1 + l2) / t)
    assert transform_scaling(u, b, t, l1, l2) == pytest.approx(expected, rel=1e-12)


def test_transform_dominated_limit_large_lambda():
    u = LatticeMeasure.from_dict({(0, 0): 1.5, (2, 3): 4.0})
    b = ScalingFunctions(gamma1=1.0, gamma2=1.0)
    val = transform_scaling(u, b, 2.0, 1e6, 1e6)
    assert val == pytest.approx(1.5 / 2.0, rel=1e-9)


def test_truncated_lattice_raises_support_exceeded(deriv_measure):
    view = deriv_measure.to_lattice(80, 80)
    assert view.rect_mass_below(50, 50) > 0
    with pytest.raises(SupportExceeded):
        view.rect_mass_below(2000, 50)
    with pytest.raises(SupportExceeded):
        view.laplace(0.01, 0.01)
    with pytest.raises(SupportExceeded):
        view.atom(81, 0)


def test_series_budget_guard(params):
    u = build_derivative_measure(3, params, series_budget=10_000)
    with pytest.raises(SupportExceeded, match="budget"):
        u.laplace(1e-7, 1e-7)


def test_uhat_rhs_positive_and_monotone(params):
    base = uhat_limit_rhs(3, params, 1.0, 1.0)
    assert base > 0
    # the kernel decreases in lambda2
    assert uhat_limit_rhs(3, params, 1.0, 2.0) < base
    assert uhat_limit_rhs(3, params, 1.0, 0.5) > base
    with pytest.raises(InvalidK):
        uhat_limit_rhs(1, params, 1.0, 1.0)


def test_transform_approaches_uhat_rhs(deriv_measure, params, scaling):
    rhs = uhat_limit_rhs(3, params, 1.0, 1.0)
    lhs = transform_scaling(deriv_measure, scaling, 1e4, 1.0, 1.0)
    assert abs(lhs / rhs - 1.0) < 0.05


def test_transform_grid_resolution_stability(params, deriv_measure, scaling):
    """Doubling the mixing-quadrature resolution leaves the value alone."""
    coarse = transform_scaling(deriv_measure, scaling, 1e4, 1.0, 1.0)
    fine_measure = build_derivative_measure(3, params, panels_per_decade=4.0, gl_order=24)
    fine = transform_scaling(fine_measure, scaling, 1e4, 1.0, 1.0)
    assert coarse == pytest.approx(fine, rel=1e-7)


def test_measure_scaling_toward_limit_rect(deriv_measure, params, scaling):
    target = derivative_limit_rect(3, params, 1.0, 1.0)
    vals = [measure_scaling(deriv_measure, scaling, t, 1.0, 1.0) for t in (1e2, 1e3, 1e4)]
    errs = [abs(v / target - 1.0) for v in vals]
    assert errs[0] > errs[1] > errs[2]
    assert errs[-1] < 0.10


def test_abelian_direction_stabilization(deriv_measure, params, scaling):
    """Measure-side stabilization carries to the transform side."""
    m1 = measure_scaling(deriv_measure, scaling, 1e3, 1.0, 1.0)
    m2 = measure_scaling(deriv_measure, scaling, 1e4, 1.0, 1.0)
    eps_measure = abs(m2 / m1 - 1.0)
    t1 = transform_scaling(deriv_measure, scaling, 1e3, 1.0, 1.0)
    t2 = transform_scaling(deriv_measure, scaling, 1e4, 1.0, 1.0)
    eps_transform = abs(t2 / t1 - 1.0)
    assert eps_transform < 3.0 * eps_measure + 0.01


def test_tauberian_direction_pairing(deriv_measure, params, scaling):
    """Transform-side agreement at large t pairs with measure-side agreement."""
    rhs = uhat_limit_rhs(3, params, 1.0, 1.0)
    lhs = transform_scaling(deriv_measure, scaling, 1e4, 1.0, 1.0)
    assert abs(lhs / rhs - 1.0) < 0.05
    target = derivative_limit_rect(3, params, 1.0, 1.0)
    got = measure_scaling(deriv_measure, scaling, 1e4, 1.0, 1.0)
    assert abs(got / target - 1.0) < 0.10


def test_truncation_condition_finite_support():
    u = LatticeMeasure.from_dict({(0, 0): 1.0, (3, 2): 2.0})
    b = ScalingFunctions(gamma1=1.0, gamma2=1.0)
    rows = truncation_condition(u, b, (1.0, 1.0), [0.0, 10.0], [2.0])
    by_y = {r["y"]: r for r in rows}
    # y = 0 covers the whole domain; b(t) y = 20 exceeds the support
    full = u.laplace(0.5, 0.5).value / 2.0
    assert by_y[0.0]["value"] == pytest.approx(full)
    assert by_y[10.0]["value"] == 0.0


def test_truncation_condition_derivative_measure(deriv_measure, scaling):
    rows = truncation_condition(deriv_measure, scaling, (1.0, 1.0), [0.0, 8.0], [1e3])
    by_y = {r["y"]: r for r in rows}
    assert by_y[8.0]["ratio_to_y0"] < 0.01


def test_marginal_condition_counting_measure():
    """Unit weights on the axis give U_1(x) ~ x, so the ratio tends to x."""
    u = LatticeMeasure(np.ones((30000, 1)))
    b = ScalingFunctions(gamma1=1.0, gamma2=1.0)
    rows = marginal_condition(u, 1, b, [0.5, 1.0, 2.0], [10000.0])
    for r in rows:
        # the lattice discretization contributes one atom, i.e. O(1/t)
        assert r["ratio"] == pytest.approx(r["x"], abs=2.0 / 10000.0)
        assert r["target"] == r["x"]


def test_marginal_condition_target_at_x1(deriv_measure, params):
    b = ScalingFunctions.normalized_for_derivative_measure(params, 3)
    rows = marginal_condition(deriv_measure, 1, b, [1.0], [1e4])
    assert rows[0]["target"] == 1.0
    assert abs(rows[0]["rel_err"]) < 0.15


def test_marginal_normalizer_matches_partial_sums(deriv_measure, params):
    K = derivative_marginal_normalizer(params, 3)
    g1 = 3 - 2.875 + 1.0
    X = 2e4
    assert deriv_measure.marginal_mass(1, X) / X**g1 == pytest.approx(K, rel=0.02)
