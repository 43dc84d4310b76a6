import numpy as np
import pytest

from heavytail_pa import DomainError, LimitDistribution, ModelParams
from heavytail_pa.limit_dist import nb_pmf


def mc_pgf(x, y, xs, ys):
    vals = np.exp(xs * np.log(x) + ys * np.log(y)) if x > 0 and y > 0 else None
    if vals is None:
        vals = (x ** xs.astype(float)) * (y ** ys.astype(float))
    return float(vals.mean()), float(vals.std() / np.sqrt(vals.size))


def test_pgf_normalization(dist):
    assert dist.pgf_component(1, 1.0, 1.0) == pytest.approx(1.0, abs=1e-10)
    assert dist.pgf_component(2, 1.0, 1.0) == pytest.approx(1.0, abs=1e-10)
    assert dist.pgf(1.0, 1.0) == pytest.approx(1.0, abs=1e-10)


def test_pgf_component_closed_form_at_origin_margin(dist):
    # with x = 0, y = 1 the integral is a pure power: 1/(1 + c1(delta_in+1))
    assert dist.pgf_component(1, 0.0, 1.0) == pytest.approx(15.0 / 31.0, abs=1e-12)


def test_pgf_vanishes_at_origin(dist):
    assert dist.pgf(0.0, 0.0) == 0.0


def test_nb_pgf_identity_grid():
    """sum_m nb(m; r, 1/z) x^m equals (x + (1-x) z)^-r."""
    m = np.arange(0, 6000)
    for z in (1.2, 2.0, 5.0, 20.0):
        for x in (0.0, 0.3, 0.8, 1.0):
            for r in (0.5, 1.0, 2.0, 3.7):
                series = float((nb_pmf(m, r, 1.0 / z) * x**m).sum())
                closed = (x + (1.0 - x) * z) ** -r
                assert abs(series - closed) < 1e-12


def test_pgf_component_matches_mixture_monte_carlo(dist):
    rng = np.random.default_rng(314)
    xs, ys = dist.sample_component(1, 10**6, rng)
    for x, y in [(0.5, 0.5), (0.2, 0.8), (0.9, 0.3)]:
        mc, se = mc_pgf(x, y, xs, ys)
        quad = dist.pgf_component(1, x, y)
        assert abs(quad - mc) < 4.0 * se


def test_pmf_component_at_origin_equals_pgf(dist):
    assert dist.pmf_component(1, 0, 0) == pytest.approx(
        dist.pgf_component(1, 0.0, 0.0), abs=1e-11
    )


def test_pmf_table_matches_single_cell_quadrature(dist):
    table = dist.pmf_component_table(1, 6, 6)
    for i, j in [(0, 0), (1, 3), (5, 2), (6, 6)]:
        assert table[i, j] == pytest.approx(dist.pmf_component(1, i, j), abs=1e-11)


def test_component_mass_capture(dist):
    table = dist.pmf_component_table(1, 200, 200)
    assert table.sum() >= 0.99


def test_pmf_zero_at_origin(dist):
    assert dist.pmf(0, 0) == 0.0


def test_pmf_split_weights(dist):
    val = dist.pmf(1, 1)
    expected = 0.4 * dist.pmf_component(1, 0, 1) + 0.6 * dist.pmf_component(2, 1, 0)
    assert val == pytest.approx(expected, rel=1e-10)


def test_pmf_component_matches_sampler_frequencies(dist):
    rng = np.random.default_rng(2718)
    xs, ys = dist.sample_component(1, 10**6, rng)
    n = xs.size
    for i in range(3):
        for j in range(3):
            freq = float(np.mean((xs == i) & (ys == j)))
            se = np.sqrt(max(freq * (1 - freq), 1e-12) / n)
            assert abs(dist.pmf_component(1, i, j) - freq) < 4.0 * se


def test_pgf_pmf_duality(dist):
    """The pmf table reproduces the pgf once enough mass is captured."""
    table = dist.pmf_table(400, 400)
    assert table.sum() >= 1.0 - 1e-4
    ii = np.arange(table.shape[0])
    jj = np.arange(table.shape[1])
    for x in (0.2, 0.5, 0.8):
        for y in (0.2, 0.5, 0.8):
            series = float(((x**ii)[:, None] * (y**jj)[None, :] * table).sum())
            assert dist.pgf(x, y) == pytest.approx(series, abs=2e-4)


def test_pmf_table_is_nonnegative_and_below_one(dist):
    table = dist.pmf_table(50, 50)
    assert np.all(table >= 0.0)
    assert table.sum() <= 1.0 + 1e-9


def test_adaptive_box_reaches_requested_increment(dist):
    m = dist.adaptive_box(increment_tol=1e-3, start=64, cap=1024)
    inner = float(dist.pmf_table(m // 2, m // 2).sum())
    outer = float(dist.pmf_table(m, m).sum())
    assert outer - inner < 1e-3
    assert outer > 0.98


def test_sampler_always_has_an_edge_endpoint(dist):
    rng = np.random.default_rng(1)
    i_arr, o_arr = dist.sample(10**5, rng)
    assert int((i_arr + o_arr).min()) >= 1


def test_sampler_branch_frequency(dist):
    rng = np.random.default_rng(51)
    n = 10**6
    i_arr, o_arr = dist.sample(n, rng)
    # branch 1 never has I = 0, so P[I = 0] = (1 - p_B) P[X2 = 0], and
    # P[X2 = 0] is the component-2 pgf at (0, 1)
    p0 = float(np.mean(i_arr == 0))
    expected = 0.6 * dist.pgf_component(2, 0.0, 1.0)
    se = np.sqrt(p0 * (1 - p0) / n)
    assert abs(p0 - expected) < 4 * se


def test_mean_in_degree(dist):
    # E[I] = 1/(1 - beta) = 2 for the canonical parameters
    assert dist.mean_in_degree() == pytest.approx(2.0, rel=1e-4)


def test_component_validation(dist):
    with pytest.raises(DomainError):
        dist.pgf_component(3, 0.5, 0.5)
    with pytest.raises(DomainError):
        dist.pgf_component(1, 1.5, 0.5)
    with pytest.raises(DomainError):
        dist.pmf(-1, 0)


def test_sampling_requires_positive_deltas():
    d = LimitDistribution(ModelParams(0.3, 0.5, 0.2, 1.0, 0.0))
    with pytest.raises(DomainError):
        d.sample(10, np.random.default_rng(0))
