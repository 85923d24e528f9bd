import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from monotone_markov_models import (
    AnalyticCdf,
    ConfigurationError,
    EmptySampleError,
    EmpiricalDistribution,
    MonotoneObservable,
    NonFiniteSampleError,
    bhattacharya_1d,
    build_empirical,
    dkw_band,
    dominates_sd,
    hoeffding_lower_bound,
    kolmogorov_distance,
    tightness_profile,
    write_cdf_report,
)


def brute_force_ks(a, wa, b, wb):
    """sup |F_a - F_b| over both one-sided limits at every pooled point."""
    best = 0.0
    for c in np.union1d(a, b):
        right = abs(wa[a <= c].sum() - wb[b <= c].sum())
        left = abs(wa[a < c].sum() - wb[b < c].sum())
        best = max(best, right, left)
    return best


def test_build_rejects_empty_and_non_finite():
    with pytest.raises(EmptySampleError):
        build_empirical([])
    with pytest.raises(NonFiniteSampleError):
        build_empirical([0.0, np.nan])
    with pytest.raises(NonFiniteSampleError):
        build_empirical([np.inf])


def test_build_rejects_bad_weights():
    with pytest.raises(ConfigurationError):
        build_empirical([1.0, 2.0], [1.0])
    with pytest.raises(ConfigurationError):
        build_empirical([1.0, 2.0], [-1.0, 2.0])
    with pytest.raises(ConfigurationError):
        build_empirical([1.0, 2.0], [0.0, 0.0])


def test_constructor_requires_sorted_points():
    with pytest.raises(ConfigurationError):
        EmpiricalDistribution(np.array([2.0, 1.0]), np.array([0.5, 0.5]))


def test_cdf_is_right_continuous_with_left_limits():
    phi = build_empirical([0.0, 1.0, 1.0, 3.0])
    assert phi.cdf(1.0) == pytest.approx(0.75)
    assert phi.cdf_left(1.0) == pytest.approx(0.25)
    assert phi.cdf(-1.0) == 0.0
    assert phi.cdf(3.0) == 1.0
    assert phi.quantile(0.5) == 1.0


def test_weighted_sample_normalizes():
    phi = build_empirical([3.0, 1.0], [3.0, 1.0])
    np.testing.assert_allclose(phi.weights, [0.25, 0.75])
    assert phi.mean() == pytest.approx(2.5)


def test_resample_keeps_uniform_sample(rng):
    phi = build_empirical(rng.normal(size=100))
    assert phi.resample(100) is phi
    assert phi.resample(1000).n == 1000


def test_csv_round_trip(tmp_path):
    phi = build_empirical([0.1, 0.2, 0.2, 5.0], [0.1, 0.2, 0.3, 0.4])
    path = tmp_path / "phi.csv"
    phi.to_csv(str(path))
    loaded = EmpiricalDistribution.from_csv(str(path))
    np.testing.assert_array_equal(loaded.points, phi.points)
    assert kolmogorov_distance(loaded, phi) == pytest.approx(0.0, abs=1e-15)


def test_ks_matches_brute_force_on_random_pairs(rng):
    for _ in range(100):
        n, m = rng.integers(1, 40, size=2)
        # rounding creates ties inside and across samples
        a = np.round(rng.normal(size=n), 1)
        b = np.round(rng.normal(loc=0.3, size=m), 1)
        wa = rng.random(n) + 0.01
        wb = rng.random(m) + 0.01
        wa, wb = wa / wa.sum(), wb / wb.sum()
        expected = brute_force_ks(a, wa, b, wb)
        got = kolmogorov_distance(build_empirical(a, wa), build_empirical(b, wb))
        assert got == pytest.approx(expected, abs=1e-12)


def test_distance_vanishes_between_equal_laws(rng):
    for _ in range(20):
        sample = rng.normal(size=rng.integers(1, 50))
        phi = build_empirical(sample)
        assert bhattacharya_1d(phi, phi) == 0.0
        assert bhattacharya_1d(phi, build_empirical(sample[::-1])) == 0.0


def test_bhattacharya_is_twice_kolmogorov():
    phi = build_empirical([0.0])
    psi = build_empirical([1.0])
    assert kolmogorov_distance(phi, psi) == 1.0
    assert bhattacharya_1d(phi, psi) == 2.0


def test_point_masses_at_the_same_location():
    assert bhattacharya_1d(AnalyticCdf.point(2.0), build_empirical([2.0])) == 0.0
    assert bhattacharya_1d(AnalyticCdf.point(2.0), AnalyticCdf.point(2.5)) == 2.0


def test_analytic_distance_between_normals():
    # sup |Phi(x) - Phi(x - 1)| is attained at x = 1/2
    phi = AnalyticCdf.normal(0.0, 1.0)
    psi = AnalyticCdf.normal(1.0, 1.0)
    assert kolmogorov_distance(phi, psi) == pytest.approx(2.0 * 0.19146246127401312, abs=1e-8)


def test_mixed_distance_is_symmetric(rng):
    sample = build_empirical(rng.uniform(size=500))
    distance = kolmogorov_distance(sample, AnalyticCdf.uniform(0.0, 1.0))
    assert distance == kolmogorov_distance(AnalyticCdf.uniform(0.0, 1.0), sample)
    assert distance < 0.1


def test_dominance_holds_and_fails_with_witness():
    lower = build_empirical([0.0, 1.0])
    upper = build_empirical([0.5, 2.0])
    assert dominates_sd(lower, upper).holds
    result = dominates_sd(upper, lower)
    assert not result.holds
    assert result.gap == pytest.approx(0.5)
    assert upper.cdf(result.witness) < lower.cdf(result.witness)


def test_dominance_against_an_atom():
    phi = AnalyticCdf.point(1.0)
    psi = AnalyticCdf.uniform(0.0, 1.0)
    assert not dominates_sd(phi, psi).holds
    assert dominates_sd(psi, phi).holds


def test_dkw_band_constant():
    assert dkw_band(10_000, 0.999) == pytest.approx(np.sqrt(np.log(2000.0) / 20_000.0))
    with pytest.raises(ConfigurationError):
        dkw_band(0)


def test_hoeffding_floor():
    assert hoeffding_lower_bound(0.0, 100) == 0.0
    assert 0.0 < hoeffding_lower_bound(0.9, 10_000) < 0.9


def test_tightness_profile_on_uniform_family(rng):
    family = [build_empirical(rng.uniform(size=1000)) for _ in range(3)]
    interval = tightness_profile(family, [0.1])[0]
    assert interval.width == pytest.approx(0.9, abs=0.05)
    assert all(m.cdf(interval.hi) - m.cdf_left(interval.lo) >= 0.9 - 1e-12 for m in family)
    with pytest.raises(ConfigurationError):
        tightness_profile(family, [0.0])


def test_observables():
    h = MonotoneObservable.rescaled(0.0, 1.0)
    np.testing.assert_allclose(h([-1.0, 0.0, 0.5, 1.0, 2.0]), [-1.0, -1.0, 0.0, 1.0, 1.0])
    assert MonotoneObservable.indicator_above(1.0)([1.0, 1.5]).tolist() == [0.0, 1.0]
    with pytest.raises(ConfigurationError):
        MonotoneObservable.constant(2.0)


def test_cdf_report_columns(tmp_path):
    path = tmp_path / "cdf.csv"
    write_cdf_report(build_empirical([0.0, 1.0]), AnalyticCdf.uniform(0.0, 1.0), str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "c,F_phi,F_psi,diff"
    assert len(lines) > 2


@settings(deadline=None, max_examples=60)
@given(
    a=st.lists(st.floats(-10, 10, allow_nan=False), min_size=1, max_size=30),
    b=st.lists(st.floats(-10, 10, allow_nan=False), min_size=1, max_size=30),
)
def test_distance_properties(a, b):
    phi, psi = build_empirical(a), build_empirical(b)
    d = bhattacharya_1d(phi, psi)
    assert 0.0 <= d <= 2.0
    assert d == bhattacharya_1d(psi, phi)


values = st.lists(st.one_of(st.integers(-5, 5).map(float), st.floats(-10, 10, allow_nan=False)),
                  min_size=1, max_size=25)


def step_oracle(a, b):
    """Largest gap over the monotone steps 2 * (x >= c) - 1, cut at and just above every pooled point."""
    a, b = np.asarray(a), np.asarray(b)
    pooled = np.union1d(a, b)
    best = 0.0
    for c in np.concatenate([pooled, np.nextafter(pooled, np.inf)]):
        gap = (2.0 * (a >= c) - 1.0).mean() - (2.0 * (b >= c) - 1.0).mean()
        best = max(best, abs(gap))
    return best


@settings(deadline=None, max_examples=80)
@given(a=values, b=values)
def test_distance_is_attained_by_a_monotone_step(a, b):
    assert bhattacharya_1d(build_empirical(a), build_empirical(b)) == pytest.approx(step_oracle(a, b), abs=1e-12)


@settings(deadline=None, max_examples=60)
@given(a=values, b=values, c=values)
def test_distance_satisfies_the_triangle_inequality(a, b, c):
    phi, psi, chi = build_empirical(a), build_empirical(b), build_empirical(c)
    assert bhattacharya_1d(phi, chi) <= bhattacharya_1d(phi, psi) + bhattacharya_1d(psi, chi) + 1e-12


@settings(deadline=None, max_examples=60)
@given(
    sample=st.lists(st.floats(-10, 10, allow_nan=False), min_size=1, max_size=30),
    shift=st.floats(0, 5, allow_nan=False),
)
def test_shifted_sample_dominates(sample, shift):
    phi = build_empirical(sample)
    psi = build_empirical(np.asarray(sample) + shift)
    assert dominates_sd(phi, psi).holds


def test_diagonal_property_on_rearranged_quadruples(rng):
    for _ in range(100):
        n = int(rng.integers(1, 60))
        a = np.sort(rng.normal(size=n))
        b = np.sort(rng.normal(loc=rng.normal(), scale=rng.uniform(0.5, 2.0), size=n))
        lower = np.minimum(a, b) - rng.exponential(size=n)
        upper = np.maximum(a, b) + rng.exponential(size=n)
        phi, psi = build_empirical(a), build_empirical(b)
        ell, u = build_empirical(lower), build_empirical(upper)
        assert dominates_sd(ell, phi).holds and dominates_sd(psi, u).holds
        assert bhattacharya_1d(phi, psi) <= bhattacharya_1d(ell, u) + 1e-12
