import numpy as np
import pytest
from pydantic import ValidationError
from scipy import special

from monotone_markov_models import (
    ConfigurationError,
    CouplingMode,
    EmptySampleError,
    FunctionKernel,
    InsufficientTailDataError,
    MonotoneObservable,
    RandomnessStream,
    build_empirical,
    dkw_band,
    tightness_profile,
)
from monotone_markov_models.const import NOISE_FLOOR_MULTIPLE, ConvergenceStatus
from monotone_markov_models.diagnostics import (
    ConvergencePoint,
    ConvergenceReport,
    MixingReport,
    SurvivalPoint,
    asymptotic_contractivity_curve,
    check_monotone_coupling,
    convergence_curve,
    ergodic_average,
    ergodic_run,
    fit_rate,
    hill_tail_exponent,
    mmc_monte_carlo,
    model_coupling_check,
    model_reversal_survival,
    order_reversal_survival,
    pareto_samples,
    tightness_check,
    trajectory_family,
)
from monotone_markov_models.models import load_preset, wage_event_kernel


def ar_kernel(rho=0.5):
    return FunctionKernel(lambda x, d: rho * x + special.ndtri(d.marks(0)), name="ar",
                          monotone_by_construction=True, event_driven=True)


def flip_kernel():
    return FunctionKernel(lambda x, d: -0.5 * x + special.ndtri(d.marks(0)), name="flip")


# Convergence

def test_fit_rate_recovers_an_exponential():
    times = np.array([0.0, 1.0, 2.0, 5.0])
    status, rate, prefactor = fit_rate(times, 2.0 * np.exp(-0.5 * times), 1e-3)
    assert status == ConvergenceStatus.FITTED
    assert rate == pytest.approx(0.5)
    assert prefactor == pytest.approx(2.0)


def test_fit_rate_inside_the_noise_floor():
    times = np.array([0.0, 1.0, 2.0])
    assert fit_rate(times, np.array([0.01, 0.01, 0.01]), 0.1)[0] == ConvergenceStatus.ALREADY_CONVERGED
    assert fit_rate(times, np.array([1.0, 0.01, 0.01]), 0.1)[0] == ConvergenceStatus.TOO_FEW_POINTS


def test_convergence_report_rejects_unsorted_checkpoints():
    points = [ConvergencePoint(t=1.0, beta_hat=0.5), ConvergencePoint(t=0.5, beta_hat=0.2)]
    with pytest.raises(ValidationError):
        ConvergenceReport(model="ou", target="x", checkpoints=points, n_paths=1000, mc_band=0.1,
                          confidence=0.999, status=ConvergenceStatus.FITTED)
    with pytest.raises(ValidationError):
        ConvergencePoint(t=0.0, beta_hat=2.5)


def test_ou_convergence_tracks_the_exact_curve(stream, tmp_path):
    model = load_preset("ou")
    phi0 = build_empirical([10.0])
    report = convergence_curve(model, phi0, [0.5, 1.0, 2.0, 4.0], model.stationary_cdf(), 4000, stream)
    floor = NOISE_FLOOR_MULTIPLE * report.mc_band
    bounds = np.array([point.bound for point in report.checkpoints])
    assert np.all(np.abs(report.betas - bounds) <= floor)
    assert report.mc_band == pytest.approx(dkw_band(4000))
    assert report.status == ConvergenceStatus.FITTED
    assert report.fitted_rate > 0

    out = tmp_path / "curve.csv"
    report.to_csv(str(out))
    lines = out.read_text().splitlines()
    assert lines[0] == "t,beta_hat,bound"
    assert len(lines) == 5
    assert "fitted_rate" in report.to_json()


def test_empirical_target_widens_the_band(stream):
    model = load_preset("flip")
    target = model.long_run_sample(2000, stream.child(0), chains=1000)
    report = convergence_curve(model, build_empirical([5.0]), [0, 5, 10], target, 1000, stream.child(1))
    assert report.mc_band == pytest.approx(dkw_band(1000) + dkw_band(2000))
    assert report.theoretical_rate is None


def test_wage_report_carries_theoretical_constants(wage_model, stream):
    report = convergence_curve(wage_model, build_empirical([0.0]), [0.0, 5.0],
                               wage_model.long_run_sample(2000, stream.child(0), chains=1000), 1000,
                               stream.child(1))
    constants = wage_model.mmc_constants()
    assert report.theoretical_rate == pytest.approx(constants.alpha)
    assert report.checkpoints[0].bound == pytest.approx(constants.C)


def test_convergence_arguments_are_checked(stream):
    model = load_preset("ou")
    phi0 = build_empirical([1.0])
    target = model.stationary_cdf()
    with pytest.raises(ConfigurationError):
        convergence_curve(model, phi0, [], target, 1000, stream)
    with pytest.raises(ConfigurationError):
        convergence_curve(model, phi0, [1.0, 0.5], target, 1000, stream)
    with pytest.raises(ConfigurationError):
        convergence_curve(model, phi0, [1.0], target, 999, stream)


def test_monotone_ou_curve_is_asymptotically_contractive(stream):
    model = load_preset("ou")
    curve = asymptotic_contractivity_curve(model, build_empirical([10.0]), build_empirical([-10.0]),
                                           [0.5, 1.0, 2.0, 4.0, 8.0], 2000, stream)
    assert curve.nonincreasing_within_band()
    assert curve.betas[0] > 1.9
    assert curve.betas[-1] < 4 * curve.mc_band


# Mixing

def test_mmc_probabilities_of_one_wage_event(wage_config, stream):
    estimate = mmc_monte_carlo(wage_event_kernel(wage_config), 0.0, 1.0, 0.5, 1, 10_000, stream)
    assert estimate.p_up == pytest.approx(5.0 / 6.0, abs=0.015)
    assert estimate.p_down == pytest.approx(special.betainc(2.0, 8.0, 0.5) / 6.0, abs=0.015)
    assert estimate.certified
    assert estimate.epsilon_low < min(estimate.p_up, estimate.p_down)
    assert estimate.joint_confidence == pytest.approx(0.98)


def test_unit_time_mixing_clears_the_kappa_bound(wage_model, stream):
    constants = wage_model.mmc_constants()
    estimate = mmc_monte_carlo(wage_model.transition_kernel(1.0), 0.0, 1.0, constants.pivot, 1, 10_000, stream)
    assert estimate.p_up >= constants.kappa
    assert estimate.p_down >= constants.kappa
    assert estimate.lower_down > 0.0


def test_mmc_arguments_are_checked(stream):
    with pytest.raises(ConfigurationError):
        mmc_monte_carlo(ar_kernel(), 1.0, 0.0, 0.5, 1, 1000, stream)
    with pytest.raises(ConfigurationError):
        mmc_monte_carlo(ar_kernel(), 0.0, 1.0, 0.5, 1, 10, stream)


def test_flip_kernel_reverses_at_once(stream, tmp_path):
    report = order_reversal_survival(flip_kernel(), 1.0, -1.0, CouplingMode.SHARED_NOISE, 5, 1000, stream)
    assert report.survival.tolist() == [1.0, 0.0, 0.0, 0.0, 0.0, 0.0]
    out = tmp_path / "survival.csv"
    report.to_csv(str(out))
    assert out.read_text().splitlines()[0] == "index,survival,stderr,bound"


def test_survival_is_compared_with_the_bound(stream):
    report = order_reversal_survival(ar_kernel(), 2.0, -2.0, CouplingMode.INDEPENDENT, 10, 2000, stream,
                                     bound=lambda n: np.where(n == 0, 1.0, 0.0), bound_label="zero")
    assert np.all(np.diff(report.survival) <= 0)
    assert report.violations()[0] == 1
    assert all(report.survival[n] > 0 for n in report.violations())
    generous = order_reversal_survival(ar_kernel(), 2.0, -2.0, CouplingMode.INDEPENDENT, 10, 2000, stream,
                                       bound=lambda n: np.ones_like(n, dtype=float))
    assert generous.violations() == []


def test_survival_report_validates_its_points():
    points = [SurvivalPoint(index=0, survival=0.5, stderr=0.0), SurvivalPoint(index=1, survival=0.6, stderr=0.0)]
    with pytest.raises(ValidationError):
        MixingReport(mode=CouplingMode.INDEPENDENT, x_hi=1.0, x_lo=0.0, replications=1000, points=points)


def test_model_reversal_uses_the_model_setup(stream):
    report = model_reversal_survival(load_preset("income-jump"), 10, 1000, stream)
    assert report.mode == CouplingMode.SHARED_CLOCK_INDEPENDENT_SHOCKS
    assert report.points[0].bound == 1.0
    assert report.bound_label == "(1-p*delta)^n"


def test_monotone_coupling_holds_and_fails_with_witness(stream):
    lo, hi = np.linspace(-2, 1, 50), np.linspace(-1, 2, 50)
    assert check_monotone_coupling(ar_kernel(), lo, hi, 20, stream).holds
    broken = check_monotone_coupling(flip_kernel(), lo, hi, 20, stream)
    assert not broken.holds
    assert broken.witness == (0, 1)
    with pytest.raises(ConfigurationError):
        check_monotone_coupling(ar_kernel(), hi, lo, 5, stream)


@pytest.mark.parametrize("name", ["wage", "belief", "income-jump", "income-drift", "ou"])
def test_presets_keep_order_under_shared_noise(name, stream):
    assert model_coupling_check(load_preset(name), 200, 20, stream).holds


# Ergodic averages

def test_ergodic_average_of_iid_sample(rng):
    values = rng.uniform(-1.0, 1.0, 10_000)
    average = ergodic_average(values, MonotoneObservable(lambda x: x), batches=50)
    assert average.n == 10_000
    assert average.mean == pytest.approx(values.mean())
    assert average.stderr == pytest.approx(np.sqrt(1.0 / 3.0 / 10_000), rel=0.4)


def test_ergodic_average_checks_the_observable():
    with pytest.raises(ConfigurationError):
        ergodic_average(np.zeros(100), MonotoneObservable(lambda x: x, declared_monotone=False))
    with pytest.raises(ConfigurationError):
        ergodic_average(np.full(100, 3.0), MonotoneObservable(lambda x: x))
    with pytest.raises(EmptySampleError):
        ergodic_average(np.zeros(10), MonotoneObservable.tanh(), burn_in=10)
    with pytest.raises(ConfigurationError):
        ergodic_average(np.zeros(10), MonotoneObservable.tanh(), batches=1)


def test_short_run_shrinks_the_batches():
    average = ergodic_average(np.ones(20), MonotoneObservable.constant(1.0))
    np.testing.assert_array_equal(average.running, np.ones(20))
    assert average.mean == 1.0
    assert average.batches == 10
    assert average.stderr == 0.0


def test_too_short_for_batch_means_keeps_the_average():
    average = ergodic_average(np.array([0.5, 0.0, -0.5]), MonotoneObservable(lambda x: x))
    np.testing.assert_allclose(average.running, [0.5, 0.25, 0.0])
    assert average.batches == 1
    assert np.isnan(average.stderr)


def test_ergodic_run_of_a_symmetric_chain(stream):
    average = ergodic_run(ar_kernel(), 0.0, 20_000, MonotoneObservable.tanh(), 100, stream)
    assert abs(average.mean) < 4 * average.stderr + 1e-3


# Tails

def test_hill_estimate_on_exact_pareto(stream):
    samples = pareto_samples(2.0, 100_000, stream)
    estimate = hill_tail_exponent(samples, stream=stream, theoretical_alpha=2.0)
    assert estimate.alpha == pytest.approx(2.0, rel=0.1)
    assert estimate.ci_low < estimate.alpha < estimate.ci_high
    assert estimate.k == int(np.floor(100_000 ** (2.0 / 3.0)))


def test_hill_estimate_is_unbiased_over_many_seeds():
    alpha, n = 2.0, 10_000
    estimates = [hill_tail_exponent(pareto_samples(alpha, n, RandomnessStream(master_seed=seed)), n_boot=20)
                 for seed in range(100)]
    k = estimates[0].k
    band = 3.0 * alpha / np.sqrt(k)
    alphas = np.array([estimate.alpha for estimate in estimates])
    assert abs(alphas.mean() - alpha) <= band / 10.0
    assert np.sum(np.abs(alphas - alpha) <= band) >= 95


def test_hill_needs_enough_tail_data(stream):
    with pytest.raises(InsufficientTailDataError):
        hill_tail_exponent(pareto_samples(2.0, 50, stream))
    with pytest.raises(InsufficientTailDataError):
        hill_tail_exponent(np.ones(1000), k=50)
    with pytest.raises(InsufficientTailDataError):
        hill_tail_exponent(pareto_samples(2.0, 1000, stream), k=500)
    with pytest.raises(ConfigurationError):
        hill_tail_exponent(np.array([-1.0] * 1000))
    with pytest.raises(ConfigurationError):
        pareto_samples(0.0, 10, stream)


# Tightness

def test_stationary_family_is_tight(stream):
    family = trajectory_family(load_preset("ou"), 0.0, [1.0, 2.0, 3.0, 4.0], 4000, stream)
    assert len(family) == 4
    assert tightness_check(family).stable


def test_ou_trajectory_from_ten_stays_below_the_gaussian_envelope(stream):
    sigma_bar = 1.0 / np.sqrt(2.0)
    family = trajectory_family(load_preset("ou"), 10.0, np.arange(11.0), 4000, stream)
    interval = tightness_profile(family, [0.01])[0]
    assert 10.0 <= interval.hi <= 10.0 + 3.0 * sigma_bar
    assert interval.lo >= -5.0 * sigma_bar


def test_belief_intervals_settle_after_burn_in(stream):
    model = load_preset("belief")
    family = trajectory_family(model, 0.0, [100, 150, 200, 250, 300, 350, 400, 450], 2000, stream)
    check = tightness_check(family)
    assert check.stable
    assert check.late.width < 20.0


def test_escaping_family_is_not_tight(stream):
    family = [build_empirical(stream.child(t).uniforms(1000) + 10.0 * t) for t in range(6)]
    assert not tightness_check(family).stable
    with pytest.raises(ConfigurationError):
        tightness_check(family[:1])
