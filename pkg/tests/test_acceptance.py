"""End-to-end certificates on the shipped presets. Run with ``pytest -m slow``."""

import numpy as np
import pytest
from scipy import special

from monotone_markov_models import (
    MonotoneObservable,
    RandomnessStream,
    bhattacharya_1d,
    build_empirical,
    check_monotone_flags,
    dkw_band,
    embedded_kernel,
    kolmogorov_distance,
    propagate,
)
from monotone_markov_models.diagnostics import (
    asymptotic_contractivity_curve,
    convergence_curve,
    ergodic_run,
    hill_tail_exponent,
    model_coupling_check,
    model_reversal_survival,
)
from monotone_markov_models.models import (
    analytic_beta_curve,
    drift_reset_stationary_cdf,
    load_preset,
    pure_jump_stationary_cdf,
)

pytestmark = pytest.mark.slow

CONFIDENCE = 0.999
MC_PATHS = 10_000
TOLERANCE = 4.0 * dkw_band(MC_PATHS, CONFIDENCE)
INCREASING_PRESETS = ["wage", "belief", "income-jump", "income-pareto", "income-drift", "drift-reset", "ou"]


def test_pareto_tail_of_the_pure_jump_model(stream):
    """10^5 independent chains run 300 embedded steps each, in place of one 10^6-step path.

    Both draw from the same stationary law; the independent rows keep the DKW band exact.
    """
    model = load_preset("income-pareto")
    cfg = model.config
    n = 100_000
    # far past mixing, each row is an independent draw from the stationary law
    x = propagate(embedded_kernel(model.pdmp_spec()), np.zeros(n), 300, stream.child(0))

    estimate = hill_tail_exponent(np.exp(x), stream=stream.child(1))
    assert estimate.alpha == pytest.approx(2.0 / 1.1, rel=0.1)

    target = pure_jump_stationary_cdf(cfg)
    assert kolmogorov_distance(build_empirical(x), target) <= dkw_band(n, CONFIDENCE)

    p = 1.0 / 11.0
    assert cfg.p == pytest.approx(p)
    assert abs(np.mean(x == 0.0) - p) <= 3.0 * np.sqrt(p * (1.0 - p) / n)


def test_pareto_tail_of_the_drift_model(stream):
    model = load_preset("drift-reset")
    n = 100_000
    x = model.advance(np.zeros(n), 100.0, stream.child(0))

    estimate = hill_tail_exponent(np.exp(x), stream=stream.child(1))
    assert 2.7 <= estimate.alpha <= 3.3
    assert model.tail_exponent() == pytest.approx(3.0)

    target = drift_reset_stationary_cdf(model.config)
    assert kolmogorov_distance(build_empirical(x), target) <= dkw_band(n, CONFIDENCE)


def test_wage_distance_stays_below_the_exponential_bound(stream):
    model = load_preset("wage")
    target = model.long_run_sample(200_000, stream.child(0))
    checkpoints = [0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0]
    report = convergence_curve(model, build_empirical([0.0]), checkpoints, target, MC_PATHS, stream.child(1))
    constants = model.mmc_constants()
    bound = constants.bound(np.array(checkpoints))
    assert np.all(report.betas <= bound + TOLERANCE)


def test_ou_distance_matches_the_exact_curve(stream):
    model = load_preset("ou")
    times = [0.1, 0.5, 1.0, 2.0, 4.0]
    report = convergence_curve(model, build_empirical([10.0]), times, model.stationary_cdf(), MC_PATHS, stream)
    exact = analytic_beta_curve(model.config, 10.0, times)
    np.testing.assert_allclose(report.betas, exact, atol=TOLERANCE, rtol=0)


def _random_law(model, u_loc, u_scale, uniforms):
    """A 10^4-point law around the model's default start, kept inside the state bounds."""
    points = model.default_start() + 2.0 * special.ndtri(u_loc) + u_scale * special.ndtri(uniforms)
    if model.state_bounds() is not None:
        lo, hi = model.state_bounds()
        points = lo + (hi - lo) * special.expit(points)
    return build_empirical(points)


@pytest.mark.parametrize("seed", range(50))
def test_one_step_is_nonexpansive(seed):
    stream = RandomnessStream(master_seed=seed)
    model = load_preset(INCREASING_PRESETS[seed % len(INCREASING_PRESETS)])
    u = stream.block(0, MC_PATHS)
    shape = stream.uniforms(4, slot=7)
    phi = _random_law(model, shape[0], 0.2 + shape[1], u.marks(0))
    psi = _random_law(model, shape[2], 0.2 + shape[3], u.marks(1))
    before = bhattacharya_1d(phi, psi)
    after = bhattacharya_1d(build_empirical(model.advance(phi.points, 1, stream.child(0))),
                            build_empirical(model.advance(psi.points, 1, stream.child(1))))
    assert after <= before + TOLERANCE


@pytest.mark.parametrize("name", INCREASING_PRESETS)
def test_long_run_law_does_not_depend_on_the_stream(name):
    model = load_preset(name)
    first = model.long_run_sample(MC_PATHS, RandomnessStream(master_seed=11, stream_id=1))
    second = model.long_run_sample(MC_PATHS, RandomnessStream(master_seed=11, stream_id=2))
    assert bhattacharya_1d(first, second) <= TOLERANCE


@pytest.mark.parametrize("name", INCREASING_PRESETS)
def test_distance_between_extreme_starts_never_grows(name, stream):
    model = load_preset(name)
    if model.state_bounds() is not None:
        lo, hi = model.state_bounds()
    else:
        lo, hi = model.default_start() - 2.0, model.default_start() + 2.0
    m = model.mixing_time()
    checkpoints = np.array([0.0, m / 4, m / 2, m, 2 * m])
    if not model.continuous_time:
        checkpoints = np.unique(np.round(checkpoints))
    curve = asymptotic_contractivity_curve(model, build_empirical([hi]), build_empirical([lo]), checkpoints,
                                           2000, stream)
    assert curve.betas[0] == 2.0
    assert curve.nonincreasing_within_band()


@pytest.mark.parametrize("name", INCREASING_PRESETS)
def test_shared_noise_keeps_order_exactly(name, stream):
    model = load_preset(name)
    check = model_coupling_check(model, 1000, 50, stream)
    assert check.holds, f"order broken at (trial, step) = {check.witness}"
    spec = model.pdmp_spec()
    if spec is not None:
        assert check_monotone_flags(spec, stream.child(7), bounds=model.state_bounds() or (-2.0, 2.0)).ok


@pytest.mark.parametrize("name, label", [("income-jump", "(1-p*delta)^n"), ("income-drift", "(1-delta)^k")])
def test_order_reversal_survival_stays_below_the_bound(name, label, stream):
    report = model_reversal_survival(load_preset(name), 20, 10_000, stream)
    assert report.bound_label == label
    assert report.violations(z=3.0) == []
    assert report.survival[-1] < 1.0


@pytest.mark.parametrize("name", ["income-drift", "wage"])
@pytest.mark.parametrize("s, t", [(0.5, 1.0), (1.0, 1.0)])
def test_chapman_kolmogorov(name, s, t, stream):
    model = load_preset(name)
    start = np.full(MC_PATHS, model.default_start())
    direct = model.advance(start, s + t, stream.child(0))
    two_legs = model.advance(model.advance(start, s, stream.child(1)), t, stream.child(2))
    assert bhattacharya_1d(build_empirical(direct), build_empirical(two_legs)) <= TOLERANCE


def test_wage_time_averages_agree(stream):
    model = load_preset("wage")
    h = MonotoneObservable.rescaled(0.0, 1.0)
    kernel = model.step_kernel()
    first = ergodic_run(kernel, 0.0, 200_000, h, 1000, stream.child(0))
    second = ergodic_run(kernel, 1.0, 200_000, h, 1000, stream.child(1))
    assert abs(first.mean - second.mean) <= 3.0 * np.hypot(first.stderr, second.stderr)


def test_pure_jump_time_average_reaches_q(stream):
    model = load_preset("income-pareto")
    h = MonotoneObservable.indicator_above(0.0)
    average = ergodic_run(model.step_kernel(), 0.0, 200_000, h, 1000, stream)
    assert abs(average.mean - 10.0 / 11.0) <= 3.0 * average.stderr
