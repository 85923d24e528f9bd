"""Command line front end: ``mmm simulate | converge | tail | check | figure``.

Exit codes: 0 success, 2 bad arguments or configuration, 3 simulation
error, 4 insufficient tail data, 5 a failed exact check.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np
from pydantic import ValidationError

from . import settings
from .__version__ import __version__
from .const import DEFAULT_CHECKPOINTS, ExitCode, FigureId
from .diagnostics import (
    convergence_curve,
    hill_tail_exponent,
    mmc_monte_carlo,
    model_coupling_check,
    model_reversal_survival,
    pareto_samples,
    tightness_check,
    trajectory_family,
)
from .distributions import EmpiricalDistribution, build_empirical, dkw_band
from .errors import (
    ConfigurationError,
    EmptySampleError,
    InsufficientTailDataError,
    LogOddsDomainError,
    ModelError,
    NonFiniteSampleError,
    NonFiniteStateError,
    OutOfHorizonError,
    UnsupportedConfigurationError,
)
from .models import StochasticModel, load_model_file, model_from_file, preset_file
from .pdmp import check_monotone_flags
from .random_streams import RandomnessStream

logger = logging.getLogger(__name__)

FIGURE_PRESETS = {
    FigureId.WAGE: "wage",
    FigureId.BELIEF: "belief",
    FigureId.INCOME_JUMP: "income-jump",
    FigureId.INCOME_DRIFT: "income-drift",
}
FIGURE_HORIZON = 200_000.0
HISTOGRAM_BINS = 100


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must be a 64-bit unsigned integer, got {text}")
    return value


def _checkpoints(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as error:
        raise argparse.ArgumentTypeError(f"bad checkpoint list '{text}'") from error


def _add_model_arguments(parser: argparse.ArgumentParser):
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--model", help="preset name")
    source.add_argument("--config", help="model file (JSON, one model section)")
    parser.add_argument("--seed", type=_seed, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mmm", description="Monotone Markov models: simulation and diagnostics")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", help="one sample path as CSV")
    _add_model_arguments(simulate)
    simulate.add_argument("--horizon", type=float, default=100.0)
    simulate.add_argument("--steps", type=int, help="periods for discrete-time models (overrides --horizon)")
    simulate.add_argument("--from", dest="start", type=float, help="initial state")
    simulate.add_argument("--grid-points", type=int, default=1001)
    simulate.add_argument("--out", required=True, help="dense path CSV; the skeleton goes to <stem>_jumps.csv")

    converge = commands.add_parser("converge", help="beta(phi P_t, target) at checkpoints")
    _add_model_arguments(converge)
    converge.add_argument("--from", dest="start", default=None, help="initial state or 'stationary'")
    converge.add_argument("--target", choices=["auto", "analytic", "long-run"], default="auto")
    converge.add_argument("--target-size", type=int, default=100_000)
    converge.add_argument("--checkpoints", type=_checkpoints, default=list(DEFAULT_CHECKPOINTS))
    converge.add_argument("--n-paths", type=int, default=10_000)
    converge.add_argument("--out", required=True, help="CSV report; the summary goes to <out>.json")

    tail = commands.add_parser("tail", help="Hill tail exponent of the long-run income")
    tail.add_argument("--model", help="preset name")
    tail.add_argument("--config", help="model file")
    tail.add_argument("--seed", type=_seed, required=True)
    tail.add_argument("--n-events", type=int, default=100_000)
    tail.add_argument("--k", type=int)
    tail.add_argument("--synthetic-alpha", type=float, help="use exact Pareto samples instead of a model")
    tail.add_argument("--out", help="write the estimate as JSON")

    check = commands.add_parser("check", help="statistical and exact certificates")
    _add_model_arguments(check)
    check.add_argument("--trials", type=int, default=1000)
    check.add_argument("--steps", type=int, default=50)
    check.add_argument("--n-paths", type=int, default=10_000)
    check.add_argument("--horizon", type=int, default=20, help="reversal horizon in steps")

    figure = commands.add_parser("figure", help="sample path and stationary histogram CSVs")
    figure.add_argument("--id", dest="figure_id", required=True, help=", ".join(f.value for f in FigureId))
    figure.add_argument("--seed", type=_seed, required=True)
    figure.add_argument("--horizon", type=float, default=FIGURE_HORIZON)
    figure.add_argument("--grid-points", type=int, default=20_001)
    figure.add_argument("--n-paths", type=int, default=20_000)
    figure.add_argument("--out-dir", required=True)
    return parser


def _load(args) -> StochasticModel:
    if getattr(args, "config", None):
        return model_from_file(load_model_file(args.config))
    if getattr(args, "model", None):
        return model_from_file(preset_file(args.model))
    raise ConfigurationError("give --model or --config")


def _write_csv(path: Path, header: str, columns, fmt="%.17g"):
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, np.column_stack(columns), delimiter=",", header=header, comments="", fmt=fmt)


def _sibling(path: Path, suffix: str) -> Path:
    return path.with_name(f"{path.stem}{suffix}{path.suffix or '.csv'}")


def run_simulate(args) -> int:
    model = _load(args)
    if args.horizon < 0:
        raise ConfigurationError(f"horizon must be >= 0, got {args.horizon}")
    horizon = float(args.steps) if args.steps is not None else args.horizon
    x0 = model.default_start() if args.start is None else args.start
    path = model.sample_path(x0, horizon, RandomnessStream(master_seed=args.seed), args.grid_points)
    out = Path(args.out)
    _write_csv(out, "t,X_t", [path.times, path.values])
    _write_csv(_sibling(out, "_jumps"), "T_n,Z_n", [path.skeleton_times, path.skeleton_states])
    logger.info(f"{model.name}: {path.skeleton_times.size - 1} jumps written to {out}")
    return ExitCode.OK


def _point_mass(x: float, n: int) -> EmpiricalDistribution:
    return build_empirical(np.full(n, x))


def _as_empirical(target, n: int) -> EmpiricalDistribution:
    if isinstance(target, EmpiricalDistribution):
        return target
    return build_empirical(target.quantile((np.arange(n) + 0.5) / n))


def _start_value(model: StochasticModel, text: Optional[str]) -> float:
    if text is None:
        return model.default_start()
    try:
        return float(text)
    except ValueError as error:
        raise ConfigurationError(f"--from takes a number or 'stationary', got '{text}'") from error


def run_converge(args) -> int:
    model = _load(args)
    stream = RandomnessStream(master_seed=args.seed)
    analytic = model.stationary_cdf()
    if args.target == "analytic" and analytic is None:
        raise UnsupportedConfigurationError(f"{model.name} has no closed-form stationary law")
    if analytic is not None and args.target != "long-run":
        target = analytic
    else:
        target = model.long_run_sample(args.target_size, stream.child(1))
    if args.start == "stationary":
        phi0 = _as_empirical(target, args.n_paths)
    else:
        phi0 = _point_mass(_start_value(model, args.start), args.n_paths)

    report = convergence_curve(model, phi0, args.checkpoints, target, args.n_paths, stream.child(0))
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    report.to_csv(str(out))
    Path(f"{out}.json").write_text(report.to_json())
    print(report.to_json())
    return ExitCode.OK


def run_tail(args) -> int:
    stream = RandomnessStream(master_seed=args.seed)
    if args.synthetic_alpha is not None:
        samples = pareto_samples(args.synthetic_alpha, args.n_events, stream)
        theoretical = args.synthetic_alpha
    else:
        model = _load(args)
        samples = model.display(model.long_run_sample(args.n_events, stream.child(0)).points)
        theoretical = model.tail_exponent()
    estimate = hill_tail_exponent(samples, k=args.k, stream=stream.child(1), theoretical_alpha=theoretical)
    summary = estimate.model_dump_json(indent=4)
    if args.out:
        Path(args.out).write_text(summary)
    print(summary)
    return ExitCode.OK


def _report(name: str, passed: bool, detail: str):
    print(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")


def run_check(args) -> int:
    model = _load(args)
    stream = RandomnessStream(master_seed=args.seed)
    exact_ok = True

    coupling = model_coupling_check(model, args.trials, args.steps, stream.child(0))
    exact_ok &= coupling.holds
    _report("monotone coupling", coupling.holds,
            f"{coupling.trials} shared-noise pairs over {coupling.steps} steps"
            + ("" if coupling.holds else f", order broken at (trial, step) = {coupling.witness}"))

    spec = model.pdmp_spec()
    if spec is not None:
        flags = check_monotone_flags(spec, stream.child(1), bounds=model.state_bounds() or (-2.0, 2.0))
        exact_ok &= flags.ok
        _report("monotone flags", flags.ok, f"flow={flags.flow_ok}, jump={flags.jump_ok}")

    constants = model.mmc_constants()
    bounds = model.state_bounds()
    if constants is not None and bounds is not None:
        estimate = mmc_monte_carlo(model.transition_kernel(1.0), bounds[0], bounds[1], constants.pivot, 1,
                                   args.n_paths, stream.child(2))
        _report("monotone mixing", estimate.certified,
                f"epsilon_low={estimate.epsilon_low:.4f} (kappa={constants.kappa:.5f}) "
                f"at joint confidence {estimate.joint_confidence:.2f}")

    survival = model_reversal_survival(model, args.horizon, args.n_paths, stream.child(3))
    if survival is not None:
        violations = survival.violations()
        reversed_ = 1.0 - survival.survival[-1]
        detail = f"P(reversed by step {args.horizon}) = {reversed_:.4f}"
        if survival.bound_label:
            detail += f", bound {survival.bound_label} exceeded at {violations or 'no step'}"
        _report("order reversal", not violations and reversed_ > 0, detail)

    if model.monotone:
        mix = model.mixing_time()
        times = np.linspace(mix / 2.0, 4.0 * mix, 8)
        if not model.continuous_time:
            times = np.unique(np.round(times))
        family = trajectory_family(model, model.default_start(), times, args.trials, stream.child(4))
        tight = tightness_check(family)
        _report("tightness", tight.stable,
                f"[{tight.early.lo:.4g}, {tight.early.hi:.4g}] then [{tight.late.lo:.4g}, {tight.late.hi:.4g}] "
                f"at mass {1 - tight.level:.2f}")
    return ExitCode.OK if exact_ok else ExitCode.CHECK_FAILED


def run_figure(args) -> int:
    try:
        figure_id = FigureId(args.figure_id)
    except ValueError as error:
        raise ConfigurationError(f"Unknown figure id '{args.figure_id}'") from error
    model = model_from_file(preset_file(FIGURE_PRESETS[figure_id]))
    stream = RandomnessStream(master_seed=args.seed)
    out_dir = Path(args.out_dir)
    name = figure_id.value

    path = model.sample_path(model.default_start(), args.horizon, stream.child(0), args.grid_points)
    _write_csv(out_dir / f"{name}_path.csv", f"t,X_t,{model.display_label}",
               [path.times, path.values, model.display(path.values)])
    if path.events is not None:
        jumps = out_dir / f"{name}_jumps.csv"
        with open(jumps, "w") as f:
            f.write("T_n,Z_n,event\n")
            f.write(f"{path.skeleton_times[0]!r},{path.skeleton_states[0]!r},start\n")
            for t, z, event in zip(path.skeleton_times[1:], path.skeleton_states[1:], path.events):
                f.write(f"{t!r},{z!r},{event}\n")
    else:
        _write_csv(out_dir / f"{name}_jumps.csv", "T_n,Z_n", [path.skeleton_times, path.skeleton_states])

    stationary = model.long_run_sample(args.n_paths, stream.child(1))
    stationary.to_csv(str(out_dir / f"{name}_stationary.csv"))
    density, edges = np.histogram(stationary.points, bins=HISTOGRAM_BINS, density=True)
    _write_csv(out_dir / f"{name}_histogram.csv", "bin_lo,bin_hi,density", [edges[:-1], edges[1:], density])
    logger.info(f"figure {name}: {path.skeleton_times.size - 1} jumps, band {dkw_band(stationary.n):.4f}")
    return ExitCode.OK


COMMANDS = {
    "simulate": run_simulate,
    "converge": run_converge,
    "tail": run_tail,
    "check": run_check,
    "figure": run_figure,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return int(exit_.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else settings.MMM_LOG_LEVEL,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        return int(COMMANDS[args.command](args))
    except (ConfigurationError, UnsupportedConfigurationError, LogOddsDomainError, ValidationError) as error:
        logger.error(f"bad configuration: {error}")
        return ExitCode.BAD_CONFIG
    except (NonFiniteStateError, NonFiniteSampleError, EmptySampleError, ModelError, OutOfHorizonError) as error:
        logger.error(f"simulation failed: {error}")
        return ExitCode.SIMULATION_ERROR
    except InsufficientTailDataError as error:
        logger.error(f"tail estimate impossible: {error}")
        return ExitCode.INSUFFICIENT_TAIL


if __name__ == "__main__":
    sys.exit(main())
