#!/usr/bin/env python3
"""
Command-line entry point for bisqueeze.

Reports go to stdout as key=value lines; logs go to stderr. Exit codes: 0 on
success, 2 on validation errors, 3 on numerical failures.
"""

import argparse
import sys
from typing import Any, Dict, List, Optional

import structlog

from . import __version__
from .core.config import Config, config, configure_logging, use_config
from .core.errors import BisqueezeError, InvalidModeError
from .fock_oracle import TruncatedSpace, compare_with_gaussian
from .generation import (
    PumpParameters,
    ThermalSpec,
    covariance_elements,
    decouple,
    state_from_decoupled,
    thermal_occupations,
)
from .homodyne import conditional_photon_numbers, homodyne_condition
from .measures import (
    bipartition_negativities,
    describe_entanglement,
    first_order_coherence,
    negativity,
    number_expectation,
    tripartite_negativity,
)
from .sweep import SweepConfig, run_sweep, write_csv
from .symplectic import (
    CovarianceMatrix,
    QuadratureCovariance,
    from_quadrature,
    load_covariance,
    partial_trace,
    purity,
    save_covariance,
)
from .validation import StateValidator

logger = structlog.get_logger(__name__)

MODE_NAMES = "abc"


def _format(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, complex):
        return f"{value.real:.12g}{value.imag:+.12g}j"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def print_report(report: Dict[str, Any]) -> None:
    for key, value in report.items():
        print(f"{key}={_format(value)}")


def _mode_index(value: str) -> int:
    if len(value) == 1 and value in MODE_NAMES:
        return MODE_NAMES.index(value)
    try:
        return int(value)
    except ValueError:
        raise InvalidModeError(f"Unknown mode '{value}'")


def _load_state(path: str) -> CovarianceMatrix:
    state = load_covariance(path)
    if isinstance(state, QuadratureCovariance):
        return from_quadrature(state)
    return state


def cmd_decouple(args: argparse.Namespace) -> int:
    d = decouple(PumpParameters(R_ab=args.rab, R_bc=args.rbc))
    print_report(d.model_dump())
    return 0


def cmd_state(args: argparse.Namespace) -> int:
    pumps = PumpParameters(R_ab=args.rab, R_bc=args.rbc)
    spec = ThermalSpec.from_hertz(args.omega_a, args.omega_b, args.omega_c, args.temperature)
    d = decouple(pumps)
    nus = thermal_occupations(spec)
    sigma = state_from_decoupled(d, nus)

    if args.out:
        save_covariance(args.out, sigma)

    report: Dict[str, Any] = {f"nu_{name}": nu for name, nu in zip(MODE_NAMES, nus)}
    report.update(d.model_dump())
    report.update(covariance_elements(d, nus).model_dump())
    report["purity"] = purity(sigma)
    report.update(StateValidator().validate_state(sigma, d, nus).as_dict())
    print_report(report)
    return 0


def cmd_measure(args: argparse.Namespace) -> int:
    sigma = _load_state(args.input)
    report: Dict[str, Any] = {}

    if args.pair == "abc":
        if sigma.n_modes != 3:
            raise InvalidModeError(f"Tripartite measures need a 3-mode state, got {sigma.n_modes} modes")
        splits = bipartition_negativities(sigma)
        report["N_abc"] = tripartite_negativity(sigma)
        for name in MODE_NAMES:
            rest = MODE_NAMES.replace(name, "")
            report[f"N_{name}_{rest}"] = splits[name]
        for mode, name in enumerate(MODE_NAMES):
            report[f"n_{name}"] = number_expectation(sigma, mode)
        print_report(report)
        return 0

    if sigma.n_modes == 2:
        logger.info("Two-mode input, measuring the whole state", pair=args.pair)
        reduced = sigma
    else:
        modes = tuple(_mode_index(name) for name in args.pair)
        reduced = partial_trace(sigma, modes)

    report.update(describe_entanglement(negativity(reduced)))
    coherence = first_order_coherence(reduced, 0, 1)
    report["n_first"] = number_expectation(reduced, 0)
    report["n_second"] = number_expectation(reduced, 1)
    report["pair_coherence"] = coherence.pair_coherence
    report["g1"] = coherence.g1
    report["relative_entropy_coherence"] = coherence.relative_entropy_coherence
    print_report(report)
    return 0


def cmd_homodyne(args: argparse.Namespace) -> int:
    sigma = _load_state(args.input)
    measured = _mode_index(args.measured)
    conditional = homodyne_condition(sigma, measured=measured, theta=args.theta)
    if args.out:
        save_covariance(args.out, conditional.sigma_out)

    name = MODE_NAMES[measured] if measured < len(MODE_NAMES) else measured
    report: Dict[str, Any] = {"theta": conditional.theta, "measured": name}
    if conditional.sigma_out.n_modes == 2:
        report.update(describe_entanglement(negativity(conditional.sigma_out)))
        coherence = first_order_coherence(conditional.sigma_out, 0, 1)
        report["pair_coherence"] = coherence.pair_coherence
        report["g1"] = coherence.g1
        report["relative_entropy_coherence"] = coherence.relative_entropy_coherence
    for index, n in enumerate(conditional_photon_numbers(conditional)):
        report[f"n_out_{index}"] = n
    print_report(report)
    return 0


def cmd_oracle_check(args: argparse.Namespace) -> int:
    space = TruncatedSpace(n_max=args.nmax) if args.nmax is not None else TruncatedSpace()
    rows = compare_with_gaussian(PumpParameters(R_ab=args.rab, R_bc=args.rbc), space)

    report: Dict[str, Any] = {"n_max": space.n_max}
    for row in rows:
        report[f"{row.quantity}_gaussian"] = row.gaussian
        report[f"{row.quantity}_fock"] = row.fock
        report[f"{row.quantity}_delta"] = row.delta
    report["max_delta"] = max(row.delta for row in rows)
    print_report(report)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    outputs = [name.strip() for name in args.outputs.split(",")] if args.outputs else None
    sweep = SweepConfig.load(
        args.sweep_config,
        omega_a=args.omega_a,
        omega_b=args.omega_b,
        omega_c=args.omega_c,
        temperature=args.temperature,
        r_min=args.r_min,
        r_max=args.r_max,
        r_steps=args.r_steps,
        theta=args.theta,
        outputs=outputs,
    )
    frame = run_sweep(sweep, threads=args.threads)
    write_csv(frame, args.out)
    return 0


def _add_pump_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--rab", type=float, required=True, help="Pump strength R_ab")
    parser.add_argument("--rbc", type=float, required=True, help="Pump strength R_bc")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bisqueeze",
        description="Bi-squeezed tripartite Gaussian states: generation, measures, homodyne conditioning",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", dest="config_path", help="YAML file with logging/numerics/oracle/runtime settings")
    parser.add_argument("--log-level", help="Override the configured log level")
    parser.add_argument("--log-json", action="store_true", help="Render log events as JSON on stderr")

    subparsers = parser.add_subparsers(dest="command", required=True)

    sweep = subparsers.add_parser("sweep", help="Sweep r = R_ab = R_bc and write a CSV table")
    sweep.add_argument("--config", dest="sweep_config", help="Flat YAML sweep configuration")
    sweep.add_argument("--out", default="-", help="CSV path ('-' for stdout)")
    sweep.add_argument("--threads", type=int, help="Worker threads")
    sweep.add_argument("--omega-a", type=float, help="Frequency of mode a (Hz)")
    sweep.add_argument("--omega-b", type=float, help="Frequency of mode b (Hz)")
    sweep.add_argument("--omega-c", type=float, help="Frequency of mode c (Hz)")
    sweep.add_argument("--temperature", type=float, help="Temperature (K)")
    sweep.add_argument("--r-min", type=float)
    sweep.add_argument("--r-max", type=float)
    sweep.add_argument("--r-steps", type=int)
    sweep.add_argument("--theta", type=float, help="Homodyne quadrature angle (rad)")
    sweep.add_argument("--outputs", help="Comma-separated subset of columns")
    sweep.set_defaults(handler=cmd_sweep)

    state = subparsers.add_parser("state", help="Generate a bi-squeezed state and check its consistency")
    _add_pump_arguments(state)
    state.add_argument("--omega-a", type=float, default=4.99e9, help="Frequency of mode a (Hz)")
    state.add_argument("--omega-b", type=float, default=5.00e9, help="Frequency of mode b (Hz)")
    state.add_argument("--omega-c", type=float, default=5.01e9, help="Frequency of mode c (Hz)")
    state.add_argument("--temperature", type=float, default=0.0, help="Temperature (K)")
    state.add_argument("--out", help="State file to write")
    state.set_defaults(handler=cmd_state)

    measure = subparsers.add_parser("measure", help="Entanglement and coherence of a stored state")
    measure.add_argument("--input", required=True, help="State file")
    measure.add_argument("--pair", choices=["ab", "bc", "ac", "abc"], default="ac")
    measure.set_defaults(handler=cmd_measure)

    homodyne = subparsers.add_parser("homodyne", help="Condition a stored state on a homodyne measurement")
    homodyne.add_argument("--input", required=True, help="State file")
    homodyne.add_argument("--theta", type=float, default=0.0, help="Quadrature angle (rad)")
    homodyne.add_argument("--measured", default="b", help="Measured mode (name or index)")
    homodyne.add_argument("--out", help="Conditional state file to write")
    homodyne.set_defaults(handler=cmd_homodyne)

    decouple_parser = subparsers.add_parser("decouple", help="Factorise the double pump")
    _add_pump_arguments(decouple_parser)
    decouple_parser.set_defaults(handler=cmd_decouple)

    oracle = subparsers.add_parser("oracle-check", help="Compare against the truncated Fock-space simulation")
    _add_pump_arguments(oracle)
    oracle.add_argument("--nmax", type=int, help="Per-mode photon cutoff")
    oracle.set_defaults(handler=cmd_oracle_check)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        loaded = Config.load(args.config_path)
        if args.log_level:
            loaded.logging.level = args.log_level.upper()
        if args.log_json:
            loaded.logging.json_output = True
        use_config(loaded)
        configure_logging(config.logging.level, config.logging.json_output)

        logger.debug("Running command", command=args.command)
        return args.handler(args)
    except BisqueezeError as e:
        logger.error("Command failed", command=args.command, error=str(e), error_type=type(e).__name__)
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code


def run():
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        sys.exit(130)


if __name__ == "__main__":
    run()
