"""Command-line front end.

Subcommands: ``payoff`` (one game, JSON out), ``sweep`` (payoff grid, CSV
out), ``verify`` (simulation vs closed forms), ``threshold`` (strategy
crossover by bisection) and ``validate-channel`` (Kraus completeness).

Exit codes: 0 success, 1 verification/validation failure, 2 bad flags or
unparseable input file, 3 non-unitary strategy (or non-normalised state)
file, 4 parameter outside its domain, 5 no strategy crossover in range.
All diagnostics go to stderr; stdout carries only the command's output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import analysis
from .channels import NoiseSpec, extend_three, single_channel, validate_cptp
from .game import GameConfig, StrategyUnitary, builtin_strategy, play
from .linalg import STATE_DIM

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_NOT_UNITARY = 3
EXIT_DOMAIN = 4
EXIT_NO_CROSSOVER = 5


class CliError(Exception):
    def __init__(self, exit_code: int, message: str):
        super().__init__(message)
        self.exit_code = exit_code


def _fmt(x: float) -> str:
    """Shortest decimal within 12 significant digits."""
    return f"{float(x):.12g}"


def _round12(x: float) -> float:
    return float(_fmt(x))


def _parse_gamma(text: str) -> float:
    """Mixing angle in radians; the literal ``pi/2`` is also accepted."""
    if text.strip() == "pi/2":
        return math.pi / 2
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid gamma {text!r}") from None


def _parse_range(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"range {text!r} is not LO:HI:STEP")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"non-numeric range {text!r}") from None
    if step <= 0:
        raise argparse.ArgumentTypeError(f"range step must be positive in {text!r}")
    if hi < lo:
        raise argparse.ArgumentTypeError(f"range {text!r} runs backwards")
    return lo, hi, step


def _range_values(bounds: tuple[float, float, float]) -> list[float]:
    """Grid LO, LO+STEP, ...; HI is included when (HI-LO) is an integer
    multiple of STEP to within 1e-12."""
    lo, hi, step = bounds
    k = round((hi - lo) / step)
    if abs((hi - lo) - k * step) <= 1e-12:
        values = [lo + i * step for i in range(int(k) + 1)]
        values[-1] = hi
    else:
        values = [lo + i * step for i in range(int(math.floor((hi - lo) / step)) + 1)]
    return values


def parse_strategy_file(path: str) -> StrategyUnitary:
    """Load a 3x3 strategy from a JSON file of [re, im] pairs, row-major.

    The top level must be an array of 3 rows, each 3 entries, each a
    two-number [re, im] array; the matrix must be unitary within 1e-9.
    """
    matrix = _complex_array_from_file(path, (3, 3))
    try:
        return StrategyUnitary(matrix, name=path)
    except ValueError as err:
        raise CliError(EXIT_NOT_UNITARY, f"{path}: {err}") from None


def parse_state_file(path: str) -> np.ndarray:
    """Load a 27-dim initial state from a JSON file of 27 [re, im] pairs."""
    vector = _complex_array_from_file(path, (STATE_DIM,))
    norm = float(np.linalg.norm(vector))
    if abs(norm - 1.0) > 1e-12:
        raise CliError(EXIT_NOT_UNITARY, f"{path}: state norm {norm!r} is not 1")
    return vector


def _complex_array_from_file(path: str, shape: tuple[int, ...]) -> np.ndarray:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as err:
        raise CliError(EXIT_USAGE, f"cannot read {path}: {err}") from None
    except json.JSONDecodeError as err:
        raise CliError(EXIT_USAGE, f"{path}: invalid JSON: {err}") from None
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError):
        raise CliError(EXIT_USAGE, f"{path}: expected nested arrays of numbers") from None
    if arr.shape != shape + (2,):
        raise CliError(
            EXIT_USAGE,
            f"{path}: expected shape {shape} of [re, im] pairs, got {arr.shape}",
        )
    if not np.isfinite(arr).all():
        raise CliError(EXIT_USAGE, f"{path}: entries must be finite")
    return arr[..., 0] + 1j * arr[..., 1]


def _resolve_strategy(token: str) -> StrategyUnitary:
    if token.lower() in ("id", "identity", "m1", "m2", "h"):
        return builtin_strategy(token)
    return parse_strategy_file(token)


@dataclass(frozen=True)
class _ResolvedConfig:
    """Explicit-flag configuration with files parsed, noise still free."""

    initial: "str | np.ndarray"
    alice: StrategyUnitary
    bob: StrategyUnitary
    channel: str
    a1: float
    a2: float
    tokens: dict

    def noise_spec(self, noise: float | None) -> NoiseSpec:
        if self.channel == "none":
            if noise is not None:
                raise CliError(EXIT_USAGE, "--noise is meaningless with --channel none")
            return NoiseSpec.none()
        if noise is None:
            raise CliError(EXIT_USAGE, f"--noise is required with --channel {self.channel}")
        try:
            if self.channel == "se":
                return NoiseSpec.spontaneous_emission(noise, self.a1, self.a2)
            return NoiseSpec.generalized_pauli(noise)
        except ValueError as err:
            raise CliError(EXIT_DOMAIN, str(err)) from None

    def game_config(self, noise: float | None, gamma: float) -> GameConfig:
        spec = self.noise_spec(noise)
        try:
            return GameConfig(
                initial=self.initial, alice=self.alice, bob=self.bob,
                noise=spec, gamma=gamma,
            )
        except ValueError as err:
            raise CliError(EXIT_DOMAIN, str(err)) from None


def _resolve_explicit(args) -> _ResolvedConfig:
    if args.state is None:
        raise CliError(EXIT_USAGE, "either --case or --state is required")
    if args.state in ("psi1", "psi2"):
        initial = args.state
    else:
        initial = parse_state_file(args.state)
    tokens = {
        "state": args.state,
        "alice": args.alice,
        "bob": args.bob,
        "channel": args.channel,
    }
    return _ResolvedConfig(
        initial=initial,
        alice=_resolve_strategy(args.alice),
        bob=_resolve_strategy(args.bob),
        channel=args.channel,
        a1=args.a1,
        a2=args.a2,
        tokens=tokens,
    )


def _forbid_explicit_flags_with_case(args, parser: argparse.ArgumentParser) -> None:
    clashes = [
        name
        for name, value, default in (
            ("--state", args.state, None),
            ("--alice", args.alice, "id"),
            ("--bob", args.bob, "id"),
            ("--channel", args.channel, "none"),
            ("--a1", args.a1, 1.0),
            ("--a2", args.a2, 1.0),
        )
        if value != default
    ]
    if clashes:
        parser.error(f"--case cannot be combined with {', '.join(clashes)}")


def _require_known_case(case: int) -> analysis.CaseSpec:
    spec = analysis.CASES.get(case)
    if spec is None:
        raise CliError(EXIT_DOMAIN, f"case {case} out of range 1..7")
    return spec


def _cmd_payoff(args, parser) -> int:
    gamma = args.gamma
    if args.case is not None:
        _forbid_explicit_flags_with_case(args, parser)
        spec = _require_known_case(args.case)
        if args.noise is None:
            raise CliError(EXIT_USAGE, "--case requires --noise")
        try:
            cfg = analysis.case_config(args.case, args.noise, gamma)
        except ValueError as err:
            raise CliError(EXIT_DOMAIN, str(err)) from None
        payoff_of_gamma = lambda g: analysis.simulate_case(args.case, args.noise, g)
        echo = {
            "case": spec.id,
            "state": spec.initial,
            "alice": spec.alice,
            "bob": spec.bob,
            "channel": spec.channel_kind,
        }
    else:
        resolved = _resolve_explicit(args)
        cfg = resolved.game_config(args.noise, gamma)
        payoff_of_gamma = lambda g: play(resolved.game_config(args.noise, g)).payoff
        echo = dict(resolved.tokens)
        if resolved.channel == "se":
            echo["a1"] = _round12(args.a1)
            echo["a2"] = _round12(args.a2)
    if args.noise is not None:
        echo["noise"] = _round12(args.noise)
    echo["gamma"] = _round12(gamma)

    outcome = play(cfg)
    _, c1 = analysis.gamma_coefficients(payoff_of_gamma)
    gamma_star, label = analysis.optimal_gamma(c1)
    doc = {
        "payoff": _round12(outcome.payoff),
        "p_switch": _round12(outcome.p_switch),
        "p_not_switch": _round12(outcome.p_not_switch),
        "optimal_gamma": _round12(gamma_star),
        "optimal_label": label,
        "config": echo,
    }
    print(json.dumps(doc))
    return EXIT_OK


def _sweep_payoff_fn(args, parser) -> Callable[[float, float], float]:
    if args.noise is not None:
        raise CliError(EXIT_USAGE, "--noise conflicts with --noise-range")
    if args.case is not None:
        _forbid_explicit_flags_with_case(args, parser)
        _require_known_case(args.case)
        return lambda x, g: analysis.simulate_case(args.case, x, g)
    resolved = _resolve_explicit(args)
    if resolved.channel == "none":
        raise CliError(EXIT_USAGE, "sweep needs --channel se or gp for the noise axis")
    return lambda x, g: play(resolved.game_config(x, g)).payoff


def _cmd_sweep(args, parser) -> int:
    payoff = _sweep_payoff_fn(args, parser)
    noise_values = _range_values(args.noise_range)
    gamma_values = _range_values(args.gamma_range)
    try:
        table = analysis.sweep(payoff, noise_values, gamma_values)
    except ValueError as err:
        raise CliError(EXIT_DOMAIN, str(err)) from None
    lines = ["noise,gamma,payoff"]
    lines.extend(f"{_fmt(x)},{_fmt(g)},{_fmt(p)}" for x, g, p in table.rows)
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_verify(args, parser) -> int:
    if args.case == "all":
        cases = sorted(analysis.CASES)
    else:
        try:
            case = int(args.case)
        except ValueError:
            parser.error(f"--case must be 1..7 or 'all', got {args.case!r}")
        _require_known_case(case)
        cases = [case]
    noise_values = _range_values(args.noise_range) if args.noise_range else None
    gamma_values = _range_values(args.gamma_range) if args.gamma_range else None
    all_passed = True
    for case in cases:
        try:
            report = analysis.verify_case(case, noise_values, gamma_values)
        except ValueError as err:
            raise CliError(EXIT_DOMAIN, str(err)) from None
        status = "pass" if report.passed else "fail"
        print(f"case {case}: max_err={report.max_abs_error:.3e} {status}")
        all_passed = all_passed and report.passed
    return EXIT_OK if all_passed else EXIT_FAIL


_THRESHOLD_BRACKETS = {"se": (0.01, 3.0), "gp": (0.01, 0.99)}


def _cmd_threshold(args, parser) -> int:
    spec = _require_known_case(args.case)
    default_lo, default_hi = _THRESHOLD_BRACKETS[spec.channel_kind]
    lo = args.lo if args.lo is not None else default_lo
    hi = args.hi if args.hi is not None else default_hi
    try:
        value = analysis.threshold(args.case, lo, hi)
    except analysis.NoSignChangeError as err:
        raise CliError(EXIT_NO_CROSSOVER, str(err)) from None
    except ValueError as err:
        raise CliError(EXIT_DOMAIN, str(err)) from None
    print(json.dumps({"case": args.case, "threshold": _round12(value)}))
    return EXIT_OK


def _cmd_validate_channel(args, parser) -> int:
    try:
        if args.channel == "se":
            spec = NoiseSpec.spontaneous_emission(args.noise, args.a1, args.a2)
        else:
            spec = NoiseSpec.generalized_pauli(args.noise)
    except ValueError as err:
        raise CliError(EXIT_DOMAIN, str(err)) from None
    single = single_channel(spec)
    reports = [
        ("single-qutrit", validate_cptp(single)),
        ("extended", validate_cptp(extend_three(single))),
    ]
    ok = True
    for scope, report in reports:
        status = "pass" if report.passed else "fail"
        print(f"{scope} {report.label}: max_deviation={report.max_deviation:.3e} {status}")
        ok = ok and report.passed
    return EXIT_OK if ok else EXIT_FAIL


def _add_config_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--case", type=int, default=None,
                     help="named configuration 1..7 (excludes the explicit flags)")
    sub.add_argument("--state", default=None,
                     help="psi1, psi2, or a JSON state file")
    sub.add_argument("--alice", default="id",
                     help="id, h, or a JSON strategy file")
    sub.add_argument("--bob", default="id",
                     help="id, m1, m2, or a JSON strategy file")
    sub.add_argument("--channel", choices=("none", "se", "gp"), default="none")
    sub.add_argument("--noise", type=float, default=None,
                     help="time t (se) or error probability p (gp)")
    sub.add_argument("--a1", type=float, default=1.0,
                     help="Einstein coefficient of level 1 (se only)")
    sub.add_argument("--a2", type=float, default=1.0,
                     help="Einstein coefficient of level 2 (se only)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmontyhall",
        description="Noisy quantum Monty Hall game: payoffs, sweeps, verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_payoff = sub.add_parser("payoff", help="evaluate one game, JSON to stdout")
    _add_config_flags(p_payoff)
    p_payoff.add_argument("--gamma", type=_parse_gamma, default=0.0,
                          help="switch/stay mixing angle in radians (or pi/2)")
    p_payoff.set_defaults(handler=_cmd_payoff)

    p_sweep = sub.add_parser("sweep", help="payoff over a (noise, gamma) grid, CSV")
    _add_config_flags(p_sweep)
    p_sweep.add_argument("--noise-range", type=_parse_range, required=True,
                         metavar="LO:HI:STEP")
    p_sweep.add_argument("--gamma-range", type=_parse_range, required=True,
                         metavar="LO:HI:STEP")
    p_sweep.add_argument("--out", default=None, help="write CSV here instead of stdout")
    p_sweep.set_defaults(handler=_cmd_sweep)

    p_verify = sub.add_parser("verify", help="simulation vs closed forms per case")
    p_verify.add_argument("--case", default="all", help="1..7 or 'all'")
    p_verify.add_argument("--noise-range", type=_parse_range, default=None,
                          metavar="LO:HI:STEP")
    p_verify.add_argument("--gamma-range", type=_parse_range, default=None,
                          metavar="LO:HI:STEP")
    p_verify.set_defaults(handler=_cmd_verify)

    p_threshold = sub.add_parser("threshold",
                                 help="noise value where the optimal move flips")
    p_threshold.add_argument("--case", type=int, required=True)
    p_threshold.add_argument("--lo", type=float, default=None)
    p_threshold.add_argument("--hi", type=float, default=None)
    p_threshold.set_defaults(handler=_cmd_threshold)

    p_validate = sub.add_parser("validate-channel",
                                help="Kraus completeness of a noise channel")
    p_validate.add_argument("--channel", choices=("se", "gp"), required=True)
    p_validate.add_argument("--noise", type=float, required=True)
    p_validate.add_argument("--a1", type=float, default=1.0)
    p_validate.add_argument("--a2", type=float, default=1.0)
    p_validate.set_defaults(handler=_cmd_validate_channel)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.handler(args, parser)
    except CliError as err:
        print(f"error: {err}", file=sys.stderr)
        return err.exit_code
    except SystemExit as exc:  # parser.error inside a handler
        return int(exc.code) if exc.code is not None else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
