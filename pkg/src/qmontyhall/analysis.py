"""Payoff analysis: closed-form references, sweeps, optima and thresholds.

Seven named configurations (cases 1..4 under spontaneous emission, 5..7
under generalized Pauli noise) each come with a closed-form payoff in the
noise parameter and the mixing angle gamma.  The closed forms act as
oracles for the matrix-pipeline simulation and vice versa; `verify_case`
binds the two together on a grid.

Every case's payoff is of the form c0 + c1 * cos(2*gamma) at fixed noise,
so the optimal classical move is read off the sign of c1: positive means
switch (gamma = 0), negative means stay (gamma = pi/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy.optimize import bisect

from .channels import NoiseSpec
from .game import GameConfig, builtin_strategy, play
from .linalg import FORMULA_TOL


class NoSignChangeError(ValueError):
    """The bisection bracket does not straddle a strategy crossover."""


def _se_case(c1_of_t: Callable[[float], float]) -> Callable[[float, float], float]:
    # all spontaneous-emission payoffs share the shape (3 + c1(t) cos 2g)/6;
    # c1 is written in powers of e^-t so large t cannot overflow
    def payoff(t: float, gamma: float) -> float:
        return (3.0 + c1_of_t(math.exp(-t)) * math.cos(2.0 * gamma)) / 6.0

    return payoff


_CASE_FORMULAS: dict[int, Callable[[float, float], float]] = {
    1: _se_case(lambda u: -4.0 * u * u + 8.0 * u - 3.0),
    2: _se_case(lambda u: 2.0 * u * u - 4.0 * u + 3.0),
    3: _se_case(lambda u: -8.0 * u * u + 8.0 * u - 3.0),
    4: _se_case(lambda u: 2.0 * (u - u * u)),
    5: lambda p, g: ((1.0 - p) * math.cos(2.0 * g) + 3.0 - p) / 6.0,
    6: lambda p, g: (
        2.0 * p**3
        - 4.0 * p**2
        + (2.0 * p**3 - 8.0 * p**2 + 9.0 * p - 3.0) * math.cos(2.0 * g)
        + p
        + 3.0
    )
    / 6.0,
    7: lambda p, g: (
        p**3
        + (p**2 - 4.0 * p + 3.0) * p * math.cos(2.0 * g)
        - 2.0 * p**2
        - p
        + 6.0
    )
    / 12.0,
}


@dataclass(frozen=True)
class CaseSpec:
    """One named configuration: initial state, both strategies, noise family
    and the closed-form payoff(noise, gamma)."""

    id: int
    initial: str
    alice: str
    bob: str
    channel_kind: str  # "se" or "gp"
    formula: Callable[[float, float], float]


CASES: dict[int, CaseSpec] = {
    1: CaseSpec(1, "psi1", "id", "id", "se", _CASE_FORMULAS[1]),
    2: CaseSpec(2, "psi1", "id", "m1", "se", _CASE_FORMULAS[2]),
    3: CaseSpec(3, "psi2", "id", "id", "se", _CASE_FORMULAS[3]),
    4: CaseSpec(4, "psi2", "h", "id", "se", _CASE_FORMULAS[4]),
    # case 5 applies equally with bob = id, m1 or m2; id is canonical
    5: CaseSpec(5, "psi1", "id", "id", "gp", _CASE_FORMULAS[5]),
    6: CaseSpec(6, "psi2", "id", "id", "gp", _CASE_FORMULAS[6]),
    7: CaseSpec(7, "psi2", "h", "id", "gp", _CASE_FORMULAS[7]),
}


def _check_case_domain(case: int, noise: float, gamma: float) -> CaseSpec:
    if case not in CASES:
        raise ValueError(f"case {case} out of range 1..7")
    spec = CASES[case]
    if spec.channel_kind == "se":
        if not (math.isfinite(noise) and noise >= 0):
            raise ValueError(f"case {case} takes a finite time t >= 0, got {noise}")
    elif not 0.0 <= noise <= 1.0:
        raise ValueError(f"case {case} takes a probability p in [0, 1], got {noise}")
    if not 0.0 <= gamma <= math.pi / 2 + 1e-12:
        raise ValueError(f"gamma={gamma} outside [0, pi/2]")
    return spec


def closed_form_payoff(case: int, noise: float, gamma: float) -> float:
    """Evaluate the case's closed-form payoff."""
    spec = _check_case_domain(case, noise, gamma)
    return spec.formula(noise, gamma)


def case_config(case: int, noise: float, gamma: float, bob: str | None = None) -> GameConfig:
    """The GameConfig a case denotes; ``bob`` overrides the canonical Bob
    move (case 5 accepts id, m1 or m2 interchangeably)."""
    spec = _check_case_domain(case, noise, gamma)
    if spec.channel_kind == "se":
        noise_spec = NoiseSpec.spontaneous_emission(noise)
    else:
        noise_spec = NoiseSpec.generalized_pauli(noise)
    return GameConfig(
        initial=spec.initial,
        alice=builtin_strategy(spec.alice),
        bob=builtin_strategy(bob if bob is not None else spec.bob),
        noise=noise_spec,
        gamma=gamma,
    )


def simulate_case(case: int, noise: float, gamma: float) -> float:
    """Run the case through the full matrix pipeline and return the payoff."""
    return play(case_config(case, noise, gamma)).payoff


def classical_reference(switch: bool) -> Fraction:
    """Exact classical payoff by enumerating the 9 equally likely
    (prize, first choice) pairs; the host opens a non-prize, non-chosen box
    (either of the two when Bob starts on the prize)."""
    total = Fraction(0)
    for prize in range(3):
        for choice in range(3):
            host_options = [d for d in range(3) if d != prize and d != choice]
            wins = Fraction(0)
            for opened in host_options:
                final = choice
                if switch:
                    final = next(d for d in range(3) if d != choice and d != opened)
                wins += Fraction(int(final == prize), len(host_options))
            total += wins / 9
    return total


def gamma_coefficients(
    payoff: Callable[[float], float],
    check_gamma: float = 1.0,
    tol: float = 1e-10,
) -> tuple[float, float]:
    """Fit payoff(gamma) = c0 + c1 * cos(2*gamma) from two evaluations.

    c0 is the payoff at gamma = pi/4, c1 the gamma = 0 payoff minus c0.  The
    fit is re-checked at ``check_gamma``; a failure there means the payoff
    does not lie in the cos(2*gamma) family and is reported as an error.
    """
    c0 = payoff(math.pi / 4)
    c1 = payoff(0.0) - c0
    residual = abs(c0 + c1 * math.cos(2.0 * check_gamma) - payoff(check_gamma))
    if residual > tol:
        raise ValueError(
            f"payoff is not of the form c0 + c1*cos(2*gamma): "
            f"residual {residual:.3e} at gamma={check_gamma}"
        )
    return c0, c1


def optimal_gamma(c1: float, tol: float = 1e-12) -> tuple[float, str]:
    """Best pure classical move given the cos(2*gamma) coefficient.

    Positive c1 favours gamma = 0 (switch), negative favours gamma = pi/2
    (stay); |c1| <= tol means the payoff does not depend on gamma.
    """
    if c1 > tol:
        return 0.0, "switch"
    if c1 < -tol:
        return math.pi / 2, "not_switch"
    return 0.0, "indifferent"


def case_mixing_coefficient(case: int, noise: float) -> float:
    """c1 of the case at the given noise, extracted from simulation."""
    return gamma_coefficients(lambda g: simulate_case(case, noise, g))[1]


def threshold(case: int, lo: float, hi: float) -> float:
    """Noise value where the optimal classical move flips, by bisection on
    the simulated cos(2*gamma) coefficient.  Requires a sign change over
    [lo, hi]."""
    f = lambda x: case_mixing_coefficient(case, x)
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise NoSignChangeError(
            f"case {case}: no sign change of the mixing coefficient on "
            f"[{lo}, {hi}] (c1({lo})={f_lo:.3e}, c1({hi})={f_hi:.3e})"
        )
    return float(bisect(f, lo, hi, xtol=1e-10))


@dataclass(frozen=True)
class SweepTable:
    """Payoffs on a (noise, gamma) grid, rows in noise-major order."""

    noise_values: tuple[float, ...]
    gamma_values: tuple[float, ...]
    rows: tuple[tuple[float, float, float], ...]

    def __post_init__(self):
        if len(self.rows) != len(self.noise_values) * len(self.gamma_values):
            raise ValueError("row count does not match the grid")
        for _, _, payoff in self.rows:
            if not -1e-12 <= payoff <= 1.0 + 1e-12:
                raise ValueError(f"payoff {payoff} outside [0, 1]")


def _check_grid(values, name: str) -> tuple[float, ...]:
    values = tuple(float(v) for v in values)
    if not values:
        raise ValueError(f"empty {name} grid")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError(f"{name} grid must be strictly ascending")
    return values


def sweep(
    target: int | Callable[[float, float], float],
    noise_values,
    gamma_values,
) -> SweepTable:
    """Evaluate a case (by id) or an arbitrary payoff(noise, gamma) callable
    over the grid."""
    noise_values = _check_grid(noise_values, "noise")
    gamma_values = _check_grid(gamma_values, "gamma")
    if isinstance(target, int):
        payoff = lambda x, g: simulate_case(target, x, g)
    else:
        payoff = target
    rows = tuple(
        (x, g, payoff(x, g)) for x in noise_values for g in gamma_values
    )
    return SweepTable(noise_values=noise_values, gamma_values=gamma_values, rows=rows)


@dataclass(frozen=True)
class VerifyReport:
    case: int
    max_abs_error: float
    tol: float
    passed: bool
    points: int


def default_noise_grid(case: int) -> np.ndarray:
    """21 evenly spaced noise values over the case's domain."""
    if case not in CASES:
        raise ValueError(f"case {case} out of range 1..7")
    upper = 3.0 if CASES[case].channel_kind == "se" else 1.0
    return np.linspace(0.0, upper, 21)


def default_gamma_grid() -> np.ndarray:
    return np.linspace(0.0, math.pi / 2, 21)


def verify_case(
    case: int,
    noise_values=None,
    gamma_values=None,
    simulate: Callable[[int, float, float], float] = simulate_case,
    tol: float = FORMULA_TOL,
) -> VerifyReport:
    """Max |simulated - closed form| over the grid, pass/fail at ``tol``.

    ``simulate`` is injectable so negative controls (deliberately wrong
    configurations) can be pushed through the same report path.
    """
    if noise_values is None:
        noise_values = default_noise_grid(case)
    if gamma_values is None:
        gamma_values = default_gamma_grid()
    worst = 0.0
    points = 0
    for x in noise_values:
        for g in gamma_values:
            worst = max(worst, abs(simulate(case, x, g) - closed_form_payoff(case, x, g)))
            points += 1
    return VerifyReport(
        case=case, max_abs_error=worst, tol=tol, passed=worst <= tol, points=points
    )
