"""Noisy quantum Monty Hall game on three qutrits.

Simulates the three-register (opened box, Bob's choice, prize) game under
spontaneous-emission and generalized-Pauli noise, and verifies the
simulated payoffs against closed-form references.
"""

from .analysis import (
    CASES,
    CaseSpec,
    NoSignChangeError,
    SweepTable,
    VerifyReport,
    case_config,
    classical_reference,
    closed_form_payoff,
    gamma_coefficients,
    optimal_gamma,
    simulate_case,
    sweep,
    threshold,
    verify_case,
)
from .channels import (
    CptpReport,
    KrausChannel,
    NoiseSpec,
    apply,
    apply_local_sequential,
    extend_three,
    gp_single,
    se_single,
    validate_cptp,
)
from .game import (
    GameConfig,
    GameOutcome,
    StrategyUnitary,
    builtin_strategy,
    evolve,
    initial_state,
    open_operator,
    play,
    switch_operator,
    win_projector,
)

__version__ = "0.1.0"

__all__ = [
    "CASES",
    "CaseSpec",
    "CptpReport",
    "GameConfig",
    "GameOutcome",
    "KrausChannel",
    "NoSignChangeError",
    "NoiseSpec",
    "StrategyUnitary",
    "SweepTable",
    "VerifyReport",
    "apply",
    "apply_local_sequential",
    "builtin_strategy",
    "case_config",
    "classical_reference",
    "closed_form_payoff",
    "evolve",
    "extend_three",
    "gamma_coefficients",
    "gp_single",
    "initial_state",
    "open_operator",
    "optimal_gamma",
    "play",
    "se_single",
    "simulate_case",
    "sweep",
    "switch_operator",
    "threshold",
    "validate_cptp",
    "verify_case",
    "win_projector",
]
