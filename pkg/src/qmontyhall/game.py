"""Quantum Monty Hall game on three qutrits.

Registers, most significant first: ``o`` the box opened by the host, ``b``
Bob's chosen box, ``a`` the box hiding Alice's prize.  One round runs

    noise -> player unitaries (I x B x A) -> open -> switch or stay -> score

where the final score is the probability that Bob's register matches the
prize register.  Bob mixes his two classical final moves with a parameter
``gamma``: the switch branch carries weight cos(gamma)^2 and the stay
branch sin(gamma)^2, so gamma = 0 is pure switching.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .channels import NoiseSpec, apply_local_sequential, single_channel
from .linalg import STATE_DIM, density_from_pure, kron, unitarity_deviation

# Player matrices must be unitary to within this max-abs tolerance.
STRATEGY_TOL = 1e-9

_SQRT7 = math.sqrt(7.0)
_SQRT2 = math.sqrt(2.0)

# Cyclic shufflings of Bob's three choices.
_M1 = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]], dtype=complex)
_M2 = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=complex)

# Alice's entanglement-breaking counter-strategy.
_H = np.array(
    [
        [1 / _SQRT2, 0.5, 0.5],
        [-0.5, (3 - 1j * _SQRT7) / (4 * _SQRT2), (1 + 1j * _SQRT7) / (4 * _SQRT2)],
        [(-1 - 1j * _SQRT7) / (4 * _SQRT2), (-3 + 1j * _SQRT7) / 8, (5 + 1j * _SQRT7) / 8],
    ]
)


@dataclass(frozen=True)
class StrategyUnitary:
    """A player's move: a 3x3 unitary acting on that player's register."""

    matrix: np.ndarray
    name: str = ""

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (3, 3):
            raise ValueError(f"strategy must be 3x3, got {m.shape}")
        dev = unitarity_deviation(m)
        # "not <=" rather than ">" so non-finite entries fail as well
        if not dev <= STRATEGY_TOL:
            raise ValueError(
                f"strategy {self.name!r} is not unitary (deviation {dev:.3e})"
            )
        object.__setattr__(self, "matrix", m)


_BUILTIN_STRATEGIES = {
    "id": np.eye(3, dtype=complex),
    "identity": np.eye(3, dtype=complex),
    "m1": _M1,
    "m2": _M2,
    "h": _H,
}


def builtin_strategy(name: str) -> StrategyUnitary:
    """One of the named moves: "identity"/"id", "m1", "m2" or "h"."""
    key = name.lower()
    if key not in _BUILTIN_STRATEGIES:
        raise ValueError(f"unknown strategy {name!r}, expected one of "
                         f"{sorted(set(_BUILTIN_STRATEGIES))}")
    return StrategyUnitary(_BUILTIN_STRATEGIES[key], name=key)


def initial_state(which: str) -> np.ndarray:
    """One of the two canonical initial states.

    "psi1": |0> (x) uniform (x) uniform  (separable; amplitude 1/3 on the
    nine kets |0, b, a>).
    "psi2": |0> (x) (|00> + |11> + |22>)/sqrt(3)  (Bob's and Alice's
    registers maximally correlated).
    """
    v = np.zeros(STATE_DIM, dtype=complex)
    if which == "psi1":
        v[:9] = 1.0 / 3.0
    elif which == "psi2":
        v[[0, 4, 8]] = 1.0 / math.sqrt(3.0)
    else:
        raise ValueError(f"unknown initial state {which!r}")
    return v


def _frozen(m: np.ndarray) -> np.ndarray:
    m.setflags(write=False)
    return m


@lru_cache(maxsize=None)
def open_operator() -> np.ndarray:
    """Host's box-opening permutation on |o, b, a>.

    If b != a the host reveals the one box that is neither Bob's choice nor
    the prize: o -> (x + o) mod 3 with x the element of {0,1,2}\\{a, b}.
    If b == a either other box may be revealed; the opened register cycles
    as o -> (o + a + 1) mod 3, which keeps the map a permutation.
    """
    m = np.zeros((STATE_DIM, STATE_DIM), dtype=complex)
    for o in range(3):
        for b in range(3):
            for a in range(3):
                if b != a:
                    x = ({0, 1, 2} - {a, b}).pop()
                    o2 = (x + o) % 3
                else:
                    o2 = (o + a + 1) % 3
                m[9 * o2 + 3 * b + a, 9 * o + 3 * b + a] = 1.0
    return _frozen(m)


@lru_cache(maxsize=None)
def switch_operator() -> np.ndarray:
    """Bob's switching permutation on |o, b, a>.

    When his current choice differs from the opened box he takes the one
    remaining closed box: b -> {0,1,2}\\{o, b}.  When o == b there is no
    well-defined box to switch away from and the state is left unchanged,
    which makes the operator an involution.
    """
    m = np.zeros((STATE_DIM, STATE_DIM), dtype=complex)
    for o in range(3):
        for b in range(3):
            for a in range(3):
                b2 = ({0, 1, 2} - {o, b}).pop() if o != b else b
                m[9 * o + 3 * b2 + a, 9 * o + 3 * b + a] = 1.0
    return _frozen(m)


@lru_cache(maxsize=None)
def win_projector() -> np.ndarray:
    """Diagonal projector onto the nine winning basis states (b == a)."""
    m = np.zeros((STATE_DIM, STATE_DIM), dtype=complex)
    for o in range(3):
        for b in range(3):
            m[9 * o + 3 * b + b, 9 * o + 3 * b + b] = 1.0
    return _frozen(m)


@dataclass(frozen=True)
class GameConfig:
    """Everything that determines one round: initial state ("psi1", "psi2"
    or a custom normalised 27-dim vector), both players' unitaries, the
    noise to apply first, and the switch/stay mixing angle gamma."""

    initial: str | np.ndarray
    alice: StrategyUnitary
    bob: StrategyUnitary
    noise: NoiseSpec
    gamma: float

    def __post_init__(self):
        if not 0.0 <= self.gamma <= math.pi / 2 + 1e-12:
            raise ValueError(f"gamma={self.gamma} outside [0, pi/2]")
        if isinstance(self.initial, str):
            if self.initial not in ("psi1", "psi2"):
                raise ValueError(f"unknown initial state {self.initial!r}")
        else:
            v = np.asarray(self.initial, dtype=complex)
            if v.shape != (STATE_DIM,):
                raise ValueError(f"custom state must have dim {STATE_DIM}")
            norm = float(np.linalg.norm(v))
            if not abs(norm - 1.0) <= 1e-12:
                raise ValueError(f"custom state norm {norm} is not 1")
            object.__setattr__(self, "initial", v)

    def initial_vector(self) -> np.ndarray:
        if isinstance(self.initial, str):
            return initial_state(self.initial)
        return self.initial


@dataclass(frozen=True)
class GameOutcome:
    """Expected payoff of one round plus its two pure-branch components;
    payoff == cos(gamma)^2 * p_switch + sin(gamma)^2 * p_not_switch."""

    payoff: float
    p_switch: float
    p_not_switch: float
    gamma: float


def evolve(cfg: GameConfig) -> tuple[np.ndarray, np.ndarray]:
    """Run the full pipeline and return (rho_switch, rho_not_switch)."""
    rho = density_from_pure(cfg.initial_vector())
    noise = single_channel(cfg.noise)
    if noise is not None:
        rho = apply_local_sequential(noise, rho)
    moves = kron(kron(np.eye(3, dtype=complex), cfg.bob.matrix), cfg.alice.matrix)
    g_stay = open_operator() @ moves  # staying is the identity final move
    g_switch = switch_operator() @ g_stay
    rho_s = g_switch @ rho @ g_switch.conj().T
    rho_n = g_stay @ rho @ g_stay.conj().T
    return rho_s, rho_n


def _win_probability(rho: np.ndarray) -> float:
    value = complex(np.trace(win_projector() @ rho))
    if abs(value.imag) > 1e-12:
        raise ValueError(f"win probability has imaginary residue {value.imag:.3e}")
    return value.real


def play(cfg: GameConfig) -> GameOutcome:
    """Evaluate one round; the payoff mixes the two branch probabilities
    with weights cos(gamma)^2 (switch) and sin(gamma)^2 (stay)."""
    rho_s, rho_n = evolve(cfg)
    p_switch = _win_probability(rho_s)
    p_not_switch = _win_probability(rho_n)
    payoff = math.cos(cfg.gamma) ** 2 * p_switch + math.sin(cfg.gamma) ** 2 * p_not_switch
    return GameOutcome(
        payoff=payoff, p_switch=p_switch, p_not_switch=p_not_switch, gamma=cfg.gamma
    )
