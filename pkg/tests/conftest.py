import math

import numpy as np
import pytest
from scipy.linalg import expm

from qmontyhall.channels import NoiseSpec
from qmontyhall.game import GameConfig, StrategyUnitary
from qmontyhall.linalg import STATE_DIM

SEED = 20260810


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def random_unitary(rng, dim: int) -> np.ndarray:
    """Unitary from the exponential of a random Hermitian matrix."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return expm(1j * (g + g.conj().T) / 2)


def random_density(rng, dim: int) -> np.ndarray:
    """Random full-rank density matrix (normalised Wishart)."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_config(rng, gamma=None) -> GameConfig:
    """Game config with random state, strategies, noise family and mixing."""
    roll = rng.integers(0, 3)
    if roll == 0:
        initial = "psi1"
    elif roll == 1:
        initial = "psi2"
    else:
        v = rng.normal(size=STATE_DIM) + 1j * rng.normal(size=STATE_DIM)
        initial = v / np.linalg.norm(v)
    kind = rng.integers(0, 3)
    if kind == 0:
        noise = NoiseSpec.none()
    elif kind == 1:
        noise = NoiseSpec.spontaneous_emission(float(rng.uniform(0.0, 3.0)))
    else:
        noise = NoiseSpec.generalized_pauli(float(rng.uniform(0.0, 1.0)))
    return GameConfig(
        initial=initial,
        alice=StrategyUnitary(random_unitary(rng, 3), name="random-a"),
        bob=StrategyUnitary(random_unitary(rng, 3), name="random-b"),
        noise=noise,
        gamma=float(rng.uniform(0.0, math.pi / 2)) if gamma is None else gamma,
    )


def with_gamma(cfg: GameConfig, gamma: float) -> GameConfig:
    return GameConfig(
        initial=cfg.initial, alice=cfg.alice, bob=cfg.bob, noise=cfg.noise, gamma=gamma
    )
