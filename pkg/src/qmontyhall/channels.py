"""Qutrit noise channels in Kraus form.

Two families are provided:

* spontaneous emission ``SE(t)``: excited levels |1> and |2> decay to the
  ground level |0> at rates set by two Einstein coefficients, parametrised
  by time ``t >= 0``;
* generalized Pauli ``GP(p)``: random applications of the qutrit shift and
  clock unitaries with error probability ``p in [0, 1]``; at ``p = 1`` every
  input is mapped to the maximally mixed state.

Single-qutrit channels extend to the full three-register space either by
forming all triple Kronecker products of Kraus elements (`extend_three`) or,
equivalently and much cheaper, by acting on one register at a time
(`apply_local_sequential`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import STRUCTURAL_TOL, QUTRIT_DIM, STATE_DIM, kron

# Qutrit shift (cyclic permutation of the basis) and clock (third-root-of-
# unity phases): the generators of the generalized Pauli family.
SHIFT = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]], dtype=complex)
CLOCK = np.diag([1.0, np.exp(2j * np.pi / 3), np.exp(4j * np.pi / 3)])


@dataclass(frozen=True)
class KrausChannel:
    """A quantum channel as a finite list of same-dimension Kraus elements.

    Completeness (sum of K†K equal to the identity) is what makes the list
    trace preserving; it is checked by `validate_cptp`, not at construction,
    so deliberately broken channels can be built in tests.
    """

    dim: int
    elements: tuple[np.ndarray, ...]
    label: str = ""

    def __post_init__(self):
        if not self.elements:
            raise ValueError("a channel needs at least one Kraus element")
        for k in self.elements:
            if k.shape != (self.dim, self.dim):
                raise ValueError(
                    f"Kraus element of shape {k.shape} in a dim-{self.dim} channel"
                )

    def completeness_deviation(self) -> float:
        """Max-abs entry of (sum of K†K) - I."""
        acc = np.zeros((self.dim, self.dim), dtype=complex)
        for k in self.elements:
            acc += k.conj().T @ k
        return float(np.abs(acc - np.eye(self.dim)).max())


@dataclass(frozen=True)
class NoiseSpec:
    """Which noise family to apply, and its parameters.

    kind is one of "none", "se" (spontaneous emission, parameter ``t`` plus
    Einstein coefficients ``a1``, ``a2``) or "gp" (generalized Pauli,
    parameter ``p``).
    """

    kind: str
    t: float = 0.0
    p: float = 0.0
    a1: float = 1.0
    a2: float = 1.0

    def __post_init__(self):
        if self.kind not in ("none", "se", "gp"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        # comparisons are written so NaN parameters fail them too
        if self.kind == "se":
            if not (math.isfinite(self.t) and self.t >= 0):
                raise ValueError(f"time t={self.t} must be non-negative")
            if not (self.a1 > 0 and self.a2 > 0):
                raise ValueError("Einstein coefficients must be positive")
        if self.kind == "gp" and not 0.0 <= self.p <= 1.0:
            raise ValueError(f"error probability p={self.p} outside [0, 1]")

    @classmethod
    def none(cls) -> "NoiseSpec":
        return cls(kind="none")

    @classmethod
    def spontaneous_emission(cls, t: float, a1: float = 1.0, a2: float = 1.0) -> "NoiseSpec":
        return cls(kind="se", t=t, a1=a1, a2=a2)

    @classmethod
    def generalized_pauli(cls, p: float) -> "NoiseSpec":
        return cls(kind="gp", p=p)


def se_single(t: float, a1: float = 1.0, a2: float = 1.0) -> KrausChannel:
    """Single-qutrit spontaneous emission channel at time ``t``.

    Kraus elements: K0 = diag(1, e^(-t*a1/2), e^(-t*a2/2)),
    K1 = sqrt(1 - e^(-t*a1)) |0><1|, K2 = sqrt(1 - e^(-t*a2)) |0><2|.
    """
    if not (math.isfinite(t) and t >= 0):
        raise ValueError(f"time t={t} must be non-negative")
    if not (a1 > 0 and a2 > 0):
        raise ValueError("Einstein coefficients must be positive")
    k0 = np.diag([1.0, math.exp(-t * a1 / 2), math.exp(-t * a2 / 2)]).astype(complex)
    k1 = np.zeros((3, 3), dtype=complex)
    k1[0, 1] = math.sqrt(1.0 - math.exp(-t * a1))
    k2 = np.zeros((3, 3), dtype=complex)
    k2[0, 2] = math.sqrt(1.0 - math.exp(-t * a2))
    return KrausChannel(QUTRIT_DIM, (k0, k1, k2), label=f"SE(t={t:g})")


def gp_single(p: float) -> KrausChannel:
    """Single-qutrit generalized Pauli channel with error probability ``p``.

    Nine elements sqrt(P_ij) * SHIFT^i @ CLOCK^j in lexicographic (i, j)
    order, with P_00 = 1 - 8p/9 and P_ij = p/9 otherwise.  Zero-weight
    elements are kept so the list shape is uniform.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"error probability p={p} outside [0, 1]")
    shift_powers = [np.linalg.matrix_power(SHIFT, i) for i in range(3)]
    clock_powers = [np.linalg.matrix_power(CLOCK, j) for j in range(3)]
    elements = []
    for i in range(3):
        for j in range(3):
            weight = 1.0 - 8.0 * p / 9.0 if (i, j) == (0, 0) else p / 9.0
            elements.append(math.sqrt(weight) * (shift_powers[i] @ clock_powers[j]))
    return KrausChannel(QUTRIT_DIM, tuple(elements), label=f"GP(p={p:g})")


def identity_channel(dim: int = QUTRIT_DIM) -> KrausChannel:
    return KrausChannel(dim, (np.eye(dim, dtype=complex),), label="identity")


def extend_three(single: KrausChannel) -> KrausChannel:
    """Lift a single-qutrit channel to the three-register space.

    Elements are all triple Kronecker products K_i1 (x) K_i2 (x) K_i3,
    enumerated lexicographically in (i1, i2, i3); for n single-qutrit
    elements the extension has n**3.
    """
    if single.dim != QUTRIT_DIM:
        raise ValueError(f"can only extend a single-qutrit channel, got dim {single.dim}")
    elements = tuple(
        kron(kron(k1, k2), k3)
        for k1 in single.elements
        for k2 in single.elements
        for k3 in single.elements
    )
    return KrausChannel(STATE_DIM, elements, label=f"{single.label} x3")


def apply(ch: KrausChannel, rho: np.ndarray) -> np.ndarray:
    """Channel action: sum of K @ rho @ K†."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (ch.dim, ch.dim):
        raise ValueError(f"state of shape {rho.shape} under a dim-{ch.dim} channel")
    out = np.zeros_like(rho)
    for k in ch.elements:
        out += k @ rho @ k.conj().T
    return out


def _lift(k: np.ndarray, register: int) -> np.ndarray:
    """Embed a 3x3 operator acting on one register of the 27-dim space."""
    eye3 = np.eye(3, dtype=complex)
    factors = [eye3, eye3, eye3]
    factors[register] = k
    return kron(kron(factors[0], factors[1]), factors[2])


def apply_local_sequential(single: KrausChannel, rho: np.ndarray) -> np.ndarray:
    """Apply a single-qutrit channel independently to each of the three
    registers.

    Equals ``apply(extend_three(single), rho)`` but touches 3n lifted
    elements instead of n**3 triple products.
    """
    if single.dim != QUTRIT_DIM:
        raise ValueError(f"expected a single-qutrit channel, got dim {single.dim}")
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (STATE_DIM, STATE_DIM):
        raise ValueError(f"expected a {STATE_DIM}x{STATE_DIM} state, got {rho.shape}")
    for register in range(3):
        lifted = [_lift(k, register) for k in single.elements]
        rho = sum(kk @ rho @ kk.conj().T for kk in lifted)
    return rho


@dataclass(frozen=True)
class CptpReport:
    label: str
    max_deviation: float
    tol: float
    passed: bool


def validate_cptp(ch: KrausChannel, tol: float = STRUCTURAL_TOL) -> CptpReport:
    """Check the completeness relation sum(K†K) = I to ``tol``."""
    dev = ch.completeness_deviation()
    return CptpReport(label=ch.label, max_deviation=dev, tol=tol, passed=dev <= tol)


def single_channel(spec: NoiseSpec) -> KrausChannel | None:
    """The single-qutrit channel described by ``spec`` (None when noiseless)."""
    if spec.kind == "none":
        return None
    if spec.kind == "se":
        return se_single(spec.t, spec.a1, spec.a2)
    return gp_single(spec.p)
