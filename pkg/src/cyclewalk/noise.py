"""Mixed-state walk evolution under coin-local noise channels.

Amplitude damping and depolarizing maps act on the coin (polarization)
factor only, tensored with the identity on the position factor.  During a
noisy walk the channel is applied after each optical stage of a step --
once after the coin element and once after the shift stage -- which is the
placement that reproduces the reported per-photon revival probability of
0.97 at gamma_a = 0.0007 over 60 steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .walk import WalkConfig, coin_operator, initial_state, shift_operator

NOISE_KINDS = ("none", "amplitude_damping", "depolarizing")


@dataclass(frozen=True)
class NoiseSpec:
    """A coin-factor noise channel: kind plus strength gamma in [0, 1]."""

    kind: str = "none"
    gamma: float = 0.0

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}; expected one of {NOISE_KINDS}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma}")


def to_density(state: np.ndarray) -> np.ndarray:
    """Rank-1 projector |state><state|."""
    return np.outer(state, state.conj())


def apply_unitary(rho: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Conjugate rho by u."""
    if rho.shape != u.shape:
        raise ValueError(f"shape mismatch: rho {rho.shape} vs u {u.shape}")
    return u @ rho @ u.conj().T


def amplitude_damping_step(rho: np.ndarray, gamma_a: float) -> np.ndarray:
    """Amplitude damping on the coin factor: |1> decays to |0> with weight gamma_a."""
    if not 0.0 <= gamma_a <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma_a}")
    k = rho.shape[0] // 2
    e0 = np.kron(np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma_a)]]), np.eye(k))
    e1 = np.kron(np.array([[0.0, math.sqrt(gamma_a)], [0.0, 0.0]]), np.eye(k))
    return e0 @ rho @ e0.conj().T + e1 @ rho @ e1.conj().T


def depolarizing_step(rho: np.ndarray, gamma_d: float) -> np.ndarray:
    """Coin depolarizing: with weight gamma_d the coin is replaced by I/2,
    keeping the position marginal; the 1-gamma_d branch is untouched."""
    if not 0.0 <= gamma_d <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma_d}")
    k = rho.shape[0] // 2
    coin_traced = np.trace(rho.reshape(2, k, 2, k), axis1=0, axis2=2)
    return (gamma_d / 2.0) * np.kron(np.eye(2), coin_traced) + (1.0 - gamma_d) * rho


def apply_channel(rho: np.ndarray, noise: NoiseSpec) -> np.ndarray:
    if noise.kind == "amplitude_damping":
        return amplitude_damping_step(rho, noise.gamma)
    if noise.kind == "depolarizing":
        return depolarizing_step(rho, noise.gamma)
    return rho


def noisy_step(rho: np.ndarray, config: WalkConfig, noise: NoiseSpec) -> np.ndarray:
    """One noisy walk step: coin, channel, shift, channel."""
    rho = apply_channel(apply_unitary(rho, coin_operator(config)), noise)
    return apply_channel(apply_unitary(rho, shift_operator(config.k)), noise)


def noisy_evolve(
    config: WalkConfig,
    noise: NoiseSpec,
    t: int,
    position: int = 0,
    rho: np.ndarray | None = None,
) -> np.ndarray:
    """Evolve t noisy steps from the localized initial state (or from rho)."""
    if t < 0:
        raise ValueError(f"step count must be nonnegative, got {t}")
    if rho is None:
        rho = to_density(initial_state(config, position))
    for _ in range(t):
        rho = noisy_step(rho, config, noise)
    return rho


def return_probability_noisy(config: WalkConfig, noise: NoiseSpec, t: int) -> float:
    """Population at the starting position (both coin components) after t noisy steps."""
    rho = noisy_evolve(config, noise, t)
    k = config.k
    return float((rho[0, 0] + rho[k, k]).real)
