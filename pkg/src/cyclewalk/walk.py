"""Exact pure-state simulation of coined discrete-time quantum walks on cycle graphs.

A walker lives on the k vertices of a cycle and carries a two-level coin.
States are flat complex vectors of length 2k indexed by coin*k + position.
For specific coin parameters the step operator is a root of the identity
(up to a global phase), so every state revives after a fixed number of
steps; that revival period drives everything else in this package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

DEFAULT_COIN_ANGLE = math.pi / 4

# Max entrywise deviation from the phase-aligned identity accepted as a
# revival.  Well above round-off at t <= 200, well below any near-miss.
RECURRENCE_TOL = 1e-9

# Revival parameters (coin parameter, revival period) for the supported
# cycle lengths.  Irrational values are kept in closed form so the
# revival holds at machine precision.
_REVIVAL_PARAMS = {
    3: (2.0 / 3.0, 8),
    4: ((3.0 - math.sqrt(5.0)) / 8.0, 20),
    5: ((5.0 - math.sqrt(5.0)) / 10.0, 60),
    6: (2.0 * (1.0 - math.cos(math.pi / 7.0)) / 3.0, 28),
    8: (0.5, 24),
    10: ((5.0 - math.sqrt(5.0)) / 10.0, 60),
}


@dataclass(frozen=True)
class WalkConfig:
    """Parameters of one k-cycle walk.

    k:    cycle length (>= 2)
    rho:  coin parameter in [0, 1]
    chi:  initial coin angle; the coin starts in [cos(chi), i sin(chi)]
    t_r:  revival period when known (None otherwise)
    """

    k: int
    rho: float
    chi: float = DEFAULT_COIN_ANGLE
    t_r: int | None = None

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"cycle length must be >= 2, got {self.k}")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"coin parameter must lie in [0, 1], got {self.rho}")
        if self.t_r is not None and self.t_r < 1:
            raise ValueError(f"revival period must be positive, got {self.t_r}")

    @property
    def dim(self) -> int:
        return 2 * self.k

    def require_t_r(self) -> int:
        if self.t_r is None:
            raise ValueError("operation requires a config with t_r set")
        return self.t_r


@dataclass(frozen=True)
class OamLabelMap:
    """Bijection between cycle positions x in {0..k-1} and OAM labels ell.

    Labels satisfy ell = x (mod k) and lie in the window
    [-floor(k/2)+1, floor(k/2)] for even k, [-floor(k/2), floor(k/2)] for odd k.
    """

    k: int

    @property
    def ell_min(self) -> int:
        return -(self.k // 2) + 1 if self.k % 2 == 0 else -(self.k // 2)

    @property
    def ell_max(self) -> int:
        return self.k // 2

    def position_to_oam(self, x: int) -> int:
        ell = x % self.k
        if ell > self.ell_max:
            ell -= self.k
        return ell

    def oam_to_position(self, ell: int) -> int:
        if not self.ell_min <= ell <= self.ell_max:
            raise ValueError(f"OAM label {ell} outside [{self.ell_min}, {self.ell_max}]")
        return ell % self.k

    def labels(self) -> np.ndarray:
        """All labels in ascending order ell_min..ell_max."""
        return np.arange(self.ell_min, self.ell_max + 1)


def coin_block(rho: float) -> np.ndarray:
    """The 2x2 one-parameter coin matrix (unitary and Hermitian)."""
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"coin parameter must lie in [0, 1], got {rho}")
    a = math.sqrt(rho)
    b = math.sqrt(1.0 - rho)
    return np.array([[a, b], [b, -a]], dtype=complex)


def coin_operator(config: WalkConfig) -> np.ndarray:
    """Coin matrix tensored with the identity on the position factor."""
    return np.kron(coin_block(config.rho), np.eye(config.k))


def shift_operator(k: int) -> np.ndarray:
    """Coin-conditioned cyclic shift: coin 0 moves x -> x-1, coin 1 moves x -> x+1."""
    if k < 2:
        raise ValueError(f"cycle length must be >= 2, got {k}")
    s = np.zeros((2 * k, 2 * k), dtype=complex)
    for x in range(k):
        s[(x - 1) % k, x] = 1.0
        s[k + (x + 1) % k, k + x] = 1.0
    return s


@lru_cache(maxsize=64)
def _cached_step(k: int, rho: float) -> np.ndarray:
    u = shift_operator(k) @ np.kron(coin_block(rho), np.eye(k))
    u.setflags(write=False)
    return u


def step_operator(config: WalkConfig) -> np.ndarray:
    """One walk step: shift after coin."""
    return _cached_step(config.k, config.rho)


@lru_cache(maxsize=4096)
def _cached_step_power(k: int, rho: float, t: int) -> np.ndarray:
    u = np.linalg.matrix_power(_cached_step(k, rho), t)
    u.setflags(write=False)
    return u


def step_power(config: WalkConfig, t: int) -> np.ndarray:
    """The t-th power of the step operator, cached per (k, rho, t)."""
    if t < 0:
        raise ValueError(f"step count must be nonnegative, got {t}")
    return _cached_step_power(config.k, config.rho, t)


def initial_state(config: WalkConfig, position: int = 0) -> np.ndarray:
    """Walker localized at `position` with coin [cos(chi), i sin(chi)]."""
    if not 0 <= position < config.k:
        raise IndexError(f"position {position} outside 0..{config.k - 1}")
    state = np.zeros(config.dim, dtype=complex)
    state[position] = math.cos(config.chi)
    state[config.k + position] = 1j * math.sin(config.chi)
    return state


def evolve(state: np.ndarray, config: WalkConfig, t: int) -> np.ndarray:
    """Apply t walk steps by sequential matrix-vector products."""
    if t < 0:
        raise ValueError(f"step count must be nonnegative, got {t}")
    if state.shape != (config.dim,):
        raise ValueError(f"state has shape {state.shape}, expected ({config.dim},)")
    u = step_operator(config)
    out = np.array(state, dtype=complex)
    for _ in range(t):
        out = u @ out
    return out


def position_distribution(state: np.ndarray) -> np.ndarray:
    """Measurement distribution over positions, coin traced out."""
    k = state.shape[0] // 2
    return np.abs(state[:k]) ** 2 + np.abs(state[k:]) ** 2


def return_probability(config: WalkConfig, t: int) -> float:
    """Probability of finding the walker back at its starting position after t steps."""
    state = evolve(initial_state(config, 0), config, t)
    return float(position_distribution(state)[0])


def phase_aligned_identity_distance(u: np.ndarray) -> float:
    """Max entrywise deviation of u from exp(i*theta)*I, theta taken from
    the largest-magnitude diagonal entry."""
    diag = np.diag(u)
    pivot = diag[np.argmax(np.abs(diag))]
    if abs(pivot) == 0.0:
        return float("inf")
    phase = pivot / abs(pivot)
    return float(np.max(np.abs(u / phase - np.eye(u.shape[0]))))


def find_recurrence(config: WalkConfig, t_max: int) -> int | None:
    """Smallest t <= t_max with step^t proportional to the identity, else None.

    The criterion is operator-level, so it is independent of the initial
    state (and of chi in particular).
    """
    if t_max < 1:
        raise ValueError(f"t_max must be >= 1, got {t_max}")
    u = step_operator(config)
    for t in range(1, t_max + 1):
        if phase_aligned_identity_distance(np.linalg.matrix_power(u, t)) < RECURRENCE_TOL:
            return t
    return None


def known_cycle_params(k: int) -> tuple[float, int]:
    """Revival pair (rho, t_r) for the supported cycle lengths."""
    try:
        return _REVIVAL_PARAMS[k]
    except KeyError:
        raise ValueError(
            f"no revival parameters known for k={k}; supported: {sorted(_REVIVAL_PARAMS)}"
        ) from None


def known_cycle_config(k: int, chi: float = DEFAULT_COIN_ANGLE) -> WalkConfig:
    """WalkConfig preloaded with the known revival parameters for k."""
    rho, t_r = known_cycle_params(k)
    return WalkConfig(k=k, rho=rho, chi=chi, t_r=t_r)


SUPPORTED_CYCLES = tuple(sorted(_REVIVAL_PARAMS))
