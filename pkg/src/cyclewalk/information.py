"""Entropy and correlation measures for the walk, plus the eavesdropper's
classical joint distribution over (OAM label, step count).

All logarithms are base 2; results are in bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .walk import OamLabelMap, WalkConfig, evolve, initial_state, position_distribution

# Eigenvalues below this are treated as exact zeros before taking logs.
_EIG_CLAMP = 1e-12


def _check_hermitian(rho: np.ndarray, tol: float = 1e-8) -> None:
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("density matrix is not Hermitian")


def von_neumann_entropy(rho: np.ndarray) -> float:
    """-sum(lambda log2 lambda) over eigenvalues, with 0 log 0 := 0."""
    _check_hermitian(rho)
    lam = np.linalg.eigvalsh(rho)
    lam = lam[lam > _EIG_CLAMP]
    return float(-(lam * np.log2(lam)).sum())


def reduced_coin(rho: np.ndarray) -> np.ndarray:
    """Partial trace over the position factor -> 2x2."""
    k = rho.shape[0] // 2
    return np.trace(rho.reshape(2, k, 2, k), axis1=1, axis2=3)


def reduced_position(rho: np.ndarray) -> np.ndarray:
    """Partial trace over the coin factor -> k x k."""
    k = rho.shape[0] // 2
    return np.trace(rho.reshape(2, k, 2, k), axis1=0, axis2=2)


def mutual_information_quantum(rho: np.ndarray) -> float:
    """S(coin) + S(position) - S(joint), in bits."""
    return (
        von_neumann_entropy(reduced_coin(rho))
        + von_neumann_entropy(reduced_position(rho))
        - von_neumann_entropy(rho)
    )


def negativity(rho: np.ndarray) -> float:
    """Sum of |negative eigenvalues| of the partial transpose over the coin factor."""
    k = rho.shape[0] // 2
    pt = np.transpose(rho.reshape(2, k, 2, k), (2, 1, 0, 3)).reshape(2 * k, 2 * k)
    lam = np.linalg.eigvalsh(pt)
    return float(-lam[lam < 0].sum())


@dataclass(frozen=True)
class JointDistribution:
    """P(ell, t) over OAM labels (rows, ascending ell) and step counts (columns).

    Columns are the walk's position distributions at steps 1..t_r-1, each
    weighted by the uniform step prior 1/(t_r-1), so the table sums to 1
    and every column sums to 1/(t_r-1).  Step counts appear in the source
    analysis as 1-based labels 2..t_r.
    """

    table: np.ndarray  # shape (k, t_r - 1)
    config: WalkConfig
    label_map: OamLabelMap

    @property
    def steps(self) -> np.ndarray:
        return np.arange(1, self.config.require_t_r())

    @property
    def labels(self) -> np.ndarray:
        return self.label_map.labels()


def joint_distribution(config: WalkConfig, start_ell: int | None = None) -> JointDistribution:
    """Joint law of (measured OAM label, step count) for a uniformly random
    number of steps.

    The walker starts at the label `start_ell` (default ell_min, the
    convention under which the reference table's P(ell_min) is the marginal
    at the initial label).
    """
    t_r = config.require_t_r()
    lmap = OamLabelMap(config.k)
    if start_ell is None:
        start_ell = lmap.ell_min
    state = initial_state(config, lmap.oam_to_position(start_ell))
    # row order ell_min..ell_max -> positions via the label map
    rows = [lmap.oam_to_position(ell) for ell in lmap.labels()]
    cols = []
    for _ in range(1, t_r):
        state = evolve(state, config, 1)
        cols.append(position_distribution(state)[rows])
    table = np.array(cols).T / (t_r - 1)
    return JointDistribution(table=table, config=config, label_map=lmap)


def marginal_oam(joint: JointDistribution) -> np.ndarray:
    """P(ell) = sum_t P(ell, t), ordered ell_min..ell_max."""
    return joint.table.sum(axis=1)


def marginal_steps(joint: JointDistribution) -> np.ndarray:
    """P(t) = sum_ell P(ell, t); uniform 1/(t_r-1) by construction."""
    return joint.table.sum(axis=0)


def classical_mutual_information(table: np.ndarray) -> float:
    """I(ell; t) in bits for a joint probability table."""
    p_row = table.sum(axis=1)
    p_col = table.sum(axis=0)
    mask = table > 0
    ratio = table[mask] / np.outer(p_row, p_col)[mask]
    return float((table[mask] * np.log2(ratio)).sum())


def eve_mutual_information(joint: JointDistribution) -> float:
    """Information an interceptor gains about the OAM label from the step count."""
    return classical_mutual_information(joint.table)


def scan_reference_coin_angle(
    candidates: tuple[float, ...] = (0.0, np.pi / 4, np.pi / 2),
    tol: float = 1e-5,
) -> tuple[float, float]:
    """Scan initial coin angles against the six reference (P(ell_min), I) pairs.

    Returns (best chi, worst absolute deviation over the 12 targets).
    """
    from .walk import SUPPORTED_CYCLES, known_cycle_config

    targets = REFERENCE_TABLE
    best_chi, best_dev = candidates[0], np.inf
    for chi in candidates:
        dev = 0.0
        for k in SUPPORTED_CYCLES:
            joint = joint_distribution(known_cycle_config(k, chi=chi))
            p_ref, i_ref = targets[k]
            p_lmin = marginal_oam(joint)[0]
            dev = max(dev, abs(p_lmin - p_ref), abs(eve_mutual_information(joint) - i_ref))
        if dev < best_dev:
            best_chi, best_dev = chi, dev
    return best_chi, best_dev


# Reference (P(ell_min), I) pairs for the supported cycles, reproduced by
# chi = pi/4 (see scan_reference_coin_angle).
REFERENCE_TABLE = {
    3: (0.238095, 0.174429),
    4: (0.210526, 1.175981),
    5: (0.186441, 0.358934),
    6: (0.220722, 1.218855),
    8: (0.108696, 1.281487),
    10: (0.131488, 1.317215),
}
