import math

import numpy as np
import pytest

from cyclewalk import noise, walk


def _random_density(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def test_to_density_basis_state():
    state = np.zeros(6, dtype=complex)
    state[2] = 1.0
    rho = noise.to_density(state)
    assert rho[2, 2] == 1.0 and np.trace(rho) == pytest.approx(1.0)


def test_to_density_coin_superposition_block():
    # (|0> + |1>)/sqrt(2) coin at position 0 of a 2-cycle
    state = np.zeros(4, dtype=complex)
    state[0] = state[2] = 1 / math.sqrt(2)
    rho = noise.to_density(state)
    block = rho[np.ix_([0, 2], [0, 2])]
    assert np.allclose(block, np.full((2, 2), 0.5))


def test_to_density_is_pure():
    rng = np.random.default_rng(0)
    state = rng.normal(size=10) + 1j * rng.normal(size=10)
    state /= np.linalg.norm(state)
    rho = noise.to_density(state)
    assert np.trace(rho @ rho).real == pytest.approx(1.0, abs=1e-10)


def test_apply_unitary_identity_and_trace():
    rng = np.random.default_rng(1)
    rho = _random_density(rng, 10)
    assert np.allclose(noise.apply_unitary(rho, np.eye(10)), rho)
    u = walk.step_operator(walk.known_cycle_config(5))
    out = noise.apply_unitary(rho, u)
    assert np.trace(out).real == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(np.sort(np.linalg.eigvalsh(out)), np.sort(np.linalg.eigvalsh(rho)), atol=1e-10)


def test_apply_unitary_shape_mismatch():
    with pytest.raises(ValueError):
        noise.apply_unitary(np.eye(4), np.eye(6))


def test_apply_unitary_matches_pure_evolution():
    cfg = walk.known_cycle_config(5)
    u = walk.step_operator(cfg)
    psi = walk.initial_state(cfg, 0)
    rho = noise.to_density(psi)
    for _ in range(60):
        rho = noise.apply_unitary(rho, u)
    assert np.allclose(rho, noise.to_density(walk.evolve(psi, cfg, 60)), atol=1e-9)


def test_amplitude_damping_limits():
    rng = np.random.default_rng(2)
    rho = _random_density(rng, 10)
    assert np.allclose(noise.amplitude_damping_step(rho, 0.0), rho)
    # full decay: coin reduced state collapses to |0><0|
    out = noise.amplitude_damping_step(rho, 1.0)
    coin = np.trace(out.reshape(2, 5, 2, 5), axis1=1, axis2=3)
    assert np.allclose(coin, np.diag([1.0, 0.0]), atol=1e-12)


def test_amplitude_damping_half_on_coin_one():
    # coin |1><1| at a fixed position
    state = np.zeros(10, dtype=complex)
    state[5] = 1.0
    out = noise.amplitude_damping_step(noise.to_density(state), 0.5)
    coin = np.trace(out.reshape(2, 5, 2, 5), axis1=1, axis2=3)
    assert np.allclose(coin, np.diag([0.5, 0.5]), atol=1e-12)
    assert np.trace(out).real == pytest.approx(1.0, abs=1e-12)


def test_depolarizing_limits():
    rng = np.random.default_rng(3)
    rho = _random_density(rng, 10)
    assert np.allclose(noise.depolarizing_step(rho, 0.0), rho)
    out = noise.depolarizing_step(rho, 1.0)
    coin = np.trace(out.reshape(2, 5, 2, 5), axis1=1, axis2=3)
    assert np.allclose(coin, np.eye(2) / 2, atol=1e-12)


def test_depolarizing_half_on_coin_zero():
    state = np.zeros(10, dtype=complex)
    state[0] = 1.0
    out = noise.depolarizing_step(noise.to_density(state), 0.5)
    coin = np.trace(out.reshape(2, 5, 2, 5), axis1=1, axis2=3)
    assert np.allclose(coin, np.diag([0.75, 0.25]), atol=1e-12)


def test_gamma_out_of_range():
    rho = np.eye(10) / 10
    with pytest.raises(ValueError):
        noise.amplitude_damping_step(rho, 1.5)
    with pytest.raises(ValueError):
        noise.depolarizing_step(rho, -0.2)
    with pytest.raises(ValueError):
        noise.NoiseSpec("amplitude_damping", 2.0)
    with pytest.raises(ValueError):
        noise.NoiseSpec("bitflip", 0.1)


def test_noiseless_evolution_reduces_to_pure_walk():
    cfg = walk.known_cycle_config(5)
    rho = noise.noisy_evolve(cfg, noise.NoiseSpec(), 60)
    assert (rho[0, 0] + rho[5, 5]).real == pytest.approx(1.0, abs=1e-9)
    for t in (0, 17, 60, 120):
        rho_t = noise.noisy_evolve(cfg, noise.NoiseSpec(), t)
        pure = noise.to_density(walk.evolve(walk.initial_state(cfg, 0), cfg, t))
        assert np.max(np.abs(rho_t - pure)) < 1e-9


def test_return_probability_noisy_anchors():
    cfg = walk.known_cycle_config(5)
    spec = noise.NoiseSpec("amplitude_damping", 0.0007)
    assert noise.return_probability_noisy(cfg, spec, 0) == pytest.approx(1.0)
    p60 = noise.return_probability_noisy(cfg, spec, 60)
    assert abs(p60 - 0.97) <= 0.01
    p_depol = noise.return_probability_noisy(cfg, noise.NoiseSpec("depolarizing", 0.01), 60)
    assert p_depol > 0.5


def test_strong_damping_suppresses_return():
    cfg = walk.known_cycle_config(5)
    p = noise.return_probability_noisy(cfg, noise.NoiseSpec("amplitude_damping", 0.5), 60)
    # position marginal equilibrates toward uniform 1/k
    assert p < 0.25


# --- invariants ----------------------------------------------------------------

def test_trace_preserved_by_channels():
    rng = np.random.default_rng(4)
    for _ in range(50):
        rho = _random_density(rng, 10)
        g = rng.uniform(0, 1)
        for out in (noise.amplitude_damping_step(rho, g), noise.depolarizing_step(rho, g)):
            assert abs(np.trace(out).real - 1.0) < 1e-12


def test_channel_outputs_positive():
    rng = np.random.default_rng(5)
    for _ in range(50):
        rho = _random_density(rng, 10)
        g = rng.uniform(0, 1)
        for out in (noise.amplitude_damping_step(rho, g), noise.depolarizing_step(rho, g)):
            assert np.linalg.eigvalsh(out).min() >= -1e-9


def test_zero_gamma_depolarizing_is_exact_identity():
    rng = np.random.default_rng(6)
    rho = _random_density(rng, 6)
    out = rho
    for _ in range(10):
        out = noise.depolarizing_step(out, 0.0)
    assert np.array_equal(out, rho)


@pytest.mark.parametrize("kind", ["amplitude_damping", "depolarizing"])
def test_damage_monotone_in_gamma_at_revival(kind):
    cfg = walk.known_cycle_config(5)
    probs = [noise.return_probability_noisy(cfg, noise.NoiseSpec(kind, g) if g else noise.NoiseSpec(), 60)
             for g in (0.0, 0.01, 0.1, 0.3, 0.5)]
    assert all(a >= b - 1e-12 for a, b in zip(probs, probs[1:]))
