import math

import numpy as np
import pytest

from cyclewalk import information, noise, walk


def test_entropy_of_pure_state_vanishes():
    rng = np.random.default_rng(0)
    psi = rng.normal(size=10) + 1j * rng.normal(size=10)
    psi /= np.linalg.norm(psi)
    assert information.von_neumann_entropy(noise.to_density(psi)) == pytest.approx(0.0, abs=1e-10)


def test_entropy_of_maximally_mixed_coin():
    assert information.von_neumann_entropy(np.eye(2) / 2) == pytest.approx(1.0, abs=1e-12)


def test_entropy_matches_scalar_formula():
    # independent oracle: direct sum over the stated eigenvalues
    probs = np.array([9, 4, 4, 4, 4]) / 25
    expected = -(probs * np.log2(probs)).sum()
    assert expected == pytest.approx(2.2227, abs=1e-4)
    assert information.von_neumann_entropy(np.diag(probs)) == pytest.approx(expected, abs=1e-12)


def test_entropy_rejects_non_hermitian():
    with pytest.raises(ValueError):
        information.von_neumann_entropy(np.array([[0.0, 1.0], [0.0, 1.0]]))


def test_reductions_recover_product_factors():
    coin = np.array([[0.7, 0.1j], [-0.1j, 0.3]])
    pos = np.diag([0.5, 0.25, 0.25])
    rho = np.kron(coin, pos)
    assert np.allclose(information.reduced_coin(rho), coin, atol=1e-12)
    assert np.allclose(information.reduced_position(rho), pos, atol=1e-12)


def test_reductions_of_entangled_state_are_mixed():
    # (|0>|x0> + |1>|x1>)/sqrt(2) on a 2-cycle
    psi = np.zeros(4, dtype=complex)
    psi[0] = psi[3] = 1 / math.sqrt(2)
    rho = noise.to_density(psi)
    assert np.allclose(information.reduced_coin(rho), np.eye(2) / 2, atol=1e-12)
    assert np.allclose(information.reduced_position(rho), np.eye(2) / 2, atol=1e-12)


def test_reduction_traces():
    rng = np.random.default_rng(1)
    a = rng.normal(size=(10, 10)) + 1j * rng.normal(size=(10, 10))
    rho = a @ a.conj().T
    rho /= np.trace(rho)
    assert np.trace(information.reduced_coin(rho)).real == pytest.approx(1.0, abs=1e-12)
    assert np.trace(information.reduced_position(rho)).real == pytest.approx(1.0, abs=1e-12)


def test_mutual_information_product_state_is_zero():
    psi = np.kron(np.array([1, 1j]) / math.sqrt(2), np.array([1, 0, 0, 0, 0], dtype=complex))
    assert information.mutual_information_quantum(noise.to_density(psi)) == pytest.approx(0.0, abs=1e-10)


def test_mutual_information_bell_state_is_two_bits():
    psi = np.zeros(4, dtype=complex)
    psi[0] = psi[3] = 1 / math.sqrt(2)
    assert information.mutual_information_quantum(noise.to_density(psi)) == pytest.approx(2.0, abs=1e-10)


def test_separability_at_half_revival():
    cfg = walk.known_cycle_config(5)
    rho = noise.to_density(walk.evolve(walk.initial_state(cfg, 0), cfg, 30))
    assert information.mutual_information_quantum(rho) < 1e-9
    assert information.negativity(rho) < 1e-9


def test_negativity_values():
    psi = np.kron(np.array([1, 1j]) / math.sqrt(2), np.array([1, 0, 0], dtype=complex))
    assert information.negativity(noise.to_density(psi)) == pytest.approx(0.0, abs=1e-10)
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1 / math.sqrt(2)
    assert information.negativity(noise.to_density(bell)) == pytest.approx(0.5, abs=1e-10)


def test_joint_distribution_normalization():
    for k in (3, 5, 8):
        joint = information.joint_distribution(walk.known_cycle_config(k))
        t_r = joint.config.t_r
        assert joint.table.shape == (k, t_r - 1)
        assert joint.table.sum() == pytest.approx(1.0, abs=1e-10)
        assert np.allclose(joint.table.sum(axis=0), 1 / (t_r - 1), atol=1e-10)
        assert np.all(joint.table >= 0)


def test_joint_distribution_requires_t_r():
    with pytest.raises(ValueError):
        information.joint_distribution(walk.WalkConfig(k=5, rho=0.3))


def test_joint_distribution_light_cone():
    # after one step the walker sits one label away from the start
    joint = information.joint_distribution(walk.known_cycle_config(5))
    lmap = joint.label_map
    first = joint.table[:, 0] * (joint.config.t_r - 1)
    start = lmap.ell_min
    neighbours = {(start - 1) % 5, (start + 1) % 5}
    for i, ell in enumerate(joint.labels):
        if lmap.oam_to_position(ell) in neighbours:
            assert first[i] > 0
        else:
            assert first[i] == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("k,p_ref,i_ref", [
    (3, 0.238095, 0.174429),
    (4, 0.210526, 1.175981),
    (5, 0.186441, 0.358934),
    (6, 0.220722, 1.218855),
    (8, 0.108696, 1.281487),
    (10, 0.131488, 1.317215),
])
def test_reference_pairs_reproduced(k, p_ref, i_ref):
    joint = information.joint_distribution(walk.known_cycle_config(k))
    assert information.marginal_oam(joint)[0] == pytest.approx(p_ref, abs=1e-5)
    assert information.eve_mutual_information(joint) == pytest.approx(i_ref, abs=1e-5)


def test_marginal_oam_sums_to_one():
    joint = information.joint_distribution(walk.known_cycle_config(6))
    assert information.marginal_oam(joint).sum() == pytest.approx(1.0, abs=1e-10)


def test_product_table_has_zero_information():
    p_row = np.array([0.5, 0.3, 0.2])
    p_col = np.full(7, 1 / 7)
    assert information.classical_mutual_information(np.outer(p_row, p_col)) == pytest.approx(0.0, abs=1e-12)


def test_coin_angle_scan_selects_quarter_pi():
    chi, dev = information.scan_reference_coin_angle()
    assert chi == pytest.approx(math.pi / 4)
    assert dev < 1e-5


# --- invariants ----------------------------------------------------------------

def test_pure_state_information_is_twice_reduced_entropy():
    cfg = walk.known_cycle_config(5)
    state = walk.initial_state(cfg, 0)
    for t in (3, 11, 27):
        state = walk.evolve(state, cfg, t)
        rho = noise.to_density(state)
        assert information.mutual_information_quantum(rho) == pytest.approx(
            2 * information.von_neumann_entropy(information.reduced_coin(rho)), abs=1e-9)


def test_classical_information_invariant_under_row_permutation():
    rng = np.random.default_rng(7)
    joint = information.joint_distribution(walk.known_cycle_config(5))
    base = information.eve_mutual_information(joint)
    for _ in range(5):
        perm = rng.permutation(5)
        assert information.classical_mutual_information(joint.table[perm]) == pytest.approx(base, abs=1e-12)


def test_entropy_unitarily_invariant():
    rng = np.random.default_rng(8)
    a = rng.normal(size=(10, 10)) + 1j * rng.normal(size=(10, 10))
    rho = a @ a.conj().T
    rho /= np.trace(rho)
    u = walk.step_operator(walk.known_cycle_config(5))
    assert information.von_neumann_entropy(u @ rho @ u.conj().T) == pytest.approx(
        information.von_neumann_entropy(rho), abs=1e-10)
