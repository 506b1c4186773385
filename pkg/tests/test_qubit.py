import numpy as np
import pytest

from mzduality.errors import BadDimension, InvalidEffect, InvalidState
from mzduality.linalg import hermitian_eig
from mzduality.qubit import (
    IDENTITY_2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    BinaryQubitObservable,
    QubitState,
    bloch_to_matrix,
    effect_bounds_ok,
    matrix_to_bloch,
    pauli_phi,
    random_detector_state,
    random_pure_detector_state,
    random_qubit_state,
    random_unitary,
)


class TestBlochConversions:
    def test_trivial_coin(self):
        np.testing.assert_allclose(bloch_to_matrix(np.zeros(3), 0.5), IDENTITY_2 / 2)

    def test_sharp_projector(self):
        np.testing.assert_allclose(
            bloch_to_matrix(np.array([0.0, 0.0, 0.5]), 0.5), np.diag([1.0, 0.0])
        )

    def test_round_trip_random(self):
        rng = np.random.default_rng(21)
        for _ in range(500):
            bias = float(rng.uniform(0.0, 1.0))
            direction = rng.standard_normal(3)
            direction /= np.linalg.norm(direction)
            vector = direction * rng.uniform(0.0, min(bias, 1.0 - bias))
            back_bias, back_vector = matrix_to_bloch(bloch_to_matrix(vector, bias))
            assert back_bias == pytest.approx(bias, abs=1e-12)
            np.testing.assert_allclose(back_vector, vector, atol=1e-12)

    def test_invalid_effect_rejected(self):
        with pytest.raises(InvalidEffect):
            bloch_to_matrix(np.array([0.6, 0.0, 0.0]), 0.5)

    def test_validity_matches_eigenvalue_bounds(self):
        # |vector| <= min(bias, 1-bias) iff the matrix spectrum sits in [0, 1]
        rng = np.random.default_rng(22)
        checked = 0
        while checked < 10_000:
            bias = float(rng.uniform(-0.2, 1.2))
            direction = rng.standard_normal(3)
            direction /= np.linalg.norm(direction)
            vector = direction * rng.uniform(0.0, 0.8)
            slack = min(bias, 1.0 - bias) - np.linalg.norm(vector)
            if abs(slack) < 1e-9:
                continue
            matrix = bias * IDENTITY_2 + sum(v * s for v, s in zip(vector, (SIGMA_X, SIGMA_Y, SIGMA_Z)))
            assert effect_bounds_ok(matrix, tol=0.0) == (slack > 0.0)
            checked += 1


class TestPauliPhi:
    def test_zero_phase(self):
        np.testing.assert_allclose(pauli_phi(0.0), SIGMA_Z)

    def test_quarter_phase(self):
        np.testing.assert_allclose(pauli_phi(np.pi / 2), -SIGMA_Y, atol=1e-15)

    def test_unit_spectrum_and_involution(self):
        for phi in np.linspace(-2 * np.pi, 2 * np.pi, 17):
            np.testing.assert_allclose(
                hermitian_eig(pauli_phi(phi)).eigenvalues, [-1.0, 1.0], atol=1e-12
            )
            np.testing.assert_allclose(pauli_phi(phi) @ pauli_phi(phi), IDENTITY_2, atol=1e-15)


class TestQubitState:
    def test_from_bloch_and_back(self):
        state = QubitState.from_bloch([0.2, -0.3, 0.4])
        np.testing.assert_allclose(state.bloch(), [0.2, -0.3, 0.4], atol=1e-14)

    def test_rejects_unnormalized(self):
        with pytest.raises(InvalidState):
            QubitState(np.diag([0.9, 0.3]))

    def test_rejects_long_bloch_vector(self):
        with pytest.raises(InvalidState):
            QubitState.from_bloch([1.0, 0.5, 0.0])


class TestBinaryQubitObservable:
    def test_effects_sum_to_identity(self):
        obs = BinaryQubitObservable(bias=0.6, vector=np.array([0.1, 0.2, 0.1]))
        np.testing.assert_allclose(obs.effect(0) + obs.effect(1), IDENTITY_2, atol=1e-15)

    def test_invalid_vector_rejected(self):
        with pytest.raises(InvalidEffect):
            BinaryQubitObservable(bias=0.9, vector=np.array([0.2, 0.0, 0.0]))


class TestRandomGenerators:
    def test_states_pass_validators(self):
        # constructing a QubitState runs the full validity check
        for seed in range(10_000):
            random_qubit_state(seed)

    def test_unitaries_are_unitary(self):
        rng = np.random.default_rng(23)
        for _ in range(200):
            d = int(rng.integers(2, 9))
            u = random_unitary(d, rng)
            assert np.max(np.abs(u.conj().T @ u - np.eye(d))) <= 1e-10

    def test_detector_states_are_densities(self):
        rng = np.random.default_rng(24)
        for _ in range(200):
            d = int(rng.integers(2, 9))
            rho = random_detector_state(d, rng)
            assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
            assert np.linalg.eigvalsh(rho)[0] >= -1e-12

    def test_pure_states_have_unit_purity(self):
        rng = np.random.default_rng(25)
        for d in (2, 3, 8):
            rho = random_pure_detector_state(d, rng)
            assert np.trace(rho @ rho).real == pytest.approx(1.0, abs=1e-12)

    def test_seed_determinism(self):
        assert np.array_equal(random_unitary(4, 9), random_unitary(4, 9))
        assert np.array_equal(
            random_qubit_state(7).matrix, random_qubit_state(7).matrix
        )

    @pytest.mark.parametrize("dim", [0, 1, 9, 12])
    def test_bad_dimension(self, dim):
        with pytest.raises(BadDimension):
            random_unitary(dim, 0)
        with pytest.raises(BadDimension):
            random_detector_state(dim, 0)
