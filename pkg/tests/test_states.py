"""State construction, composition, and serialization."""

import json

import numpy as np
import pytest

from qerase.entropy import von_neumann_entropy
from qerase.linalg import PAULIS, ValidationError, trace_distance
from qerase.states import (
    DensityMatrix,
    basis_ket,
    bell_state,
    classically_correlated,
    load_state,
    maximally_mixed,
    partial_trace,
    permute_subsystems,
    pure_state,
    purify,
    random_density,
    random_separable,
    save_state,
    separable_mixture,
    tensor,
    werner_separable_parts,
    werner_state,
)


def partial_transpose_b(rho: DensityMatrix) -> np.ndarray:
    """Independent PPT oracle: transpose the second qubit's indices."""
    t = rho.matrix.reshape(2, 2, 2, 2)
    return t.transpose(0, 3, 2, 1).reshape(4, 4)


class TestDensityMatrixValidation:
    def test_rejects_trace(self):
        with pytest.raises(ValidationError, match="trace"):
            DensityMatrix(np.eye(2, dtype=complex))

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(ValidationError, match="PSD"):
            DensityMatrix(np.diag([1.5, -0.5]).astype(complex))

    def test_rejects_bad_dims(self):
        with pytest.raises(ValidationError, match="multiply"):
            DensityMatrix(np.eye(4, dtype=complex) / 4, (2, 3))

    def test_matrix_is_read_only(self):
        rho = maximally_mixed(2)
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 5.0


class TestTensorAndPartialTrace:
    def test_mixed_tensor(self):
        out = tensor(maximally_mixed(2), maximally_mixed(2))
        assert out.dims == (2, 2)
        assert np.allclose(out.matrix, np.eye(4) / 4)

    def test_pure_tensor(self):
        out = tensor(pure_state(basis_ket(2, 0)), pure_state(basis_ket(2, 1)))
        expected = np.zeros((4, 4))
        expected[1, 1] = 1.0
        assert np.allclose(out.matrix, expected)

    def test_tensor_round_trip(self):
        rho = random_density(2, seed=1)
        sigma = random_density(3, seed=2)
        joint = tensor(rho, sigma)
        assert trace_distance(partial_trace(joint, [0]), rho) < 1e-12
        assert trace_distance(partial_trace(joint, [1]), sigma) < 1e-12

    def test_bell_marginal_maximally_mixed(self):
        reduced = partial_trace(bell_state("phi_plus"), [1])
        assert trace_distance(reduced, maximally_mixed(2)) < 1e-12

    def test_werner_marginal_for_all_p(self):
        for p in np.linspace(0, 1, 11):
            reduced = partial_trace(werner_state(p), [0])
            assert trace_distance(reduced, maximally_mixed(2)) < 1e-12

    def test_partial_trace_preserves_physicality(self):
        for seed in range(10):
            rho = random_density(8, seed=seed, dims=(2, 2, 2))
            for keep in ([0], [1], [2], [0, 1], [0, 2], [1, 2]):
                red = partial_trace(rho, keep)  # constructor re-validates
                assert abs(np.trace(red.matrix).real - 1.0) < 1e-10

    def test_invalid_keep_set(self):
        rho = werner_state(0.5)
        with pytest.raises(ValidationError, match="index"):
            partial_trace(rho, [5])
        with pytest.raises(ValidationError, match="index"):
            partial_trace(rho, [])

    def test_permute_subsystems(self):
        rho = random_density(2, seed=3)
        sigma = random_density(3, seed=4)
        swapped = permute_subsystems(tensor(rho, sigma), [1, 0])
        assert swapped.dims == (3, 2)
        assert trace_distance(swapped, tensor(sigma, rho)) < 1e-12


class TestPurify:
    def test_pure_input_trivial_environment(self):
        psi = bell_state("phi_plus")
        pur = purify(psi)
        assert pur.environment_dim == 1
        assert np.allclose(pur.state.matrix, np.kron(psi.matrix, [[1.0]]))

    def test_single_qubit_mixed(self):
        rho = maximally_mixed(2, dims=(1, 2))
        pur = purify(rho)
        assert pur.environment_dim == 2
        assert pur.state.dims == (1, 2, 2)
        assert trace_distance(partial_trace(pur.state, [0, 1]), rho) < 1e-9

    def test_werner_rank_four(self):
        # spectrum (1+3p)/4, 3x(1-p)/4 all positive away from p=1
        pur = purify(werner_state(0.6))
        assert pur.environment_dim == 4
        assert trace_distance(partial_trace(pur.state, [0, 1]), werner_state(0.6)) < 1e-9

    def test_round_trip_random(self):
        for seed in range(8):
            rho = random_density(4, rank=(seed % 4) + 1, seed=seed, dims=(2, 2))
            pur = purify(rho)
            assert trace_distance(partial_trace(pur.state, [0, 1]), rho) < 1e-9
            assert abs(pur.state.purity() - 1.0) < 1e-9


class TestWernerState:
    def test_endpoints(self):
        assert np.allclose(werner_state(0.0).matrix, np.eye(4) / 4)
        singlet = bell_state("psi_minus")
        assert trace_distance(werner_state(1.0), singlet) < 1e-12

    def test_pauli_form(self):
        for p in (0.0, 0.3, 0.6, 1.0):
            pauli = np.eye(4, dtype=complex)
            for s in PAULIS:
                pauli -= p * np.kron(s, s)
            assert np.max(np.abs(werner_state(p).matrix - pauli / 4)) < 1e-12

    def test_half_spectrum(self):
        vals = np.sort(werner_state(0.5).eigenvalues())
        assert np.allclose(vals, [0.125, 0.125, 0.125, 0.625], atol=1e-12)

    def test_out_of_range(self):
        with pytest.raises(ValidationError, match="outside"):
            werner_state(1.2)

    def test_separable_decomposition(self):
        for p in (0.0, 0.1, 0.3, 1.0 / 3.0):
            state = separable_mixture(*werner_separable_parts(p))
            assert np.max(np.abs(state.matrix - werner_state(p).matrix)) < 1e-12
        with pytest.raises(ValidationError, match="1/3"):
            werner_separable_parts(0.4)


class TestBellStates:
    def test_marginals_and_purity(self):
        for name in ("phi_plus", "phi_minus", "psi_plus", "psi_minus"):
            b = bell_state(name)
            assert b.is_pure()
            assert trace_distance(partial_trace(b, [0]), maximally_mixed(2)) < 1e-12
            assert von_neumann_entropy(b) < 1e-12

    def test_unknown_name(self):
        with pytest.raises(ValidationError, match="unknown Bell"):
            bell_state("sigma_plus")


class TestClassicallyCorrelated:
    def test_computational_pair(self):
        cc = classically_correlated([0.5, 0.5], np.eye(2), np.eye(2))
        expected = np.zeros((4, 4))
        expected[0, 0] = expected[3, 3] = 0.5
        assert np.allclose(cc.matrix, expected)
        assert trace_distance(partial_trace(cc, [1]), maximally_mixed(2)) < 1e-12

    def test_size_mismatch(self):
        with pytest.raises(ValidationError, match="vectors"):
            classically_correlated([0.25] * 4, np.eye(2), np.eye(2))


class TestRandomStates:
    def test_rank_one_is_pure(self):
        rho = random_density(4, rank=1, seed=5)
        assert abs(rho.purity() - 1.0) < 1e-9

    def test_seed_determinism(self):
        a = random_density(4, rank=2, seed=9)
        b = random_density(4, rank=2, seed=9)
        assert np.array_equal(a.matrix, b.matrix)
        s1 = random_separable(seed=21)
        s2 = random_separable(seed=21)
        assert np.array_equal(s1.matrix, s2.matrix)

    def test_separable_samples_have_positive_partial_transpose(self):
        for seed in range(25):
            rho = random_separable(seed=seed)
            vals = np.linalg.eigvalsh(partial_transpose_b(rho))
            assert vals.min() > -1e-10

    def test_rank_bounds(self):
        with pytest.raises(ValidationError, match="rank"):
            random_density(2, rank=3, seed=0)


class TestStateJson:
    def test_round_trip(self, tmp_path):
        rho = werner_state(0.37).with_dims((2, 2))
        path = tmp_path / "state.json"
        save_state(rho, path)
        loaded = load_state(path)
        assert loaded.dims == (2, 2)
        assert np.max(np.abs(loaded.matrix - rho.matrix)) < 1e-15

    def test_missing_field(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"dims": [2], "re": [[1, 0], [0, 0]]}))
        with pytest.raises(ValidationError, match="im"):
            load_state(path)

    def test_invalid_state_named(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(
            json.dumps(
                {"dims": [2], "re": [[2, 0], [0, -1]], "im": [[0, 0], [0, 0]]}
            )
        )
        with pytest.raises(ValidationError, match="PSD|trace"):
            load_state(path)
