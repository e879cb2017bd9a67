"""Linear algebra and entropy primitives."""

import numpy as np
import pytest

from qerase.entropy import (
    binary_entropy,
    require_distribution,
    shannon_entropy,
    von_neumann_entropy,
)
from qerase.linalg import (
    SIGMA_X,
    SIGMA_Z,
    ValidationError,
    eig_hermitian,
    trace_distance,
)
from qerase.states import DensityMatrix, maximally_mixed, pure_state, werner_state


def ket(i, d=2):
    v = np.zeros(d, dtype=complex)
    v[i] = 1.0
    return v


class TestEigHermitian:
    def test_identity(self):
        vals, _ = eig_hermitian(np.eye(2, dtype=complex))
        assert np.allclose(vals, [1.0, 1.0])

    def test_sigma_z_eigensystem(self):
        vals, vecs = eig_hermitian(SIGMA_Z)
        assert np.allclose(vals, [-1.0, 1.0])
        # ascending order puts |1> first, |0> second (up to phase)
        assert abs(abs(vecs[1, 0]) - 1.0) < 1e-12
        assert abs(abs(vecs[0, 1]) - 1.0) < 1e-12

    def test_xz_mix(self):
        # characteristic polynomial by hand: trace 0, det -1 => eigenvalues -1, 1
        m = (SIGMA_X + SIGMA_Z) / np.sqrt(2)
        vals, _ = eig_hermitian(m)
        assert np.allclose(vals, [-1.0, 1.0], atol=1e-12)

    def test_reconstruction_and_orthonormality(self):
        rng = np.random.default_rng(42)
        for _ in range(20):
            g = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
            m = g + g.conj().T
            vals, vecs = eig_hermitian(m)
            assert np.max(np.abs(vecs @ np.diag(vals) @ vecs.conj().T - m)) < 1e-9
            assert np.max(np.abs(vecs.conj().T @ vecs - np.eye(6))) < 1e-9
            assert np.all(np.diff(vals) >= -1e-12)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValidationError, match="Hermitian"):
            eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestVonNeumannEntropy:
    def test_pure_state(self):
        assert von_neumann_entropy(pure_state(ket(0))) == 0.0

    def test_maximally_mixed_qubit(self):
        assert abs(von_neumann_entropy(maximally_mixed(2)) - 1.0) < 1e-12

    def test_werner_p0_is_two_bits(self):
        assert abs(von_neumann_entropy(werner_state(0.0)) - 2.0) < 1e-12

    def test_range(self):
        rng = np.random.default_rng(7)
        for seed in range(10):
            g = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
            rho = g @ g.conj().T
            rho /= np.trace(rho).real
            s = von_neumann_entropy(rho)
            assert -1e-12 <= s <= np.log2(5) + 1e-9

    def test_rejects_invalid_state(self):
        with pytest.raises(ValidationError):
            von_neumann_entropy(np.diag([1.5, -0.5]).astype(complex))


class TestShannonEntropy:
    def test_deterministic(self):
        assert shannon_entropy([1.0, 0.0]) == 0.0

    def test_uniform(self):
        assert abs(shannon_entropy([0.5, 0.5]) - 1.0) < 1e-15

    def test_biased(self):
        expected = -0.2 * np.log2(0.2) - 0.8 * np.log2(0.8)
        assert abs(shannon_entropy([0.2, 0.8]) - expected) < 1e-12
        assert abs(expected - 0.721928) < 1e-6

    def test_binary_entropy_matches(self):
        for x in (0.0, 0.1, 0.5, 0.93, 1.0):
            assert abs(binary_entropy(x) - shannon_entropy([x, 1 - x])) < 1e-14

    def test_clamps_tiny_negatives(self):
        w = require_distribution([1.0 + 5e-13, -5e-13])
        assert w[1] == 0.0

    def test_rejects_bad_distributions(self):
        with pytest.raises(ValidationError, match="negative"):
            shannon_entropy([1.1, -0.1])
        with pytest.raises(ValidationError, match="sums to"):
            shannon_entropy([0.5, 0.4])


class TestTraceDistance:
    def test_self_distance_zero(self):
        rho = werner_state(0.3)
        assert trace_distance(rho, rho) == 0.0

    def test_orthogonal_pure_states(self):
        assert abs(trace_distance(pure_state(ket(0)), pure_state(ket(1))) - 1.0) < 1e-12

    def test_pure_vs_mixed(self):
        # difference has eigenvalues +/- 1/2
        assert abs(trace_distance(pure_state(ket(0)), maximally_mixed(2)) - 0.5) < 1e-12

    def test_symmetry(self):
        a, b = werner_state(0.2), werner_state(0.9)
        assert abs(trace_distance(a, b) - trace_distance(b, a)) < 1e-14

    def test_dim_mismatch(self):
        with pytest.raises(ValidationError, match="mismatch"):
            trace_distance(maximally_mixed(2), maximally_mixed(4))


class TestEntropyProperties:
    def _random_state(self, rng, d=4):
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        m = g @ g.conj().T
        return m / np.trace(m).real

    def test_concavity(self):
        rng = np.random.default_rng(11)
        for _ in range(30):
            rho, sigma = self._random_state(rng), self._random_state(rng)
            t = rng.uniform()
            mixed = von_neumann_entropy(t * rho + (1 - t) * sigma)
            parts = t * von_neumann_entropy(rho) + (1 - t) * von_neumann_entropy(sigma)
            assert mixed >= parts - 1e-9

    def test_unitary_invariance(self):
        rng = np.random.default_rng(12)
        for _ in range(20):
            rho = self._random_state(rng)
            g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            _, u = eig_hermitian(g + g.conj().T)
            assert abs(
                von_neumann_entropy(u @ rho @ u.conj().T) - von_neumann_entropy(rho)
            ) < 1e-9

    def test_shannon_of_spectrum_equals_von_neumann(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            rho = self._random_state(rng, d=5)
            dm = DensityMatrix(rho, (5,))
            assert abs(shannon_entropy(dm.eigenvalues()) - von_neumann_entropy(dm)) < 1e-10
