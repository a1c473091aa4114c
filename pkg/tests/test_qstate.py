import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qredux.oracle import dense_hermitian_eig, kron_power, von_neumann_entropy_dense
from qredux.qstate import (
    BlochState,
    binary_entropy_nats,
    density_matrix,
    mask_elements,
    overlap_profile,
    subset_mask,
    tensor_entry,
    tensor_product_matrix,
    von_neumann_entropy_2x2,
)


def random_state(rng, r=None):
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    r = rng.uniform(0, 1) if r is None else r
    return BlochState(*(r * v))


class TestBlochState:
    def test_outside_ball_rejected(self):
        with pytest.raises(ValueError):
            BlochState(0.8, 0.8, 0.0)

    def test_spherical(self):
        s = BlochState.from_spherical(0.5, math.pi / 2, 0.0)
        assert s.r == pytest.approx(0.5)
        assert s.x == pytest.approx(0.5)

    def test_trace_one(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            assert np.trace(density_matrix(random_state(rng))).real == pytest.approx(1.0, abs=1e-15)


class TestDensityMatrix:
    def test_maximally_mixed(self):
        assert np.allclose(density_matrix(BlochState(0, 0, 0)), 0.5 * np.eye(2))

    def test_pure_z(self):
        assert np.allclose(density_matrix(BlochState(0, 0, 1)), np.diag([1.0, 0.0]))

    def test_pure_x_eigenvalues(self):
        w, _ = dense_hermitian_eig(density_matrix(BlochState(1, 0, 0)))
        assert np.allclose(w, [1.0, 0.0], atol=1e-14)


class TestEntropy:
    def test_limits(self):
        assert von_neumann_entropy_2x2(BlochState(0, 0, 0)) == pytest.approx(math.log(2))
        assert von_neumann_entropy_2x2(BlochState(0, 0, 1)) == 0.0

    def test_against_dense(self):
        s = BlochState(0.3, -0.2, math.sqrt(0.25 - 0.13))
        assert s.r == pytest.approx(0.5)
        assert von_neumann_entropy_2x2(s) == pytest.approx(von_neumann_entropy_dense(density_matrix(s)), abs=1e-12)

    def test_binary_entropy_vectorized(self):
        out = binary_entropy_nats(np.array([0.0, 1.0]))
        assert out[0] == pytest.approx(math.log(2)) and out[1] == 0.0


class TestSubsets:
    def test_mask_roundtrip(self):
        assert subset_mask([1, 3], 4) == 0b101
        assert mask_elements(0b101) == (1, 3)

    def test_mask_out_of_range(self):
        with pytest.raises(ValueError):
            subset_mask([5], 4)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_profile_counts_sum_to_n(self, n):
        for i, j in itertools.product(range(1 << n), repeat=2):
            p = overlap_profile(n, i, j)
            assert p.n_in_in + p.n_out_out + p.n_out_in + p.n_in_out == n


class TestTensorEntry:
    def test_empty_sets_n2(self):
        s = BlochState(0.1, 0.2, 0.3)
        assert tensor_entry(s, 2, 0, 0) == pytest.approx((1 - 0.3) ** 2 / 4)

    def test_single_off_diagonal(self):
        s = BlochState(0.1, 0.2, 0.3)
        # element in I but not J contributes (x - iy)
        assert tensor_entry(s, 1, 0b1, 0) == pytest.approx((0.1 - 0.2j) / 2)

    @pytest.mark.parametrize("n", [1, 3, 5])
    def test_maximally_mixed_diagonal(self, n):
        s = BlochState(0, 0, 0)
        for i in range(1 << n):
            assert tensor_entry(s, n, i, i) == pytest.approx(2.0**-n)

    def test_hermitian_symmetry(self):
        rng = np.random.default_rng(3)
        s = random_state(rng)
        n = 4
        for i, j in itertools.product(range(1 << n), repeat=2):
            assert tensor_entry(s, n, i, j) == pytest.approx(np.conj(tensor_entry(s, n, j, i)), abs=1e-15)

    def test_pure_boundary_uses_zero_power_convention(self):
        s = BlochState(0, 0, 1)
        assert tensor_entry(s, 2, 0b11, 0b11) == pytest.approx(1.0)
        assert tensor_entry(s, 2, 0, 0) == 0.0


class TestTensorProductMatrix:
    def test_n1_is_the_state_in_mask_order(self):
        # row 0 is the empty subset, which carries the (1 - z) factor, so the
        # one-site matrix is the density matrix with both basis states swapped
        s = BlochState(0.2, -0.1, 0.4)
        swap = np.array([[0, 1], [1, 0]])
        assert np.allclose(tensor_product_matrix(s, 1), swap @ density_matrix(s) @ swap, atol=1e-15)
        assert np.allclose(np.linalg.eigvalsh(tensor_product_matrix(s, 1)), np.linalg.eigvalsh(density_matrix(s)))

    def test_pure_product(self):
        m = tensor_product_matrix(BlochState(0, 0, 1), 2)
        # membership of every element corresponds to the (1+z) factor
        expected = np.zeros((4, 4))
        expected[3, 3] = 1.0
        assert np.allclose(m, expected)

    def test_matches_kronecker(self):
        rng = np.random.default_rng(7)
        for _ in range(5):
            s = random_state(rng)
            assert np.max(np.abs(tensor_product_matrix(s, 3) - kron_power(density_matrix(s), 3))) < 1e-13

    def test_trace_and_psd(self):
        rng = np.random.default_rng(11)
        for k in range(50):
            s = random_state(rng)
            n = 1 + k % 6
            m = tensor_product_matrix(s, n)
            assert np.trace(m).real == pytest.approx(1.0, abs=1e-12)
            assert np.linalg.eigvalsh(m).min() >= -1e-12

    def test_cap(self):
        with pytest.raises(ValueError):
            tensor_product_matrix(BlochState(0, 0, 0), 13)


@settings(max_examples=100, deadline=None)
@given(
    st.floats(0, 1), st.floats(0, math.pi), st.floats(0, 2 * math.pi), st.integers(1, 4),
)
def test_tensor_matrix_hermitian_property(r, theta, phi, n):
    s = BlochState.from_spherical(r, theta, phi)
    m = tensor_product_matrix(s, n)
    assert np.max(np.abs(m - m.conj().T)) <= 1e-15
