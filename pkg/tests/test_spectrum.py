import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qredux.oracle import dense_hermitian_eig
from qredux.priors import PriorSpec
from qredux.qstate import subset_mask
from qredux.specfun import binomial, catalan, log_gamma
from qredux.spectrum import (
    BallotPath,
    ballot_count,
    ballot_paths,
    catalan_leading_eigenvalue_check,
    eigenbasis,
    eigenvalue,
    eigenvector,
    generalized_eigenvalues,
    log_eigenvalues,
    multiplicity,
    sparse_to_dense,
    spectrum,
    spectrum_from_radial_prior,
)
from qredux.zeta import generalized_matrix, zeta_dense

U_VALUES = [-1.0, 0.0, 0.5, 0.9]


def zeta_as_generalized(n, u):
    """Even f for which the generalized matrix coincides with zeta_n(u)."""
    c = -n * math.log(2) + log_gamma(2.5 - u) - log_gamma(2.5 + n / 2 - u) - log_gamma(2 + n / 2 - u)
    return lambda d: math.exp(c + log_gamma(2 + (n + d) / 2 - u) + log_gamma(2 + (n - d) / 2 - u))


class TestEigenvalues:
    def test_n2_uniform(self):
        assert eigenvalue(2, 0.0, 0)[0] == pytest.approx(0.3, rel=1e-14)
        assert eigenvalue(2, 0.0, 1)[0] == pytest.approx(0.1, rel=1e-14)

    def test_n2_jeffreys_catalan(self):
        assert eigenvalue(2, 0.5, 0)[0] == pytest.approx(5 / 16, rel=1e-14)

    @pytest.mark.parametrize("u", [-3.0, 0.0, 0.5, 0.99])
    def test_n1(self, u):
        assert eigenvalue(1, u, 0)[0] == pytest.approx(0.5, rel=1e-14)

    def test_log_consistent(self):
        lam, lg = eigenvalue(9, 0.3, 2)
        assert math.log(lam) == pytest.approx(lg, rel=1e-14)

    def test_range_errors(self):
        with pytest.raises(ValueError):
            eigenvalue(4, 0.0, 3)
        with pytest.raises(ValueError):
            eigenvalue(4, 1.0, 0)

    @pytest.mark.parametrize("u", [-2.0, 0.0, 0.5, 0.99])
    @pytest.mark.parametrize("n", [1, 2, 7, 64, 1000, 4096])
    def test_strictly_decreasing_and_trace(self, n, u):
        s = spectrum(n, u)
        assert s.is_strictly_decreasing
        assert np.all(np.diff(log_eigenvalues(n, u)) < 0)
        assert s.trace_error <= 1e-12

    def test_large_block_finite(self):
        s = spectrum(4096, 0.5)
        assert np.all(np.isfinite(s.log_lambdas))


class TestMultiplicities:
    def test_n2(self):
        assert (multiplicity(2, 0), multiplicity(2, 1)) == (3, 1)

    @pytest.mark.parametrize("n", range(1, 31))
    def test_total_and_symmetric_subspace(self, n):
        assert sum(multiplicity(n, h) for h in range(n // 2 + 1)) == 2**n
        assert multiplicity(n, 0) == n + 1

    def test_formula(self):
        for n in range(1, 20):
            for h in range(n // 2 + 1):
                assert Fraction((n - 2 * h + 1) ** 2 * binomial(n + 1, h), n + 1) == multiplicity(n, h)


class TestCatalan:
    def test_n2(self):
        closed, cat = catalan_leading_eigenvalue_check(2)
        assert closed == pytest.approx(5 / 16) and cat == 5 / 16

    def test_n1(self):
        assert catalan_leading_eigenvalue_check(1)[1] == 0.5

    @pytest.mark.parametrize("n", range(1, 13))
    def test_agree(self, n):
        closed, cat = catalan_leading_eigenvalue_check(n)
        assert cat == catalan(n + 1) / 4**n
        assert abs(closed - cat) <= 1e-12 * cat


class TestBallotPaths:
    def test_n4_h2(self):
        assert sorted(str(p) for p in ballot_paths(4, 2)) == ["UDUD", "UUDD"]

    def test_figure_path(self):
        paths = ballot_paths(7, 2)
        fig = BallotPath.from_string("UDUUDUU")
        assert fig in paths
        assert fig.up_labels == (1, 3) and fig.down_labels == (2, 5)

    @pytest.mark.parametrize("n", range(1, 17))
    def test_counts(self, n):
        assert len(ballot_paths(n, 0)) == 1
        for h in range(n // 2 + 1):
            paths = ballot_paths(n, h)
            assert len(paths) == ballot_count(n, h) == (n - 2 * h + 1) * binomial(n + 1, h) // (n + 1)
            assert len(set(paths)) == len(paths)

    def test_below_axis_rejected(self):
        with pytest.raises(ValueError):
            BallotPath.from_string("DU")

    def test_cap(self):
        with pytest.raises(ValueError):
            ballot_paths(30, 15, cap=1000)


class TestEigenvectors:
    def test_printed_example(self):
        vec = eigenvector(7, 2, 3, {1, 3}, {2, 5})
        expected = {
            (2, 4, 5): 1, (2, 5, 6): 1, (2, 5, 7): 1,
            (1, 4, 5): -1, (1, 5, 6): -1, (1, 5, 7): -1,
            (2, 3, 4): -1, (2, 3, 6): -1, (2, 3, 7): -1,
            (1, 3, 4): 1, (1, 3, 6): 1, (1, 3, 7): 1,
        }
        assert vec == {subset_mask(k): v for k, v in expected.items()}

    def test_h0_all_plus(self):
        vec = eigenvector(5, 0, 2, (), ())
        assert len(vec) == binomial(5, 2) and set(vec.values()) == {1}

    def test_n4_eigen_equation(self):
        for u in U_VALUES:
            v = sparse_to_dense(eigenvector(4, 1, 2, {1}, {2}), 4)
            lam = eigenvalue(4, u, 1)[0]
            assert np.max(np.abs(zeta_dense(4, u) @ v - lam * v)) <= 1e-10

    def test_constraint_errors(self):
        with pytest.raises(ValueError):
            eigenvector(4, 1, 2, {1}, {1})
        with pytest.raises(ValueError):
            eigenvector(4, 1, 0, {1}, {2})
        with pytest.raises(ValueError):
            eigenvector(4, 2, 2, {1}, {2})

    @pytest.mark.parametrize("n,count", [(2, 4), (3, 8)])
    def test_small_bases(self, n, count):
        basis = eigenbasis(n)
        assert len(basis) == count
        gram = np.array([sparse_to_dense(b.vector, n) for b in basis])
        assert np.linalg.matrix_rank(gram, tol=1e-8) == count

    def test_n3_breakdown(self):
        basis = eigenbasis(3)
        assert sum(b.h == 0 for b in basis) == 4 and sum(b.h == 1 for b in basis) == 4

    @pytest.mark.parametrize("n", range(1, 7))
    def test_full_basis(self, n):
        basis = eigenbasis(n)
        assert len(basis) == 2**n
        vecs = np.array([sparse_to_dense(b.vector, n) for b in basis])
        assert np.linalg.matrix_rank(vecs, tol=1e-8) == 2**n
        for u in U_VALUES:
            z = zeta_dense(n, u)
            lams = spectrum(n, u).lambdas
            for b, v in zip(basis, vecs):
                assert np.max(np.abs(z @ v - lams[b.h] * v)) <= 1e-10


class TestGeneralized:
    def test_total_multiplicity(self):
        for n in range(1, 12):
            total = sum(m for *_, m in generalized_eigenvalues(n, 0.2, lambda d: 1.0))
            assert total == 2**n

    def test_random_f_dense(self):
        rng = np.random.default_rng(5)
        n, u = 4, 0.3
        table = rng.uniform(0.2, 2.0, size=n + 1)
        f = lambda d: table[abs(d)]
        dense = np.sort(dense_hermitian_eig(generalized_matrix(n, u, f))[0])
        pred = np.sort(np.concatenate([[lam] * m for _, _, lam, m in generalized_eigenvalues(n, u, f)]))
        assert np.max(np.abs(dense - pred)) <= 1e-10 * np.max(np.abs(pred))

    def test_constant_f_n1(self):
        n, u = 1, -0.4
        dense = np.sort(dense_hermitian_eig(generalized_matrix(n, u, lambda d: 2.5))[0])
        pred = np.sort([lam for _, _, lam, m in generalized_eigenvalues(n, u, lambda d: 2.5) for _ in range(m)])
        assert np.allclose(dense, pred, rtol=1e-12)

    @pytest.mark.parametrize("n", [2, 5, 8])
    def test_reduces_to_zeta(self, n):
        u = 0.4
        f = zeta_as_generalized(n, u)
        assert np.max(np.abs(generalized_matrix(n, u, f) - zeta_dense(n, u))) <= 1e-15
        lam = spectrum(n, u).lambdas
        for h, s, val, _ in generalized_eigenvalues(n, u, f):
            assert val == pytest.approx(lam[h], rel=1e-12)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_basis_diagonalizes_generalized(self, n):
        rng = np.random.default_rng(n)
        table = rng.uniform(0.5, 1.5, size=n + 1)
        f = lambda d: table[abs(d)]
        u = -0.5
        m = generalized_matrix(n, u, f)
        lookup = {(h, s): lam for h, s, lam, _ in generalized_eigenvalues(n, u, f)}
        for b in eigenbasis(n):
            v = sparse_to_dense(b.vector, n)
            assert np.max(np.abs(m @ v - lookup[(b.h, b.s)] * v)) <= 1e-10 * max(1.0, np.max(np.abs(m)))

    def test_asymmetric_rejected(self):
        with pytest.raises(ValueError):
            generalized_eigenvalues(3, 0.0, lambda d: float(d))
        with pytest.raises(ValueError):
            generalized_matrix(3, 0.0, lambda d: float(d))


class TestRadialPrior:
    def test_uniform_n1(self):
        s = spectrum_from_radial_prior(1, PriorSpec.qu(0.0))
        assert s.lambdas[0] == pytest.approx(0.5, abs=1e-14)

    @pytest.mark.parametrize("u", [0.0, 0.5, -1.0, 0.9])
    @pytest.mark.parametrize("n", range(1, 7))
    def test_matches_closed_form(self, n, u):
        quad = spectrum_from_radial_prior(n, PriorSpec.qu(u)).lambdas
        closed = spectrum(n, u).lambdas
        assert np.max(np.abs(quad - closed) / closed) <= 1e-9

    def test_kubo_trace(self):
        s = spectrum_from_radial_prior(2, PriorSpec.kubo(0.5))
        assert s.trace_error <= 1e-8
        assert s.is_strictly_decreasing

    @pytest.mark.parametrize("name", ["sld", "kmb", "exp"])
    def test_monotone_trace(self, name):
        s = spectrum_from_radial_prior(6, PriorSpec.monotone(name))
        assert s.trace_error <= 1e-8

    def test_sld_equals_jeffreys(self):
        a = spectrum_from_radial_prior(5, PriorSpec.monotone("sld")).lambdas
        assert np.allclose(a, spectrum(5, 0.5).lambdas, rtol=1e-9)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4096), st.floats(-5.0, 0.999))
def test_spectrum_invariants_property(n, u):
    s = spectrum(n, u)
    assert sum(lv.multiplicity for lv in s.levels) == 2**n
    assert s.trace_error <= 1e-12
    assert s.is_strictly_decreasing
