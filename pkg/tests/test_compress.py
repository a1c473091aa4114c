import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qredux.compress import plan, rate_curve, retained_weight
from qredux.spectrum import spectrum


class TestPlan:
    def test_single_qubit_incompressible(self):
        p = plan(1, 0.0, 0.1)
        assert p.included_levels == (0,)
        assert p.subspace_dim == 2 and p.rate_qubits_per_signal == 1.0

    def test_n2_symmetric_subspace(self):
        p = plan(2, 0.0, 0.15)
        assert p.included_levels == (0,)
        assert p.subspace_dim == 3
        assert p.rate_qubits_per_signal == pytest.approx(math.log2(3) / 2, rel=1e-15)
        assert p.prior_mass == pytest.approx(0.9, abs=1e-15)

    def test_n2_needs_both_levels(self):
        p = plan(2, 0.0, 0.05)
        assert p.included_levels == (0, 1)
        assert p.subspace_dim == 4 and p.rate_qubits_per_signal == 1.0

    def test_epsilon_range(self):
        for eps in (0.0, 1.0, -0.1, 1.5):
            with pytest.raises(ValueError):
                plan(4, 0.0, eps)

    def test_compresses_at_moderate_n(self):
        assert plan(64, 0.5, 0.1).rate_qubits_per_signal < 1.0

    @given(st.integers(1, 200), st.floats(-2.0, 0.95), st.floats(1e-6, 1 - 1e-6))
    @settings(max_examples=80, deadline=None)
    def test_invariants(self, n, u, eps):
        p = plan(n, u, eps)
        k = len(p.included_levels)
        assert p.included_levels == tuple(range(k))
        masses = [lv.mass for lv in spectrum(n, u).levels]
        assert p.prior_mass >= 1 - eps or k == len(masses)
        if k > 1:
            assert math.fsum(masses[: k - 1]) < 1 - eps
        dims = sum(lv.multiplicity for lv in spectrum(n, u).levels[:k])
        assert p.subspace_dim == dims

    def test_to_dict(self):
        d = plan(6, 0.2, 0.3).to_dict()
        assert d["included_levels"] == list(plan(6, 0.2, 0.3).included_levels)


class TestRetainedWeight:
    @pytest.mark.parametrize("n", [1, 2, 9, 100])
    @pytest.mark.parametrize("eps", [0.01, 0.5, 0.99])
    def test_pure_source_fully_retained(self, n, eps):
        assert retained_weight(plan(n, 0.3, eps), 1.0) == 1.0

    def test_center_n2(self):
        assert retained_weight(plan(2, 0.0, 0.15), 0.0) == 0.75

    @pytest.mark.parametrize("n", [2, 7, 50])
    def test_full_plan_complete(self, n):
        p = plan(n, 0.0, 1e-15)
        assert len(p.included_levels) == n // 2 + 1
        for r in (0.0, 0.4, 0.9):
            assert abs(retained_weight(p, r) - 1.0) <= 1e-12

    def test_grows_with_levels(self):
        n, r = 40, 0.6
        prev = 0.0
        for eps in np.linspace(0.99, 1e-9, 60):
            w = retained_weight(plan(n, 0.5, float(eps)), r)
            assert 0.0 <= w <= 1.0 + 1e-12
            assert w >= prev - 1e-15
            prev = w


class TestRateCurve:
    def test_n2_rates(self):
        curve = rate_curve(2, 0.0, [0.05, 0.15])
        assert [c[1] for c in curve] == pytest.approx([1.0, math.log2(3) / 2], rel=1e-15)

    @pytest.mark.parametrize("n", [3, 16, 128])
    @pytest.mark.parametrize("u", [-1.0, 0.0, 0.5])
    def test_monotone_exhaustive(self, n, u):
        eps = np.linspace(1e-6, 1 - 1e-6, 500)
        rates = [r for _, r, _ in rate_curve(n, u, eps)]
        assert all(a >= b for a, b in zip(rates, rates[1:]))

    def test_symmetric_subspace_boundary(self):
        n, u = 30, 0.5
        lam0 = spectrum(n, u).levels[0].lam
        eps = 1 - lam0 * (n + 1)
        p = plan(n, u, eps * (1 + 1e-9))
        assert p.included_levels == (0,)
        assert p.subspace_dim == n + 1
        assert p.rate_qubits_per_signal == pytest.approx(math.log2(n + 1) / n)

    def test_large_epsilon_keeps_symmetric_subspace(self):
        p = plan(500, 0.0, 1 - 1e-12)
        assert p.subspace_dim == 501
