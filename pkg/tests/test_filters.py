"""Linear propagation recurrences against the eigendecomposition oracle."""

import numpy as np
import pytest

from clenshaw_gnn import (
    CHEBYSHEV_U,
    MONOMIAL,
    apply_filter_exact,
    build_graph,
    clenshaw_propagate_linear,
    eig_sym,
    fixed_param_coefficients,
    gcnii_propagate_linear,
    horner_propagate_linear,
    laplacian,
    layer_alphas_to_filter_coeffs,
    normalized_adjacency,
    spmm,
)


def random_instance(rng, n, p=0.2):
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return normalized_adjacency(build_graph(list(zip(iu[keep], ju[keep])), n))


class TestHornerPropagation:
    def test_order_zero(self):
        rng = np.random.default_rng(0)
        p = random_instance(rng, 8)
        h = rng.standard_normal((8, 3))
        trace = horner_propagate_linear(p, h, [0.7], 0)
        np.testing.assert_array_equal(trace.final, 0.7 * h)

    def test_order_one_expansion(self):
        rng = np.random.default_rng(1)
        p = random_instance(rng, 8)
        h = rng.standard_normal((8, 3))
        a0, a1 = 0.3, -0.8
        trace = horner_propagate_linear(p, h, [a0, a1], 1)
        np.testing.assert_allclose(trace.final, spmm(p, a0 * h) + a1 * h, atol=1e-15)

    def test_matches_monomial_oracle(self):
        rng = np.random.default_rng(2)
        p = random_instance(rng, 30)
        h = rng.standard_normal((30, 5))
        alphas = rng.uniform(-1, 1, size=9)
        trace = horner_propagate_linear(p, h, alphas, 8)
        oracle = apply_filter_exact(
            eig_sym(p.to_dense()), layer_alphas_to_filter_coeffs(alphas, MONOMIAL), h
        )
        assert np.linalg.norm(trace.final - oracle) / np.linalg.norm(oracle) <= 1e-9

    def test_coefficient_reversal_contract(self):
        # asymmetric alphas (1, 0, ..., 0): the realized filter is mu^K
        rng = np.random.default_rng(3)
        p = random_instance(rng, 12)
        h = rng.standard_normal((12, 2))
        k = 4
        alphas = np.zeros(k + 1)
        alphas[0] = 1.0
        trace = horner_propagate_linear(p, h, alphas, k)
        expected = h
        for _ in range(k):
            expected = spmm(p, expected)
        np.testing.assert_allclose(trace.final, expected, atol=1e-12)

    def test_trace_shape_and_zero_back_states(self):
        rng = np.random.default_rng(4)
        p = random_instance(rng, 6)
        h = rng.standard_normal((6, 2))
        trace = horner_propagate_linear(p, h, np.ones(4), 3)
        assert len(trace.states) == 3 + 3
        assert trace.order == 3
        np.testing.assert_array_equal(trace.state(-2), np.zeros_like(h))
        np.testing.assert_array_equal(trace.state(-1), np.zeros_like(h))

    def test_errors(self):
        rng = np.random.default_rng(5)
        p = random_instance(rng, 6)
        h = rng.standard_normal((6, 2))
        with pytest.raises(ValueError, match="K"):
            horner_propagate_linear(p, h, [1.0, 2.0], 2)
        with pytest.raises(ValueError):
            horner_propagate_linear(p, rng.standard_normal((5, 2)), [1.0], 0)
        with pytest.raises(ValueError, match="operator"):
            horner_propagate_linear(laplacian(p), h, [1.0], 0)


class TestClenshawPropagation:
    def test_order_zero(self):
        rng = np.random.default_rng(6)
        p = random_instance(rng, 8)
        h = rng.standard_normal((8, 3))
        trace = clenshaw_propagate_linear(p, h, [-1.2], 0)
        np.testing.assert_array_equal(trace.final, -1.2 * h)

    def test_unit_last_alpha_is_identity_filter(self):
        rng = np.random.default_rng(7)
        p = random_instance(rng, 10)
        h = rng.standard_normal((10, 4))
        alphas = np.zeros(6)
        alphas[-1] = 1.0
        trace = clenshaw_propagate_linear(p, h, alphas, 5)
        np.testing.assert_array_equal(trace.final, h)

    def test_matches_chebyshev_oracle(self):
        rng = np.random.default_rng(8)
        p = random_instance(rng, 40)
        h = rng.standard_normal((40, 5))
        alphas = rng.uniform(-1, 1, size=11)
        trace = clenshaw_propagate_linear(p, h, alphas, 10)
        oracle = apply_filter_exact(
            eig_sym(p.to_dense()), layer_alphas_to_filter_coeffs(alphas, CHEBYSHEV_U), h
        )
        assert np.linalg.norm(trace.final - oracle) / np.linalg.norm(oracle) <= 1e-9

    def test_layerwise_induction_witness(self):
        rng = np.random.default_rng(9)
        p = random_instance(rng, 20)
        h = rng.standard_normal((20, 3))
        k = 7
        alphas = rng.uniform(-1, 1, size=k + 1)
        trace = clenshaw_propagate_linear(p, h, alphas, k)
        d = eig_sym(p.to_dense())
        proj = d.U.T @ h
        h_prev2 = np.zeros_like(d.mu)
        h_prev1 = np.zeros_like(d.mu)
        for ell in range(k + 1):
            h_cur = alphas[ell] + 2.0 * d.mu * h_prev1 - h_prev2
            filtered = d.U @ (h_cur[:, None] * proj)
            err = np.linalg.norm(trace.state(ell) - filtered)
            scale = max(np.linalg.norm(filtered), 1.0)
            assert err / scale <= 1e-9
            h_prev2, h_prev1 = h_prev1, h_cur


class TestGcniiPropagation:
    def test_alpha_one_keeps_input(self):
        rng = np.random.default_rng(10)
        p = random_instance(rng, 9)
        h = rng.standard_normal((9, 2))
        for k in (1, 4, 9):
            np.testing.assert_array_equal(gcnii_propagate_linear(p, h, 1.0, k), h)

    def test_alpha_zero_is_pure_diffusion(self):
        rng = np.random.default_rng(11)
        p = random_instance(rng, 9)
        h = rng.standard_normal((9, 2))
        got = gcnii_propagate_linear(p, h, 0.0, 3)
        np.testing.assert_allclose(got, spmm(p, spmm(p, spmm(p, h))), atol=1e-14)

    def test_matches_explicit_unfolding(self):
        rng = np.random.default_rng(12)
        p = random_instance(rng, 25)
        h = rng.standard_normal((25, 4))
        alpha, k = 0.1, 6
        got = gcnii_propagate_linear(p, h, alpha, k)
        expected = np.zeros_like(h)
        power = h
        for ell in range(k + 1):
            w = (1 - alpha) ** k if ell == k else alpha * (1 - alpha) ** ell
            expected = expected + w * power
            power = spmm(p, power)
        assert np.abs(got - expected).max() <= 1e-10

    def test_alpha_out_of_range(self):
        rng = np.random.default_rng(13)
        p = random_instance(rng, 5)
        with pytest.raises(ValueError):
            gcnii_propagate_linear(p, np.zeros((5, 1)), 1.5, 2)


class TestFixedParamCoefficients:
    def test_extremes(self):
        np.testing.assert_array_equal(fixed_param_coefficients(1.0, 3), [0, 0, 0, 1])
        np.testing.assert_array_equal(fixed_param_coefficients(0.0, 3), [1, 0, 0, 0])

    def test_half_k2(self):
        np.testing.assert_allclose(fixed_param_coefficients(0.5, 2), [0.25, 0.25, 0.5])

    def test_sums_to_one(self):
        rng = np.random.default_rng(14)
        for _ in range(20):
            a = rng.uniform(0, 1)
            k = int(rng.integers(0, 12))
            np.testing.assert_allclose(fixed_param_coefficients(a, k).sum(), 1.0, atol=1e-12)

    def test_range_check(self):
        with pytest.raises(ValueError):
            fixed_param_coefficients(-0.1, 2)


class TestDeltaOperatorFootnote:
    def test_shifted_operator_unfolding(self):
        # residue P H - H per layer unfolds over powers of (2P - I)
        rng = np.random.default_rng(15)
        p = random_instance(rng, 12)
        h = rng.standard_normal((12, 3))
        k = 5
        alphas = rng.uniform(-1, 1, size=k + 1)
        cur = np.zeros_like(h)
        for ell in range(k + 1):
            cur = (2.0 * spmm(p, cur) - cur) + alphas[ell] * h
        shifted = 2.0 * p.to_dense() - np.eye(12)
        expected = np.zeros_like(h)
        power = np.eye(12)
        for ell in range(k + 1):
            expected += alphas[k - ell] * (power @ h)
            power = shifted @ power
        assert np.linalg.norm(cur - expected) / np.linalg.norm(expected) <= 1e-10
