import math

import numpy as np
import pytest

from sparselab.cuts import cut_error_exhaustive
from sparselab.errors import InvalidArgumentError, NotComparableError, SizeLimitError
from sparselab.graph import WeightedGraph, make_clique, make_cycle, sample_regular_multigraph, scale_weights
from sparselab.rng import make_generator
from sparselab.spectral import (
    SymmetricMatrix,
    laplacian,
    regular_clique_epsilon_oracle,
    spectral_error,
    symmetric_eigenvalues,
)

from helpers import random_connected_graph


class TestLaplacian:
    def test_row_sums_zero(self):
        g = sample_regular_multigraph(30, 5, seed=2)
        lap = laplacian(g).values
        assert np.all(lap.sum(axis=1) == 0.0)

    def test_quarter_clique_is_identity_minus_j_over_n(self):
        n = 6
        lap = laplacian(make_clique(n, 1.0 / n)).values
        expected = np.eye(n) - np.ones((n, n)) / n
        assert np.allclose(lap, expected, atol=1e-15)
        eigs = symmetric_eigenvalues(lap)
        assert np.allclose(eigs, [0.0] + [1.0] * (n - 1), atol=1e-12)

    def test_single_edge_eigenvalues(self):
        g = WeightedGraph(2, [(0, 1, 2.5)])
        assert np.allclose(symmetric_eigenvalues(laplacian(g)), [0.0, 5.0], atol=1e-12)

    def test_c4_spectrum(self):
        eigs = symmetric_eigenvalues(laplacian(make_cycle(4, 1.5)))
        assert np.allclose(eigs, [0.0, 3.0, 3.0, 6.0], atol=1e-12)

    def test_quadratic_form_matches_edge_sum(self):
        rng = make_generator(12)
        g = random_connected_graph(rng, 15, 30)
        lap = laplacian(g).values
        us, vs, ws, _ = g.edge_arrays()
        for _ in range(20):
            x = rng.standard_normal(15)
            lhs = float(x @ lap @ x)
            rhs = float((ws * (x[us] - x[vs]) ** 2).sum())
            assert abs(lhs - rhs) <= 1e-10 * (1.0 + abs(rhs))


class TestEigenvalues:
    def test_zero_matrix(self):
        assert np.allclose(symmetric_eigenvalues(np.zeros((3, 3))), [0.0, 0.0, 0.0])

    def test_diagonal(self):
        assert np.allclose(symmetric_eigenvalues(np.diag([3.0, 1.0, 2.0])), [1.0, 2.0, 3.0])

    def test_c6_closed_form(self):
        eigs = symmetric_eigenvalues(laplacian(make_cycle(6, 1.0)))
        expected = sorted(2.0 - 2.0 * math.cos(2.0 * math.pi * j / 6) for j in range(6))
        assert np.allclose(eigs, expected, atol=1e-12)

    def test_residual_contract(self):
        rng = make_generator(3)
        a = rng.standard_normal((40, 40))
        a = (a + a.T) / 2.0
        w, v = np.linalg.eigh(a)
        got = symmetric_eigenvalues(a)
        assert np.allclose(got, w, atol=1e-12)
        norm = np.abs(w).max()
        for j in (0, 20, 39):
            assert np.linalg.norm(a @ v[:, j] - w[j] * v[:, j]) <= 1e-8 * norm

    def test_cap(self):
        with pytest.raises(SizeLimitError):
            symmetric_eigenvalues(np.zeros((5, 5)), cap=4)

    def test_symmetric_matrix_wrapper_rejects_asymmetry(self):
        with pytest.raises(InvalidArgumentError):
            SymmetricMatrix(np.array([[0.0, 1.0], [1.0 + 1e-15, 0.0]]))
        m = SymmetricMatrix.from_triangle(3, {(0, 1): 2.0, (1, 2): -1.0})
        assert m.values[1, 0] == 2.0 and m.n == 3


class TestSpectralError:
    def test_self_is_zero(self):
        g = sample_regular_multigraph(20, 4, seed=1)
        rep = spectral_error(g, g)
        assert rep.epsilon == pytest.approx(0.0, abs=1e-10)

    def test_c4_vs_k4_closed_form(self):
        rep = spectral_error(make_cycle(4, 1.5), make_clique(4, 1.0))
        assert rep.epsilon == pytest.approx(0.5, abs=1e-12)
        assert rep.lambda_min == pytest.approx(0.75, abs=1e-12)
        assert rep.lambda_max == pytest.approx(1.5, abs=1e-12)

    def test_scaling_invariance(self):
        rng = make_generator(21)
        h = random_connected_graph(rng, 12, 20)
        g = random_connected_graph(rng, 12, 25)
        base = spectral_error(h, g).epsilon
        scaled = spectral_error(scale_weights(h, 7.5), scale_weights(g, 7.5)).epsilon
        assert scaled == pytest.approx(base, abs=1e-10)

    def test_whitening_agrees_with_clique_shortcut(self):
        rng = make_generator(22)
        for _ in range(5):
            h = random_connected_graph(rng, 14, 25)
            g = make_clique(14, 0.7)
            a = spectral_error(h, g, method="clique")
            b = spectral_error(h, g, method="whitening")
            assert a.epsilon == pytest.approx(b.epsilon, abs=1e-9)

    def test_dominates_cut_error(self):
        rng = make_generator(23)
        for _ in range(10):
            n = int(rng.integers(5, 13))
            h = random_connected_graph(rng, n, int(rng.integers(0, 2 * n)))
            g = random_connected_graph(rng, n, int(rng.integers(n, 3 * n)))
            eps_cut = cut_error_exhaustive(h, g).epsilon
            eps_spec = spectral_error(h, g).epsilon
            assert eps_cut <= eps_spec + 1e-9

    def test_disconnected_h_against_clique_is_comparable(self):
        # kernel(L_G) = span(1) is always inside kernel(L_H); the error is just large
        h = WeightedGraph(6, [(0, 1, 1.0), (2, 3, 1.0)])
        rep = spectral_error(h, make_clique(6, 1.0))
        assert rep.epsilon == pytest.approx(1.0, abs=1e-9)  # lambda_min = 0

    def test_not_comparable_when_reference_disconnected(self):
        g = WeightedGraph(4, [(0, 1, 1.0), (2, 3, 1.0)])
        h = make_clique(4, 1.0)
        with pytest.raises(NotComparableError):
            spectral_error(h, g)

    def test_matching_disconnected_pair_is_comparable(self):
        # both graphs share the larger kernel, so the error is finite (zero here)
        g = WeightedGraph(4, [(0, 1, 1.0), (2, 3, 1.0)])
        rep = spectral_error(g, g)
        assert rep.epsilon == pytest.approx(0.0, abs=1e-10)
        assert rep.method == "whitening"

    def test_vertex_mismatch(self):
        with pytest.raises(InvalidArgumentError):
            spectral_error(make_clique(4, 1.0), make_clique(5, 1.0))


class TestAdjacencyOracle:
    def test_agrees_with_whitening_across_seeds(self):
        n, d = 100, 6
        for seed in range(3):
            h = sample_regular_multigraph(n, d, seed=seed)
            direct = spectral_error(scale_weights(h, (n - 1) / d), make_clique(n, 1.0), method="whitening")
            oracle = regular_clique_epsilon_oracle(h, d)
            assert direct.epsilon == pytest.approx(oracle, abs=1e-8)

    def test_clique_as_regular_graph_is_perfect(self):
        n = 9
        assert regular_clique_epsilon_oracle(make_clique(n, 1.0), n - 1) == pytest.approx(0.0, abs=1e-12)

    def test_rejects_irregular(self):
        rng = make_generator(1)
        with pytest.raises(InvalidArgumentError):
            regular_clique_epsilon_oracle(random_connected_graph(rng, 8, 3), 4)


def test_spectral_band_for_scaled_regular():
    n, d = 200, 10
    h = sample_regular_multigraph(n, d, seed=42)
    rep = spectral_error(scale_weights(h, (n - 1) / d), make_clique(n, 1.0))
    assert 0.4 < rep.epsilon < 1.0  # near 2 sqrt(d-1)/d = 0.6 with finite-size slack
