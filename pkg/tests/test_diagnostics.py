"""Stationarity, projector distance, and nondegeneracy diagnostics."""

import numpy as np
import pytest

from tuckit import (
    SolverConfig,
    gen_synthetic,
    kkt_residual,
    nondegeneracy_gaps,
    projector_distance,
    qr_orthonormalize,
    solve,
    subspace_rel_change,
)


def random_orthonormal(rng, m, r):
    return qr_orthonormalize(rng.standard_normal((m, r)))


def rank_one_instance(seed=0, sigma=2.0, dims=(4, 5, 3)):
    rng = np.random.default_rng(seed)
    vecs = [random_orthonormal(rng, d, 1) for d in dims]
    x = sigma * np.einsum("i,j,k->ijk", *(v.ravel() for v in vecs))
    return x, vecs, sigma


class TestKktResidual:
    def test_rank_one_critical_point(self):
        x, factors, _ = rank_one_instance()
        rep = kkt_residual(x, factors)
        assert rep.aggregate <= 1e-10
        assert rep.aggregate_normalized <= 1e-10

    def test_feasibility_small_for_any_feasible_point(self):
        rng = np.random.default_rng(1)
        x = rng.standard_normal((5, 4, 3))
        factors = [random_orthonormal(rng, d, 2) for d in x.shape]
        rep = kkt_residual(x, factors)
        assert max(rep.feasibility) <= 1e-10
        assert all(g >= 0 for g in rep.gradient)
        assert np.all(np.isfinite(rep.gradient))

    def test_converged_solve_is_stationary(self):
        x = gen_synthetic((8, 9, 7), (2, 3, 2), noise_level=0.1, seed=5)
        model, _ = solve(x, (2, 3, 2), SolverConfig(algorithm="greedy"))
        rep = kkt_residual(x, model.factors)
        assert rep.aggregate_normalized <= 1e-8

    def test_gradient_rotation_invariant(self):
        rng = np.random.default_rng(2)
        x = rng.standard_normal((5, 4, 3))
        factors = [random_orthonormal(rng, d, 2) for d in x.shape]
        rotated = [f @ random_orthonormal(rng, 2, 2) for f in factors]
        a = kkt_residual(x, factors)
        b = kkt_residual(x, rotated)
        np.testing.assert_allclose(a.gradient, b.gradient, atol=1e-10)


class TestProjectorDistance:
    def test_identical_factor_sets_give_exact_zero(self):
        rng = np.random.default_rng(3)
        factors = [random_orthonormal(rng, 6, 2), random_orthonormal(rng, 5, 3)]
        dist = projector_distance(factors, [f.copy() for f in factors])
        assert dist.per_mode == (0.0, 0.0)
        assert dist.total == 0.0

    def test_orthogonal_lines(self):
        a = [np.array([[1.0], [0.0]])]
        b = [np.array([[0.0], [1.0]])]
        dist = projector_distance(a, b)
        assert dist.per_mode[0] == pytest.approx(np.sqrt(2.0), rel=1e-14)

    def test_rotation_invariance(self):
        rng = np.random.default_rng(4)
        factors = [random_orthonormal(rng, 7, 3) for _ in range(3)]
        rotated = [f @ random_orthonormal(rng, 3, 3) for f in factors]
        assert projector_distance(factors, rotated).total <= 1e-10

    def test_matches_materialized_projectors(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            a = [random_orthonormal(rng, 6, 2), random_orthonormal(rng, 4, 2)]
            b = [random_orthonormal(rng, 6, 2), random_orthonormal(rng, 4, 2)]
            dist = projector_distance(a, b)
            for n in range(2):
                direct = np.linalg.norm(a[n] @ a[n].T - b[n] @ b[n].T)
                assert abs(dist.per_mode[n] - direct) <= 1e-10

    def test_triangle_inequality(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            a, b, c = ([random_orthonormal(rng, 5, 2)] for _ in range(3))
            dab = projector_distance(a, b).total
            dbc = projector_distance(b, c).total
            dac = projector_distance(a, c).total
            assert dac <= dab + dbc + 1e-10

    def test_shape_mismatch(self):
        with pytest.raises(ValueError, match="shape mismatch"):
            projector_distance([np.eye(3)[:, :2]], [np.eye(4)[:, :2]])


class TestSubspaceRelChange:
    def test_no_change(self):
        rng = np.random.default_rng(7)
        factors = [random_orthonormal(rng, 5, 2) for _ in range(2)]
        assert subspace_rel_change(factors, [f.copy() for f in factors]) == 0.0

    def test_single_mode_lines(self):
        a = [np.array([[1.0], [0.0]])]
        b = [np.array([[0.0], [1.0]])]
        # numerator sqrt(2), denominator sqrt(1)
        assert subspace_rel_change(a, b) == pytest.approx(np.sqrt(2.0), rel=1e-14)

    def test_rotations_do_not_register(self):
        rng = np.random.default_rng(8)
        factors = [random_orthonormal(rng, 6, 3) for _ in range(3)]
        rotated = [f @ random_orthonormal(rng, 3, 3) for f in factors]
        assert subspace_rel_change(factors, rotated) <= 1e-10

    def test_denominator_is_sum_of_sqrt_ranks(self):
        rng = np.random.default_rng(9)
        prev = [random_orthonormal(rng, 6, 1), random_orthonormal(rng, 5, 4)]
        curr = [random_orthonormal(rng, 6, 1), random_orthonormal(rng, 5, 4)]
        from tuckit import projector_distance as pd
        expected = sum(pd(prev, curr).per_mode) / (1.0 + 2.0)
        assert subspace_rel_change(prev, curr) == pytest.approx(expected, rel=1e-12)


class TestNondegeneracyGaps:
    def test_rank_one_gap_is_sigma(self):
        x, factors, sigma = rank_one_instance(sigma=2.5)
        gaps = nondegeneracy_gaps(x, factors)
        np.testing.assert_allclose(gaps, sigma, rtol=1e-12)

    def test_zero_tensor_fully_degenerate(self):
        rng = np.random.default_rng(10)
        x = np.zeros((4, 3, 5))
        factors = [random_orthonormal(rng, d, 2) for d in x.shape]
        np.testing.assert_allclose(nondegeneracy_gaps(x, factors), 0.0, atol=1e-15)

    def test_rotation_invariance(self):
        rng = np.random.default_rng(11)
        x = rng.standard_normal((5, 6, 4))
        factors = [random_orthonormal(rng, d, 2) for d in x.shape]
        rotated = [f @ random_orthonormal(rng, 2, 2) for f in factors]
        np.testing.assert_allclose(nondegeneracy_gaps(x, factors),
                                   nondegeneracy_gaps(x, rotated), atol=1e-10)
