"""Estimator API: fit/transform surface and scikit-learn interoperability."""

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import Pipeline

from tuckit import TuckerDecomposition, gen_synthetic, objective


@pytest.fixture()
def noisy_tensor():
    return gen_synthetic((10, 9, 8), (3, 2, 2), noise_level=0.1, seed=0)


class TestFit:
    def test_fit_sets_model_attributes(self, noisy_tensor):
        est = TuckerDecomposition(ranks=(3, 2, 2)).fit(noisy_tensor)
        assert est.core_.shape == (3, 2, 2)
        assert len(est.factors_) == 3
        for n, f in enumerate(est.factors_):
            assert f.shape == (noisy_tensor.shape[n], (3, 2, 2)[n])
            assert np.linalg.norm(f.T @ f - np.eye(f.shape[1])) <= 1e-10
        assert est.stop_reason_ in ("change_tol", "max_sweeps")
        assert est.n_sweeps_ == len(est.trace_.records)
        assert est.objective_ == pytest.approx(
            objective(noisy_tensor, est.factors_), rel=1e-9)

    def test_fit_without_ranks_rejected(self, noisy_tensor):
        with pytest.raises(ValueError, match="ranks"):
            TuckerDecomposition().fit(noisy_tensor)

    def test_near_exact_fit_on_noiseless_data(self):
        x = gen_synthetic((8, 7, 6), (2, 2, 2), noise_level=0.0, seed=1)
        est = TuckerDecomposition(ranks=(2, 2, 2), algorithm="greedy").fit(x)
        assert est.fit_residual_ <= 1e-10


class TestTransform:
    def test_transform_of_training_tensor_is_core(self, noisy_tensor):
        est = TuckerDecomposition(ranks=(3, 2, 2)).fit(noisy_tensor)
        np.testing.assert_allclose(est.transform(noisy_tensor), est.core_,
                                   rtol=1e-12, atol=1e-12)

    def test_fit_transform(self, noisy_tensor):
        est = TuckerDecomposition(ranks=(3, 2, 2))
        core = est.fit_transform(noisy_tensor)
        np.testing.assert_allclose(core, est.core_, rtol=1e-12, atol=1e-12)

    def test_inverse_transform_round_trip(self, noisy_tensor):
        est = TuckerDecomposition(ranks=(3, 2, 2)).fit(noisy_tensor)
        recon = est.inverse_transform(est.transform(noisy_tensor))
        np.testing.assert_allclose(recon, est.reconstruct(), rtol=1e-12,
                                   atol=1e-12)

    def test_transform_before_fit_rejected(self, noisy_tensor):
        with pytest.raises(ValueError, match="not fitted"):
            TuckerDecomposition(ranks=(3, 2, 2)).transform(noisy_tensor)

    def test_transform_shape_mismatch_rejected(self, noisy_tensor):
        est = TuckerDecomposition(ranks=(3, 2, 2)).fit(noisy_tensor)
        with pytest.raises(ValueError, match="expected"):
            est.transform(np.ones((4, 4, 4)))


class TestSklearnInterop:
    def test_get_params_round_trip(self):
        est = TuckerDecomposition(ranks=(2, 2), algorithm="greedy", max_sweeps=7)
        params = est.get_params()
        assert params["algorithm"] == "greedy"
        assert params["max_sweeps"] == 7
        est2 = TuckerDecomposition(**params)
        assert est2.get_params() == params

    def test_set_params(self):
        est = TuckerDecomposition(ranks=(2, 2))
        est.set_params(algorithm="tuckals3", change_tol=1e-6)
        assert est.algorithm == "tuckals3"
        assert est.change_tol == 1e-6

    def test_clone(self, noisy_tensor):
        est = TuckerDecomposition(ranks=(3, 2, 2)).fit(noisy_tensor)
        fresh = clone(est)
        assert not hasattr(fresh, "factors_")
        assert fresh.ranks == (3, 2, 2)

    def test_pipeline_compatibility(self, noisy_tensor):
        pipe = Pipeline([("tucker", TuckerDecomposition(ranks=(3, 2, 2)))])
        core = pipe.fit_transform(noisy_tensor)
        assert core.shape == (3, 2, 2)

    def test_invalid_algorithm_surfaces_at_fit(self, noisy_tensor):
        est = TuckerDecomposition(ranks=(3, 2, 2), algorithm="qr")
        with pytest.raises(ValueError, match="unknown algorithm"):
            est.fit(noisy_tensor)
