"""Scikit-learn style estimator wrapping the Tucker solvers."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .solvers import SolverConfig, solve
from .tensor import multi_mode_multiply, tucker_reconstruct
from .validation import check_tensor


class TuckerDecomposition(TransformerMixin, BaseEstimator):
    """Best rank-(r_1, ..., r_N) Tucker approximation of a dense tensor.

    Fits per-mode orthonormal factors and a core tensor by alternating
    dominant-subspace updates, starting from the truncated higher-order
    SVD.  ``transform`` projects a tensor onto the learned subspaces
    (yielding a core-shaped tensor) and ``inverse_transform`` expands a
    core back to full size.

    Parameters
    ----------
    ranks : sequence of int
        Target multilinear rank, one entry per tensor mode.
    algorithm : {'hooi', 'greedy', 'tuckals3'}, default 'hooi'
        Sweep scheme; see `tuckit.solvers`.
    max_sweeps : int, default 500
    change_tol : float, default 1e-10
        Stop once the subspace relative change between sweeps is at or
        below this value.
    gap_tol : float, default 1e-8
        Singular-value gap below which a mode update is flagged
        degenerate in the trace.
    trace_level : {'basic', 'full'}, default 'basic'
        'full' adds wall-clock timings to serialized traces.
    seed : int, default 0
        Feeds only the optional randomized initializer; fitting itself
        is deterministic.

    Attributes
    ----------
    core_ : ndarray of shape `ranks`
    factors_ : tuple of ndarray
        Per-mode orthonormal factors, factor n of shape (I_n, r_n).
    trace_ : SolveTrace
        Per-sweep diagnostics of the fitting run.
    n_sweeps_ : int
    stop_reason_ : str
    objective_ : float
        ``||core_||_F^2`` at the fitted factors.
    fit_residual_ : float
        Relative reconstruction residual at fit time.

    Examples
    --------
    >>> from tuckit import gen_synthetic, TuckerDecomposition
    >>> x = gen_synthetic((12, 10, 8), (3, 2, 2), noise_level=0.1, seed=0)
    >>> est = TuckerDecomposition(ranks=(3, 2, 2)).fit(x)
    >>> est.core_.shape
    (3, 2, 2)
    """

    def __init__(self, ranks=None, algorithm="hooi", max_sweeps=500,
                 change_tol=1e-10, gap_tol=1e-8, trace_level="basic", seed=0):
        self.ranks = ranks
        self.algorithm = algorithm
        self.max_sweeps = max_sweeps
        self.change_tol = change_tol
        self.gap_tol = gap_tol
        self.trace_level = trace_level
        self.seed = seed

    def _config(self):
        return SolverConfig(
            algorithm=self.algorithm,
            max_sweeps=self.max_sweeps,
            change_tol=self.change_tol,
            gap_tol=self.gap_tol,
            seed=self.seed,
            trace_level=self.trace_level,
        )

    def fit(self, X, y=None):
        """Fit the Tucker model to the tensor `X`.  `y` is ignored."""
        if self.ranks is None:
            raise ValueError("ranks must be set before fitting")
        model, trace = solve(X, self.ranks, self._config())
        self.core_ = model.core
        self.factors_ = model.factors
        self.fit_residual_ = model.fit_residual
        self.trace_ = trace
        self.n_sweeps_ = len(trace.records)
        self.stop_reason_ = trace.stop_reason
        self.objective_ = float(np.vdot(model.core, model.core))
        return self

    def _check_fitted(self):
        if not hasattr(self, "factors_"):
            raise ValueError("this estimator is not fitted yet; call fit first")

    def transform(self, X):
        """Project `X` onto the learned subspaces; returns a core-shaped tensor."""
        self._check_fitted()
        X = check_tensor(X, name="X")
        expected = tuple(f.shape[0] for f in self.factors_)
        if tuple(X.shape) != expected:
            raise ValueError(f"X has shape {X.shape}, expected {expected}")
        return multi_mode_multiply(X, [(f.T, n) for n, f in enumerate(self.factors_)])

    def inverse_transform(self, core):
        """Expand a core-shaped tensor back to the full tensor space."""
        self._check_fitted()
        return tucker_reconstruct(core, self.factors_)

    def reconstruct(self):
        """Reconstruction of the training tensor from the fitted model."""
        self._check_fitted()
        return tucker_reconstruct(self.core_, self.factors_)
