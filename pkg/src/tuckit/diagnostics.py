"""Stationarity, subspace-distance, and nondegeneracy measurements.

These run on a tensor plus a factor set and are rotation invariant:
right-multiplying any factor by an orthogonal matrix changes none of the
reported numbers (beyond roundoff), since everything is a function of
the per-mode projectors ``A_n @ A_n.T``.
"""

from dataclasses import dataclass

import numpy as np

from .kernels import singular_values
from .tensor import multi_mode_multiply, unfold
from .validation import check_factors, check_tensor


def _contracted_unfolding(x, factors, mode):
    # Mode-`mode` unfolding of x contracted with every other factor transposed.
    ops = [(f.T, i) for i, f in enumerate(factors) if i != mode]
    return unfold(multi_mode_multiply(x, ops), mode)


@dataclass(frozen=True)
class KktReport:
    """First-order stationarity residuals of the factor-set maximization.

    ``gradient[n]`` is ``||G G^T A - A A^T G G^T A||_F`` for mode n,
    where G is the contracted unfolding at the current factors;
    ``gradient_normalized[n]`` divides by ``1 + ||G G^T A||_F``.
    ``feasibility[n]`` is ``||A^T A - I||_F``.  The aggregates take the
    max over modes of the gradient (raw or normalized) and feasibility
    residuals.
    """

    gradient: tuple
    gradient_normalized: tuple
    feasibility: tuple
    aggregate: float
    aggregate_normalized: float


@dataclass(frozen=True)
class ProjectorDistance:
    """Frobenius distances between per-mode projectors and their l2 total."""

    per_mode: tuple
    total: float


def kkt_residual(x, factors):
    """Stationarity report for `factors` on tensor `x`.

    All entries are nonnegative and finite.  At a critical point of the
    constrained maximization the gradient residuals vanish.
    """
    x = check_tensor(x)
    factors = check_factors(factors, x.shape)
    grad, grad_norm, feas = [], [], []
    for n, a in enumerate(factors):
        g = _contracted_unfolding(x, factors, n)
        h = g @ (g.T @ a)
        resid = float(np.linalg.norm(h - a @ (a.T @ h)))
        grad.append(resid)
        grad_norm.append(resid / (1.0 + float(np.linalg.norm(h))))
        feas.append(float(np.linalg.norm(a.T @ a - np.eye(a.shape[1]))))
    return KktReport(
        gradient=tuple(grad),
        gradient_normalized=tuple(grad_norm),
        feasibility=tuple(feas),
        aggregate=max(max(grad), max(feas)),
        aggregate_normalized=max(max(grad_norm), max(feas)),
    )


def _projector_dist(a, b):
    # ||A A^T - B B^T||_F via the identity 2r - 2||A^T B||_F^2, with
    # r - ||A^T B||_F^2 evaluated as the complement residual
    # ||B - A (A^T B)||_F^2 (algebraically equal for orthonormal A, B).
    # The direct difference cancels catastrophically for (nearly)
    # coinciding subspaces, flooring the distance near sqrt(eps); the
    # residual form floors near eps.  No m x m projector materialized.
    if a is b or np.array_equal(a, b):
        return 0.0
    resid = b - a @ (a.T @ b)
    return float(np.sqrt(2.0) * np.linalg.norm(resid))


def projector_distance(a, b):
    """Per-mode and total Frobenius distance between projector tuples.

    Both arguments are factor sets of matching shapes.  The per-mode
    distance is ``||A_n A_n^T - B_n B_n^T||_F``, computed without
    materializing the projectors; the total is the l2 norm of the
    per-mode distances.
    """
    a = [np.asarray(f, dtype=np.float64) for f in a]
    b = [np.asarray(f, dtype=np.float64) for f in b]
    if len(a) != len(b):
        raise ValueError(f"factor sets have different lengths: {len(a)} vs {len(b)}")
    per_mode = []
    for n, (fa, fb) in enumerate(zip(a, b)):
        if fa.shape != fb.shape:
            raise ValueError(
                f"shape mismatch at mode {n}: {fa.shape} vs {fb.shape}"
            )
        per_mode.append(_projector_dist(fa, fb))
    return ProjectorDistance(
        per_mode=tuple(per_mode),
        total=float(np.sqrt(np.sum(np.square(per_mode)))),
    )


def subspace_rel_change(prev, curr):
    """Relative change of the learned multilinear subspace between iterates.

    The ratio of the summed per-mode projector distances to the summed
    projector norms; for orthonormal factors the denominator is
    ``sum_n sqrt(r_n)``.
    """
    dist = projector_distance(prev, curr)
    denom = float(np.sum([np.sqrt(f.shape[1]) for f in prev]))
    return float(np.sum(dist.per_mode)) / denom


def nondegeneracy_gaps(x, factors):
    """Per-mode singular-value gaps ``sigma_{r_n} - sigma_{r_n + 1}``.

    Computed on the contracted unfoldings at the current factors, with
    the trailing singular value taken as 0 when ``r_n`` equals the
    smaller matrix dimension.  All gaps positive means every mode
    subproblem has a unique dominant subspace (block nondegeneracy);
    a zero gap (for instance on the zero tensor) marks full degeneracy.
    """
    x = check_tensor(x)
    factors = check_factors(factors, x.shape)
    gaps = []
    for n, a in enumerate(factors):
        r = a.shape[1]
        sigma = singular_values(_contracted_unfolding(x, factors, n))
        trailing = float(sigma[r]) if r < len(sigma) else 0.0
        gaps.append(float(sigma[r - 1]) - trailing)
    return np.asarray(gaps)
