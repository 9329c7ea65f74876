"""Closest-point selection on dominant singular subspaces.

The mode subproblem of orthogonality iteration maximizes ``||Z^T Y||_F^2``
over matrices ``Z`` with r orthonormal columns; its solution set is the
family of orthonormal bases of the dominant r-dimensional left singular
subspace of ``Y``.  `greedy_project` picks, among those maximizers, the
one closest in Frobenius norm to a given feasible point ``X``: take an
orthonormal basis ``U`` of the dominant subspace, compute the full SVD
``U^T X = Ub S Vb^T`` of the overlap, and return ``U @ Ub @ Vb^T``.  The
choice depends only on the subspace spanned by ``U``, not on the basis.

`gain_bound_residual` evaluates the inequality that makes the greedy
choice useful for convergence monitoring: for the greedy ``Z``,

    ||Z^T Y||^2 - ||X^T Y||^2  >=  (sigma_r^2 - sigma_{r+1}^2)/2 * ||Z - X||^2,

so the objective gain of a mode update dominates the squared step size
scaled by the singular-value gap.
"""

from dataclasses import dataclass

import numpy as np

from .kernels import (
    OVERLAP_SINGULAR_TOL,
    _polar_align,
    leading_left_subspace,
    singular_values,
)
from .validation import check_matrix, check_orthonormal

# How closely ||z^T y||_F^2 must match the maximal value (relative) for
# z to count as a subproblem maximizer in `gain_bound_residual`.
MEMBERSHIP_TOL = 1e-8


@dataclass(frozen=True)
class GreedyResult:
    """Outcome of `greedy_project`.

    Attributes
    ----------
    z : ndarray, m x r
        The selected maximizer, closest to the anchor among all bases of
        the computed dominant subspace.
    gap : float
        ``sigma_r(y) - sigma_{r+1}(y)``.
    unique : bool
        True when the selection is provably the unique closest point:
        the dominant subspace is a singleton (gap above tolerance) and
        the overlap with the anchor is nonsingular.
    overlap_singular : bool
        True when the smallest singular value of ``basis^T x`` is at or
        below tolerance, so ties among aligned bases are possible.
    """

    z: np.ndarray
    gap: float
    unique: bool
    overlap_singular: bool


@dataclass(frozen=True)
class UniquenessReport:
    """Uniqueness conditions for the closest-maximizer selection.

    ``cond1``: the overlap between the best dominant basis and the
    anchor is nonsingular.  ``cond2``: the dominant subspace itself is
    unique; reported as None (indeterminate) when the singular-value gap
    is inside tolerance, because tied singular values make the candidate
    subspaces a continuum that cannot be ranked numerically.
    """

    cond1: bool
    cond2: bool | None
    gap: float


def greedy_project(y, r, x, gap_tol):
    """Closest maximizer of ``||Z^T y||_F^2`` to the anchor `x`.

    Parameters
    ----------
    y : ndarray, m x p
    r : int
        Subspace dimension; requires ``r <= min(m, p)``.
    x : ndarray, m x r
        Orthonormal anchor the selection stays close to.
    gap_tol : float
        Gap threshold below which the dominant subspace is flagged as
        degenerate.  The construction is still applied (never an error);
        the result is then one valid selection among many and
        ``unique`` is False.

    Returns
    -------
    GreedyResult
    """
    x = check_orthonormal(x, name="x")
    y = check_matrix(y, name="y")
    if y.shape[0] != x.shape[0]:
        raise ValueError(f"shape mismatch: y is {y.shape}, x is {x.shape}")
    r = int(r)
    if r != x.shape[1]:
        raise ValueError(f"x has {x.shape[1]} columns, expected r={r}")
    sub = leading_left_subspace(y, r, gap_tol)
    z, smin = _polar_align(sub.basis, x)
    overlap_singular = smin <= OVERLAP_SINGULAR_TOL
    return GreedyResult(
        z=z,
        gap=sub.gap,
        unique=(not sub.degenerate) and (not overlap_singular),
        overlap_singular=overlap_singular,
    )


def uniqueness_report(y, r, x, gap_tol):
    """Evaluate both uniqueness conditions for `greedy_project` at (y, r, x)."""
    x = check_orthonormal(x, name="x")
    y = check_matrix(y, name="y")
    if y.shape[0] != x.shape[0]:
        raise ValueError(f"shape mismatch: y is {y.shape}, x is {x.shape}")
    sub = leading_left_subspace(y, int(r), gap_tol)
    overlap_sigma = singular_values(sub.basis.T @ x)
    cond1 = bool(overlap_sigma[-1] > OVERLAP_SINGULAR_TOL)
    cond2 = True if not sub.degenerate else None
    return UniquenessReport(cond1=cond1, cond2=cond2, gap=sub.gap)


def gain_bound_residual(x, y, z):
    """Slack in the gap-weighted step bound at a subproblem maximizer `z`.

    Returns ``(||z^T y||^2 - ||x^T y||^2) - (sigma_r^2 - sigma_{r+1}^2)/2
    * ||z - x||^2``, which is nonnegative whenever `z` is the greedy
    (closest) maximizer for the anchor `x`.

    Raises
    ------
    ValueError
        If ``||z^T y||_F^2`` does not reach the maximal value
        ``sigma_1^2 + ... + sigma_r^2`` within `MEMBERSHIP_TOL`
        (relative), i.e. `z` is not a subproblem maximizer at all.
    """
    x = check_orthonormal(x, name="x")
    z = check_orthonormal(z, name="z")
    y = check_matrix(y, name="y")
    if x.shape != z.shape:
        raise ValueError(f"shape mismatch: x is {x.shape}, z is {z.shape}")
    if y.shape[0] != x.shape[0]:
        raise ValueError(f"shape mismatch: y is {y.shape}, x is {x.shape}")
    r = x.shape[1]
    if r > min(y.shape):
        raise ValueError(f"rank out of range: r={r} for a {y.shape[0]}x{y.shape[1]} matrix")
    sigma = singular_values(y)
    top = float(np.sum(sigma[:r] ** 2))
    z_energy = float(np.linalg.norm(z.T @ y) ** 2)
    if abs(z_energy - top) > MEMBERSHIP_TOL * (1.0 + top):
        raise ValueError(
            f"z is not a subproblem maximizer: ||z^T y||^2 = {z_energy:.12e} "
            f"but the maximum is {top:.12e}"
        )
    x_energy = float(np.linalg.norm(x.T @ y) ** 2)
    trailing = float(sigma[r]) if r < len(sigma) else 0.0
    gap_sq = float(sigma[r - 1]) ** 2 - trailing ** 2
    step_sq = float(np.linalg.norm(z - x) ** 2)
    return (z_energy - x_energy) - 0.5 * gap_sq * step_sq
