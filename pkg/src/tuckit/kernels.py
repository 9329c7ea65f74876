"""Deterministic dense matrix kernels: SVD, dominant subspaces, QR, polar alignment.

The factorizations are computed with numpy's LAPACK bindings and then
normalized to a canonical sign convention so that repeated calls on
identical input bits return identical output bits, and so that traces
and serialized results diff cleanly across runs.

Sign convention: in every column of ``U`` the entry of largest magnitude
(first index on ties) is made nonnegative, and the paired column of
``V`` is flipped in tandem.  Unpaired columns (beyond ``min(m, p)``)
are normalized by the same rule individually; they multiply zero
singular values, so reconstruction is unaffected.
"""

from dataclasses import dataclass

import numpy as np

from .validation import check_matrix, check_orthonormal

# Smallest acceptable |R[i, i]| relative to ||input||_F in QR before the
# input is declared rank-deficient.
QR_RANK_TOL = 1e-12

# Smallest singular value of an r x r overlap matrix below which the
# polar alignment is flagged as non-unique.
OVERLAP_SINGULAR_TOL = 1e-12


class ConvergenceError(RuntimeError):
    """The iterative SVD driver failed to converge (pathological input)."""


class RankDeficiencyError(ValueError):
    """A matrix required to have full column rank does not."""


@dataclass(frozen=True)
class SvdResult:
    """Full singular value decomposition ``a = u @ diag(sigma) @ v.T``.

    ``u`` is m x m orthogonal, ``v`` is p x p orthogonal, and ``sigma``
    holds the min(m, p) singular values in descending order, with the
    canonical sign convention applied (see module docstring).
    """

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray


@dataclass(frozen=True)
class SubspaceResult:
    """Dominant left singular subspace of a matrix.

    Attributes
    ----------
    basis : ndarray, m x r
        Orthonormal basis of the dominant r-dimensional left singular
        subspace, sign convention applied.
    gap : float
        ``sigma_r - sigma_{r+1}``, with ``sigma_{r+1} = 0`` when
        ``r = min(m, p)``.  A positive gap makes the subspace unique.
    degenerate : bool
        True when ``gap <= gap_tol``: the subspace is (numerically) tied
        and the returned basis is one representative of a continuum.
    sigma : ndarray
        All min(m, p) singular values, descending.
    """

    basis: np.ndarray
    gap: float
    degenerate: bool
    sigma: np.ndarray


def _fix_signs(u, v=None, paired=0):
    """Apply the canonical sign convention in place; returns the inputs."""
    cols = np.arange(u.shape[1])
    lead = np.argmax(np.abs(u), axis=0)
    signs = np.where(u[lead, cols] < 0.0, -1.0, 1.0)
    u *= signs
    if v is not None:
        v[:, :paired] *= signs[:paired]
        if v.shape[1] > paired:
            tail = v[:, paired:]
            lead_v = np.argmax(np.abs(tail), axis=0)
            tail_signs = np.where(tail[lead_v, np.arange(tail.shape[1])] < 0.0, -1.0, 1.0)
            v[:, paired:] *= tail_signs
    return u, v


def svd(a):
    """Full SVD with descending singular values and canonical signs.

    Deterministic: identical input bits produce identical output bits.

    Raises
    ------
    ConvergenceError
        If the underlying iterative driver exceeds its iteration cap,
        which signals pathological input.
    """
    a = check_matrix(a)
    try:
        u, sigma, vt = np.linalg.svd(a, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(
            f"SVD did not converge for a {a.shape[0]}x{a.shape[1]} matrix "
            f"with ||a||_F = {np.linalg.norm(a):.3e}"
        ) from exc
    v = vt.T.copy()
    u = np.ascontiguousarray(u)
    _fix_signs(u, v, paired=len(sigma))
    return SvdResult(u=u, sigma=sigma, v=v)


def singular_values(a):
    """Singular values of `a`, descending."""
    a = check_matrix(a)
    try:
        return np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(
            f"SVD did not converge for a {a.shape[0]}x{a.shape[1]} matrix"
        ) from exc


def leading_left_subspace(y, r, gap_tol=0.0):
    """Orthonormal basis of the dominant ``r``-dimensional left singular subspace.

    Parameters
    ----------
    y : ndarray, m x p
    r : int
        Target subspace dimension, ``1 <= r <= min(m, p)``.
    gap_tol : float
        The result is flagged degenerate when
        ``sigma_r - sigma_{r+1} <= gap_tol``.

    Returns
    -------
    SubspaceResult
    """
    y = check_matrix(y, name="y")
    m, p = y.shape
    r = int(r)
    if not 1 <= r <= min(m, p):
        raise ValueError(f"rank out of range: r={r} for a {m}x{p} matrix")
    if gap_tol < 0:
        raise ValueError("gap_tol must be >= 0")
    try:
        u, sigma, _ = np.linalg.svd(y, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(
            f"SVD did not converge for a {m}x{p} matrix"
        ) from exc
    basis = np.ascontiguousarray(u[:, :r])
    _fix_signs(basis)
    trailing = sigma[r] if r < len(sigma) else 0.0
    gap = float(sigma[r - 1] - trailing)
    return SubspaceResult(basis=basis, gap=gap, degenerate=gap <= gap_tol,
                          sigma=sigma)


def qr_orthonormalize(b):
    """Thin QR orthonormalization with the R diagonal forced positive.

    Returns the m x r matrix Q spanning the columns of `b`.  Raises
    `RankDeficiencyError` when the smallest |R[i, i]| falls at or below
    ``QR_RANK_TOL * ||b||_F``, i.e. when `b` does not have full column
    rank at working precision.
    """
    b = check_matrix(b, name="b")
    m, r = b.shape
    if r > m:
        raise ValueError(f"cannot orthonormalize {r} columns in dimension {m}")
    q, rr = np.linalg.qr(b)
    diag = np.diagonal(rr)
    scale = np.linalg.norm(b)
    if np.min(np.abs(diag)) <= QR_RANK_TOL * scale:
        raise RankDeficiencyError(
            f"rank-deficient input: min |R[i,i]| = {np.min(np.abs(diag)):.3e} "
            f"<= {QR_RANK_TOL:g} * ||b||_F = {QR_RANK_TOL * scale:.3e}"
        )
    return q * np.where(diag < 0.0, -1.0, 1.0)


def _polar_align(u, x):
    """Polar alignment plus the smallest singular value of the overlap."""
    overlap = u.T @ x
    res = svd(overlap)
    z = u @ (res.u @ res.v.T)
    smin = float(res.sigma[-1])
    return z, smin


def polar_align(u, x):
    """Rotate the basis `u` to be as close as possible to the target `x`.

    Among all ``u @ W`` with ``W`` orthogonal r x r, returns the one
    minimizing ``||u @ W - x||_F``.  The result has orthonormal columns
    and spans the same subspace as `u`.  When ``u.T @ x`` is singular
    the minimizer is not unique; one is still returned (callers that
    need the flag use `tuckit.subspace.greedy_project`).
    """
    u = check_orthonormal(u, name="u")
    x = check_matrix(x, name="x")
    if u.shape != x.shape:
        raise ValueError(f"shape mismatch: u is {u.shape}, x is {x.shape}")
    z, _ = _polar_align(u, x)
    return z


def kronecker(a, b):
    """Kronecker product; block (i, j) equals ``a[i, j] * b``."""
    a = check_matrix(a, name="a")
    b = check_matrix(b, name="b")
    return np.kron(a, b)


def nuclear_norm(a):
    """Sum of the singular values of `a`."""
    return float(np.sum(singular_values(a)))
