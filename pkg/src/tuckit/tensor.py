"""Dense N-way tensor operations: matricization, mode products, inner products.

All tensors are plain float64 ndarrays.  The flat layout convention used
throughout (and in the on-disk format, see `tuckit.io`) is generalized
column-major: the first mode index varies fastest.  Matricization follows
the lexicographic fiber ordering, so column ``j`` of the mode-``n``
unfolding holds the fiber at the multi-index obtained by counting the
remaining modes with the lowest mode varying fastest.  Under this
convention the mode-0 unfolding is a pure reshape.
"""

import numpy as np

from .validation import check_matrix, check_mode, check_tensor


def unfold(x, mode):
    """Mode-``mode`` matricization of a tensor.

    Parameters
    ----------
    x : ndarray
        Input tensor with ``x.ndim >= 1``.
    mode : int
        0-based mode index.

    Returns
    -------
    ndarray of shape ``(x.shape[mode], prod of remaining dims)``
        Columns are the mode-``mode`` fibers in lexicographic order
        (lower modes vary fastest across columns).
    """
    x = check_tensor(x)
    mode = check_mode(mode, x.ndim)
    return np.reshape(np.moveaxis(x, mode, 0), (x.shape[mode], -1), order="F")


def fold(mat, mode, shape):
    """Inverse of `unfold`: rebuild a tensor of `shape` from its unfolding.

    Round-trips are exact: ``fold(unfold(x, n), n, x.shape)`` reproduces
    ``x`` bit for bit, since only index bookkeeping is involved.
    """
    mat = check_matrix(mat, name="mat")
    shape = tuple(int(s) for s in shape)
    mode = check_mode(mode, len(shape))
    rest = shape[:mode] + shape[mode + 1:]
    expected = (shape[mode], int(np.prod(rest, dtype=np.int64)) if rest else 1)
    if mat.shape != expected:
        raise ValueError(
            f"mat shape {mat.shape} inconsistent with target shape {shape} "
            f"at mode {mode} (expected {expected})"
        )
    stacked = np.reshape(mat, (shape[mode],) + rest, order="F")
    return np.moveaxis(stacked, 0, mode)


def mode_multiply(x, y, mode):
    """Mode-``mode`` product of tensor `x` with matrix `y`.

    Contracts mode ``mode`` of `x` (size ``I``) against the columns of
    ``y`` (shape ``p x I``), producing a tensor whose mode ``mode`` has
    size ``p``.  Equivalently ``unfold(result, mode) = y @ unfold(x, mode)``.
    """
    x = check_tensor(x)
    y = check_matrix(y, name="y")
    mode = check_mode(mode, x.ndim)
    if y.shape[1] != x.shape[mode]:
        raise ValueError(
            f"inner dimension mismatch: y has {y.shape[1]} columns but "
            f"mode {mode} has size {x.shape[mode]}"
        )
    out = np.tensordot(y, x, axes=[[1], [mode]])
    return np.moveaxis(out, 0, mode)


def multi_mode_multiply(x, ops):
    """Apply several mode products, at most one per mode.

    Parameters
    ----------
    x : ndarray
    ops : sequence of (matrix, mode) pairs
        Matrices to contract against distinct modes of `x`.

    Returns
    -------
    ndarray
        Equal (up to roundoff) to applying `mode_multiply` sequentially
        in any order.  Internally the contractions run largest-shrink
        first to keep intermediate tensors small; the result does not
        depend on that choice beyond roundoff.
    """
    x = check_tensor(x)
    ops = list(ops)
    seen = set()
    for _, mode in ops:
        mode = check_mode(mode, x.ndim)
        if mode in seen:
            raise ValueError(f"duplicate mode {mode} in ops")
        seen.add(mode)
    if not ops:
        return x.copy()
    # Largest shrink first: sort by output/input size ratio, mode breaks ties.
    order = sorted(ops, key=lambda op: (op[0].shape[0] / x.shape[op[1]], op[1]))
    out = x
    for y, mode in order:
        out = mode_multiply(out, y, mode)
    return out


def inner(a, b):
    """Inner product of two tensors of identical shape."""
    a = check_tensor(a, name="a")
    b = check_tensor(b, name="b")
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.vdot(a, b))


def fro_norm(x):
    """Frobenius norm, ``sqrt(inner(x, x))``."""
    x = check_tensor(x)
    return float(np.sqrt(np.vdot(x, x)))


def tucker_reconstruct(core, factors):
    """Expand a Tucker model ``core x_0 A_0 ... x_{N-1} A_{N-1}`` to a full tensor."""
    core = check_tensor(core, name="core")
    factors = [check_matrix(f, name=f"factors[{n}]") for n, f in enumerate(factors)]
    if len(factors) != core.ndim:
        raise ValueError(
            f"expected {core.ndim} factors for a {core.ndim}-way core, got {len(factors)}"
        )
    for n, f in enumerate(factors):
        if f.shape[1] != core.shape[n]:
            raise ValueError(
                f"factors[{n}] has {f.shape[1]} columns but core mode {n} "
                f"has size {core.shape[n]}"
            )
    return multi_mode_multiply(core, [(f, n) for n, f in enumerate(factors)])
