"""Input validation helpers shared across the package.

Every public entry point funnels its array arguments through these
checks so that shape and finiteness errors surface with a clear message
instead of deep inside a numpy kernel.
"""

import numpy as np

# Feasibility tolerance for matrices that claim orthonormal columns.
ORTHONORMAL_TOL = 1e-10


def check_tensor(x, name="x"):
    """Coerce `x` to a float64 ndarray and validate basic tensor invariants.

    Requires at least one mode, no empty modes, and finite entries.
    """
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim < 1:
        arr = arr.reshape(1)
    if any(dim < 1 for dim in arr.shape):
        raise ValueError(f"{name}: all mode sizes must be >= 1, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name}: entries must be finite (no NaN or Inf)")
    return arr


def check_matrix(a, name="a"):
    """Coerce `a` to a 2-D float64 ndarray with finite entries."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name}: expected a 2-D array, got ndim={arr.ndim}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name}: matrix must be nonempty, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name}: entries must be finite (no NaN or Inf)")
    return arr


def check_mode(mode, ndim):
    """Validate a 0-based mode index against the number of tensor modes."""
    mode = int(mode)
    if not 0 <= mode < ndim:
        raise ValueError(f"mode out of range: {mode} not in [0, {ndim})")
    return mode


def check_orthonormal(a, name="a", tol=ORTHONORMAL_TOL):
    """Validate that `a` has orthonormal columns (within `tol` in Frobenius norm)."""
    arr = check_matrix(a, name=name)
    m, r = arr.shape
    if r > m:
        raise ValueError(f"{name}: cannot have {r} orthonormal columns in dimension {m}")
    gram_err = np.linalg.norm(arr.T @ arr - np.eye(r))
    if gram_err > tol:
        raise ValueError(
            f"{name}: columns are not orthonormal (||a^T a - I||_F = {gram_err:.3e})"
        )
    return arr


def check_ranks(ranks, shape, name="ranks", require_subproblem_bound=False):
    """Validate a target multilinear rank tuple against a tensor shape.

    With ``require_subproblem_bound`` each rank must also satisfy
    ``r_n <= prod_{i != n} r_i``, which is what keeps every mode
    subproblem well posed during alternating sweeps.
    """
    shape = tuple(int(s) for s in shape)
    ranks = tuple(int(r) for r in ranks)
    if len(ranks) != len(shape):
        raise ValueError(
            f"{name}: expected {len(shape)} entries for shape {shape}, got {len(ranks)}"
        )
    for n, (r, dim) in enumerate(zip(ranks, shape)):
        if not 1 <= r <= dim:
            raise ValueError(
                f"{name}: rank {r} out of range for mode {n} of size {dim}"
            )
    if require_subproblem_bound:
        for n, r in enumerate(ranks):
            other = 1
            for i, ri in enumerate(ranks):
                if i != n:
                    other *= ri
            if r > other:
                raise ValueError(
                    f"{name}: rank {r} at mode {n} exceeds the product {other} of the "
                    "remaining ranks, so the mode subproblem is rank-deficient"
                )
    return ranks


def check_factors(factors, shape, name="factors"):
    """Validate a per-mode list of orthonormal factor matrices for `shape`.

    Factor ``n`` must be ``I_n x r_n`` with orthonormal columns, and the
    rank tuple must satisfy the subproblem bound (see `check_ranks`).
    Returns the factors as a tuple of float64 arrays.
    """
    shape = tuple(int(s) for s in shape)
    if len(factors) != len(shape):
        raise ValueError(
            f"{name}: expected {len(shape)} factors, got {len(factors)}"
        )
    checked = []
    for n, f in enumerate(factors):
        arr = check_orthonormal(f, name=f"{name}[{n}]")
        if arr.shape[0] != shape[n]:
            raise ValueError(
                f"{name}[{n}]: leading dimension {arr.shape[0]} does not match "
                f"mode size {shape[n]}"
            )
        checked.append(arr)
    check_ranks([f.shape[1] for f in checked], shape, name=f"{name} ranks",
                require_subproblem_bound=True)
    return tuple(checked)
