"""Alternating solvers for the best rank-(r_1, ..., r_N) tensor approximation.

Three sweep schemes share one outer loop:

- ``hooi``: each mode update replaces the factor with an orthonormal
  basis of the dominant left singular subspace of the mode subproblem
  matrix (the unfolding of the tensor contracted with all other
  factors).  The basis representative is determined by the canonical
  sign convention of `tuckit.kernels`.
- ``greedy``: same subspace per update, but the basis is rotated to the
  closest point to the previous factor (`tuckit.subspace`).  This makes
  the factor sequence itself well defined, not just its span, and each
  update satisfies a gap-weighted step bound that is recorded per mode.
- ``tuckals3``: one orthogonal-iteration step ``Q(G G^T A)`` per mode
  instead of the exact dominant subspace.  Requires ``A^T G G^T A``
  positive definite; a rank-deficient intermediate aborts the run.

All schemes initialize from the truncated higher-order SVD and update
modes in ascending order within a sweep.  The objective
``F(A) = ||X x_0 A_0^T ... x_{N-1} A_{N-1}^T||_F^2`` is nondecreasing
across sweeps for ``hooi`` and ``greedy``.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .diagnostics import kkt_residual, projector_distance, subspace_rel_change
from .io import tensor_digest
from .kernels import (
    RankDeficiencyError,
    _polar_align,
    leading_left_subspace,
    qr_orthonormalize,
    singular_values,
)
from .tensor import multi_mode_multiply, tucker_reconstruct, unfold
from .validation import check_factors, check_ranks, check_tensor

ALGORITHMS = ("hooi", "greedy", "tuckals3")
TRACE_LEVELS = ("basic", "full")


class SolverError(RuntimeError):
    """A solver run aborted; carries the partial trace when one exists."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class SolverConfig:
    """Configuration for `solve`.

    ``change_tol`` stops the run once the subspace relative change
    between consecutive sweeps falls at or below it.  ``gap_tol`` flags
    a mode update as degenerate when its singular-value gap is at or
    below it (the run continues either way).  ``seed`` only feeds the
    optional randomized initializer used in robustness experiments; the
    default truncated-HOSVD start is deterministic.  ``mode_order`` is
    reserved: sweeps always update modes in ascending order.
    """

    algorithm: str = "hooi"
    max_sweeps: int = 500
    change_tol: float = 1e-10
    gap_tol: float = 1e-8
    mode_order: str = "ascending"
    seed: int = 0
    trace_level: str = "basic"

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(
                f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}"
            )
        if int(self.max_sweeps) < 1:
            raise ValueError("max_sweeps must be >= 1")
        if self.change_tol < 0 or self.gap_tol < 0:
            raise ValueError("tolerances must be >= 0")
        if self.mode_order != "ascending":
            raise ValueError("mode_order is fixed to 'ascending'")
        if self.trace_level not in TRACE_LEVELS:
            raise ValueError(f"trace_level must be one of {TRACE_LEVELS}")


@dataclass(frozen=True)
class ModeUpdate:
    """Diagnostics for one factor update inside a sweep.

    ``energy`` is ``||A_new^T G||_F^2`` for the subproblem matrix ``G``
    of this update; at the last mode of a sweep it equals the objective
    at the end-of-sweep factors.  ``objective_gain`` is the energy
    increase over the previous factor on the same ``G``.
    ``bound_residual`` (greedy only, else None) is the slack in the
    gap-weighted step bound, nonnegative up to roundoff.
    """

    mode: int
    gap: float
    step_norm: float
    objective_gain: float
    bound_residual: float | None
    degenerate: bool
    energy: float


@dataclass(frozen=True)
class SweepRecord:
    """Per-sweep trace entry; `modes` holds the per-mode updates.

    ``wall_ms`` times the sweep update itself (not the per-sweep
    diagnostics) and is the one field that varies between reruns.
    """

    sweep: int
    objective: float
    modes: tuple
    rel_change: float
    kkt_aggregate: float
    gap_min: float
    min_gap_mode: int
    degenerate_any: bool
    wall_ms: float


_TRACE_COLUMNS = (
    "sweep", "objective", "rel_change", "kkt_aggregate",
    "gap_min", "min_mode_gap_index", "degenerate_any",
)


def _fmt(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass(frozen=True)
class SolveTrace:
    """Full record of a solve: config echo, input digest, per-sweep rows.

    The text and CSV renderings carry the same columns.  Wall-clock
    times are included only at ``trace_level='full'`` so that
    basic-level files are byte-identical across reruns.
    """

    config: SolverConfig
    shape: tuple
    ranks: tuple
    input_digest: str
    records: tuple
    stop_reason: str

    def _header_items(self):
        cfg = self.config
        return (
            ("schema", "1"),
            ("kind", "tucker-solve-trace"),
            ("algorithm", cfg.algorithm),
            ("shape", ",".join(str(s) for s in self.shape)),
            ("ranks", ",".join(str(r) for r in self.ranks)),
            ("max_sweeps", str(cfg.max_sweeps)),
            ("change_tol", _fmt(cfg.change_tol)),
            ("gap_tol", _fmt(cfg.gap_tol)),
            ("mode_order", cfg.mode_order),
            ("seed", str(cfg.seed)),
            ("trace_level", cfg.trace_level),
            ("input_digest", self.input_digest),
            ("stop_reason", self.stop_reason),
            ("sweeps", str(len(self.records))),
        )

    def _columns(self):
        cols = _TRACE_COLUMNS
        if self.config.trace_level == "full":
            cols = cols + ("wall_ms",)
        return cols

    def _row_values(self, rec):
        values = {
            "sweep": rec.sweep,
            "objective": rec.objective,
            "rel_change": rec.rel_change,
            "kkt_aggregate": rec.kkt_aggregate,
            "gap_min": rec.gap_min,
            "min_mode_gap_index": rec.min_gap_mode,
            "degenerate_any": rec.degenerate_any,
            "wall_ms": rec.wall_ms,
        }
        return [values[c] for c in self._columns()]

    def to_text(self):
        """Structured-text rendering: a header block then one record per sweep."""
        lines = [f"{key}: {val}" for key, val in self._header_items()]
        lines.append("")
        cols = self._columns()
        for rec in self.records:
            pairs = (f"{c}={_fmt(v)}" for c, v in zip(cols, self._row_values(rec)))
            lines.append(" ".join(pairs))
        return "\n".join(lines) + "\n"

    def to_csv(self):
        """Comma-separated rendering with the header block as # comments."""
        lines = [f"# {key}: {val}" for key, val in self._header_items()]
        lines.append(",".join(self._columns()))
        for rec in self.records:
            lines.append(",".join(_fmt(v) for v in self._row_values(rec)))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class TuckerModel:
    """Fitted Tucker model: core of size `ranks` plus per-mode factors.

    ``fit_residual`` is the relative reconstruction residual
    ``||X - reconstruction||_F / ||X||_F`` recorded at fit time.
    """

    core: np.ndarray
    factors: tuple
    fit_residual: float

    def reconstruct(self):
        """Expand the model to a full tensor."""
        return tucker_reconstruct(self.core, self.factors)


def subproblem_matrix(x, factors, mode):
    """Unfolding of `x` contracted with the transpose of every other factor.

    This is the matrix whose dominant left singular subspace defines the
    mode-``mode`` update.  Inside a sweep the caller passes the mixed
    factor set (already-updated factors for lower modes, previous-sweep
    factors for higher modes); for post-hoc diagnostics all factors are
    current.  Shape: ``I_mode x prod of the other ranks``.
    """
    x = check_tensor(x)
    factors = check_factors(factors, x.shape)
    ops = [(f.T, i) for i, f in enumerate(factors) if i != mode]
    return unfold(multi_mode_multiply(x, ops), mode)


def objective(x, factors):
    """``F(A) = ||X x_0 A_0^T ... x_{N-1} A_{N-1}^T||_F^2``.

    Equals ``||A_n^T G||_F^2`` for the mode-n subproblem matrix ``G``
    (see `subproblem_matrix`) at any mode when all factors are current.
    """
    x = check_tensor(x)
    factors = check_factors(factors, x.shape)
    core = multi_mode_multiply(x, [(f.T, n) for n, f in enumerate(factors)])
    return float(np.vdot(core, core))


def hosvd_init(x, ranks, gap_tol=0.0):
    """Truncated higher-order SVD initial factors.

    Factor ``n`` is the dominant ``r_n``-dimensional left singular basis
    of the mode-``n`` unfolding of the raw tensor (no sequential
    truncation).  Deterministic: identical input bits give identical
    factors.
    """
    x = check_tensor(x)
    ranks = check_ranks(ranks, x.shape)
    return tuple(
        leading_left_subspace(unfold(x, n), r, gap_tol).basis
        for n, r in enumerate(ranks)
    )


def random_init(shape, ranks, seed):
    """Seeded random orthonormal factors, for robustness experiments.

    Draws standard normal matrices and orthonormalizes them by QR.  The
    production initializer is `hosvd_init`; this one exists to probe
    basins of attraction from arbitrary feasible starts.
    """
    shape = tuple(int(s) for s in shape)
    ranks = check_ranks(ranks, shape)
    rng = np.random.default_rng(seed)
    return tuple(
        qr_orthonormalize(rng.standard_normal((dim, r)))
        for dim, r in zip(shape, ranks)
    )


def _run_sweep(x, factors, gap_tol, update):
    current = list(factors)
    records = []
    for n in range(x.ndim):
        a_old = current[n]
        g = unfold(
            multi_mode_multiply(
                x, [(f.T, i) for i, f in enumerate(current) if i != n]
            ),
            n,
        )
        a_new, gap, gap_sq_diff = update(g, a_old)
        old_energy = float(np.linalg.norm(a_old.T @ g) ** 2)
        new_energy = float(np.linalg.norm(a_new.T @ g) ** 2)
        step = float(np.linalg.norm(a_new - a_old))
        gain = new_energy - old_energy
        bound = None
        if gap_sq_diff is not None:
            bound = gain - 0.5 * gap_sq_diff * step**2
        records.append(ModeUpdate(
            mode=n,
            gap=gap,
            step_norm=step,
            objective_gain=gain,
            bound_residual=bound,
            degenerate=gap <= gap_tol,
            energy=new_energy,
        ))
        current[n] = a_new
    return tuple(current), tuple(records)


def sweep_hooi(x, factors, gap_tol):
    """One alternating sweep replacing each factor by a dominant subspace basis.

    Modes are updated in ascending order; each update sees the already
    updated lower-mode factors.  Returns the new factor set and the
    per-mode update records.  The objective never decreases across a
    sweep (up to roundoff).
    """
    x = check_tensor(x)
    factors = check_factors(factors, x.shape)

    def update(g, a_old):
        sub = leading_left_subspace(g, a_old.shape[1], gap_tol)
        return sub.basis, sub.gap, None

    return _run_sweep(x, factors, gap_tol, update)


def sweep_greedy(x, factors, gap_tol):
    """One alternating sweep using the closest-point dominant-subspace update.

    Each factor moves to the maximizer of its subproblem that is nearest
    to its previous value, i.e. ``greedy_project(G, r, A_old, gap_tol).z``.
    Per mode the gap-weighted step bound residual is recorded; it is
    nonnegative up to roundoff whenever the gap clears ``gap_tol``.
    """
    x = check_tensor(x)
    factors = check_factors(factors, x.shape)

    def update(g, a_old):
        r = a_old.shape[1]
        sub = leading_left_subspace(g, r, gap_tol)
        z, _ = _polar_align(sub.basis, a_old)
        trailing = float(sub.sigma[r]) if r < len(sub.sigma) else 0.0
        gap_sq_diff = float(sub.sigma[r - 1]) ** 2 - trailing**2
        return z, sub.gap, gap_sq_diff

    return _run_sweep(x, factors, gap_tol, update)


def sweep_tuckals3(x, factors, gap_tol):
    """One alternating sweep of single-step orthogonal iteration per mode.

    Each factor is replaced by ``qr_orthonormalize(G @ G.T @ A_old)``, a
    single power step toward the dominant subspace.  Assumes
    ``A_old^T G G^T A_old`` positive definite per mode; a rank-deficient
    intermediate raises `RankDeficiencyError` and aborts the sweep.  The
    recorded gap comes from an extra singular value computation and is
    diagnostic only.
    """
    x = check_tensor(x)
    factors = check_factors(factors, x.shape)

    def update(g, a_old):
        r = a_old.shape[1]
        a_new = qr_orthonormalize(g @ (g.T @ a_old))
        sigma = singular_values(g)
        trailing = float(sigma[r]) if r < len(sigma) else 0.0
        gap = float(sigma[r - 1]) - trailing
        return a_new, gap, None

    return _run_sweep(x, factors, gap_tol, update)


_SWEEPS = {"hooi": sweep_hooi, "greedy": sweep_greedy, "tuckals3": sweep_tuckals3}


def _sweep_record(x, sweep_idx, prev, factors, mode_records, wall_ms):
    gaps = [m.gap for m in mode_records]
    min_mode = int(np.argmin(gaps))
    return SweepRecord(
        sweep=sweep_idx,
        objective=mode_records[-1].energy,
        modes=mode_records,
        rel_change=subspace_rel_change(prev, factors),
        kkt_aggregate=kkt_residual(x, factors).aggregate_normalized,
        gap_min=gaps[min_mode],
        min_gap_mode=min_mode,
        degenerate_any=any(m.degenerate for m in mode_records),
        wall_ms=wall_ms,
    )


def solve(x, ranks, config=None):
    """Fit a best rank-`ranks` Tucker model to `x`.

    Initializes with `hosvd_init`, then iterates the configured sweep
    until the subspace relative change drops to ``change_tol`` or
    ``max_sweeps`` is reached.  The returned core is the projection
    ``X x_0 A_0^T ... x_{N-1} A_{N-1}^T`` at the final factors.

    Parameters
    ----------
    x : ndarray
    ranks : sequence of int
        Target multilinear rank; each ``r_n`` must satisfy
        ``r_n <= I_n`` and ``r_n <= prod_{i != n} r_i``.
    config : SolverConfig, optional

    Returns
    -------
    (TuckerModel, SolveTrace)

    Raises
    ------
    SolverError
        If a tuckals3 sweep hits a rank-deficient intermediate.  The
        partial trace (stop_reason ``rank_deficient``) is attached to
        the exception.
    """
    x = check_tensor(x)
    ranks = check_ranks(ranks, x.shape, require_subproblem_bound=True)
    if config is None:
        config = SolverConfig()
    digest = tensor_digest(x)
    sweep_fn = _SWEEPS[config.algorithm]
    factors = hosvd_init(x, ranks, config.gap_tol)
    records = []
    stop_reason = "max_sweeps"
    try:
        for k in range(1, config.max_sweeps + 1):
            t0 = time.perf_counter()
            prev = factors
            factors, mode_records = sweep_fn(x, factors, config.gap_tol)
            wall_ms = (time.perf_counter() - t0) * 1e3
            rec = _sweep_record(x, k, prev, factors, mode_records, wall_ms)
            records.append(rec)
            if rec.rel_change <= config.change_tol:
                stop_reason = "change_tol"
                break
    except RankDeficiencyError as exc:
        trace = SolveTrace(config, tuple(x.shape), ranks, digest,
                           tuple(records), "rank_deficient")
        raise SolverError(
            f"{config.algorithm} run aborted at sweep {len(records) + 1}: {exc}",
            trace=trace,
        ) from exc
    trace = SolveTrace(config, tuple(x.shape), ranks, digest,
                       tuple(records), stop_reason)
    core = multi_mode_multiply(x, [(f.T, n) for n, f in enumerate(factors)])
    recon = tucker_reconstruct(core, factors)
    x_norm = float(np.linalg.norm(x.ravel()))
    resid = float(np.linalg.norm((x - recon).ravel()))
    model = TuckerModel(
        core=core,
        factors=factors,
        fit_residual=resid / x_norm if x_norm > 0 else resid,
    )
    return model, trace


@dataclass(frozen=True)
class CompareRecord:
    """One sweep of a side-by-side run of several algorithms.

    The dict fields are keyed by algorithm name.  ``projector_distance``
    holds the per-mode projector distances between the hooi and greedy
    iterates after this sweep (empty when either is absent).
    """

    sweep: int
    objective: dict
    rel_change: dict
    gap_min: dict
    degenerate_any: dict
    projector_distance: tuple


@dataclass(frozen=True)
class CompareTrace:
    """Joint trace of algorithms advanced in lockstep from a shared start."""

    algorithms: tuple
    shape: tuple
    ranks: tuple
    input_digest: str
    gap_tol: float
    records: tuple = field(default_factory=tuple)

    def to_csv(self):
        lines = [
            "# schema: 1",
            "# kind: tucker-compare-trace",
            f"# algorithms: {','.join(self.algorithms)}",
            f"# shape: {','.join(str(s) for s in self.shape)}",
            f"# ranks: {','.join(str(r) for r in self.ranks)}",
            f"# gap_tol: {_fmt(self.gap_tol)}",
            f"# input_digest: {self.input_digest}",
        ]
        cols = ["sweep"]
        for alg in self.algorithms:
            cols += [f"{alg}_objective", f"{alg}_rel_change", f"{alg}_gap_min"]
        pair = "hooi" in self.algorithms and "greedy" in self.algorithms
        if pair:
            cols.append("hooi_greedy_projector_dist")
        lines.append(",".join(cols))
        for rec in self.records:
            row = [str(rec.sweep)]
            for alg in self.algorithms:
                row += [_fmt(rec.objective[alg]), _fmt(rec.rel_change[alg]),
                        _fmt(rec.gap_min[alg])]
            if pair:
                row.append(_fmt(max(rec.projector_distance)))
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"


def compare_runs(x, ranks, max_sweeps=30, gap_tol=1e-8,
                 algorithms=("hooi", "greedy", "tuckals3")):
    """Advance several algorithms in lockstep from one shared HOSVD start.

    All algorithms receive the exact same initial factor arrays and run
    for exactly `max_sweeps` sweeps with no early stopping, which keeps
    the per-sweep rows aligned.  When both ``hooi`` and ``greedy`` are
    present, each record carries their per-mode projector distances.

    Returns
    -------
    CompareTrace
    """
    x = check_tensor(x)
    ranks = check_ranks(ranks, x.shape, require_subproblem_bound=True)
    algorithms = tuple(algorithms)
    for alg in algorithms:
        if alg not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {alg!r}")
    if len(set(algorithms)) != len(algorithms):
        raise ValueError("duplicate algorithm in comparison")
    if int(max_sweeps) < 1:
        raise ValueError("max_sweeps must be >= 1")
    init = hosvd_init(x, ranks, gap_tol)
    states = {alg: init for alg in algorithms}
    pair = "hooi" in algorithms and "greedy" in algorithms
    records = []
    for k in range(1, int(max_sweeps) + 1):
        row = {name: {} for name in
               ("objective", "rel_change", "gap_min", "degenerate_any")}
        for alg in algorithms:
            prev = states[alg]
            try:
                new, mode_records = _SWEEPS[alg](x, prev, gap_tol)
            except RankDeficiencyError as exc:
                raise SolverError(
                    f"{alg} comparison run aborted at sweep {k}: {exc}"
                ) from exc
            states[alg] = new
            row["objective"][alg] = mode_records[-1].energy
            row["rel_change"][alg] = subspace_rel_change(prev, new)
            row["gap_min"][alg] = min(m.gap for m in mode_records)
            row["degenerate_any"][alg] = any(m.degenerate for m in mode_records)
        dists = ()
        if pair:
            dists = projector_distance(states["hooi"], states["greedy"]).per_mode
        records.append(CompareRecord(
            sweep=k,
            objective=row["objective"],
            rel_change=row["rel_change"],
            gap_min=row["gap_min"],
            degenerate_any=row["degenerate_any"],
            projector_distance=dists,
        ))
    return CompareTrace(
        algorithms=algorithms,
        shape=tuple(x.shape),
        ranks=ranks,
        input_digest=tensor_digest(x),
        gap_tol=gap_tol,
        records=tuple(records),
    )
