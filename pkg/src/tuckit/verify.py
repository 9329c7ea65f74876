"""Seeded randomized property campaigns behind the ``verify`` subcommand.

Each campaign draws its trials from per-trial generators seeded with
``master_seed + trial_index``, so trials are independent and the whole
campaign is reproducible (and could be sharded) for a given master
seed.
"""

from dataclasses import dataclass

import numpy as np

from .io import gen_synthetic
from .kernels import leading_left_subspace, qr_orthonormalize, singular_values
from .solvers import compare_runs
from .subspace import gain_bound_residual, greedy_project

TRACE_INEQUALITY_TOL = 1e-10
GAIN_BOUND_TOL = 1e-10
FIXED_POINT_TOL = 1e-10
SWEEP_EQUIVALENCE_TOL = 1e-8
ELIGIBLE_GAP = 1e-6


@dataclass(frozen=True)
class CampaignResult:
    name: str
    trials: int
    failures: int
    worst: float
    detail: str

    @property
    def passed(self):
        return self.failures == 0


def _random_with_gap(rng, m, p, r, min_gap=ELIGIBLE_GAP):
    # Redraw from the same stream until the r-th singular gap clears min_gap.
    while True:
        y = rng.standard_normal((m, p))
        sigma = singular_values(y)
        trailing = sigma[r] if r < len(sigma) else 0.0
        if sigma[r - 1] - trailing > min_gap:
            return y


def trace_inequality_campaign(trials, seed):
    """|<X, Y>| never exceeds the sum of singular value products.

    Every tenth trial instead constructs X and Y with shared singular
    vectors, for which the inequality must be tight within tolerance.
    """
    failures = 0
    worst = -np.inf
    for i in range(trials):
        rng = np.random.default_rng(seed + i)
        m = int(rng.integers(2, 8))
        p = int(rng.integers(2, 8))
        if i % 10 == 0:
            k = min(m, p)
            u = qr_orthonormalize(rng.standard_normal((m, k)))
            v = qr_orthonormalize(rng.standard_normal((p, k)))
            d1 = np.sort(rng.uniform(0.5, 3.0, size=k))[::-1]
            d2 = np.sort(rng.uniform(0.5, 3.0, size=k))[::-1]
            x = (u * d1) @ v.T
            y = (u * d2) @ v.T
            bound = float(np.sum(singular_values(x) * singular_values(y)))
            slack = abs(float(np.vdot(x, y)) - bound)
        else:
            x = rng.standard_normal((m, p))
            y = rng.standard_normal((m, p))
            bound = float(np.sum(singular_values(x) * singular_values(y)))
            slack = abs(float(np.vdot(x, y))) - bound
        worst = max(worst, slack)
        if slack > TRACE_INEQUALITY_TOL:
            failures += 1
    return CampaignResult(
        name="trace-inequality",
        trials=trials,
        failures=failures,
        worst=worst,
        detail=f"worst slack {worst:.3e} (tol {TRACE_INEQUALITY_TOL:g})",
    )


def gain_bound_campaign(trials, seed, m=8, p=10, r=3):
    """Greedy selections satisfy the gap-weighted step bound."""
    failures = 0
    worst = np.inf
    for i in range(trials):
        rng = np.random.default_rng(seed + i)
        y = _random_with_gap(rng, m, p, r)
        x = qr_orthonormalize(rng.standard_normal((m, r)))
        z = greedy_project(y, r, x, gap_tol=1e-8).z
        resid = gain_bound_residual(x, y, z)
        worst = min(worst, resid)
        if resid < -GAIN_BOUND_TOL:
            failures += 1
    return CampaignResult(
        name="gain-bound",
        trials=trials,
        failures=failures,
        worst=worst,
        detail=f"worst residual {worst:.3e} (floor -{GAIN_BOUND_TOL:g})",
    )


def fixed_point_campaign(trials, seed):
    """Anchors that already span a dominant subspace are returned unchanged."""
    failures = 0
    worst = 0.0
    for i in range(trials):
        rng = np.random.default_rng(seed + i)
        m = int(rng.integers(4, 9))
        p = int(rng.integers(4, 10))
        r = int(rng.integers(1, min(m, p, 4)))
        y = _random_with_gap(rng, m, p, r)
        basis = leading_left_subspace(y, r).basis
        q = qr_orthonormalize(rng.standard_normal((r, r)))
        x = basis @ q
        z = greedy_project(y, r, x, gap_tol=1e-8).z
        err = float(np.linalg.norm(z - x))
        worst = max(worst, err)
        if err > FIXED_POINT_TOL:
            failures += 1
    return CampaignResult(
        name="fixed-point",
        trials=trials,
        failures=failures,
        worst=worst,
        detail=f"worst displacement {worst:.3e} (tol {FIXED_POINT_TOL:g})",
    )


def sweep_equivalence_campaign(instances, seed, sweeps=15):
    """Per-sweep multilinear subspaces of hooi and greedy coincide.

    Sweeps where either run reports a minimum gap at or below the
    eligibility threshold are skipped, since tied subspaces make the
    selections genuinely ambiguous.
    """
    failures = 0
    worst = 0.0
    checked = 0
    for i in range(instances):
        x = gen_synthetic((9, 8, 7), (3, 2, 2), noise_level=0.1, seed=seed + i)
        trace = compare_runs(x, (3, 2, 2), max_sweeps=sweeps,
                             algorithms=("hooi", "greedy"))
        for rec in trace.records:
            if min(rec.gap_min.values()) <= ELIGIBLE_GAP:
                continue
            checked += 1
            dist = max(rec.projector_distance)
            worst = max(worst, dist)
            if dist > SWEEP_EQUIVALENCE_TOL:
                failures += 1
    return CampaignResult(
        name="sweep-equivalence",
        trials=checked,
        failures=failures,
        worst=worst,
        detail=f"worst projector distance {worst:.3e} over {checked} eligible "
               f"sweeps (tol {SWEEP_EQUIVALENCE_TOL:g})",
    )


def run_all(trials, seed):
    """Run every campaign with trial counts scaled from `trials`."""
    return [
        trace_inequality_campaign(trials, seed),
        gain_bound_campaign(trials, seed),
        fixed_point_campaign(max(1, trials // 5), seed),
        sweep_equivalence_campaign(max(1, trials // 200), seed),
    ]
