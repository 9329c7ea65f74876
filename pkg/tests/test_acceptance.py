"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest -s tests/test_acceptance.py`` to see the per-criterion
lines.  Every tolerance is pinned here; nothing is calibrated at runtime.
"""

import functools
import time

import numpy as np
import pytest

from tuckit import (
    SolverConfig,
    compare_runs,
    gen_synthetic,
    hosvd_init,
    kkt_residual,
    kronecker,
    mode_multiply,
    multi_mode_multiply,
    objective,
    qr_orthonormalize,
    singular_values,
    solve,
    fold,
    unfold,
)
from tuckit.verify import (
    fixed_point_campaign,
    gain_bound_campaign,
)

ELIGIBLE_GAP = 1e-6


def report(number, name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {number:>2} {name}: {status}{suffix}")
    assert ok, f"criterion {number} ({name}) failed: {detail}"


@pytest.fixture(scope="module")
def protocol_tensor():
    # Shared instance for criteria 1, 9, and 10.
    return gen_synthetic((20, 20, 20), (5, 5, 5), noise_level=0.1, seed=1)


@pytest.fixture(scope="module")
def recovery_solves():
    # Criterion 6 runs, reused by criterion 9.
    runs = {}
    for seed in range(20):
        x = gen_synthetic((15, 16, 17), (2, 3, 4), noise_level=0.0, seed=seed)
        for alg in ("hooi", "greedy"):
            runs[(seed, alg)] = (x,) + solve(
                x, (2, 3, 4), SolverConfig(algorithm=alg, max_sweeps=50))
    return runs


def test_criterion_1_sweep_equivalence(protocol_tensor):
    t0 = time.perf_counter()
    trace = compare_runs(protocol_tensor, (5, 5, 5), max_sweeps=30,
                         algorithms=("hooi", "greedy"))
    elapsed = time.perf_counter() - t0
    assert len(trace.records) == 30
    eligible = 0
    worst = 0.0
    for rec in trace.records:
        if min(rec.gap_min.values()) <= ELIGIBLE_GAP:
            continue
        eligible += 1
        worst = max(worst, max(rec.projector_distance))
    ok = eligible > 0 and worst <= 1e-8 and elapsed < 5.0
    report(1, "sweep equivalence", ok,
           f"worst per-mode projector distance {worst:.3e} over {eligible} "
           f"eligible sweeps, {elapsed:.2f}s")


def test_criterion_2_monotone_objective():
    rng = np.random.default_rng(42)
    noise_levels = (0.0, 0.1, 0.5)
    violations = 0
    checked = 0
    for i in range(100):
        dims = tuple(int(d) for d in rng.integers(8, 21, size=3))
        while True:
            ranks = tuple(int(r) for r in rng.integers(1, 6, size=3))
            if all(r <= np.prod([q for j, q in enumerate(ranks) if j != n])
                   for n, r in enumerate(ranks)):
                break
        x = gen_synthetic(dims, ranks, noise_levels[i % 3], seed=10_000 + i)
        bound = float(np.linalg.norm(x.ravel()) ** 2) + 1e-9
        start = objective(x, hosvd_init(x, ranks))
        for alg in ("hooi", "greedy"):
            _, trace = solve(x, ranks, SolverConfig(
                algorithm=alg, max_sweeps=12, change_tol=0.0))
            objs = [start] + [rec.objective for rec in trace.records]
            for a, b in zip(objs, objs[1:]):
                checked += 1
                if b < a - 1e-9 * (1.0 + a) or b > bound:
                    violations += 1
    report(2, "monotone objective", violations == 0,
           f"{violations} violations over {checked} sweep transitions "
           f"of 100 instances")


def test_criterion_3_gain_bound_campaign():
    t0 = time.perf_counter()
    res = gain_bound_campaign(trials=1000, seed=7, m=8, p=10, r=3)
    elapsed = time.perf_counter() - t0
    ok = res.failures == 0 and res.worst >= -1e-10 and elapsed < 2.0
    report(3, "gain bound campaign", ok,
           f"worst residual {res.worst:.3e} over 1000 trials, {elapsed:.2f}s")


def test_criterion_4_trace_inequality_campaign():
    worst_slack = -np.inf
    violations = 0
    for i in range(1000):
        rng = np.random.default_rng(20_000 + i)
        m = int(rng.integers(2, 8))
        p = int(rng.integers(2, 8))
        x = rng.standard_normal((m, p))
        y = rng.standard_normal((m, p))
        bound = float(np.sum(singular_values(x) * singular_values(y)))
        slack = abs(float(np.vdot(x, y))) - bound
        worst_slack = max(worst_slack, slack)
        if slack > 1e-10:
            violations += 1
    worst_eq = 0.0
    for i in range(100):
        rng = np.random.default_rng(30_000 + i)
        m = int(rng.integers(3, 8))
        p = int(rng.integers(3, 8))
        k = min(m, p)
        u = qr_orthonormalize(rng.standard_normal((m, k)))
        v = qr_orthonormalize(rng.standard_normal((p, k)))
        d1 = np.sort(rng.uniform(0.2, 2.0, k))[::-1]
        d2 = np.sort(rng.uniform(0.2, 2.0, k))[::-1]
        x = (u * d1) @ v.T
        y = (u * d2) @ v.T
        bound = float(np.sum(singular_values(x) * singular_values(y)))
        gap = abs(float(np.vdot(x, y)) - bound)
        worst_eq = max(worst_eq, gap)
        if gap > 1e-10:
            violations += 1
    report(4, "trace inequality campaign", violations == 0,
           f"worst slack {worst_slack:.3e} over 1000 pairs, worst equality "
           f"gap {worst_eq:.3e} over 100 shared-vector pairs")


def test_criterion_5_fixed_point_campaign():
    res = fixed_point_campaign(trials=200, seed=11)
    report(5, "fixed point campaign", res.failures == 0,
           f"worst displacement {res.worst:.3e} over 200 trials (tol 1e-10)")


def test_criterion_6_exact_recovery(recovery_solves):
    worst_resid = 0.0
    worst_kkt = 0.0
    for (seed, alg), (x, model, trace) in recovery_solves.items():
        assert len(trace.records) <= 50
        worst_resid = max(worst_resid, model.fit_residual)
        worst_kkt = max(worst_kkt,
                        kkt_residual(x, model.factors).aggregate_normalized)
    ok = worst_resid <= 1e-8 and worst_kkt <= 1e-8
    report(6, "exact recovery", ok,
           f"worst residual {worst_resid:.3e}, worst normalized KKT "
           f"{worst_kkt:.3e} over 20 seeds x 2 algorithms")


def test_criterion_7_hooi_vs_tuckals3_speed():
    wins = 0
    for i in range(20):
        x = gen_synthetic((20, 20, 20), (5, 5, 5), noise_level=0.1,
                          seed=500 + i)
        sweeps = {}
        for alg in ("hooi", "tuckals3"):
            _, trace = solve(x, (5, 5, 5), SolverConfig(
                algorithm=alg, max_sweeps=200, change_tol=1e-6))
            if trace.stop_reason == "change_tol":
                sweeps[alg] = len(trace.records)
            else:
                sweeps[alg] = np.inf
        if sweeps["hooi"] <= sweeps["tuckals3"]:
            wins += 1
    report(7, "hooi vs tuckals3 sweeps", wins >= 18,
           f"hooi needed no more sweeps in {wins}/20 instances")


def test_criterion_8_identity_suite():
    worst_mat = 0.0
    worst_obj = 0.0
    exact_round_trips = True
    for i in range(100):
        rng = np.random.default_rng(40_000 + i)
        dims = tuple(int(d) for d in rng.integers(2, 6, size=3))
        while True:
            ranks = tuple(min(int(r), d)
                          for r, d in zip(rng.integers(1, 4, size=3), dims))
            if all(r <= np.prod([q for j, q in enumerate(ranks) if j != n])
                   for n, r in enumerate(ranks)):
                break
        core = rng.standard_normal(ranks)
        factors = [rng.standard_normal((d, r)) for d, r in zip(dims, ranks)]
        full = multi_mode_multiply(core, [(f, n) for n, f in enumerate(factors)])
        for mode in range(3):
            others = [factors[j] for j in reversed(range(3)) if j != mode]
            rhs = factors[mode] @ unfold(core, mode) @ functools.reduce(
                kronecker, others).T
            lhs = unfold(full, mode)
            err = np.linalg.norm(lhs - rhs) / (np.linalg.norm(rhs) or 1.0)
            worst_mat = max(worst_mat, err)
        x = rng.standard_normal(dims)
        ortho = [qr_orthonormalize(rng.standard_normal((d, r)))
                 for d, r in zip(dims, ranks)]
        f_val = objective(x, ortho)
        proj = x
        for n, f in enumerate(ortho):
            proj = mode_multiply(proj, f @ f.T, n)
        ident = float(np.vdot(x, proj))
        worst_obj = max(worst_obj, abs(f_val - ident) / (1.0 + abs(ident)))
        for mode in range(3):
            if not np.array_equal(fold(unfold(x, mode), mode, dims), x):
                exact_round_trips = False
    ok = worst_mat <= 1e-10 and worst_obj <= 1e-10 and exact_round_trips
    report(8, "identity suite", ok,
           f"worst matricization identity error {worst_mat:.3e}, worst "
           f"objective identity error {worst_obj:.3e}, round trips exact: "
           f"{exact_round_trips}")


def test_criterion_9_per_step_bound(protocol_tensor, recovery_solves):
    traces = []
    _, protocol_trace = solve(protocol_tensor, (5, 5, 5), SolverConfig(
        algorithm="greedy", max_sweeps=30, change_tol=0.0))
    traces.append(protocol_trace)
    traces += [trace for (seed, alg), (x, model, trace)
               in recovery_solves.items() if alg == "greedy"]
    checked = 0
    violations = 0
    worst = np.inf
    for trace in traces:
        for rec in trace.records:
            for mode_rec in rec.modes:
                if mode_rec.gap <= ELIGIBLE_GAP:
                    continue
                checked += 1
                slack = (mode_rec.objective_gain + 1e-9
                         - 0.5 * mode_rec.gap**2 * mode_rec.step_norm**2)
                worst = min(worst, slack)
                if slack < 0:
                    violations += 1
    report(9, "per-step gap bound", violations == 0 and checked > 0,
           f"{checked} eligible mode updates, worst slack {worst:.3e}")


def test_criterion_10_determinism(protocol_tensor):
    texts = []
    csvs = []
    for _ in range(2):
        run_texts = []
        run_csvs = []
        for alg in ("hooi", "greedy"):
            _, trace = solve(protocol_tensor, (5, 5, 5), SolverConfig(
                algorithm=alg, max_sweeps=30, change_tol=0.0))
            run_texts.append(trace.to_text())
            run_csvs.append(trace.to_csv())
        joint = compare_runs(protocol_tensor, (5, 5, 5), max_sweeps=30,
                             algorithms=("hooi", "greedy"))
        run_csvs.append(joint.to_csv())
        texts.append(run_texts)
        csvs.append(run_csvs)
    ok = texts[0] == texts[1] and csvs[0] == csvs[1]
    report(10, "byte-identical traces", ok,
           "repeated runs serialized identically")
