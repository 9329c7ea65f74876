"""Command-line interface: gen, hosvd, solve, verify, compare."""

import argparse
import json
import sys

from .io import gen_synthetic, read_tensor, tensor_digest, write_tensor
from .kernels import ConvergenceError
from .solvers import SolverConfig, SolverError, compare_runs, hosvd_init, solve
from .tensor import multi_mode_multiply
from .verify import run_all


def _ints(text):
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}"
        ) from exc


def _write_model(core, factors, prefix):
    paths = []
    core_path = f"{prefix}_core.dnt"
    write_tensor(core, core_path)
    paths.append(core_path)
    for n, f in enumerate(factors):
        path = f"{prefix}_factor{n}.dnt"
        write_tensor(f, path)
        paths.append(path)
    return paths


def cmd_gen(args):
    x = gen_synthetic(args.shape, args.ranks, args.noise, args.seed)
    write_tensor(x, args.out)
    print(f"wrote {args.out} shape={','.join(map(str, x.shape))} "
          f"digest={tensor_digest(x)}")
    return 0


def cmd_hosvd(args):
    x = read_tensor(args.tensor)
    factors = hosvd_init(x, args.ranks)
    core = multi_mode_multiply(x, [(f.T, n) for n, f in enumerate(factors)])
    for path in _write_model(core, factors, args.out_prefix):
        print(f"wrote {path}")
    return 0


def cmd_solve(args):
    x = read_tensor(args.tensor)
    config = SolverConfig(
        algorithm=args.algorithm,
        max_sweeps=args.max_sweeps,
        change_tol=args.change_tol,
        gap_tol=args.gap_tol,
        seed=args.seed,
        trace_level=args.trace_level,
    )
    try:
        model, trace = solve(x, args.ranks, config)
    except SolverError as exc:
        if args.trace and exc.trace is not None:
            _write_trace(exc.trace, args.trace, args.trace_format)
        raise
    if args.trace:
        _write_trace(trace, args.trace, args.trace_format)
        print(f"wrote {args.trace}")
    if args.model:
        for path in _write_model(model.core, model.factors, args.model):
            print(f"wrote {path}")
    final = trace.records[-1]
    print(f"algorithm={config.algorithm} sweeps={len(trace.records)} "
          f"stop_reason={trace.stop_reason} objective={final.objective!r} "
          f"fit_residual={model.fit_residual!r}")
    return 0


def _write_trace(trace, path, fmt):
    text = trace.to_csv() if fmt == "csv" else trace.to_text()
    with open(path, "w") as fh:
        fh.write(text)


def cmd_verify(args):
    results = run_all(args.trials, args.seed)
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {res.name}: {res.trials} trials, "
              f"{res.failures} failures, {res.detail}")
    failed = [res for res in results if not res.passed]
    if failed:
        print(json.dumps({
            "status": "fail",
            "campaigns": [
                {"name": res.name, "trials": res.trials,
                 "failures": res.failures, "worst": res.worst}
                for res in failed
            ],
        }))
        return 1
    print(f"ALL PASS ({len(results)} campaigns)")
    return 0


def cmd_compare(args):
    x = read_tensor(args.tensor)
    trace = compare_runs(x, args.ranks, max_sweeps=args.max_sweeps,
                         gap_tol=args.gap_tol)
    csv_text = trace.to_csv()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(csv_text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(csv_text)
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="tuckit",
        description="Best low-multilinear-rank Tucker approximation of "
                    "dense tensors, with convergence diagnostics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a seeded synthetic tensor file")
    p.add_argument("--shape", type=_ints, required=True, metavar="I1,I2,...")
    p.add_argument("--ranks", type=_ints, required=True, metavar="R1,R2,...")
    p.add_argument("--noise", type=float, default=0.0,
                   help="relative Frobenius noise level (default 0)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output tensor file")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("hosvd", help="truncated higher-order SVD of a tensor file")
    p.add_argument("tensor", help="input tensor file")
    p.add_argument("--ranks", type=_ints, required=True, metavar="R1,R2,...")
    p.add_argument("--out-prefix", required=True,
                   help="prefix for the core and factor output files")
    p.set_defaults(func=cmd_hosvd)

    p = sub.add_parser("solve", help="fit a Tucker model by alternating sweeps")
    p.add_argument("tensor", help="input tensor file")
    p.add_argument("--ranks", type=_ints, required=True, metavar="R1,R2,...")
    p.add_argument("--algorithm", choices=("hooi", "greedy", "tuckals3"),
                   default="hooi")
    p.add_argument("--max-sweeps", type=int, default=500)
    p.add_argument("--change-tol", type=float, default=1e-10)
    p.add_argument("--gap-tol", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", help="write the per-sweep trace to this path")
    p.add_argument("--trace-format", choices=("text", "csv"), default="text")
    p.add_argument("--trace-level", choices=("basic", "full"), default="basic",
                   help="'full' adds wall-clock timings (not reproducible)")
    p.add_argument("--model", metavar="PREFIX",
                   help="write core and factor tensor files with this prefix")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="run the randomized property campaigns")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser(
        "compare",
        help="run hooi, greedy, and tuckals3 from one shared HOSVD start",
    )
    p.add_argument("tensor", help="input tensor file")
    p.add_argument("--ranks", type=_ints, required=True, metavar="R1,R2,...")
    p.add_argument("--max-sweeps", type=int, default=30)
    p.add_argument("--gap-tol", type=float, default=1e-8)
    p.add_argument("--out", help="write the joint trace table to this path "
                                 "(default: stdout)")
    p.set_defaults(func=cmd_compare)

    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, SolverError, ConvergenceError) as exc:
        print(json.dumps({
            "status": "error",
            "command": args.command,
            "reason": str(exc),
        }), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
