"""Command-line interface for the benchmark experiments.

Exit codes: 0 success, 1 a qualitative ordering assertion failed, 2 usage or
configuration error, 3 numerical error.  Heavy imports happen after thread
setup so ``--threads`` can pin the BLAS pool (the ``time`` subcommand always
runs single-threaded).
"""

import argparse
import os
import sys


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="prodkernel",
        description="Product-kernel interpolation benchmarks: stability, "
                    "accuracy, timing, greedy selection.",
    )
    parser.add_argument("--config", metavar="PATH", help="JSON experiment config")
    parser.add_argument("--out", metavar="DIR", default=None, help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="RNG seed override")
    parser.add_argument("--threads", type=int, default=None,
                        help="BLAS/OpenMP thread count (timing always uses 1)")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("cond", help="spectral condition numbers on the ladder grids")
    sub.add_parser("mse", help="mean squared interpolation errors on the ladder grids")
    p_time = sub.add_parser("time", help="four-method timing comparison on N x N grids")
    p_time.add_argument("--repetitions", type=int, default=None,
                        help="timed runs per method (default from config)")
    sub.add_parser("pgreedy", help="componentwise P-greedy demo with trace export")

    p_interp = sub.add_parser("interp", help="fit a product kernel on a point-set CSV")
    p_interp.add_argument("--points", required=True, metavar="CSV",
                          help="point set, header x1,...,xd")
    p_interp.add_argument("--kernel", action="append", required=True, metavar="SPEC",
                          help="component kernel spec (repeat per component)")
    p_interp.add_argument("--target", choices=["franke", "franke1d"], default="franke",
                          help="built-in target sampled at the points")

    p_back = sub.add_parser("backends", help="compare compiled and NumPy kernel backends")
    p_back.add_argument("--repetitions", type=int, default=3)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    threads = 1 if args.command == "time" else args.threads
    if threads is not None:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
                    "NUMEXPR_NUM_THREADS"):
            os.environ[var] = str(threads)

    try:
        return _dispatch(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3


def _dispatch(args) -> int:
    from prodkernel.bench import experiments
    from prodkernel.bench.config import config_overrides, load_config
    from prodkernel.bench.io import Table, emit_csv, emit_svg_plot

    cfg = load_config(args.config, seed=args.seed, out_dir=args.out)
    if getattr(args, "repetitions", None) is not None:
        cfg = config_overrides(cfg, timing_repetitions=args.repetitions)
    out_dir = cfg.out_dir
    os.makedirs(out_dir, exist_ok=True)

    violations = []
    if args.command == "cond":
        table, violations = experiments.run_cond_experiment(cfg)
        emit_csv(table, f"{out_dir}/cond.csv")
        emit_svg_plot(table, f"{out_dir}/cond.svg", x="n", y="cond2",
                      series="kernel", logy=True, title="spectral condition numbers")
    elif args.command == "mse":
        table, violations = experiments.run_mse_experiment(cfg)
        emit_csv(table, f"{out_dir}/mse.csv")
        emit_svg_plot(table, f"{out_dir}/mse.svg", x="n", y="mse",
                      series="kernel", logy=True, title="mean squared errors")
    elif args.command == "time":
        table, violations = experiments.run_time_experiment(cfg)
        emit_csv(table, f"{out_dir}/time.csv")
        emit_svg_plot(table, f"{out_dir}/time.svg", x="N", y="total_seconds",
                      series="method", logy=True, title="computation time")
    elif args.command == "pgreedy":
        trace, summary = experiments.run_greedy_demo(cfg, out_dir=out_dir)
        emit_csv(trace, f"{out_dir}/pgreedy_trace.csv")
        emit_csv(summary, f"{out_dir}/pgreedy_summary.csv")
        emit_svg_plot(trace, f"{out_dir}/pgreedy_power.svg", x="step", y="sup_power",
                      series="component", logy=True, title="selected power values")
        for q, v in summary.rows:
            print(f"{q}: {v}")
    elif args.command == "interp":
        return _run_interp(args, cfg, out_dir)
    elif args.command == "backends":
        table, _ = experiments.run_backend_benchmark(repetitions=args.repetitions,
                                                     seed=cfg.seed)
        emit_csv(table, f"{out_dir}/backends.csv")
        for row in table.rows:
            print(("{:>9s}  {:>17s}  n={:<8d} {:.6f}s").format(*row))

    for message in violations:
        print(f"ordering assertion failed: {message}", file=sys.stderr)
    return 1 if violations else 0


def _run_interp(args, cfg, out_dir) -> int:
    import numpy as np

    from prodkernel.bench.io import Table, emit_csv
    from prodkernel.bench.targets import franke_points, franke_restriction
    from prodkernel.gridpoints import read_points_csv
    from prodkernel.interpolation import fit, mse
    from prodkernel.kernels import parse_product_spec

    pk = parse_product_spec(args.kernel)
    points = read_points_csv(args.points)
    if points.shape[1] != pk.total_dim:
        raise ValueError(
            f"points have dimension {points.shape[1]} but kernel has "
            f"total dimension {pk.total_dim}"
        )
    target = franke_points if args.target == "franke" else franke_restriction()
    expected_dim = 2 if args.target == "franke" else 1
    if pk.total_dim != expected_dim:
        raise ValueError(f"target {args.target} needs dimension {expected_dim}")
    values = target(points)
    s = fit(pk, points, values)
    residual = float(np.max(np.abs(s.evaluate_many(points) - values)))
    if expected_dim == 2:
        axis = np.linspace(0.0, 1.0, cfg.eval_resolution)
        xx, yy = np.meshgrid(axis, axis, indexing="ij")
        eval_pts = np.column_stack([xx.ravel(), yy.ravel()])
    else:
        eval_pts = np.linspace(0.0, 1.0, cfg.eval_resolution_1d)[:, None]
    err = mse(s, target, eval_pts)
    coeff_table = Table(
        [f"x{i + 1}" for i in range(pk.total_dim)] + ["coeff"],
        [tuple(map(float, p)) + (float(c),) for p, c in zip(s.centers, s.coeffs)],
    )
    emit_csv(coeff_table, f"{out_dir}/interp_coeffs.csv")
    summary = Table(["quantity", "value"],
                    [("n", len(points)), ("max_node_residual", residual), ("mse", err)])
    emit_csv(summary, f"{out_dir}/interp_summary.csv")
    print(f"n: {len(points)}")
    print(f"max node residual: {residual:.3e}")
    print(f"mse: {err:.6e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
