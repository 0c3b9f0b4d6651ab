"""Command-line front end.

Subcommands: gen, dist, seriate, baseline, supnorm, project, experiment,
fit-rate. Global flags --seed, --out, and --config (key=value file whose
entries become defaults; explicit flags win). Randomized commands print the
resolved seed.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io
from .baselines import LSConfig, ls_latent, ls_toeplitz, spectral_seriation
from .distances import (EstimatorConfig, dhat_latent, dhat_missing,
                        dhat_supnorm, dhat_toeplitz)
from .experiments import ExperimentPlan, fit_rate, run_plan, theta_banded_linear
from .models import (LatentSpec, NoiseSpec, apply_mask, estimate_A,
                     gen_latent_instance, gen_toeplitz_instance)
from .pines import PinesParams, seriate
from .robinson import RobinsonFlags, ToeplitzSpec, project_robinson
from .supnorm import supnorm_seriate


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--config", type=str, default=None,
                   help="key=value file providing defaults")


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    # peek at --config, load defaults, then reparse so flags override
    pre, _ = parser.parse_known_args(argv)
    if getattr(pre, "config", None):
        defaults = {}
        for key, value in io.load_meta(pre.config).items():
            defaults[key.replace("-", "_")] = value
        parser.set_defaults(**defaults)
    return parser.parse_args(argv)


def _estimator_config(args) -> EstimatorConfig:
    A = args.A
    if A is None:
        Y = io.load_matrix(args.Y)
        A = estimate_A(Y)
        print(f"A estimated from data: {A:.6g}")
    return EstimatorConfig(A=float(A))


def cmd_gen(args) -> int:
    print(f"seed: {args.seed}")
    noise = NoiseSpec(kind=args.noise, sigma=float(args.sigma),
                      symmetric=not args.noise_asym)
    if args.model == "toeplitz":
        if args.theta:
            theta = np.loadtxt(args.theta)
            spec = ToeplitzSpec(theta=theta, A=float(args.A or theta[0] or 1.0))
        else:
            theta = theta_banded_linear(args.n, float(args.A or 1.0))
            spec = ToeplitzSpec(theta=theta, A=float(args.A or 1.0))
        inst = gen_toeplitz_instance(spec, args.pi, noise, args.seed)
    else:
        spec = LatentSpec(kind=args.kernel, A=float(args.A or 1.0), n=args.n,
                          width=float(args.width))
        inst = gen_latent_instance(spec, noise, args.seed)
    if args.mask_lambda < 1.0:
        inst = apply_mask(inst, args.mask_lambda, args.seed + 1)
    out = args.out or "instance"
    io.save_instance(out, inst)
    print(f"instance written to {out}/")
    return 0


def cmd_dist(args) -> int:
    Y = io.load_matrix(args.Y)
    if args.estimator == "supnorm":
        d = dhat_supnorm(Y)
    else:
        cfg = _estimator_config(args)
        if args.estimator == "toeplitz":
            d = dhat_toeplitz(Y, cfg)
        elif args.estimator == "latent":
            d = dhat_latent(Y, cfg)
        elif args.estimator == "missing":
            if not args.mask:
                print("error: --estimator missing needs --mask B.csv", file=sys.stderr)
                return 2
            d = dhat_missing(Y, io.load_matrix(args.mask), cfg)
        else:
            raise ValueError(args.estimator)
    out = args.out or "dhat.csv"
    io.save_matrix(out, d)
    print(f"distance table written to {out}")
    return 0


def cmd_seriate(args) -> int:
    Y = io.load_matrix(args.Y)
    cfg = _estimator_config(args)
    params = None
    if args.rho1 is not None or args.rho2 is not None or args.rho3 is not None:
        if None in (args.rho1, args.rho2, args.rho3):
            print("error: override needs all of --rho1 --rho2 --rho3", file=sys.stderr)
            return 2
        params = PinesParams(args.rho1, args.rho2, args.rho3)
    B = io.load_matrix(args.mask) if args.mask else None
    out = seriate(Y, args.model, cfg, B=B, einf=args.einf, params=params)
    path = args.out or "pi_hat.txt"
    io.save_permutation(path, out.pi_hat)
    diag_path = path + ".diag"
    io.save_meta(diag_path, {
        "n_centers": out.diagnostics["n_centers"],
        "cell_sizes": ",".join(str(s) for s in out.diagnostics["cell_sizes"]),
        "packing_order": ",".join(str(c) for c in out.diagnostics["packing_order"]),
    })
    print(f"ordering written to {path}, diagnostics to {diag_path}")
    return 0


def cmd_baseline(args) -> int:
    Y = io.load_matrix(args.Y)
    if args.algo == "spectral":
        pi = spectral_seriation(Y)
    elif args.algo == "ls-toeplitz":
        pi, theta = ls_toeplitz(Y, LSConfig(A=float(args.A or estimate_A(Y))))
        if args.theta_out:
            np.savetxt(args.theta_out, theta)
    elif args.algo == "ls-latent":
        pi, _, _ = ls_latent(Y, LSConfig(A=float(args.A or estimate_A(Y))))
    else:
        raise ValueError(args.algo)
    path = args.out or "pi_hat.txt"
    io.save_permutation(path, pi)
    print(f"ordering written to {path}")
    return 0


def cmd_supnorm(args) -> int:
    Y = io.load_matrix(args.Y)
    out = supnorm_seriate(Y, args.einf)
    path = args.out or "pi_hat.txt"
    io.save_permutation(path, out.pi_hat)
    print(f"ordering written to {path} "
          f"(split sizes {out.diagnostics['sizes']})")
    return 0


def cmd_project(args) -> int:
    M = io.load_matrix(args.M)
    flags = RobinsonFlags(symmetric_cone=(args.cone == "full"))
    R = project_robinson(M, flags, tol=args.tol, max_iter=args.max_iter)
    out = args.out or "projection.csv"
    io.save_matrix(out, R)
    print(f"projection written to {out}")
    return 0


def cmd_experiment(args) -> int:
    print(f"seed: {args.seed}")
    plan = ExperimentPlan(
        model=args.model,
        n_grid=tuple(int(x) for x in args.n_grid.split(",")),
        replicates=args.replicates,
        noise=NoiseSpec(kind=args.noise, sigma=args.sigma),
        algos=tuple(args.algos.split(",")),
        seed_base=args.seed,
        out_path=args.out or "experiment.csv",
        A=args.A or 1.0,
        family=args.family,
        mask_lambda=args.mask_lambda,
    )
    table = run_plan(plan, workers=args.workers)
    ok = sum(1 for row in table if row["status"] == "ok")
    print(f"{len(table)} rows ({ok} ok) written to {plan.out_path}")
    return 0


def cmd_fit_rate(args) -> int:
    import csv as _csv
    with open(args.table, newline="") as fh:
        table = list(_csv.DictReader(fh))
    for row in table:
        row["n"] = int(row["n"])
        row["loss"] = float(row["loss"])
    fit = fit_rate(table, args.algo, args.model)
    print(f"slope {fit.slope:.4f} +- {fit.stderr:.4f} (r2 {fit.r2:.4f})")
    for n, mean, stderr, count in fit.per_n:
        print(f"  n={n}: mean loss {mean:.6g} +- {stderr:.3g} ({count} replicates)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="seriation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a model instance directory")
    p.add_argument("--model", choices=("toeplitz", "latent"), required=True)
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--A", type=float, default=None)
    p.add_argument("--theta", type=str, default=None, help="profile file (toeplitz)")
    p.add_argument("--kernel", choices=("box", "triangle", "gaussian"), default="box")
    p.add_argument("--width", type=float, default=0.1)
    p.add_argument("--pi", type=str, default="random")
    p.add_argument("--noise", choices=("gaussian", "bernoulli", "none"), default="gaussian")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--noise-asym", action="store_true")
    p.add_argument("--mask-lambda", type=float, default=1.0)
    _add_common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("dist", help="estimate a pairwise distance table")
    p.add_argument("Y")
    p.add_argument("--estimator", choices=("toeplitz", "latent", "missing", "supnorm"),
                   default="toeplitz")
    p.add_argument("--A", type=float, default=None)
    p.add_argument("--mask", type=str, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("seriate", help="estimate the hidden ordering")
    p.add_argument("Y")
    p.add_argument("--model", choices=("toeplitz", "latent", "missing", "supnorm"),
                   default="toeplitz")
    p.add_argument("--A", type=float, default=None)
    p.add_argument("--mask", type=str, default=None)
    p.add_argument("--einf", type=float, default=None)
    p.add_argument("--rho1", type=float, default=None)
    p.add_argument("--rho2", type=float, default=None)
    p.add_argument("--rho3", type=float, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_seriate)

    p = sub.add_parser("baseline", help="reference algorithms")
    p.add_argument("Y")
    p.add_argument("--algo", choices=("spectral", "ls-toeplitz", "ls-latent"),
                   required=True)
    p.add_argument("--A", type=float, default=None)
    p.add_argument("--theta-out", type=str, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("supnorm", help="adversarial-noise pipeline")
    p.add_argument("Y")
    p.add_argument("--einf", type=float, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_supnorm)

    p = sub.add_parser("project", help="project onto the Robinson cone")
    p.add_argument("M")
    p.add_argument("--cone", choices=("full", "rows"), default="full")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iter", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("experiment", help="run a seeded experiment plan")
    p.add_argument("--model", choices=("toeplitz", "latent"), required=True)
    p.add_argument("--family", default="banded_linear")
    p.add_argument("--n-grid", default="100,200,400,800")
    p.add_argument("--replicates", type=int, default=50)
    p.add_argument("--noise", choices=("gaussian", "bernoulli", "none"), default="gaussian")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--A", type=float, default=1.0)
    p.add_argument("--algos", default="pines")
    p.add_argument("--mask-lambda", type=float, default=1.0)
    p.add_argument("--workers", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("fit-rate", help="fit the loss-vs-n exponent")
    p.add_argument("table")
    p.add_argument("--algo", default="pines")
    p.add_argument("--model", default="toeplitz")
    _add_common(p)
    p.set_defaults(func=cmd_fit_rate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = _apply_config(parser, sys.argv[1:] if argv is None else argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
