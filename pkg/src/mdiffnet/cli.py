"""Command-line interface: ``mdiffnet {simulate,estimate,roc,preprocess}``.

Every command writes ``manifest.json`` next to its outputs.  On failure a
single line ``mdiffnet: error[<category>]: <message>`` goes to stderr and
the exit code is nonzero.
"""

import argparse
import secrets
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, io
from .blockmat import cmap
from .covariance import sample_covariance
from .exceptions import DegenerateInputError, DomainError, ParseError
from .metrics import roc_sweep
from .model_selection import select_lambda
from .oracle import kkt_residual, lambda_max
from .preprocess import DEFAULT_FLOOR, assemble, preprocess_feature
from .solvers import make_solver
from .synthetic import GraphSpec, make_pair, sample_gaussian

EXIT_CODES = {"argument": 2, "io": 3, "parse": 4, "domain": 5, "degenerate": 6}


def _out_dir(path):
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc.strerror}") from exc
    return out


def _manifest(out, command, args, seed, t0, files):
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command")}
    files = [str(out / f) for f in files]
    for f in files:
        if not Path(f).exists():
            raise OSError(f"expected output {f} was not written")
    io.write_json(out / "manifest.json", {
        "command": command,
        "parameters": params,
        "seed": seed,
        "version": __version__,
        "wall_clock_seconds": time.perf_counter() - t0,
        "outputs": files,
    })


def _solver_from_args(args):
    mode = "sa" if args.sa else "ma"
    if args.solver == "admm":
        opts = {"rho0": args.rho0, "mu": args.mu, "tol_abs": args.tol_abs,
                "tol_rel": args.tol_rel}
        if args.max_iter is not None:
            opts["max_iter"] = args.max_iter
    else:
        opts = {"eps": args.eps}
        if args.max_iter is not None:
            opts["max_iter"] = args.max_iter
    return make_solver(args.m, args.solver, mode, **opts)


def _load_pair(args):
    x = io.read_dataset(args.x, args.m)
    y = io.read_dataset(args.y, args.m)
    if x.samples.shape[1] != y.samples.shape[1]:
        raise ValueError(
            f"x has {x.samples.shape[1]} columns but y has {y.samples.shape[1]}")
    return x, y


def cmd_simulate(args):
    t0 = time.perf_counter()
    seed = args.seed if args.seed is not None else secrets.randbits(63)
    out = _out_dir(args.out)
    rng = np.random.default_rng(seed)
    spec = GraphSpec(kind=args.kind, p=args.p, er_prob=args.er_prob, mean_degree=args.mean_degree)
    truth = make_pair(spec, args.m, args.delta_prob, rng)
    x = sample_gaussian(truth.omega_x, args.n, rng, args.m)
    y = sample_gaussian(truth.omega_y, args.n, rng, args.m)
    io.write_dataset(out / "x.csv", x)
    io.write_dataset(out / "y.csv", y)
    io.write_matrix(out / "omega_x.csv", truth.omega_x)
    io.write_matrix(out / "omega_y.csv", truth.omega_y)
    io.write_json(out / "truth.json", {
        "edges": io.edges_to_json(truth.edges),
        "graph_edges": io.edges_to_json(truth.graph_edges),
        "gamma": truth.gamma,
        "spec": spec.to_dict(),
        "m": args.m,
        "n": args.n,
        "delta_prob": args.delta_prob,
        "seed": seed,
    })
    files = ["x.csv", "y.csv", "omega_x.csv", "omega_y.csv", "truth.json"]
    _manifest(out, "simulate", args, seed, t0, files)
    return 0


def cmd_estimate(args):
    t0 = time.perf_counter()
    if args.bic == (args.lam is not None):
        raise ValueError("give exactly one of --lambda or --bic")
    x, y = _load_pair(args)
    out = _out_dir(args.out)
    sx, sy = sample_covariance(x), sample_covariance(y)
    solver = _solver_from_args(args)
    report = {"solver": args.solver, "mode": solver.mode, "m": args.m, "p": x.p,
              "n_x": x.n, "n_y": y.n, "lambda_max": lambda_max(sx, sy, args.m)}
    if args.bic:
        lam, table = select_lambda(sx, sy, x.n, y.n, solver, grid_size=args.grid_size,
                                   jobs=args.jobs)
        result = table.best.result
        report["bic"] = table.to_dict()
    else:
        lam = args.lam
        result = solver(sx, sy, lam)
    report.update({"lambda": lam, "n_edges": result.n_edges,
                   "report": result.report.to_dict()})
    io.write_matrix(out / "delta.csv", result.delta_sym)
    io.write_edges(out / "edges.csv", result.edges, cmap(result.delta_sym, args.m))
    io.write_json(out / "report.json", report)
    files = ["delta.csv", "edges.csv", "report.json"]
    if args.check_kkt:
        group = args.m if solver.mode == "ma" else 1
        kkt = kkt_residual(result.delta, sx, sy, lam, group)
        io.write_json(out / "kkt.json", {"lambda": lam, "group_size": group, **kkt.to_dict(),
                                         "relative_to_lambda": {
                                             "active": kkt.max_active_violation / lam,
                                             "inactive": kkt.max_inactive_violation / lam}})
        files.append("kkt.json")
    _manifest(out, "estimate", args, None, t0, files)
    return 0


def _parse_lambdas(text):
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ValueError(f"cannot parse --lambdas {text!r}") from None
    if not vals or min(vals) <= 0:
        raise ValueError("--lambdas must be a comma-separated list of positive numbers")
    return vals


def cmd_roc(args):
    t0 = time.perf_counter()
    x, y = _load_pair(args)
    truth_doc = io.read_json(args.truth)
    try:
        truth = io.edges_from_json(truth_doc["edges"])
    except (KeyError, TypeError, ValueError):
        raise ParseError(f"{args.truth}: missing or malformed 'edges' list") from None
    out = _out_dir(args.out)
    sx, sy = sample_covariance(x), sample_covariance(y)
    solver = _solver_from_args(args)
    if args.lambdas:
        lambdas = _parse_lambdas(args.lambdas)
    else:
        top = lambda_max(sx, sy, args.m)
        if top <= 0:
            raise DegenerateInputError("x and y have identical covariances; no penalty grid")
        lambdas = np.geomspace(top, top * args.lambda_min_ratio, args.grid_size).tolist()
    points = roc_sweep(sx, sy, truth, lambdas, solver, jobs=args.jobs)
    io.write_rows(out / "roc.csv", ["lambda", "tpr", "fpr", "f1"],
                  [(float(pt.lam), float(pt.tpr), float(pt.fpr), float(pt.f1)) for pt in points])
    _manifest(out, "roc", args, None, t0, ["roc.csv"])
    return 0


def cmd_preprocess(args):
    t0 = time.perf_counter()
    cfg_path = Path(args.config)
    cfg = io.read_json(cfg_path)
    features = cfg.get("features")
    if not isinstance(features, list) or not features:
        raise ParseError(f"{cfg_path}: config needs a nonempty 'features' list")
    floor = float(cfg.get("positivity_floor", DEFAULT_FLOOR))
    processed = []
    for i, feat in enumerate(features):
        name = feat.get("name", f"feature{i + 1}")
        if "path" not in feat:
            raise ParseError(f"{cfg_path}: feature {name!r} has no 'path'")
        src = Path(feat["path"])
        if not src.is_absolute():
            src = cfg_path.parent / src
        header, arr = io.read_table(src)
        cols = feat.get("columns")
        if cols is not None:
            missing = [c for c in cols if c not in header]
            if missing:
                raise ParseError(f"{src}:1: feature {name!r} columns not found: {missing}")
            arr = arr[:, [header.index(c) for c in cols]]
        processed.append(preprocess_feature(
            arr, name=name, scale=float(feat.get("scale", 1.0)),
            offset=float(feat.get("offset", 0.0)), floor=floor))
    data = assemble(processed)
    out = _out_dir(args.out)
    io.write_dataset(out / args.output_name, data)
    _manifest(out, "preprocess", args, None, t0, [args.output_name])
    return 0


def _add_solver_args(p):
    p.add_argument("--m", type=int, required=True, help="attributes per node")
    p.add_argument("--solver", choices=("admm", "pgd"), default="admm")
    p.add_argument("--sa", action="store_true", help="elementwise (single-attribute) penalty")
    p.add_argument("--rho0", type=float, default=2.0)
    p.add_argument("--mu", type=float, default=10.0)
    p.add_argument("--tol-abs", type=float, default=1e-4)
    p.add_argument("--tol-rel", type=float, default=1e-4)
    p.add_argument("--eps", type=float, default=1e-3, help="PGD relative-change tolerance")
    p.add_argument("--max-iter", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True)


def build_parser():
    parser = argparse.ArgumentParser(prog="mdiffnet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="draw a synthetic pair and samples")
    p.add_argument("--kind", choices=("er", "ba"), default="er")
    p.add_argument("--p", type=int, default=100)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--n", type=int, default=300)
    p.add_argument("--er-prob", type=float, default=0.5)
    p.add_argument("--mean-degree", type=float, default=2.0)
    p.add_argument("--delta-prob", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", help="estimate the differential graph")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--bic", action="store_true", help="select lambda by BIC")
    p.add_argument("--grid-size", type=int, default=15)
    p.add_argument("--check-kkt", action="store_true", help="write kkt.json")
    _add_solver_args(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("roc", help="sweep lambda against known truth")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("truth")
    p.add_argument("--lambdas", default=None, help="comma-separated penalties")
    p.add_argument("--grid-size", type=int, default=20)
    p.add_argument("--lambda-min-ratio", type=float, default=0.01)
    _add_solver_args(p)
    p.set_defaults(func=cmd_roc)

    p = sub.add_parser("preprocess", help="log-ratio, detrend and scale raw features")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--output-name", default="x.csv")
    p.set_defaults(func=cmd_preprocess)
    return parser


def _category(exc):
    if isinstance(exc, ParseError):
        return "parse"
    if isinstance(exc, DomainError):
        return "domain"
    if isinstance(exc, DegenerateInputError):
        return "degenerate"
    if isinstance(exc, OSError):
        return "io"
    return "argument"


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        cat = _category(exc)
        msg = " ".join(str(exc).split())
        print(f"mdiffnet: error[{cat}]: {msg}", file=sys.stderr)
        return EXIT_CODES[cat]


if __name__ == "__main__":
    sys.exit(main())
