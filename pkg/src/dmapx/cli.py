"""``dmapx`` command line.

Every subcommand prints a one-line JSON summary on stdout. Exit codes:
0 success, 2 usage error, 3 numerical failure, 4 I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import analysis, oracles, potentials, recipes
from .dataset import _atomic_write_text, load_points, subsample, write_points, write_table
from .diffusion import check_alpha
from .errors import DmapError, NumericalError, ParseError
from .kernel import epsilon_heuristic
from .sampler import SamplerConfig, gaussian_direct_sample, langevin_sample

log = logging.getLogger("dmapx")

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4


class UsageError(Exception):
    pass


# -- argument types ----------------------------------------------------------


def _alpha(text):
    try:
        val = float(text)
        check_alpha(val)
    except ValueError:
        raise argparse.ArgumentTypeError(f"must be a number in [0, 1], got {text!r}") from None
    return val


def _positive(text):
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not val > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
    return val


def _epsilon(text):
    return "auto" if text == "auto" else _positive(text)


def _count(text):
    try:
        val = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if val < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text!r}")
    return val


def _nonneg_int(text):
    try:
        val = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if val < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text!r}")
    return val


def _vector(text):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _potential(text):
    try:
        return potentials.from_string(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# -- subcommands ---------------------------------------------------------------


def _write_json(path, obj):
    _atomic_write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _write_embedding(path, dmap, m):
    emb = dmap.embedding(m)
    k = emb.coords.shape[1]
    write_table(path, ["id"] + [f"psi{j}" for j in range(1, k + 1)],
                ([i, *row] for i, row in enumerate(emb.coords)))


def _write_eigen(path, lambdas):
    write_table(path, ["j", "lambda"], ([j, lam] for j, lam in enumerate(lambdas)))


def cmd_sample(args):
    spec = args.potential
    if args.method == "direct":
        if spec.name not in ("parabolic1d", "parabolicNd"):
            raise UsageError("--method direct is only available for parabolic potentials")
        cloud = gaussian_direct_sample(list(spec.params.values()), args.n_keep, args.seed)
    else:
        x0 = args.x0 if args.x0 is not None else tuple([0.0] * spec.dim)
        box = None
        if args.box_lo is not None or args.box_hi is not None:
            if args.box_lo is None or args.box_hi is None:
                raise UsageError("--box-lo and --box-hi must be given together")
            box = (args.box_lo, args.box_hi)
        try:
            cfg = SamplerConfig(n_keep=args.n_keep, seed=args.seed, x0=x0, dt=args.dt, thin=args.thin,
                                burn_in=args.burn_in, box=box, n_chains=args.chains)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        try:
            spec.check_point(np.asarray(x0))
        except ValueError as exc:
            raise UsageError(f"--x0: {exc}") from None
        cloud = langevin_sample(spec, cfg)
    write_points(args.out, cloud)
    return {"command": "sample", "potential": spec.name, "n": cloud.n, "dim": cloud.dim, "out": str(args.out)}


def cmd_subsample(args):
    data = load_points(args.input, has_labels=args.labels)
    sub = subsample(data, args.n, args.seed)
    write_points(args.out, sub)
    return {"command": "subsample", "n_in": data.cloud.n, "n_out": sub.cloud.n, "out": str(args.out)}


def cmd_embed(args):
    data = load_points(args.input, has_labels=args.labels)
    cloud = data.cloud
    eps = epsilon_heuristic(cloud, args.seed) if args.epsilon == "auto" else args.epsilon
    if args.k > cloud.n:
        raise UsageError(f"--k {args.k} exceeds the number of points {cloud.n}")
    log.info("embedding %d points with epsilon=%.6g alpha=%g", cloud.n, eps, args.alpha)
    dm = recipes.diffusion_map(cloud, eps, args.alpha, args.k)
    if args.out_embedding:
        _write_embedding(args.out_embedding, dm, args.time)
    if args.out_eigen:
        _write_eigen(args.out_eigen, dm.spectrum.lambdas)
    return {"command": "embed", "n": cloud.n, "epsilon": eps, "alpha": args.alpha, "k": args.k,
            "time": args.time, "lambdas": dm.spectrum.lambdas.tolist()}


def cmd_cluster(args):
    emb = load_points(args.input)
    pts = emb.cloud.points
    # embedding files carry an id column first
    if args.component < 1 or args.component >= pts.shape[1]:
        raise UsageError(f"--component must lie in 1..{pts.shape[1] - 1}")
    pred = analysis.sign_cluster(pts[:, args.component])
    out = {"command": "cluster", "n": int(pred.size), "counts": np.bincount(pred, minlength=2).tolist()}
    if args.labels:
        truth = load_points(args.labels, has_labels=True)
        if truth.labels is None or truth.cloud.n != pred.size:
            raise UsageError("--labels file must be labelled and match the embedding length")
        rep = analysis.confusion_report(pred, truth.labels)
        out.update(rep.to_json())
    if args.out:
        write_table(args.out, ["id", "label"], ([i, int(v)] for i, v in enumerate(pred)))
    if args.report:
        _write_json(args.report, out)
    return out


def cmd_oracle_ou(args):
    res = recipes.ou_check(args.n, args.tau, args.epsilon, args.kmax, args.seed, args.alpha)
    if args.report:
        _write_json(args.report, res.summary)
    return res.summary


def cmd_generator_check(args):
    res = recipes.generator_check(args.potential, args.alpha, args.epsilon, args.n, args.testfn, args.seed)
    if args.report:
        _write_json(args.report, res.summary)
    return res.summary


def cmd_reproduce(args):
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if args.recipe == "iris":
        if not args.iris:
            raise UsageError("reproduce iris needs --iris PATH (a local CSV with a label column)")
        res = recipes.iris(args.iris)
    else:
        res = {"fig-harmonic": recipes.harmonic, "fig-doublewell": recipes.doublewell,
               "fig-triplewell": recipes.triplewell}[args.recipe]()
    if res.points is not None:
        write_points(out / "points.csv", res.points)
    if res.dmap is not None:
        _write_embedding(out / "embedding.csv", res.dmap, 1)
        _write_eigen(out / "eigen.csv", res.dmap.spectrum.lambdas)
    _write_json(out / "report.json", res.summary)
    return {"command": "reproduce", "recipe": args.recipe, "out_dir": str(out)}


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dmapx", description="Diffusion maps for point clouds and Langevin samples.")
    p.add_argument("--verbose", action="store_true", help="log progress to stderr")
    p.add_argument("--threads", type=_count, default=None, help="cap BLAS worker threads")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample", help="draw equilibrium samples of exp(-U)")
    s.add_argument("--potential", type=_potential, required=True, help="e.g. parabolic1d:tau=1.0 or doublewell2d")
    s.add_argument("--method", choices=["langevin", "direct"], default="langevin")
    s.add_argument("--n-keep", type=_count, required=True)
    s.add_argument("--dt", type=_positive, default=0.01)
    s.add_argument("--thin", type=_count, default=10)
    s.add_argument("--burn-in", type=_nonneg_int, default=None)
    s.add_argument("--chains", type=_count, default=1)
    s.add_argument("--x0", type=_vector, default=None)
    s.add_argument("--box-lo", type=_vector, default=None)
    s.add_argument("--box-hi", type=_vector, default=None)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("subsample", help="uniform seeded subsample of a points CSV")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--labels", action="store_true", help="input has a label column")
    s.add_argument("--n", type=_count, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_subsample)

    s = sub.add_parser("embed", help="diffusion map of a points CSV")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--labels", action="store_true", help="input has a label column (ignored for the embedding)")
    s.add_argument("--alpha", type=_alpha, default=0.5)
    s.add_argument("--epsilon", type=_epsilon, default="auto")
    s.add_argument("--k", type=_count, default=6)
    s.add_argument("--time", type=_nonneg_int, default=1)
    s.add_argument("--seed", type=int, default=0, help="pair sample for --epsilon auto")
    s.add_argument("--out-embedding")
    s.add_argument("--out-eigen")
    s.set_defaults(func=cmd_embed)

    s = sub.add_parser("cluster", help="sign clustering of one embedding column")
    s.add_argument("--in", dest="input", required=True, help="embedding CSV written by embed")
    s.add_argument("--component", type=_count, default=1)
    s.add_argument("--labels", help="labelled points CSV with the true classes")
    s.add_argument("--out")
    s.add_argument("--report")
    s.set_defaults(func=cmd_cluster)

    s = sub.add_parser("oracle-ou", help="compare the spectrum on Gaussian samples with the closed form")
    s.add_argument("--n", type=_count, default=4000)
    s.add_argument("--tau", type=_positive, default=1.0)
    s.add_argument("--epsilon", type=_positive, default=0.2)
    s.add_argument("--kmax", type=_count, default=4)
    s.add_argument("--alpha", type=_alpha, default=0.0)
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--report")
    s.set_defaults(func=cmd_oracle_ou)

    s = sub.add_parser("generator-check", help="discrete versus limiting backward generator")
    s.add_argument("--potential", type=_potential, default=potentials.parabolic1d(1.0))
    s.add_argument("--alpha", type=_alpha, default=0.5)
    s.add_argument("--epsilon", type=_positive, default=0.1)
    s.add_argument("--n", type=_count, default=8000)
    s.add_argument("--testfn", choices=sorted(oracles.TEST_FUNCTIONS), default="sin")
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--report")
    s.set_defaults(func=cmd_generator_check)

    s = sub.add_parser("reproduce", help="rerun a worked example with fixed seeds")
    s.add_argument("recipe", choices=["fig-harmonic", "fig-doublewell", "fig-triplewell", "iris"])
    s.add_argument("--out-dir", required=True)
    s.add_argument("--iris", help="local iris CSV (x0..x3,label)")
    s.set_defaults(func=cmd_reproduce)
    return p


def _limit_threads(n):
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:
        log.warning("threadpoolctl not installed; --threads ignored")
        return None
    return threadpool_limits(limits=n)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    limiter = _limit_threads(args.threads) if args.threads else None
    log.info("running %s", args.command)
    try:
        summary = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"dmapx {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"dmapx {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (OSError, ParseError) as exc:
        print(f"dmapx {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (DmapError, ValueError) as exc:
        # bad input data rather than bad flags, e.g. a cloud of identical points
        print(f"dmapx {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        if limiter is not None:
            limiter.restore_original_limits()
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
