"""Command-line interface.

Subcommands mirror the pipeline stages:

    kernels    build a kernel bank from a features CSV
    learn      solve for Z from one kernel CSV
    cluster    spectral clustering of a learned Z
    ssl        label-propagation experiment on a learned Z
    eval       score a prediction file against ground truth
    benchmark  full grid run from a JSON config

Matrices are CSV without headers; structured outputs are JSON. Exit
code 2 signals a usage or data error.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import DataFormatError, DegenerateKernelError, DivergenceError, LinearSolveError
from .graph import cluster
from .harness import load_dataset, run_benchmark
from .io import read_labels, read_matrix, write_json, write_matrix
from .kernels import build_kernel_bank
from .metrics import accuracy, nmi
from .semisupervised import ssl_experiment
from .solver import SolverConfig, diagnostics_dict, solve

USER_ERRORS = (
    DataFormatError,
    DegenerateKernelError,
    DivergenceError,
    LinearSolveError,
    ValueError,
    OSError,
)


def _cmd_kernels(args):
    data = load_dataset(args.data)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for km in build_kernel_bank(data, args.bank):
        name = km.spec.name
        write_matrix(out_dir / f"{name}.csv", km.values)
        write_json(
            out_dir / f"{name}.json",
            {
                "family": km.spec.family,
                "params": km.spec.params(),
                "normalized": km.normalized,
                "fallback_used": km.fallback_used,
            },
        )
        print(f"{name}: wrote {out_dir / (name + '.csv')}")
    return 0


def _cmd_learn(args):
    K = read_matrix(args.kernel)
    cfg = SolverConfig(
        regularizer="low_rank" if args.reg == "lowrank" else args.reg,
        alpha=args.alpha,
        beta=args.beta,
        mu=args.mu,
        max_iter=args.max_iter,
        tol=args.tol,
        seed=args.seed,
    )
    coeff, state = solve(K, cfg)
    write_matrix(args.out, coeff.values)
    diag_path = args.diagnostics or str(Path(args.out).with_suffix("")) + ".diagnostics.json"
    write_json(diag_path, diagnostics_dict(state))
    print(
        f"converged={coeff.converged} iterations={coeff.iterations} "
        f"rel_change={state.rel_change:.3e} -> {args.out}"
    )
    return 0


def _cmd_cluster(args):
    Z = read_matrix(args.z)
    res = cluster(Z, args.classes, seed=args.seed)
    out = {
        "assignments": [int(a) for a in res.assignments],
        "inertia": res.inertia,
    }
    if args.labels:
        truth = read_labels(args.labels)
        out["acc"] = accuracy(res.assignments, truth)
        out["nmi"] = nmi(res.assignments, truth)
    write_json(args.out, out)
    msg = f"clustered {Z.shape[0]} samples into {args.classes} groups"
    if "acc" in out:
        msg += f" (acc={out['acc']:.4f}, nmi={out['nmi']:.4f})"
    print(msg)
    return 0


def _cmd_ssl(args):
    Z = read_matrix(args.z)
    labels = read_labels(args.labels)
    uniq, dense = np.unique(labels, return_inverse=True)
    res = ssl_experiment(
        Z,
        dense,
        args.fraction,
        repeats=args.repeats,
        gamma=args.gamma,
        seed=args.seed,
    )
    write_json(
        args.out,
        {
            "fraction": res.fraction,
            "mean_acc": res.mean_acc,
            "std_acc": res.std_acc,
            "per_repeat": res.per_repeat,
        },
    )
    print(
        f"fraction={args.fraction:g}: acc {res.mean_acc:.4f} +/- {res.std_acc:.4f} "
        f"over {args.repeats} repeats"
    )
    return 0


def _cmd_eval(args):
    pred = read_labels(args.pred)
    truth = read_labels(args.truth)
    print(json.dumps({"acc": accuracy(pred, truth), "nmi": nmi(pred, truth)}))
    return 0


def _cmd_benchmark(args):
    csv_path, manifest_path = run_benchmark(args.config)
    print(f"wrote {csv_path} and {manifest_path}")
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="similearn",
        description="similarity learning by kernel self-expression",
    )
    p.add_argument("--version", action="version", version=f"similearn {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kernels", help="build a kernel bank from features")
    k.add_argument("--data", required=True, help="features CSV, one sample per row")
    k.add_argument("--bank", default="clustering12", choices=["clustering12", "ssl7"])
    k.add_argument("--out-dir", required=True)
    k.set_defaults(fn=_cmd_kernels)

    l = sub.add_parser("learn", help="learn Z from a kernel matrix")
    l.add_argument("--kernel", required=True, help="kernel CSV (n x n)")
    l.add_argument("--reg", required=True, choices=["lowrank", "sparse"])
    l.add_argument("--alpha", type=float, default=0.1)
    l.add_argument("--beta", type=float, default=0.1)
    l.add_argument("--mu", type=float, default=1.0)
    l.add_argument("--max-iter", type=int, default=300)
    l.add_argument("--tol", type=float, default=1e-5)
    l.add_argument("--seed", type=int, default=0)
    l.add_argument("--out", required=True, help="output CSV for Z")
    l.add_argument(
        "--diagnostics",
        default=None,
        help="output JSON path (default: <out>.diagnostics.json)",
    )
    l.set_defaults(fn=_cmd_learn)

    c = sub.add_parser("cluster", help="spectral clustering of a learned Z")
    c.add_argument("--z", required=True, help="coefficient matrix CSV")
    c.add_argument("--classes", required=True, type=int)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--labels", default=None, help="optional ground truth for metrics")
    c.add_argument("--out", required=True, help="output JSON")
    c.set_defaults(fn=_cmd_cluster)

    s = sub.add_parser("ssl", help="label propagation experiment on a learned Z")
    s.add_argument("--z", required=True)
    s.add_argument("--labels", required=True)
    s.add_argument("--fraction", type=float, default=0.1)
    s.add_argument("--repeats", type=int, default=20)
    s.add_argument("--gamma", type=float, default=1.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True, help="output JSON")
    s.set_defaults(fn=_cmd_ssl)

    e = sub.add_parser("eval", help="score predictions against ground truth")
    e.add_argument("--pred", required=True)
    e.add_argument("--truth", required=True)
    e.set_defaults(fn=_cmd_eval)

    b = sub.add_parser("benchmark", help="full grid run from a JSON config")
    b.add_argument("--config", required=True)
    b.set_defaults(fn=_cmd_benchmark)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except USER_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
