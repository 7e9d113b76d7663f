"""Experiment harness: dataset loading, grid execution, persistence.

A benchmark run walks kernel x regularizer x hyperparameter cells,
learns Z once per cell, evaluates clustering or label propagation, and
writes one CSV row per cell plus two summary rows per parameter group:
the best over the kernel bank and the mean over the kernel bank, the
usual "best kernel (bank average)" way of quoting multi-kernel results.

Best-over-kernels picks by ground-truth metric, so it is an oracle
selection protocol for comparing methods, not a deployable
model-selection rule.

All randomness flows from the single configured seed; reruns with an
equal config produce byte-identical CSV output. Cells run on a thread
pool sized by the SIMILEARN_WORKERS environment variable (default 1);
rows are sorted canonically before persistence, so worker count and
completion order never change the output.
"""

import datetime
import os
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .graph import cluster
from .io import read_json, read_labels, read_matrix, write_json, write_matrix
from .kernels import Dataset, bank_specs, compute_kernel, normalize_kernel
from .metrics import accuracy, nmi
from .semisupervised import ssl_experiment
from .solver import REGULARIZERS, SolverConfig, solve

TASKS = ("clustering", "ssl")

CSV_COLUMNS = (
    "dataset",
    "kernel",
    "regularizer",
    "alpha",
    "beta",
    "gamma",
    "fraction",
    "acc",
    "acc_std",
    "nmi",
    "nmi_std",
    "converged",
    "iterations",
)

BEST_KERNEL = "best_over_kernels"
MEAN_KERNEL = "mean_over_kernels"


@dataclass
class ResultRow:
    """One grid cell or summary line of a benchmark run.

    Metric fields are None when they do not apply (no ground truth
    metric for a failed cell, no NMI for label propagation, no std
    without repeats). kernel_order carries the bank position for
    canonical sorting and stays out of the CSV.
    """

    dataset: str
    kernel: str
    regularizer: str
    alpha: float
    beta: float
    gamma: Optional[float] = None
    fraction: Optional[float] = None
    acc: Optional[float] = None
    acc_std: Optional[float] = None
    nmi: Optional[float] = None
    nmi_std: Optional[float] = None
    converged: Optional[bool] = None
    iterations: Optional[int] = None
    kernel_order: int = 0


@dataclass
class ExperimentConfig:
    """Declarative description of one benchmark run (JSON on disk)."""

    task: str
    dataset: str
    labels: str
    out_dir: str
    bank: Optional[str] = None
    regularizers: tuple = ("low_rank", "sparse")
    alphas: tuple = (0.1,)
    betas: tuple = (0.1,)
    gammas: tuple = (1.0,)
    fractions: tuple = (0.1, 0.3, 0.5)
    repeats: int = 20
    mu: float = 1.0
    max_iter: int = 300
    tol: float = 1e-5
    seed: int = 0
    save_z: bool = False

    def validate(self):
        if self.task not in TASKS:
            raise ValueError(f"task must be one of {TASKS}")
        if self.bank is None:
            self.bank = "clustering12" if self.task == "clustering" else "ssl7"
        if isinstance(self.regularizers, str):
            raise ValueError("regularizers must be a list, not a string")
        regs = []
        for r in self.regularizers:
            r = {"lowrank": "low_rank"}.get(r, r)
            if r not in REGULARIZERS:
                raise ValueError(f"unknown regularizer {r!r}")
            regs.append(r)
        if not regs:
            raise ValueError("regularizers must be nonempty")
        self.regularizers = tuple(regs)
        self.alphas = _grid(self.alphas, "alphas", lambda v: v >= 0)
        self.betas = _grid(self.betas, "betas", lambda v: v > 0)
        if self.task == "ssl":
            self.gammas = _grid(self.gammas, "gammas", lambda v: v > 0)
            self.fractions = _grid(
                self.fractions, "fractions", lambda v: 0 < v < 1
            )
            if self.repeats < 1:
                raise ValueError("repeats must be at least 1")
        if self.mu <= 0 or self.tol <= 0 or self.max_iter < 1:
            raise ValueError("mu and tol must be positive, max_iter >= 1")
        return self


def _grid(values, name, ok):
    if isinstance(values, str):
        raise ValueError(f"{name} must be a list of numbers")
    try:
        vals = tuple(float(v) for v in values)
    except TypeError:
        raise ValueError(f"{name} must be a list of numbers") from None
    if not vals or not all(ok(v) for v in vals):
        raise ValueError(f"{name} must be a nonempty list of valid values")
    return vals


def load_experiment_config(path) -> ExperimentConfig:
    raw = read_json(path)
    unknown = set(raw) - set(ExperimentConfig.__dataclass_fields__)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    for key in ("task", "dataset", "labels", "out_dir"):
        if key not in raw:
            raise ValueError(f"config is missing required key {key!r}")
    for key in ("regularizers", "alphas", "betas", "gammas", "fractions"):
        if key in raw:
            raw[key] = tuple(raw[key])
    return ExperimentConfig(**raw).validate()


def load_dataset(path, labels_path=None) -> Dataset:
    """Read features (and labels), validating shapes and class ids.

    Labels with gaps in their id range are relabeled densely to 0..c-1
    with a warning; features and labels must agree on sample count.
    """
    X = read_matrix(path)
    if X.shape[0] < 2:
        raise ValueError(f"{path}: need at least 2 samples, got {X.shape[0]}")
    labels = None
    c = None
    if labels_path is not None:
        labels = read_labels(labels_path)
        if labels.shape[0] != X.shape[0]:
            raise ValueError(
                f"label count {labels.shape[0]} does not match "
                f"sample count {X.shape[0]}"
            )
        uniq, dense = np.unique(labels, return_inverse=True)
        c = uniq.size
        if not np.array_equal(uniq, np.arange(c)):
            warnings.warn(
                f"labels {uniq.tolist()} are not dense 0..{c - 1}; relabeling"
            )
        labels = dense
    return Dataset(features=X, labels=labels, c=c)


def _row_sort_key(row: ResultRow):
    kind = {BEST_KERNEL: 1, MEAN_KERNEL: 2}.get(row.kernel, 0)
    return (
        row.regularizer,
        row.alpha,
        row.beta,
        -1.0 if row.gamma is None else row.gamma,
        -1.0 if row.fraction is None else row.fraction,
        kind,
        row.kernel_order,
    )


def _summarize(cells):
    """Best/mean-over-kernels rows for every hyperparameter group.

    Only cells that produced metrics participate; the best row's std
    is the std of the cell that achieved the best mean accuracy.
    """
    groups = {}
    for r in cells:
        key = (r.regularizer, r.alpha, r.beta, r.gamma, r.fraction)
        groups.setdefault(key, []).append(r)
    out = []
    for key in sorted(groups, key=_group_key):
        ok = sorted(
            (r for r in groups[key] if r.acc is not None),
            key=lambda r: r.kernel_order,
        )
        if not ok:
            continue
        reg, alpha, beta, gamma, fraction = key
        base = dict(
            dataset=ok[0].dataset,
            regularizer=reg,
            alpha=alpha,
            beta=beta,
            gamma=gamma,
            fraction=fraction,
        )
        accs = [r.acc for r in ok]
        nmis = [r.nmi for r in ok if r.nmi is not None]
        argbest = int(np.argmax(accs))
        out.append(
            ResultRow(
                kernel=BEST_KERNEL,
                acc=max(accs),
                acc_std=ok[argbest].acc_std,
                nmi=max(nmis) if nmis else None,
                **base,
            )
        )
        out.append(
            ResultRow(
                kernel=MEAN_KERNEL,
                acc=float(np.mean(accs)),
                nmi=float(np.mean(nmis)) if nmis else None,
                **base,
            )
        )
    return out


def _group_key(key):
    reg, alpha, beta, gamma, fraction = key
    return (
        reg,
        alpha,
        beta,
        -1.0 if gamma is None else gamma,
        -1.0 if fraction is None else fraction,
    )


def _z_path(out_dir, kernel_name, reg, alpha, beta):
    return Path(out_dir) / f"z_{kernel_name}_{reg}_a{alpha:g}_b{beta:g}.csv"


def _run_grid(config: ExperimentConfig, cell_fn):
    """Shared grid walk: build the bank, run cells on a pool, summarize."""
    data = load_dataset(config.dataset, config.labels)
    kernels = []
    failures = []
    # a kernel that cannot be built fails its cells, not the whole grid
    for order, spec in enumerate(bank_specs(config.bank)):
        try:
            kernels.append((order, normalize_kernel(compute_kernel(data, spec))))
        except Exception as e:
            failures.append(
                {"kernel": spec.name, "error": f"{type(e).__name__}: {e}"}
            )

    dataset_name = Path(config.dataset).stem
    jobs = [
        (order, km, reg, alpha, beta)
        for order, km in kernels
        for reg in config.regularizers
        for alpha in config.alphas
        for beta in config.betas
    ]

    def run_cell(job):
        order, km, reg, alpha, beta = job
        try:
            return cell_fn(data, dataset_name, order, km, reg, alpha, beta), None
        except Exception as e:
            fail_row = ResultRow(
                dataset=dataset_name,
                kernel=km.spec.name,
                regularizer=reg,
                alpha=alpha,
                beta=beta,
                converged=False,
                kernel_order=order,
            )
            return [fail_row], {
                "kernel": km.spec.name,
                "regularizer": reg,
                "alpha": alpha,
                "beta": beta,
                "error": f"{type(e).__name__}: {e}",
            }

    workers = max(1, int(os.environ.get("SIMILEARN_WORKERS", "1")))
    if workers == 1:
        results = [run_cell(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_cell, jobs))

    rows = []
    for cell_rows, failure in results:
        rows.extend(cell_rows)
        if failure is not None:
            failures.append(failure)
    rows += _summarize([r for r in rows if r.kernel not in (BEST_KERNEL, MEAN_KERNEL)])
    rows.sort(key=_row_sort_key)
    info = {"n_cells": len(jobs), "n_failed": len(failures), "failures": failures}
    return rows, info


def run_clustering_experiment(config: ExperimentConfig):
    """Solve + spectral clustering + Acc/NMI per grid cell."""
    config.validate()
    if config.labels is None:
        raise ValueError("clustering experiments need ground-truth labels")
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    def cell(data, dataset_name, order, km, reg, alpha, beta):
        scfg = SolverConfig(
            regularizer=reg,
            alpha=alpha,
            beta=beta,
            mu=config.mu,
            max_iter=config.max_iter,
            tol=config.tol,
            seed=config.seed,
        )
        coeff, _ = solve(km.values, scfg)
        if config.save_z:
            write_matrix(
                _z_path(out_dir, km.spec.name, reg, alpha, beta), coeff.values
            )
        res = cluster(coeff.values, data.c, seed=config.seed)
        return [
            ResultRow(
                dataset=dataset_name,
                kernel=km.spec.name,
                regularizer=reg,
                alpha=alpha,
                beta=beta,
                acc=accuracy(res.assignments, data.labels),
                nmi=nmi(res.assignments, data.labels),
                converged=coeff.converged,
                iterations=coeff.iterations,
                kernel_order=order,
            )
        ]

    return _run_grid(config, cell)


def run_ssl_experiment(config: ExperimentConfig):
    """Solve once per cell, then propagate labels per gamma x fraction."""
    config.validate()
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    def cell(data, dataset_name, order, km, reg, alpha, beta):
        scfg = SolverConfig(
            regularizer=reg,
            alpha=alpha,
            beta=beta,
            mu=config.mu,
            max_iter=config.max_iter,
            tol=config.tol,
            seed=config.seed,
        )
        coeff, _ = solve(km.values, scfg)
        if config.save_z:
            write_matrix(
                _z_path(out_dir, km.spec.name, reg, alpha, beta), coeff.values
            )
        rows = []
        for gamma in config.gammas:
            for fraction in config.fractions:
                r = ssl_experiment(
                    coeff.values,
                    data.labels,
                    fraction,
                    repeats=config.repeats,
                    gamma=gamma,
                    seed=config.seed,
                )
                rows.append(
                    ResultRow(
                        dataset=dataset_name,
                        kernel=km.spec.name,
                        regularizer=reg,
                        alpha=alpha,
                        beta=beta,
                        gamma=gamma,
                        fraction=fraction,
                        acc=r.mean_acc,
                        acc_std=r.std_acc,
                        converged=coeff.converged,
                        iterations=coeff.iterations,
                        kernel_order=order,
                    )
                )
        return rows

    return _run_grid(config, cell)


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def rows_to_csv(rows) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for r in rows:
        lines.append(",".join(_fmt(getattr(r, col)) for col in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def persist_results(rows, out_dir, config: ExperimentConfig, info=None, wall_clock_s=None):
    """Write results.csv and manifest.json; returns their paths.

    The CSV is fully determined by config + code version; the manifest
    additionally carries wall-clock facts that vary between runs.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "results.csv"
    csv_path.write_text(rows_to_csv(rows))
    manifest = {
        "config": asdict(config),
        "version": __version__,
        "written_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "n_rows": len(rows),
    }
    if info:
        manifest.update(info)
    if wall_clock_s is not None:
        manifest["wall_clock_s"] = wall_clock_s
    manifest_path = out_dir / "manifest.json"
    write_json(manifest_path, manifest)
    return csv_path, manifest_path


def run_benchmark(config_path):
    """Load a config, run the matching experiment, persist everything."""
    config = load_experiment_config(config_path)
    start = time.perf_counter()
    if config.task == "clustering":
        rows, info = run_clustering_experiment(config)
    else:
        rows, info = run_ssl_experiment(config)
    elapsed = time.perf_counter() - start
    return persist_results(rows, config.out_dir, config, info, wall_clock_s=elapsed)
