"""Multi-run trials, average convergence curves, CS/NoS metrics and result files."""
from __future__ import annotations

import concurrent.futures as cf
import datetime as _dt
import json
import logging
import os
import traceback
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

import numpy as np

from . import __version__
from .bench import ObjectiveSpec, build_function, seed_for, suite_manifest
from .config import AlgorithmEntry, ExperimentConfig
from .hclpso import HCLPSOConfig, run
from .stats import FAIL

log = logging.getLogger(__name__)

CS = Union[int, str]


@dataclass
class TrialSet:
    function: str
    algorithm: str
    z_star: float
    curves: np.ndarray = field(default_factory=lambda: np.empty((0, 0)))   # (R, G + 1)
    elapsed: np.ndarray = field(default_factory=lambda: np.empty((0, 0)))  # seconds, same shape
    error: Optional[str] = None

    def __post_init__(self):
        self.curves = np.asarray(self.curves, dtype=float)
        self.elapsed = np.asarray(self.elapsed, dtype=float)
        if self.error is None:
            if self.curves.ndim != 2 or self.curves.shape[0] < 1:
                raise ValueError("a trial set needs at least one curve")
            if self.elapsed.size and self.elapsed.shape != self.curves.shape:
                raise ValueError("elapsed times must match the curves' shape")

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def R(self) -> int:
        return self.curves.shape[0] if self.ok else 0

    @property
    def G(self) -> int:
        return self.curves.shape[1] - 1 if self.ok else 0


def relative_error(values, z_star: float) -> np.ndarray:
    return (np.asarray(values, dtype=float) - z_star) / abs(z_star)


def average_curve(curves) -> np.ndarray:
    if isinstance(curves, TrialSet):
        curves = curves.curves
    if isinstance(curves, np.ndarray):
        arr = curves
    else:
        lengths = {len(c) for c in curves}
        if len(lengths) > 1:
            raise ValueError(f"curve lengths differ: {sorted(lengths)}")
        arr = np.asarray(list(curves), dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 1:
        raise ValueError("need at least one curve")
    return arr.mean(axis=0)


def convergence_speed(avg, z_star: float, eps_tol: float) -> CS:
    """First iteration whose relative error is within eps_tol, 0 being the initial swarm."""
    if not eps_tol > 0:
        raise ValueError("eps_tol must be positive")
    hit = np.flatnonzero(relative_error(avg, z_star) <= eps_tol)
    return int(hit[0]) if hit.size else FAIL


def number_of_successes(ts: TrialSet, eps_tol: float) -> int:
    if not eps_tol > 0:
        raise ValueError("eps_tol must be positive")
    return int(np.count_nonzero(relative_error(ts.curves[:, -1], ts.z_star) <= eps_tol))


def time_to_converge(ts: TrialSet, eps_tol: float):
    """Mean wall seconds from initialisation to the cell's convergence iteration."""
    cs = convergence_speed(average_curve(ts), ts.z_star, eps_tol)
    if cs == FAIL or not ts.elapsed.size:
        return FAIL
    return float(ts.elapsed[:, cs].mean())


@dataclass(frozen=True)
class Summary:
    function: str
    algorithm: str
    eps_tol: float
    CS: CS
    NoS: Optional[int]
    mean_time_s: object
    R: int
    G: int
    error: Optional[str] = None

    def to_dict(self) -> dict:
        d = {"function": self.function, "algorithm": self.algorithm, "eps_tol": self.eps_tol,
             "CS": self.CS, "NoS": self.NoS, "mean_time_s": self.mean_time_s,
             "R": self.R, "G": self.G}
        if self.error is not None:
            d["error"] = self.error
        return d


def summarize(ts: TrialSet, eps_tol: float, with_time: bool = True) -> Summary:
    if not ts.ok:
        return Summary(ts.function, ts.algorithm, eps_tol, FAIL, None, None, 0, 0, ts.error)
    cs = convergence_speed(average_curve(ts), ts.z_star, eps_tol)
    return Summary(ts.function, ts.algorithm, eps_tol, cs, number_of_successes(ts, eps_tol),
                   time_to_converge(ts, eps_tol) if with_time else None, ts.R, ts.G)


# ---------------------------------------------------------------- execution

def run_seed(master_seed: int, function: str, algorithm: str, index: int) -> int:
    return seed_for(master_seed, function, algorithm, index)


def _one_run(spec: ObjectiveSpec, config: HCLPSOConfig):
    try:
        res = run(spec, config)
        return res.curve, res.elapsed, None
    except Exception as exc:  # noqa: BLE001 - recorded as the cell diagnostic
        return None, None, f"{type(exc).__name__}: {exc}\n{traceback.format_exc(limit=3)}"


def worker_count() -> int:
    env = os.environ.get("QSWARM_THREADS")
    cpus = os.cpu_count() or 1
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ValueError(f"QSWARM_THREADS must be an integer, got {env!r}") from None
        if n < 1:
            raise ValueError("QSWARM_THREADS must be >= 1")
        return min(n, cpus)
    return cpus


def run_matrix(functions: Sequence[ObjectiveSpec], algorithms: Sequence[AlgorithmEntry],
               base: HCLPSOConfig, R: int, master_seed: int = 0, workers: Optional[int] = None,
               progress: Optional[Callable[[TrialSet], None]] = None) -> list[TrialSet]:
    """R runs for every (function, algorithm) cell.

    ``base`` supplies N1, N2, G and the remaining HCLPSO settings; each
    algorithm entry supplies the variant and each run its own derived seed. A
    run that raises aborts its cell; the other cells still complete.
    """
    if R < 1:
        raise ValueError("R must be >= 1")
    jobs = []
    for spec in functions:
        for alg in algorithms:
            variant = alg.scheme()
            for r in range(R):
                cfg = replace(base, variant=variant,
                              seed=run_seed(master_seed, spec.fid, alg.label, r))
                jobs.append((spec, alg.label, r, cfg))
    workers = worker_count() if workers is None else max(1, workers)

    results = {}
    if workers == 1:
        for spec, label, r, cfg in jobs:
            results[(spec.fid, label, r)] = _one_run(spec, cfg)
    else:
        with cf.ProcessPoolExecutor(max_workers=workers) as pool:
            futs = {pool.submit(_one_run, spec, cfg): (spec.fid, label, r)
                    for spec, label, r, cfg in jobs}
            for fut in cf.as_completed(futs):
                results[futs[fut]] = fut.result()

    out = []
    for spec in functions:
        for alg in algorithms:
            runs = [results[(spec.fid, alg.label, r)] for r in range(R)]
            errors = [e for _, _, e in runs if e is not None]
            if errors:
                log.warning("cell %s/%s aborted: %s", spec.fid, alg.label, errors[0].splitlines()[0])
                ts = TrialSet(spec.fid, alg.label, spec.bias, error=errors[0])
            else:
                ts = TrialSet(spec.fid, alg.label, spec.bias,
                              np.stack([c for c, _, _ in runs]), np.stack([t for _, t, _ in runs]))
            if progress:
                progress(ts)
            out.append(ts)
    return out


# ---------------------------------------------------------------- persistence

def write_curve(path: Path, curve) -> None:
    lines = ["iter,best_fitness"] + [f"{i},{float(v)!r}" for i, v in enumerate(curve)]
    path.write_text("\n".join(lines) + "\n")


def read_curve(path) -> np.ndarray:
    rows = Path(path).read_text().splitlines()
    if not rows or rows[0].strip() != "iter,best_fitness":
        raise ValueError(f"{path}: missing 'iter,best_fitness' header")
    return np.array([float(r.split(",")[1]) for r in rows[1:] if r.strip()])


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def persist(result_dir, trials: Sequence[TrialSet], eps_tols: Sequence[float],
            manifest: dict, record_wall_time: bool = False) -> list[Summary]:
    root = Path(result_dir)
    root.mkdir(parents=True, exist_ok=True)
    summaries = []
    for ts in trials:
        cell = root / ts.function / ts.algorithm
        cell.mkdir(parents=True, exist_ok=True)
        if ts.ok:
            for k, curve in enumerate(ts.curves):
                write_curve(cell / f"run{k}.csv", curve)
        else:
            (cell / "error.txt").write_text(ts.error + "\n")
        for eps in eps_tols:
            summaries.append(summarize(ts, eps, with_time=record_wall_time))
    (root / "summary.json").write_text(_json([s.to_dict() for s in summaries]))
    (root / "manifest.json").write_text(_json(manifest))
    return summaries


def build_manifest(config: ExperimentConfig, specs: Sequence[ObjectiveSpec]) -> dict:
    return {
        "package_version": __version__,
        "config": config.to_dict(),
        "master_seed": config.master_seed,
        "suite": suite_manifest(specs),
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }


def run_experiment(config: ExperimentConfig, workers: Optional[int] = None,
                   progress: Optional[Callable[[TrialSet], None]] = None):
    specs = [build_function(fid, config.dimension, config.suite_seed) for fid in config.functions]
    base = HCLPSOConfig(N1=config.N1, N2=config.N2, G=config.G, lds_layout=config.lds_layout)
    trials = run_matrix(specs, config.algorithms, base, config.R, config.master_seed, workers, progress)
    summaries = persist(config.result_dir, trials, config.eps_tol,
                        build_manifest(config, specs), config.record_wall_time)
    return trials, summaries


# ---------------------------------------------------------------- reading back

def load_summary(result_dir) -> list[dict]:
    path = Path(result_dir) / "summary.json"
    if not path.is_file():
        raise FileNotFoundError(f"{path} not found")
    return json.loads(path.read_text())


def metric_table(rows: Sequence[dict], metric: str, eps_tol: Optional[float] = None):
    """(values M x k, function ids, algorithm labels) for one metric and tolerance."""
    if eps_tol is None:
        tols = sorted({r["eps_tol"] for r in rows})
        if len(tols) != 1:
            raise ValueError(f"several tolerances present {tols}; choose one")
        eps_tol = tols[0]
    sel = [r for r in rows if abs(r["eps_tol"] - eps_tol) < 1e-12]
    if not sel:
        raise ValueError(f"no summary rows for eps_tol={eps_tol}")
    fns = list(dict.fromkeys(r["function"] for r in sel))
    algs = list(dict.fromkeys(r["algorithm"] for r in sel))
    lookup = {(r["function"], r["algorithm"]): r for r in sel}
    key = {"CS": "CS", "NOS": "NoS", "TIME": "mean_time_s"}[metric.upper()]
    values = []
    for f in fns:
        row = []
        for a in algs:
            r = lookup.get((f, a))
            v = None if r is None or r.get("error") else r[key]
            row.append(FAIL if v is None or v == FAIL else v)
        values.append(row)
    return values, fns, algs, eps_tol


def load_trials(result_dir, function: str) -> dict:
    """algorithm label -> (R, G + 1) array of curves for one function."""
    fdir = Path(result_dir) / function
    if not fdir.is_dir():
        raise FileNotFoundError(f"no results for function {function!r} in {result_dir}")
    out = {}
    for adir in sorted(p for p in fdir.iterdir() if p.is_dir()):
        files = sorted(adir.glob("run*.csv"), key=lambda p: int(p.stem[3:]))
        if files:
            out[adir.name] = np.stack([read_curve(p) for p in files])
    return out
