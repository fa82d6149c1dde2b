"""Experiment description files (YAML or JSON, schema version 1).

Example::

    version: 1
    name: desk
    suite: {functions: [F1, F2], dimension: 10, seed: 2022}
    algorithms:
      - {label: Rand, variant: HCLPSO3}
      - {label: HCLPSO1-Halton, variant: HCLPSO1, lds: {kind: halton}}
    R: 30
    G: 2000
    N1: 15
    N2: 25
    eps_tol: [0.05]
    master_seed: 1
    output_dir: results
    lds_layout: block        # or "sequential"

Validation collects every problem before reporting, so one edit cycle fixes
them all.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import yaml

from .bench import SUITE_NAMES
from .hclpso import LAYOUTS, PRESETS, HCLPSOConfig, StreamSpec, VariantScheme, preset
from .seqgen import make_stream

SCHEMA_VERSION = 1
TOP_KEYS = {"version", "name", "suite", "algorithms", "R", "G", "N1", "N2", "eps_tol",
            "master_seed", "output_dir", "record_wall_time", "lds_layout"}
SUITE_KEYS = {"functions", "dimension", "seed"}
ALG_KEYS = {"label", "variant", "lds", "init"}


class ConfigError(ValueError):
    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid experiment config:\n" + "\n".join(f"  - {p}" for p in self.problems))


@dataclass(frozen=True)
class AlgorithmEntry:
    label: str
    variant: str = "HCLPSO3"
    lds: Optional[StreamSpec] = None
    init: Optional[StreamSpec] = None

    def scheme(self) -> VariantScheme:
        v = preset(self.variant, self.lds)
        if self.init is not None:
            v = VariantScheme(init=self.init, eps1=v.eps1, eps2=v.eps2, eps3=v.eps3)
        return v

    def to_dict(self) -> dict:
        d = {"label": self.label, "variant": self.variant}
        if self.lds is not None:
            d["lds"] = self.lds.to_dict()
        if self.init is not None:
            d["init"] = self.init.to_dict()
        return d


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    functions: tuple
    dimension: int
    algorithms: tuple
    R: int = 30
    G: int = 2000
    N1: int = 15
    N2: int = 25
    eps_tol: tuple = (0.05,)
    master_seed: int = 0
    suite_seed: int = 2022
    output_dir: str = "results"
    record_wall_time: bool = False
    lds_layout: str = "block"

    def hclpso(self, algorithm: AlgorithmEntry, seed: int) -> HCLPSOConfig:
        return HCLPSOConfig(N1=self.N1, N2=self.N2, G=self.G, variant=algorithm.scheme(), seed=seed,
                            lds_layout=self.lds_layout)

    @property
    def result_dir(self) -> Path:
        return Path(self.output_dir) / self.name

    def to_dict(self) -> dict:
        return {
            "version": SCHEMA_VERSION,
            "name": self.name,
            "suite": {"functions": list(self.functions), "dimension": self.dimension,
                      "seed": self.suite_seed},
            "algorithms": [a.to_dict() for a in self.algorithms],
            "R": self.R, "G": self.G, "N1": self.N1, "N2": self.N2,
            "eps_tol": list(self.eps_tol),
            "master_seed": self.master_seed,
            "output_dir": self.output_dir,
            "record_wall_time": self.record_wall_time,
            "lds_layout": self.lds_layout,
        }


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _stream(raw, where: str, dimension: Optional[int], problems: list) -> Optional[StreamSpec]:
    if not isinstance(raw, dict) or "kind" not in raw:
        problems.append(f"{where}: expected a mapping with a 'kind' key")
        return None
    params = {k: v for k, v in raw.items() if k != "kind"}
    spec = StreamSpec(str(raw["kind"]), params)
    if dimension is not None:
        try:
            spec.build(dimension, 0)
        except (ValueError, TypeError, OSError, KeyError) as exc:
            problems.append(f"{where}: {exc}")
    return spec


def parse_config(raw: dict) -> ExperimentConfig:
    problems: list[str] = []
    if not isinstance(raw, dict):
        raise ConfigError(["top level must be a mapping"])
    for k in sorted(set(raw) - TOP_KEYS):
        problems.append(f"{k}: unknown key")
    if raw.get("version") != SCHEMA_VERSION:
        problems.append(f"version: must be {SCHEMA_VERSION}")
    name = raw.get("name")
    if not isinstance(name, str) or not name or "/" in name:
        problems.append("name: non-empty string without '/' required")

    suite = raw.get("suite")
    functions, dimension, suite_seed = (), None, 2022
    if not isinstance(suite, dict):
        problems.append("suite: mapping required")
    else:
        for k in sorted(set(suite) - SUITE_KEYS):
            problems.append(f"suite.{k}: unknown key")
        fns = suite.get("functions")
        if not isinstance(fns, list) or not fns:
            problems.append("suite.functions: non-empty list required")
        else:
            bad = [f for f in fns if f not in SUITE_NAMES]
            if bad:
                problems.append(f"suite.functions: unknown ids {bad}")
            if len(set(fns)) != len(fns):
                problems.append("suite.functions: duplicate ids")
            functions = tuple(fns)
        dimension = suite.get("dimension")
        if not _is_int(dimension) or dimension < 1:
            problems.append("suite.dimension: positive integer required")
            dimension = None
        suite_seed = suite.get("seed", 2022)
        if not _is_int(suite_seed) or suite_seed < 0:
            problems.append("suite.seed: non-negative integer required")

    algs = raw.get("algorithms")
    entries = []
    if not isinstance(algs, list) or not algs:
        problems.append("algorithms: non-empty list required")
    else:
        for i, a in enumerate(algs):
            where = f"algorithms[{i}]"
            if not isinstance(a, dict):
                problems.append(f"{where}: mapping required")
                continue
            for k in sorted(set(a) - ALG_KEYS):
                problems.append(f"{where}.{k}: unknown key")
            label = a.get("label")
            if not isinstance(label, str) or not label or "/" in label:
                problems.append(f"{where}.label: non-empty string without '/' required")
            variant = str(a.get("variant", "HCLPSO3"))
            key = variant.upper().replace("_", "")
            if key not in PRESETS and key != "RAND":
                problems.append(f"{where}.variant: one of {list(PRESETS)} or Rand")
            lds = _stream(a["lds"], f"{where}.lds", dimension, problems) if "lds" in a else None
            init = _stream(a["init"], f"{where}.init", dimension, problems) if "init" in a else None
            if lds is None and key in ("HCLPSO0", "HCLPSO1", "HCLPSO2") and "lds" not in a:
                problems.append(f"{where}.lds: required by variant {variant}")
            entries.append(AlgorithmEntry(str(label), variant, lds, init))
        labels = [e.label for e in entries]
        if len(set(labels)) != len(labels):
            problems.append("algorithms: duplicate labels")

    ints = {}
    for k, default, lo in (("R", 30, 1), ("G", 2000, 1), ("N1", 15, 0), ("N2", 25, 0),
                           ("master_seed", 0, 0)):
        v = raw.get(k, default)
        if not _is_int(v) or v < lo:
            problems.append(f"{k}: integer >= {lo} required")
        ints[k] = v
    if _is_int(ints["N1"]) and _is_int(ints["N2"]) and ints["N1"] + ints["N2"] < 2:
        problems.append("N1, N2: population must have at least 2 particles")

    eps = raw.get("eps_tol", [0.05])
    if isinstance(eps, (int, float)) and not isinstance(eps, bool):
        eps = [eps]
    if (not isinstance(eps, list) or not eps
            or not all(isinstance(e, (int, float)) and not isinstance(e, bool) and e > 0 for e in eps)):
        problems.append("eps_tol: positive number or non-empty list of positive numbers required")
        eps = [0.05]
    out = raw.get("output_dir", "results")
    if not isinstance(out, str) or not out:
        problems.append("output_dir: non-empty string required")
    rwt = raw.get("record_wall_time", False)
    if not isinstance(rwt, bool):
        problems.append("record_wall_time: boolean required")

    layout = raw.get("lds_layout", "block")
    if layout not in LAYOUTS:
        problems.append(f"lds_layout: one of {list(LAYOUTS)}")

    if problems:
        raise ConfigError(problems)
    return ExperimentConfig(
        name=name, functions=functions, dimension=dimension, algorithms=tuple(entries),
        R=ints["R"], G=ints["G"], N1=ints["N1"], N2=ints["N2"],
        eps_tol=tuple(float(e) for e in eps), master_seed=ints["master_seed"],
        suite_seed=suite_seed, output_dir=out, record_wall_time=rwt, lds_layout=layout,
    )


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    text = path.read_text()
    try:
        raw = json.loads(text) if path.suffix == ".json" else yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ConfigError([f"{path}: cannot parse ({exc})"]) from exc
    return parse_config(raw)
