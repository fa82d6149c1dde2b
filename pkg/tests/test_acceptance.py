"""Acceptance criteria. Each test carries a ``criterion`` marker; the conftest
prints one PASS/FAIL line per criterion after the run."""
import math
import time
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from qswarm import experiment, seqgen, stats
from qswarm.config import load_config

import hclpso_props
from reference_tables import INIT_RANKS_5, INIT_TAU_5

ROOT = Path(__file__).resolve().parents[1]


def note(record_property, text):
    record_property("detail", text)
    print(text)


# 1 ---------------------------------------------------------------------------

@pytest.mark.criterion(1, "Nemenyi CD oracle")
def test_c1_nemenyi(record_property):
    cd5, cd4 = stats.nemenyi_cd(5, 17), stats.nemenyi_cd(4, 17)
    note(record_property, f"CD(5,17)={cd5:.5f} CD(4,17)={cd4:.5f}")
    assert abs(cd5 - 1.4795) <= 0.001
    assert abs(cd4 - 1.137) <= 0.001


# 2 ---------------------------------------------------------------------------

@pytest.mark.criterion(2, "Friedman oracle on reference ranks")
def test_c2_friedman(record_property):
    res = stats.friedman_tau(stats.table_from_ranks(INIT_RANKS_5))
    note(record_property, f"tau_F={res.tau_F:.4f} target={INIT_TAU_5}")
    assert not res.infinite
    assert abs(res.tau_F - INIT_TAU_5) <= 0.05


# 3 ---------------------------------------------------------------------------

@pytest.mark.criterion(3, "sequence correctness")
def test_c3_sequences(record_property):
    hw = seqgen.HuaWangStream(1, 5).next_points(3)[:, 0]
    golden = [(k * (math.sqrt(5) - 1) / 2) % 1.0 for k in (1, 2, 3)]
    assert np.max(np.abs(hw - golden)) <= 1e-6

    base2 = [1 / 2, 1 / 4, 3 / 4, 1 / 8, 5 / 8, 3 / 8, 7 / 8, 1 / 16]
    base3 = [1 / 3, 2 / 3, 1 / 9, 4 / 9, 7 / 9, 2 / 9, 5 / 9, 8 / 9]
    h = seqgen.HaltonStream(2).next_points(8)
    assert np.max(np.abs(h - np.column_stack([base2, base3]))) <= 1e-12

    oa = seqgen.oa_point_set(9, 2).points
    grid = sorted((a, b) for a in (1 / 6, 1 / 2, 5 / 6) for b in (1 / 6, 1 / 2, 5 / 6))
    np.testing.assert_allclose(sorted(map(tuple, oa)), grid, atol=1e-15)
    note(record_property, f"HW={np.round(hw, 6).tolist()}")


# 4 ---------------------------------------------------------------------------

@pytest.mark.criterion(4, "Halton beats random on CL2")
def test_c4_uniformity(record_property):
    t0 = time.perf_counter()
    halton = seqgen.centered_l2_discrepancy(seqgen.HaltonStream(2).next_points(256))
    rand = np.array([seqgen.centered_l2_discrepancy(seqgen.RandomStream(2, s).next_points(256))
                     for s in range(20)])
    mean, sd = rand.mean(), rand.std(ddof=1)
    dt = time.perf_counter() - t0
    note(record_property, f"Halton={halton:.5f} random={mean:.5f}+-{sd:.5f} ({dt:.2f}s)")
    assert halton < mean - 2 * sd
    assert dt < 5


# 5 ---------------------------------------------------------------------------

CASES = hclpso_props.random_cases(24, seed=515)
_c5_seconds = []


@pytest.mark.criterion(5, "HCLPSO engine invariants")
@pytest.mark.parametrize("name", list(hclpso_props.PROPERTIES))
def test_c5_engine_properties(name, record_property):
    assert {c.D for c in CASES} == {2, 10}
    check = hclpso_props.PROPERTIES[name]
    t0 = time.perf_counter()
    for case in CASES:
        check(case)
    note(record_property, f"{len(CASES)} configs per property")
    _c5_seconds.append(time.perf_counter() - t0)
    assert sum(_c5_seconds) < 60


# 6-8 -------------------------------------------------------------------------

def _desk(out_dir):
    cfg = replace(load_config(ROOT / "configs" / "desk.yaml"), output_dir=str(out_dir))
    t0 = time.perf_counter()
    trials, summaries = experiment.run_experiment(cfg, workers=experiment.worker_count())
    return cfg, summaries, time.perf_counter() - t0


@pytest.fixture(scope="module")
def desk_a(tmp_path_factory):
    return _desk(tmp_path_factory.mktemp("desk_a"))


@pytest.fixture(scope="module")
def desk_b(tmp_path_factory):
    return _desk(tmp_path_factory.mktemp("desk_b"))


def _table(cfg, metric):
    rows = experiment.load_summary(cfg.result_dir)
    values, fns, algs, eps = experiment.metric_table(rows, metric, 0.05)
    return values, fns, algs


@pytest.mark.slow
@pytest.mark.criterion(6, "velocity LDS lowers CS on the desk suite")
def test_c6_desk_cs(desk_a, record_property):
    cfg, _, seconds = desk_a
    values, fns, algs = _table(cfg, "CS")
    assert algs == ["Rand", "HCLPSO1-Halton", "HCLPSO1-HuaWang"]
    rank = lambda v: math.inf if v == stats.FAIL else v
    wins = {a: sum(rank(row[j]) < rank(row[0]) for row in values) for j, a in enumerate(algs) if j}
    rep = stats.compare(values, algs, fns, "CS", 0.05)
    note(record_property, f"CS={dict(zip(fns, values))} wins={wins} tau_F={rep.tau_F:.3f} tau_c={rep.tau_c:.3f} "
                          f"avg_ranks={np.round(rep.avg_ranks, 3).tolist()} {seconds:.0f}s")
    assert all(w >= 5 for w in wins.values())
    assert rep.reject_null
    assert rep.avg_ranks[1] < rep.avg_ranks[0] and rep.avg_ranks[2] < rep.avg_ranks[0]
    assert seconds < 600


@pytest.mark.slow
@pytest.mark.criterion(7, "success rate preserved")
def test_c7_desk_nos(desk_a, record_property):
    cfg, _, _ = desk_a
    values, fns, algs = _table(cfg, "NoS")
    rep = stats.compare(values, algs, fns, "NoS", 0.05)
    note(record_property, f"NoS={values} tau_F={rep.tau_F} tau_c={rep.tau_c:.3f}")
    assert not rep.reject_null


@pytest.mark.slow
@pytest.mark.criterion(8, "byte-identical rerun")
def test_c8_determinism(desk_a, desk_b, record_property):
    a, b = desk_a[0].result_dir, desk_b[0].result_dir
    files = sorted(p.relative_to(a) for p in a.rglob("*.csv")) + [Path("summary.json")]
    assert len(files) == 7 * 3 * 30 + 1
    diff = [str(f) for f in files if (a / f).read_bytes() != (b / f).read_bytes()]
    assert sorted(p.relative_to(b) for p in b.rglob("*.csv")) == files[:-1]
    note(record_property, f"{len(files)} files compared, {len(diff)} differ")
    assert not diff
