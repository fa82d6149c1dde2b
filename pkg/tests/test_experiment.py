import numpy as np
import pytest

from qswarm import bench, experiment as E
from qswarm.config import AlgorithmEntry, ConfigError, parse_config
from qswarm.hclpso import HCLPSOConfig, StreamSpec
from qswarm.stats import FAIL


def ts_from(curves, z=100.0, elapsed=None):
    curves = np.asarray(curves, dtype=float)
    return E.TrialSet("F1", "A", z, curves, np.zeros_like(curves) if elapsed is None else elapsed)


def test_average_curve_examples():
    np.testing.assert_array_equal(E.average_curve([[4, 2, 1], [2, 2, 1]]), [3, 2, 1])
    np.testing.assert_array_equal(E.average_curve([[7.5, 7.0]]), [7.5, 7.0])
    with pytest.raises(ValueError):
        E.average_curve([[1, 2], [1, 2, 3]])
    with pytest.raises(ValueError):
        E.average_curve([])


def test_convergence_speed_examples():
    z = 100.0
    avg = [200.0, 150.0, 104.0, 101.0]
    assert E.convergence_speed(avg, z, 0.05) == 2
    assert E.convergence_speed(avg, z, 0.01) == 3
    assert E.convergence_speed(avg, z, 0.001) == FAIL
    # a generous tolerance is met by the initial swarm
    assert E.convergence_speed(avg, z, 1e9) == 0
    # equality counts as converged
    assert E.convergence_speed([105.0], z, 0.05) == 0
    with pytest.raises(ValueError):
        E.convergence_speed(avg, z, 0.0)


def test_negative_optimum_uses_absolute_value():
    assert E.convergence_speed([-90.0, -94.0], -100.0, 0.05) == FAIL
    assert E.convergence_speed([-94.0], -100.0, 0.07) == 0


def test_number_of_successes():
    ts = ts_from([[300, 104], [300, 106], [300, 105], [300, 100]])
    assert E.number_of_successes(ts, 0.05) == 3
    assert E.number_of_successes(ts, 1e-9) == 1


def test_average_curve_can_converge_when_few_runs_do():
    # CS follows the mean curve, NoS counts individual runs
    ts = ts_from([[300, 100], [300, 109]])
    s = E.summarize(ts, 0.05)
    assert s.CS == 1 and s.NoS == 1


def test_time_to_converge():
    el = np.array([[0.0, 1.0, 2.0], [0.0, 3.0, 4.0]])
    ts = ts_from([[300, 104, 100], [300, 104, 100]], elapsed=el)
    assert E.time_to_converge(ts, 0.05) == pytest.approx(2.0)
    assert E.time_to_converge(ts, 1e-9) == pytest.approx(3.0)
    assert E.summarize(ts, 0.05, with_time=False).mean_time_s is None


def test_failed_cell_summary():
    s = E.summarize(E.TrialSet("F2", "B", 200.0, error="boom"), 0.05).to_dict()
    assert s["CS"] == FAIL and s["NoS"] is None and s["error"] == "boom"


def test_curve_file_roundtrip(tmp_path):
    c = np.array([1e10, 1234.5678901234567, 300.0000000001])
    E.write_curve(tmp_path / "r.csv", c)
    assert E.read_curve(tmp_path / "r.csv").tobytes() == c.tobytes()
    (tmp_path / "bad.csv").write_text("x\n1\n")
    with pytest.raises(ValueError):
        E.read_curve(tmp_path / "bad.csv")


# -- matrix execution ----------------------------------------------------------

ALGS = (AlgorithmEntry("Rand", "HCLPSO3"), AlgorithmEntry("Halton", "HCLPSO1", StreamSpec("halton")))


def small_specs():
    return [bench.build_function(f, 2, 5) for f in ("F1", "F3")]


def test_matrix_shape():
    base = HCLPSOConfig(N1=3, N2=4, G=20)
    trials = E.run_matrix(small_specs(), ALGS, base, R=3, master_seed=7, workers=1)
    assert [(t.function, t.algorithm) for t in trials] == [
        ("F1", "Rand"), ("F1", "Halton"), ("F3", "Rand"), ("F3", "Halton")]
    assert sum(t.R for t in trials) == 12
    assert all(t.curves.shape == (3, 21) for t in trials)
    # every run of a cell has its own seed
    assert len({t.curves[r].tobytes() for t in trials for r in range(3)}) == 12


def test_matrix_pool_matches_serial():
    base = HCLPSOConfig(N1=3, N2=4, G=15)
    a = E.run_matrix(small_specs(), ALGS, base, R=2, master_seed=3, workers=1)
    b = E.run_matrix(small_specs(), ALGS, base, R=2, master_seed=3, workers=2)
    assert [t.curves.tobytes() for t in a] == [t.curves.tobytes() for t in b]


class Exploding:
    """Objective that fails once the swarm starts moving."""

    def __init__(self, spec, after):
        self.spec, self.after, self.calls = spec, after, 0
        self.fid, self.bias, self.bounds, self.dimension = spec.fid, spec.bias, spec.bounds, spec.dimension

    def __call__(self, X):
        self.calls += 1
        if self.calls > self.after:
            raise ArithmeticError("objective blew up")
        return self.spec(X)


def test_failing_cell_recorded_and_others_finish():
    good, bad = small_specs()
    bad = Exploding(bad, after=3)
    trials = E.run_matrix([good, bad], ALGS[:1], HCLPSOConfig(N1=2, N2=2, G=10), R=2, workers=1)
    assert trials[0].ok and trials[0].R == 2
    assert not trials[1].ok and "ArithmeticError: objective blew up" in trials[1].error


def test_persist_layout_and_determinism(tmp_path):
    raw = {"version": 1, "name": "t", "suite": {"functions": ["F1", "F3"], "dimension": 2, "seed": 1},
           "algorithms": [{"label": "Rand"}, {"label": "HW", "variant": "HCLPSO1",
                                               "lds": {"kind": "huawang"}}],
           "R": 2, "G": 12, "N1": 2, "N2": 3, "eps_tol": [0.05, 0.5], "master_seed": 9}
    outs = []
    for sub in ("a", "b"):
        cfg = parse_config(dict(raw, output_dir=str(tmp_path / sub)))
        E.run_experiment(cfg, workers=1)
        outs.append(cfg.result_dir)
    files = sorted(p.relative_to(outs[0]) for p in outs[0].rglob("*.csv"))
    assert len(files) == 8
    for f in files + [outs[0].joinpath("summary.json").relative_to(outs[0])]:
        assert (outs[0] / f).read_bytes() == (outs[1] / f).read_bytes()
    rows = E.load_summary(outs[0])
    assert len(rows) == 2 * 2 * 2
    assert all(r["mean_time_s"] is None for r in rows)
    values, fns, algs, eps = E.metric_table(rows, "CS", 0.5)
    assert fns == ["F1", "F3"] and algs == ["Rand", "HW"] and eps == 0.5
    with pytest.raises(ValueError):
        E.metric_table(rows, "CS")
    curves = E.load_trials(outs[0], "F3")
    assert set(curves) == {"Rand", "HW"} and curves["HW"].shape == (2, 13)


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("QSWARM_THREADS", "1")
    assert E.worker_count() == 1
    monkeypatch.setenv("QSWARM_THREADS", "lots")
    with pytest.raises(ValueError):
        E.worker_count()


# -- config validation -----------------------------------------------------------

def test_config_lists_every_problem():
    raw = {"version": 2, "name": "a/b", "suite": {"functions": ["F1", "F99"], "dimension": 0},
           "algorithms": [{"label": "x", "variant": "HCLPSO1"}, {"label": "x", "colour": 1}],
           "R": 0, "N1": 1, "N2": 0, "eps_tol": [-1], "bogus": True, "lds_layout": "zigzag"}
    with pytest.raises(ConfigError) as info:
        parse_config(raw)
    text = "\n".join(info.value.problems)
    for needle in ("bogus", "version", "name", "F99", "suite.dimension", "algorithms[0].lds",
                   "algorithms[1].colour", "duplicate labels", "R:", "population", "eps_tol",
                   "lds_layout"):
        assert needle in text, needle


def test_config_rejects_bad_stream_params():
    raw = {"version": 1, "name": "n", "suite": {"functions": ["F1"], "dimension": 10},
           "algorithms": [{"label": "a", "variant": "HCLPSO1", "lds": {"kind": "huawang", "p": 7}}]}
    with pytest.raises(ConfigError, match="algorithms\\[0\\].lds"):
        parse_config(raw)


def test_config_defaults():
    cfg = parse_config({"version": 1, "name": "n", "suite": {"functions": ["F1"], "dimension": 10},
                        "algorithms": [{"label": "Rand"}]})
    assert (cfg.R, cfg.G, cfg.N1, cfg.N2, cfg.eps_tol, cfg.lds_layout) == (30, 2000, 15, 25, (0.05,), "block")
