import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qswarm import bench
from qswarm.bench import (
    BASES, ObjectiveSpec, SIMPLE_IDS, build_function, composition_weights, make_transform,
    standard_suite,
)

TABLE_BIASES = [300, 400, 500, 600, 700, 800, 900, 1100, 1400, 1500, 1600, 1700, 1900, 2000,
                2100, 2200, 2400]


def plain(base, d, bias=0.0):
    return ObjectiveSpec("T", base, np.zeros(d), np.eye(d), bias, base=base)


# -- base formulas -------------------------------------------------------------

def test_zakharov_hand_value():
    assert bench.zakharov(np.array([1.0, 0.0])) == pytest.approx(1.3125)


def test_rastrigin_bias_at_origin():
    assert plain("rastrigin", 5, 500.0)(np.zeros(5)) == 500.0


def test_rosenbrock_known_minimiser():
    assert bench.rosenbrock(np.ones(6)) == 0.0
    assert bench.rosenbrock(np.array([0.0, 0.0])) == 1.0


def test_other_hand_values():
    assert bench.rastrigin(np.array([1.0, 0.0])) == pytest.approx(1.0)
    assert bench.bent_cigar(np.array([1.0, 1.0, 1.0])) == pytest.approx(1 + 2e6)
    assert bench.elliptic(np.array([1.0, 1.0])) == pytest.approx(1 + 1e6)
    assert bench.griewank(np.zeros(4)) == 0.0
    assert bench.ackley(np.zeros(7)) == 0.0
    assert bench.levy(np.ones(3)) == pytest.approx(0.0, abs=1e-15)
    assert bench.hgbat(-np.ones(4)) == pytest.approx(0.0, abs=1e-12)
    # Schaffer F7 of a 2-vector with s = sqrt(2): (2^(1/4) (1 + sin^2(50 * 2^0.1)))^2
    s = np.sqrt(2.0)
    want = (np.sqrt(s) * (1 + np.sin(50 * s ** 0.2) ** 2)) ** 2
    assert bench.schaffer_f7(np.array([1.0, 1.0])) == pytest.approx(want)
    # Schaffer F6 term at the origin is zero
    assert bench.expanded_schaffer_f6(np.zeros(3)) == 0.0


def test_noncontinuous_rastrigin_rounds_far_coordinates():
    x = np.array([0.3, 0.74, -1.3])
    y = np.array([0.3, 0.5, -1.5])
    assert bench.noncontinuous_rastrigin(x) == pytest.approx(bench.rastrigin(y))


@pytest.mark.parametrize("name", sorted(BASES))
def test_every_registered_base_vanishes_at_transformed_origin(name):
    for d in (2, 10, 30):
        assert abs(BASES[name](np.zeros(d))) < 1e-9


@pytest.mark.parametrize("name", sorted(BASES))
def test_batch_and_single_agree(name):
    X = np.random.default_rng(1).uniform(-50, 50, (6, 10))
    batch = BASES[name](X)
    np.testing.assert_allclose(batch, [BASES[name](x) for x in X], rtol=1e-12)


@pytest.mark.parametrize("name", ["bent_cigar", "elliptic"])
def test_axis_ray_monotone(name):
    spec = plain(name, 6)
    e1 = np.eye(6)[0]
    ts = np.linspace(0, 90, 50)
    for sign in (1, -1):
        vals = [spec(sign * t * e1) for t in ts]
        assert all(b >= a for a, b in zip(vals, vals[1:]))


# -- transforms ----------------------------------------------------------------

@pytest.mark.parametrize("d", [2, 10, 30])
def test_rotation_orthogonal_and_shift_inside(d):
    for seed in range(100):
        shift, rot = make_transform(seed, d)
        assert np.abs(rot.T @ rot - np.eye(d)).max() < 1e-10
        assert np.linalg.det(rot) > 0
        assert np.all(shift > -80) and np.all(shift < 80)


def test_transform_is_deterministic():
    a = make_transform(77, 10)
    b = make_transform(77, 10)
    assert a[0].tobytes() == b[0].tobytes() and a[1].tobytes() == b[1].tobytes()


def test_transform_file_roundtrip(tmp_path):
    shift, rot = make_transform(3, 4)
    f = tmp_path / "t.txt"
    bench.save_transform(f, shift, rot)
    s2, r2 = bench.load_transform(f)
    np.testing.assert_array_equal(shift, s2)
    np.testing.assert_array_equal(rot, r2)
    spec = bench.with_transform(build_function("F3", 4, 0), s2, r2)
    assert spec(shift) == pytest.approx(500.0)


def test_transform_file_rejects_bad_rotation(tmp_path):
    f = tmp_path / "t.txt"
    f.write_text("# shift\n1 2\n# rotation\n1 0\n1 1\n")
    with pytest.raises(ValueError):
        bench.load_transform(f)


# -- suite -------------------------------------------------------------------

def test_suite_shape_and_biases():
    suite = standard_suite(10, seed=5)
    assert len(suite) == 17
    assert [s.bias for s in suite] == [float(b) for b in TABLE_BIASES]
    assert suite[0].bias == 300
    kinds = [s.kind for s in suite]
    assert kinds == ["simple"] * 7 + ["hybrid"] * 7 + ["composition"] * 3


@pytest.mark.parametrize("d", [10, 30, 50])
def test_simple_specs_hit_bias_at_shift(d):
    for spec in standard_suite(d, seed=11)[:7]:
        assert spec(spec.shift) == pytest.approx(spec.bias, abs=1e-9)


@pytest.mark.parametrize("fid", [f"F{i}" for i in range(8, 15)])
def test_hybrid_specs_hit_bias_at_shift(fid):
    spec = build_function(fid, 10, 4)
    assert spec(spec.shift) == pytest.approx(spec.bias, abs=1e-9)


def test_composition_first_optimum_gives_bias():
    for fid in ("F15", "F16", "F17"):
        spec = build_function(fid, 10, 4)
        assert spec(spec.composition.components[0].shift) == pytest.approx(spec.bias, abs=1e-9)


def test_hybrid_partition_and_proportions():
    for spec in standard_suite(10, 0)[7:14]:
        h = spec.hybrid
        assert sum(h.proportions) == pytest.approx(1.0)
        assert sorted(h.permutation.tolist()) == list(range(10))
        sizes = h.block_sizes(10)
        assert sum(sizes) == 10 and min(sizes) >= 1


def test_hybrid_equals_manual_block_sum():
    spec = bench.hybrid("H", ["rastrigin", "zakharov"], [0.5, 0.5], 4, seed=9, bias=100.0)
    x = np.random.default_rng(0).uniform(-100, 100, 4)
    z = spec.rotation @ (x - spec.shift)
    z = z[spec.hybrid.permutation]
    manual = 100.0 + BASES["rastrigin"](z[:2]) + BASES["zakharov"](z[2:])
    assert spec(x) == pytest.approx(manual, rel=1e-12)


def test_hybrid_rejects_tiny_dimension():
    with pytest.raises(ValueError):
        build_function("F11", 3, 0)


def test_dimension_mismatch_raises():
    with pytest.raises(ValueError):
        build_function("F1", 10, 0)(np.zeros(3))


def test_suite_is_seeded():
    a = build_function("F8", 10, 42)
    b = build_function("F8", 10, 42)
    c = build_function("F8", 10, 43)
    assert a.transform_digest() == b.transform_digest() != c.transform_digest()


def test_unknown_function_id():
    with pytest.raises(KeyError):
        build_function("F99", 10, 0)


def test_simple_ids():
    assert SIMPLE_IDS == ["F1", "F2", "F3", "F4", "F5", "F6", "F7"]


@given(st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_composition_weights_normalised(seed):
    rng = np.random.default_rng(seed)
    spec = build_function(["F15", "F16", "F17"][seed % 3], 10, 3)
    X = rng.uniform(-100, 100, (25, 10))
    w = composition_weights(spec.composition, X)
    assert np.all(w >= 0)
    np.testing.assert_allclose(w.sum(axis=-1), 1.0, atol=1e-12)


def test_composition_weight_is_one_at_component_optimum():
    spec = build_function("F17", 10, 3)
    for k, comp in enumerate(spec.composition.components):
        w = composition_weights(spec.composition, comp.shift)
        assert w[k] == 1.0 and w.sum() == 1.0


def test_manifest_lists_everything():
    man = bench.suite_manifest(standard_suite(10, 1))
    assert [m["fid"] for m in man] == [f"F{i}" for i in range(1, 18)]
    assert all(len(m["transform_sha256"]) == 64 for m in man)
