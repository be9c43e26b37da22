import json
import math

import numpy as np
import pytest

from sca.errors import DegenerateMarginError, ParameterError, ParseError
from sca.pointcloud import (GeneratorSpec, PointCloud, generate, load_generator_spec,
                            mutual_information_features, read_points_csv, spiral_point,
                            write_points_csv)

from conftest import two_gaussians


def test_two_gaussian_mean_near_zero():
    cloud = two_gaussians(seed=3)
    assert cloud.n == 1000 and cloud.d == 1
    assert abs(cloud.points.mean()) <= 3 * math.sqrt(5) / math.sqrt(1000)


def test_noiseless_spiral_lies_on_curve():
    cloud = generate(GeneratorSpec("spiral", {"a": 0.8, "b": 10, "beta": 0.0}, 1), 300)
    x, y = cloud.points.T
    r = np.hypot(x, y)
    t = r ** (1 / 0.8)
    np.testing.assert_allclose(spiral_point(t), cloud.points, atol=1e-12)


def test_point_masses_have_two_values():
    cloud = generate(GeneratorSpec("two_point_masses", {"weights": [0.5, 0.5]}, 0), 10)
    assert set(np.unique(cloud.points)) <= {0.0, 1.0}


def test_parallel_lines_and_ring_blob_shapes():
    lines = generate(GeneratorSpec("parallel_lines", {"separation": 2.0}, 0), 50)
    assert set(np.unique(lines.points[:, 0])) <= {0.0, 2.0}
    ring = generate(GeneratorSpec("ring_blob_noise", {"noise_fraction": 0.2}, 0), 100)
    assert ring.n == 100 and np.sum(ring.labels == 2) == 20


def test_same_seed_same_points():
    a, b = two_gaussians(seed=9, n=50), two_gaussians(seed=9, n=50)
    np.testing.assert_array_equal(a.points, b.points)


@pytest.mark.parametrize("kind,params", [
    ("gaussian_mixture", {"sds": [1, -1]}),
    ("gaussian_mixture", {"weights": [0.2, 0.2]}),
    ("spiral", {"b": 0}),
    ("parallel_lines", {"length": -1}),
    ("two_point_masses", {"jitter": -1}),
    ("ring_blob_noise", {"noise_fraction": 1.5}),
    ("nonsense", {}),
])
def test_invalid_specs_rejected(kind, params):
    with pytest.raises(ParameterError):
        generate(GeneratorSpec(kind, params, 0), 10)


def test_cloud_rejects_nonfinite_and_is_readonly():
    with pytest.raises(ParameterError):
        PointCloud(np.array([[0.0], [np.nan]]))
    cloud = PointCloud(np.zeros((3, 1)))
    with pytest.raises(ValueError):
        cloud.points[0, 0] = 1.0


def test_mutual_information_uniform_counts():
    counts = np.full((3, 4), 7)
    info, floored = mutual_information_features(counts)
    f = counts / counts.sum()
    expected = np.log(f[0, 0] / (f[:, 0].sum() * f[0, :].sum()))
    np.testing.assert_allclose(info, expected, atol=1e-12)
    assert not floored.any()


def test_mutual_information_single_cell_and_diagonal():
    info, _ = mutual_information_features([[5]])
    assert info[0, 0] == pytest.approx(0.0, abs=1e-15)
    info, floored = mutual_information_features([[1, 0], [0, 1]])
    assert info[0, 0] == pytest.approx(math.log(2))
    assert info[1, 1] == pytest.approx(math.log(2))
    np.testing.assert_array_equal(floored, [[False, True], [True, False]])


def test_mutual_information_degenerate_margin():
    with pytest.raises(DegenerateMarginError):
        mutual_information_features([[1, 0], [0, 0]])


def test_csv_roundtrip_and_parse_errors(tmp_path):
    cloud = PointCloud(np.array([[0.1, 1 / 3], [2.5, -7.0]]), np.array([0, 1]))
    path = tmp_path / "pts.csv"
    write_points_csv(path, cloud)
    back = read_points_csv(path, labels=True)
    np.testing.assert_array_equal(back.points, cloud.points)
    np.testing.assert_array_equal(back.labels, cloud.labels)
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3,abc\n")
    with pytest.raises(ParseError) as info:
        read_points_csv(bad)
    assert info.value.line == 2


def test_generator_spec_json(tmp_path):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps({"kind": "spiral", "parameters": {"beta": 0.09}, "seed": 4}))
    spec = load_generator_spec(path)
    assert spec.kind == "spiral" and spec.seed == 4 and spec.param("beta", 0) == 0.09
