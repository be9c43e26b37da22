import numpy as np
import pytest

from sca.pointcloud import GeneratorSpec, PointCloud, generate


def line_cloud(*xs):
    return PointCloud(np.asarray(xs, dtype=float)[:, None])


def two_gaussians(seed=0, n=1000):
    spec = GeneratorSpec("gaussian_mixture",
                         {"means": [-2, 2], "sds": [1, 1], "weights": [0.5, 0.5]}, seed)
    return generate(spec, n)


def two_masses(seed=0, n=200, jitter=1e-3):
    spec = GeneratorSpec("two_point_masses", {"locations": [0.0, 1.0], "jitter": jitter}, seed)
    return generate(spec, n)


def random_cloud(rng, n, d):
    return PointCloud(rng.standard_normal((n, d)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def record(number, ok, detail):
    """Log one acceptance verdict; printed again in the terminal summary."""
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
