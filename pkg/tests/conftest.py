import numpy as np
import pytest

from tilepack.geometry import Point, Tile


def random_tile(rng, m=None, anchor=None, degenerate=False):
    """Random staircase tile with m upper points above-right of ``anchor``."""
    if m is None:
        m = int(rng.integers(1, 10))
    ax, ay = anchor if anchor is not None else (0.0, 0.0)
    xs = np.sort(rng.random(m)) + 1e-3
    ys = np.sort(rng.random(m))[::-1] + 1e-3
    if degenerate and m >= 2:
        # copy a few neighbouring coordinates to create weakly dominated points
        for _ in range(int(rng.integers(1, m))):
            i = int(rng.integers(0, m - 1))
            if rng.random() < 0.5:
                xs[i + 1] = xs[i]
            else:
                ys[i] = ys[i + 1]
    return Tile(Point(ax, ay), tuple(Point(ax + float(x), ay + float(y)) for x, y in zip(xs, ys)))


def owner_oracle(points, samples):
    """Index of the point owning each sample.

    The sweep reaches points by decreasing x + y and a point claims whatever
    is still free above-right of it, so the owner is the point with the
    largest x + y among those weakly below-left of the sample.
    """
    P = np.asarray(points, dtype=float)
    S = np.asarray(samples, dtype=float)
    below = (P[None, :, 0] <= S[:, None, 0]) & (P[None, :, 1] <= S[:, None, 1])
    score = np.where(below, P[None, :, 0] + P[None, :, 1], -np.inf)
    return np.argmax(score, axis=1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if rep.when != "call":
                continue
            lines += [v for k, v in rep.user_properties if k == "acceptance"]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
