"""Instance families: diagonal, random, crown-tight, worst-case tiles and the
ODE-driven adversarial point set.

The adversarial construction works in the frame rotated clockwise by 45°,
(x, y) -> ((x + y)/√2, (y - x)/√2), where the unit square becomes the diamond
0 <= X <= √2, |Y| <= min(X, √2 - X) and TilePacking sweeps right to left.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .geometry import (
    GeneralizedTile,
    Instance,
    Point,
    SlideSection,
    Tile,
    discretize,
    ensure_general_position,
    in_general_position,
    perturb_general_position,
)
from .packing import Report

SQRT2 = math.sqrt(2.0)


class CurveOrderingError(RuntimeError):
    """The integrated curves crossed; the grid is too coarse for this k."""


def gen_diagonal(n: int, delta: float = 1e-12) -> Instance:
    if n < 1:
        raise ValueError("n must be at least 1")
    pts = tuple(Point(i / n, i / n) for i in range(n))
    return ensure_general_position(Instance(pts, f"diagonal-{n}"), delta)


def gen_random(n: int, seed: int = 0) -> Instance:
    """Origin plus n - 1 uniform points, redrawn until in general position."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    while True:
        xy = rng.random((n - 1, 2))
        pts = (Point(0.0, 0.0),) + tuple(Point(float(x), float(y)) for x, y in xy)
        if in_general_position(pts):
            return Instance(pts, f"random-{n}-seed{seed}")


def diagonal_coverage(n: int) -> float:
    """Closed-form TilePacking coverage of the n-point diagonal."""
    return (n - 1) * (n + 2) / (2 * n * n) + 1 / (n * n)


def gen_crown_tight(eps: float, delta: float = 1e-12) -> Instance:
    """Origin plus (kε, 1 - kε²) and its mirror image for k = 1..1/ε - 1."""
    m = round(1.0 / eps) if eps > 0 else 0
    if m < 1 or abs(m * eps - 1.0) > 1e-12:
        raise ValueError(f"1/eps must be a positive integer, got eps={eps}")
    pts = [Point(0.0, 0.0)]
    for k in range(1, m):
        a, b = k * eps, 1.0 - k * eps * eps
        pts.append(Point(a, b))
        pts.append(Point(b, a))
    return ensure_general_position(Instance(tuple(pts), f"crown-tight-{m}"), delta)


def gen_worstcase_tile(kind: str, v: float, m: int = 10_000) -> Tile:
    """Symmetric tiles on which the strong bound is tight.

    ``step``: staircase {(v, 1/v), (1/v, v)}; ``hyperbola``: the slide over
    [v, 1/v] discretized with ``m`` points.
    """
    if not 0.0 < v < 1.0:
        raise ValueError("v must lie in (0, 1)")
    if kind == "step":
        return Tile(Point(0.0, 0.0), (Point(v, 1.0 / v), Point(1.0 / v, v)))
    if kind == "hyperbola":
        return discretize(GeneralizedTile((SlideSection(v, 1.0 / v),)), m)
    raise ValueError(f"unknown worst-case tile kind {kind!r}")


def worstcase_v(kind: str, rho: float) -> float:
    """Parameter v giving the symmetric worst-case tile of density ``rho``."""
    if kind == "step":
        if not 0.5 < rho <= 1.0:
            raise ValueError("step tiles cover densities in (1/2, 1]")
        return math.sqrt(2.0 - 1.0 / rho)
    if kind == "hyperbola":
        if not 0.0 < rho <= 0.5:
            raise ValueError("hyperbola tiles cover densities in (0, 1/2]")
        return math.exp(0.5 - 0.5 / rho)
    raise ValueError(f"unknown worst-case tile kind {kind!r}")


# --------------------------------------------------------------------------
# Adversarial construction


def rotate_cw(x, y):
    return (x + y) / SQRT2, (y - x) / SQRT2


def rotate_ccw(X, Y):
    return (X - Y) / SQRT2, (X + Y) / SQRT2


@dataclass(frozen=True)
class AdversarialParams:
    A: float = math.exp(-2.0)
    k: int = 16
    eps: float = 2.0**-8 * SQRT2
    perturb_delta: float | None = None
    spacing: str = "x"
    strict: bool = False

    def __post_init__(self):
        if not 0.0 < self.A < 1.0:
            raise ValueError("A must lie in (0, 1)")
        if self.k < 2:
            raise ValueError("k must be at least 2")
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if not math.sqrt(2 * self.A) < self.x_star:
            raise ValueError("hyperbola does not meet the top edge inside the square")
        if self.spacing not in ("x", "angle"):
            raise ValueError(f"unknown anchor spacing {self.spacing!r}")

    @property
    def x_star(self) -> float:
        """Rotated-frame X where h_A meets the top edge."""
        return (1.0 + self.A) / SQRT2


@dataclass
class CurveFamily:
    """Curves f_0..f_k on the grid X_j = jε (negative indices by symmetry)."""

    A: float
    k: int
    eps: float
    grid: np.ndarray  # (N,)
    values: np.ndarray  # (k + 1, N); row i is f_i
    anchor_index: np.ndarray  # (k + 1,); grid index of x(q_i)

    @property
    def anchors(self) -> list[tuple[float, float]]:
        return [(float(self.grid[j]), float(self.values[i, j])) for i, j in enumerate(self.anchor_index)]

    def full_values(self) -> np.ndarray:
        """Rows f_{-k}..f_k."""
        return np.vstack([-self.values[:0:-1], self.values])

    def write_csv(self, path) -> None:
        k = self.k
        header = ["x"] + [f"f_{i}" for i in range(-k, k + 1)]
        vals = self.full_values()
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for j, x in enumerate(self.grid):
                w.writerow([repr(float(x))] + [repr(float(v)) for v in vals[:, j]])


def place_anchors(params: AdversarialParams) -> np.ndarray:
    """Grid indices of x(q_0) < ... < x(q_k), snapped down to multiples of ε.

    ``spacing="x"`` spaces the anchors evenly in X. ``spacing="angle"``
    spaces them evenly in hyperbolic angle, X = √(2A)·cosh θ, which shrinks
    the staircase notch next to the vertex; consecutive anchors are then
    pushed apart to at least 2ε.
    """
    x0 = math.sqrt(2 * params.A)
    if params.spacing == "x":
        xs = np.linspace(x0, params.x_star, params.k + 1)
    else:
        theta = np.linspace(0.0, math.acosh(params.x_star / x0), params.k + 1)
        xs = x0 * np.cosh(theta)
    idx = np.floor(xs / params.eps + 1e-9).astype(int)
    if params.spacing != "x":
        for i in range(1, len(idx)):
            idx[i] = max(idx[i], idx[i - 1] + 2)
    if np.any(np.diff(idx) < 2):
        raise ValueError("anchor spacing below 2·eps; decrease eps or k")
    return idx


def integrate_curves(params: AdversarialParams, strict: bool | None = None) -> CurveFamily:
    """Forward-Euler integration of the coupled curve system on the ε grid.

    f_0 ≡ 0 and f_k = √2 - X are fixed. Each interior f_i follows slope -1
    up to its anchor q_i on h_A and f_i' = 1 - 2(f_i - f_{i-1})/(f_{i+1} - f_{i-1})
    after it.

    Past the top-edge anchor the boundary f_k descends with slope -1, which
    no interior curve can outrun, so the upper curves are squeezed against
    it and their gaps shrink faster than exponentially. Once a gap drops
    below what a step can resolve, a strict run raises; otherwise the
    curves are merged (clamped to f_i <= f_{i+1}) and integration goes on.
    """
    if strict is None:
        strict = params.strict
    A, k, eps = params.A, params.k, params.eps
    n_grid = int(math.ceil(SQRT2 / eps))
    if (n_grid - 1) * eps >= SQRT2:
        n_grid -= 1
    grid = np.arange(n_grid) * eps
    idx = place_anchors(params)
    xq = idx * eps
    yq = np.sqrt(np.maximum(xq * xq - 2 * A, 0.0))
    F = np.empty((k + 1, n_grid))
    F[0] = 0.0
    F[k] = SQRT2 - grid
    # slope -1 segments for all interior curves; overwritten once active
    for i in range(1, k):
        F[i] = yq[i] + (xq[i] - grid)
    inner = np.arange(1, k)
    for j in range(n_grid - 1):
        active = inner[idx[inner] <= j]
        if len(active) == 0:
            continue
        col = F[:, j]
        below = col[active - 1]
        above = col[active + 1]
        denom = above - below
        if np.any(denom <= 0) or np.any(col[active] <= below) or np.any(col[active] >= above):
            if strict:
                bad = active[np.argmin(np.minimum(col[active] - below, above - col[active]))]
                raise CurveOrderingError(
                    f"curves cross near X={grid[j]:.6f} (curve {bad}); use a smaller eps or k"
                )
            denom = np.where(denom == 0, np.inf, denom)
        slope = 1.0 - 2.0 * (col[active] - below) / denom
        F[active, j + 1] = col[active] + eps * slope
        if not strict:
            nxt = F[:, j + 1]
            for i in range(k - 1, 0, -1):
                nxt[i] = min(nxt[i], nxt[i + 1])
            np.maximum.accumulate(nxt, out=nxt)
    return CurveFamily(A, k, eps, grid, F, idx)


def verify_curve_family(cf: CurveFamily, tol: float = 1e-9) -> Report:
    """Ordering, single crossing of h_A, and |slope| <= 1 on the grid."""
    witnesses = []
    full = cf.full_values()
    gaps = np.diff(full, axis=0)
    if np.any(gaps <= 0):
        # report the leftmost grid column where the ordering breaks
        j = int(np.argmax(np.any(gaps <= 0, axis=0)))
        r = int(np.argmax(gaps[:, j] <= 0))
        witnesses.append({"kind": "ordering", "curves": [int(r) - cf.k, int(r) + 1 - cf.k], "x": float(cf.grid[j])})
    for i in range(cf.k + 1):
        g = cf.grid**2 - cf.values[i] ** 2 - 2 * cf.A
        s = np.sign(np.where(np.abs(g) <= tol, 0.0, g))
        s = s[s != 0]
        crossings = int(np.count_nonzero(s[1:] != s[:-1]))
        if crossings != 1:
            witnesses.append({"kind": "hyperbola-crossings", "curve": i, "crossings": crossings})
    slopes = np.diff(cf.values, axis=1) / cf.eps
    if np.any(np.abs(slopes) > 1 + tol):
        i, j = np.argwhere(np.abs(slopes) > 1 + tol)[0]
        witnesses.append({"kind": "slope", "curve": int(i), "x": float(cf.grid[j]), "slope": float(slopes[i, j])})
    return Report("curve-family", not witnesses, witnesses)


def adversarial_rotated_points(cf: CurveFamily) -> np.ndarray:
    """Rotated-frame points (jε, f_i(jε)) for -k < i < k from each anchor onward.

    Points in one grid column share x + y, so their emission order decides
    which goes first after perturbation. Even |i| curves are emitted before
    odd ones: every point then has both neighbours on the same side of it
    in processing order, which keeps the two arms of its L-tile balanced.
    """
    chunks = []
    for parity in (0, 1):
        for i in range(parity, cf.k, 2):
            j0 = cf.anchor_index[i]
            X = cf.grid[j0:]
            Y = cf.values[i, j0:]
            chunks.append(np.column_stack([X, Y]))
            if i:
                chunks.append(np.column_stack([X, -Y]))
    return np.vstack(chunks)


def default_perturb_delta(n: int) -> float:
    # the per-rank shift delta/n has to stay well above one ulp of 1.0
    return max(1e-12, 16.0 * n * np.finfo(float).eps)


def gen_adversarial(params: AdversarialParams) -> tuple[Instance, CurveFamily]:
    """Build the adversarial instance and the curve family it samples."""
    cf = integrate_curves(params)
    R = adversarial_rotated_points(cf)
    x, y = rotate_ccw(R[:, 0], R[:, 1])
    x = np.where(np.abs(x) < 1e-9, 0.0, x)
    y = np.where(np.abs(y) < 1e-9, 0.0, y)
    delta = params.perturb_delta if params.perturb_delta is not None else default_perturb_delta(len(x) + 1)
    # points squeezed onto the top or right edge would be pushed out of the
    # square by the perturbation; their tiles have no area anyway
    keep = (x >= 0) & (y >= 0) & (x < 1 - 2 * delta) & (y < 1 - 2 * delta)
    pts = [Point(0.0, 0.0)] + [Point(float(a), float(b)) for a, b in zip(x[keep], y[keep])]
    inst = Instance(tuple(dict.fromkeys(pts)), f"adversarial-A{params.A:.6g}-k{params.k}-eps{params.eps:.6g}")
    if not in_general_position(inst.points):
        inst = perturb_general_position(inst, delta)
    return inst, cf


def l_tile_ratio(pk, u: float = 0.1) -> tuple[float, int]:
    """Aggregate coverage ratio Σ|rect| / Σ|tile| over interior L-shaped tiles.

    Interior means a non-origin anchor with rotated X <= √2 - u; L-shaped
    means a staircase with exactly two corners.
    """
    covered = total = 0.0
    count = 0
    for t in pk.tiles:
        if t.anchor == (0.0, 0.0) or len(t.gamma) != 2 or t.area <= 0:
            continue
        if rotated_x(t.anchor) > SQRT2 - u:
            continue
        covered += t.max_rect[0].area
        total += t.area
        count += 1
    if count == 0:
        raise ValueError("no interior L-shaped tiles")
    return covered / total, count


def rotated_x(p) -> float:
    return (p[0] + p[1]) / SQRT2


def save_curves(cf: CurveFamily, path) -> None:
    cf.write_csv(Path(path))
