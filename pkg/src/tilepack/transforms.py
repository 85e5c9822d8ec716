"""Tile transformations that keep the density and never raise the charging ratio.

A transformation maps t to t̃ with t̃ ⪯ t, meaning ρ(t̃) = ρ(t) and
c(t̃)/|t̃| <= c(t)/|t|. ``check_precedes`` measures both quantities.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Union

from .charging import crown_area
from .geometry import (
    HYPERBOLA_TOL,
    GeneralizedTile,
    InvalidTileError,
    Point,
    PointSection,
    SlideSection,
    Tile,
    generalized_area,
)

AnyTile = Union[Tile, GeneralizedTile]

PRECEDES_TOL = 1e-9


class IncompleteTransformWarning(RuntimeWarning):
    """An iterative transform stopped at its iteration cap."""


@dataclass
class TransformResult:
    before: AnyTile
    after: AnyTile
    rho_delta: float
    ratio_delta: float
    precedes_ok: bool

    def to_json(self) -> dict:
        return {
            "before": self.before.to_json(),
            "after": self.after.to_json(),
            "rho_delta": self.rho_delta,
            "ratio_delta": self.ratio_delta,
            "precedes_ok": self.precedes_ok,
        }


def _area(t: AnyTile) -> float:
    return generalized_area(t) if isinstance(t, GeneralizedTile) else t.area


def _rho(t: AnyTile) -> float:
    return t.density


def check_precedes(before: AnyTile, after: AnyTile, tol: float = PRECEDES_TOL) -> TransformResult:
    rho_delta = _rho(after) - _rho(before)
    ratio_delta = crown_area(after) / _area(after) - crown_area(before) / _area(before)
    ok = abs(rho_delta) <= tol and ratio_delta <= tol
    return TransformResult(before, after, rho_delta, ratio_delta, ok)


def normalize(t: Tile) -> Tile:
    """Move the anchor to the origin and scale uniformly so the maximal rectangle has area 1."""
    rect, _ = t.max_rect
    if rect.area <= 0:
        raise InvalidTileError("cannot normalize a tile whose maximal rectangle is empty")
    px, py = t.anchor
    s = 1.0 / math.sqrt(rect.area)
    return Tile(Point(0.0, 0.0), tuple(Point((q.x - px) * s, (q.y - py) * s) for q in t.gamma))


def prune_degenerate(t: Tile) -> Tile:
    """Drop staircase points that are weakly dominated by another one.

    Points level with the anchor (zero-width or zero-height columns) are
    dropped too. The covered region is unchanged; each removal deletes a
    tower, so the crown can only shrink.
    """
    px, py = t.anchor
    g = list(t.gamma)
    keep = []
    for i, q in enumerate(g):
        if q.x == px or q.y == py:
            continue
        if any(j != i and q.x <= r.x and q.y <= r.y and (q != r or j > i) for j, r in enumerate(g)):
            continue
        keep.append(q)
    if not keep:
        raise InvalidTileError("tile has no area left after pruning")
    if len(keep) == len(g):
        return t
    return Tile(t.anchor, tuple(keep))


def _is_normalized(t: Tile, tol: float) -> bool:
    return t.anchor == (0.0, 0.0) and abs(t.max_rect[0].area - 1.0) <= tol


def off_hyperbola(t: Tile, tol: float = HYPERBOLA_TOL) -> list[int]:
    """Indices of staircase points strictly inside the hyperbola xy = 1."""
    return [i for i, q in enumerate(t.gamma) if q.x * q.y < 1.0 - tol]


def _slide_interval(g: list[Point], i: int, j: int) -> tuple[float, float, float]:
    """Feasible range [lo, hi] of ε and α_j for α_i = +1.

    q_i moves up by ε, q_j moves right by α_j ε with α_j < 0. The range ends
    where a moving point hits xy = 1 or runs into a neighbour's coordinate.
    """
    k = len(g)
    xi, yi = g[i]
    xj, yj = g[j]
    wi = xi - (g[i - 1].x if i > 0 else 0.0)
    hj = yj - (g[j + 1].y if j < k - 1 else 0.0)
    aj = -wi / hj
    # upward limit for q_i, leftward limit for q_j (ε > 0)
    up = 1.0 / xi - yi
    if i > 0:
        up = min(up, g[i - 1].y - yi)
    left = xj - (g[j - 1].x if j > 0 else 0.0)
    hi = min(up, left / -aj)
    # downward limit for q_i, rightward limit for q_j (ε < 0)
    down = yi - (g[i + 1].y if i < k - 1 else 0.0)
    right = 1.0 / yj - xj
    if j < k - 1:
        right = min(right, g[j + 1].x - xj)
    lo = -min(down, right / -aj)
    return lo, hi, aj


def _moved(g: list[Point], i: int, j: int, eps: float, aj: float) -> list[Point]:
    out = list(g)
    xi, yi = g[i]
    xj, yj = g[j]
    ny = yi + eps
    nx = xj + aj * eps
    # land exactly on the events the step was solved for
    if abs(xi * ny - 1.0) <= 1e-12:
        ny = 1.0 / xi
    if abs(nx * yj - 1.0) <= 1e-12:
        nx = 1.0 / yj
    for nb in (i - 1, i + 1):
        if 0 <= nb < len(g) and abs(ny - g[nb].y) <= 1e-14:
            ny = g[nb].y
    for nb in (j - 1, j + 1):
        if 0 <= nb < len(g) and abs(nx - g[nb].x) <= 1e-14:
            nx = g[nb].x
    out[i] = Point(xi, ny)
    out[j] = Point(nx, yj)
    return out


def two_point_slide(t: Tile, max_iter: int = 10_000, tol: float = HYPERBOLA_TOL) -> Tile:
    """Slide pairs of off-hyperbola points until at most one remains off it.

    Each round moves the two leftmost off-hyperbola points q_i (vertically)
    and q_j (horizontally) so that the tile area is unchanged. The crown is a
    concave quadratic in the step, so its minimum over the feasible interval
    sits at one of the two event endpoints; the round jumps straight there.
    """
    if not _is_normalized(t, tol):
        raise ValueError("two_point_slide needs a normalized tile (see normalize)")
    cur = prune_degenerate(t)
    for _ in range(max_iter):
        off = off_hyperbola(cur, tol)
        if len(off) <= 1:
            return cur
        i, j = off[0], off[1]
        g = list(cur.gamma)
        lo, hi, aj = _slide_interval(g, i, j)
        cands = []
        for eps in (lo, hi):
            if eps == 0.0:
                continue
            cand = Tile(cur.anchor, tuple(_moved(g, i, j, eps, aj)))
            cands.append((crown_area(cand), eps, cand))
        if not cands:
            # both directions blocked: a coordinate is already shared
            raise InvalidTileError("staircase is degenerate at the selected points")
        _, _, best = min(cands, key=lambda c: (c[0], abs(c[1])))
        cur = prune_degenerate(best)
    warnings.warn(
        f"two_point_slide stopped after {max_iter} rounds with "
        f"{len(off_hyperbola(cur, tol))} points off the hyperbola",
        IncompleteTransformWarning,
        stacklevel=2,
    )
    return cur


def shorter_side_delta(x1: float, x2: float, x3: float) -> float:
    """Crown change of the swap below, in closed form."""
    return (x2 - x1) ** 2 * (x3**2 - x2**2) * (1 - x1**2 * x3**2) / (4 * x1**2 * x2**2 * x3**2)


def shorter_side_swap(gt: GeneralizedTile, step_index: int) -> GeneralizedTile:
    """Swap a step (q1, q2) followed by a slide (q2, q3) into a slide then a step.

    ``step_index`` points at the hyperbola point q1; the next section must be
    the slide starting at x2. The result is a slide from x1 to x4 = x1 x3 / x2
    followed by the single point q3, which keeps the area.
    """
    secs = list(gt.sections)
    if not 0 <= step_index < len(secs) - 1:
        raise ValueError(f"step_index {step_index} out of range")
    first, second = secs[step_index], secs[step_index + 1]
    if not isinstance(first, PointSection) or not isinstance(second, SlideSection):
        raise ValueError("expected a hyperbola point followed by a slide")
    x1 = first.q.x
    if abs(first.q.x * first.q.y - 1.0) > gt.tol:
        raise ValueError("the step must start on the hyperbola")
    x2, x3 = second.a, second.b
    if x1 < 1.0 / x3 - gt.tol:
        raise ValueError(f"precondition x1 >= 1/x3 fails ({x1} < {1.0 / x3})")
    if x2 == x1:
        # empty step: q1 already starts the slide
        secs[step_index : step_index + 2] = [second]
        return GeneralizedTile(tuple(secs), gt.tol)
    x4 = min(x1 * x3 / x2, x3)
    secs[step_index : step_index + 2] = [SlideSection(x1, x4), PointSection(Point(x3, 1.0 / x3))]
    return GeneralizedTile(tuple(secs), gt.tol)


def find_step_slide(gt: GeneralizedTile) -> int | None:
    """First index where a hyperbola point is directly followed by a slide."""
    for i, (a, b) in enumerate(zip(gt.sections, gt.sections[1:])):
        if isinstance(a, PointSection) and isinstance(b, SlideSection):
            if abs(a.q.x * a.q.y - 1.0) <= gt.tol:
                return i
    return None


def tile_from_json(data: dict) -> AnyTile:
    if "sections" in data:
        return GeneralizedTile.from_json(data)
    return Tile.from_json(data)
