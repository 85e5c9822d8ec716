"""Towers, crowns and numeric checks of the crown charging scheme.

A tower T_p(q1, q2) is the 45°-rotated rectangle between the diagonal
x + y = x(p) + y(p), the anti-diagonals through q1 and q2, and the diagonal
through the peak (x(q1), y(q2)). In coordinates s = x + y, d = x - y it is
the axis-aligned box [s(p), s(peak)] × [d(q1), d(q2)] of area Δs·Δd/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from .geometry import GeneralizedTile, Point, PointSection, SlideSection, Tile
from .packing import Report, TilePacking

# Bounded by x + y >= 0, y - x <= 1, x - y <= 1, y <= 1, x <= 1.
PENTAGON = (Point(-0.5, 0.5), Point(0.0, 1.0), Point(1.0, 1.0), Point(1.0, 0.0), Point(0.5, -0.5))


@dataclass(frozen=True)
class Tower:
    base: Point
    left: Point
    right: Point

    def __post_init__(self):
        p, q1, q2 = self.base, self.left, self.right
        if not (q1[0] >= p[0] and q1[1] >= p[1] and q2[0] >= p[0] and q2[1] >= p[1]):
            raise ValueError("tower points must lie above-right of the base point")
        if q1[0] > q2[0] or q1[1] < q2[1]:
            raise ValueError("tower needs x(q1) <= x(q2) and y(q1) >= y(q2)")

    @property
    def peak(self) -> Point:
        return Point(self.left[0], self.right[1])

    @property
    def box(self) -> tuple[float, float, float, float]:
        """(s_lo, s_hi, d_lo, d_hi) in rotated coordinates."""
        p, q1, q2 = self.base, self.left, self.right
        return (p[0] + p[1], q1[0] + q2[1], q1[0] - q1[1], q2[0] - q2[1])

    @property
    def area(self) -> float:
        return tower_area(self)

    def vertices(self) -> list[Point]:
        """Counter-clockwise quad: bottom, right, peak, left."""
        s0, s1, d0, d1 = self.box
        return [
            Point((s0 + d0) / 2, (s0 - d0) / 2),
            Point((s0 + d1) / 2, (s0 - d1) / 2),
            Point((s1 + d1) / 2, (s1 - d1) / 2),
            Point((s1 + d0) / 2, (s1 - d0) / 2),
        ]

    @property
    def is_degenerate(self) -> bool:
        s0, s1, d0, d1 = self.box
        return s1 <= s0 or d1 <= d0


def tower_area(T: Tower) -> float:
    """(x1 + y2)(w2 + h1)/2 with coordinates relative to the base."""
    px, py = T.base
    x1 = T.left[0] - px
    y1 = T.left[1] - py
    x2 = T.right[0] - px
    y2 = T.right[1] - py
    return (x1 + y2) * ((x2 - x1) + (y1 - y2)) / 2.0


def tower_derivatives(T: Tower, which_point: str, direction: str, alpha: float) -> tuple[float, float]:
    """First and second derivative of the tower area under a linear move.

    ``which_point`` is ``"left"`` (q1) or ``"right"`` (q2), ``direction`` is
    ``"horizontal"`` or ``"vertical"``; the point moves by alpha·ε.
    """
    px, py = T.base
    x1, y1 = T.left[0] - px, T.left[1] - py
    x2, y2 = T.right[0] - px, T.right[1] - py
    w2, h1 = x2 - x1, y1 - y2
    case = {
        ("left", "vertical"): "a",
        ("right", "horizontal"): "a",
        ("left", "horizontal"): "b",
        ("right", "vertical"): "b",
    }.get((which_point, direction))
    if case is None:
        raise ValueError(f"unsupported move {which_point!r}/{direction!r}")
    if case == "a":
        return alpha * (x1 + y2) / 2.0, 0.0
    return alpha * (w2 + h1 - x1 - y2) / 2.0, -alpha * alpha


def _H(z: float) -> float:
    return math.log(z) + (z * z - 1.0 / (z * z)) / 4.0


def slide_contribution(a: float, b: float) -> float:
    """Crown contribution of the unit-hyperbola slide over [a, b]."""
    if a <= 0 or b < a:
        raise ValueError(f"slide needs 0 < a <= b, got a={a}, b={b}")
    if a == b:
        return 0.0
    return _H(b) - _H(a)


@dataclass(frozen=True)
class Crown:
    towers: tuple[Tower, ...]
    slide_contributions: tuple[tuple[float, float, float], ...] = ()

    @property
    def total_area(self) -> float:
        return float(sum(T.area for T in self.towers) + sum(h for _, _, h in self.slide_contributions))


def crown(t: Union[Tile, GeneralizedTile]) -> Crown:
    """Towers over consecutive staircase points, plus H for each slide."""
    if isinstance(t, Tile):
        p = t.anchor
        return Crown(tuple(Tower(p, a, b) for a, b in zip(t.gamma, t.gamma[1:])))
    origin = Point(0.0, 0.0)
    towers = []
    slides = []
    prev: Point | None = None
    for s in t.sections:
        if isinstance(s, SlideSection):
            first, last = Point(s.a, 1.0 / s.a), Point(s.b, 1.0 / s.b)
            if s.b > s.a:
                slides.append((s.a, s.b, slide_contribution(s.a, s.b)))
        else:
            first = last = s.q
        if prev is not None:
            towers.append(Tower(origin, prev, first))
        prev = last
    return Crown(tuple(towers), tuple(slides))


def crown_area(t: Union[Tile, GeneralizedTile]) -> float:
    return crown(t).total_area


def charging_ratio(t: Union[Tile, GeneralizedTile]) -> float:
    return crown_area(t) / t.area


# --------------------------------------------------------------------------
# Polygon helpers


def polygon_area(poly: Sequence[Sequence[float]]) -> float:
    """Shoelace area (absolute)."""
    n = len(poly)
    if n < 3:
        return 0.0
    acc = 0.0
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        acc += x0 * y1 - x1 * y0
    return abs(acc) / 2.0


def clip_convex(subject: Sequence[Sequence[float]], clip: Sequence[Sequence[float]]) -> list[tuple[float, float]]:
    """Sutherland–Hodgman clipping of ``subject`` against convex CCW ``clip``."""
    out = [tuple(p) for p in subject]
    m = len(clip)
    for k in range(m):
        if not out:
            break
        cx0, cy0 = clip[k]
        cx1, cy1 = clip[(k + 1) % m]
        ex, ey = cx1 - cx0, cy1 - cy0

        def side(p):
            return ex * (p[1] - cy0) - ey * (p[0] - cx0)

        inp = out
        out = []
        prev = inp[-1]
        sp = side(prev)
        for cur in inp:
            sc = side(cur)
            if sc >= 0:
                if sp < 0:
                    out.append(_cross_point(prev, cur, sp, sc))
                out.append(cur)
            elif sp >= 0:
                out.append(_cross_point(prev, cur, sp, sc))
            prev, sp = cur, sc
    return out


def _cross_point(a, b, sa, sb):
    t = sa / (sa - sb)
    return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


def tower_overlap_area(A: Tower, B: Tower) -> float:
    return polygon_area(clip_convex(A.vertices(), B.vertices()))


# --------------------------------------------------------------------------
# Packing-level checks


@dataclass
class PackingCrowns:
    """Crowns of every tile in a packing, with flat tower arrays for batch checks."""

    packing: TilePacking
    crowns: list[Crown]
    tower_tile: np.ndarray = field(repr=False)
    boxes: np.ndarray = field(repr=False)

    @property
    def crown_areas(self) -> list[float]:
        return [c.total_area for c in self.crowns]

    @property
    def towers(self) -> list[Tower]:
        return [T for c in self.crowns for T in c.towers]


def compute_crowns(pk: TilePacking) -> PackingCrowns:
    crowns = [crown(t) for t in pk.tiles]
    owner = [i for i, c in enumerate(crowns) for _ in c.towers]
    boxes = [T.box for c in crowns for T in c.towers]
    return PackingCrowns(
        pk,
        crowns,
        np.array(owner, dtype=int),
        np.array(boxes, dtype=float).reshape(-1, 4),
    )


def crowns_disjoint(pc: PackingCrowns | TilePacking, tol: float = 1e-12) -> Report:
    """Pairwise overlap of towers from different tiles.

    Candidate pairs come from the rotated bounding boxes (exact for towers);
    every candidate is confirmed by convex clipping, which also yields the
    witness polygon.
    """
    if isinstance(pc, TilePacking):
        pc = compute_crowns(pc)
    boxes, owner = pc.boxes, pc.tower_tile
    keep = (boxes[:, 1] > boxes[:, 0]) & (boxes[:, 3] > boxes[:, 2])
    idx = np.nonzero(keep)[0]
    towers = pc.towers
    witnesses = []
    worst = 0.0
    if len(idx) > 1:
        b = boxes[idx]
        order = np.argsort(b[:, 0], kind="stable")
        b, idx = b[order], idx[order]
        # sweep along s: only towers whose s-ranges overlap can intersect
        ends = np.searchsorted(b[:, 0], b[:, 1], side="left")
        for a in range(len(idx)):
            stop = ends[a]
            if stop <= a + 1:
                continue
            rest = slice(a + 1, stop)
            ds = np.minimum(b[a, 1], b[rest, 1]) - np.maximum(b[a, 0], b[rest, 0])
            dd = np.minimum(b[a, 3], b[rest, 3]) - np.maximum(b[a, 2], b[rest, 2])
            ov = np.clip(ds, 0, None) * np.clip(dd, 0, None) / 2.0
            cand = np.nonzero((ov > tol) & (owner[idx[rest]] != owner[idx[a]]))[0]
            for c in cand:
                i, j = idx[a], idx[a + 1 + c]
                poly = clip_convex(towers[i].vertices(), towers[j].vertices())
                area = polygon_area(poly)
                worst = max(worst, area)
                if area > tol:
                    witnesses.append(
                        {
                            "tiles": [int(owner[i]), int(owner[j])],
                            "overlap_area": area,
                            "polygon": [list(p) for p in poly],
                        }
                    )
    return Report("crowns", not witnesses, witnesses[:20], {"max_overlap": worst, "towers": int(len(idx))})


def pentagon_area() -> float:
    return polygon_area(PENTAGON)


def crowns_in_pentagon(pc: PackingCrowns | TilePacking, tol: float = 1e-9) -> Report:
    """Every tower vertex inside the pentagon; total charge c* <= 3/2."""
    if isinstance(pc, TilePacking):
        pc = compute_crowns(pc)
    witnesses = []
    b = pc.boxes
    if len(b):
        # vertices in rotated coordinates: s in {s0, s1}, d in {d0, d1}
        for si in (0, 1):
            for di in (2, 3):
                s, d = b[:, si], b[:, di]
                x, y = (s + d) / 2, (s - d) / 2
                viol = np.maximum.reduce([-(x + y), (y - x) - 1, (x - y) - 1, y - 1, x - 1])
                for k in np.nonzero(viol > tol)[0][:10]:
                    witnesses.append({"tile_index": int(pc.tower_tile[k]), "vertex": [float(x[k]), float(y[k])]})
    c_star = total_charge(pc)
    if c_star > 1.5 + tol:
        witnesses.append({"kind": "total-charge", "c_star": c_star})
    return Report("pentagon", not witnesses, witnesses, {"c_star": c_star})


def total_charge(pc: PackingCrowns | TilePacking) -> float:
    if isinstance(pc, TilePacking):
        pc = compute_crowns(pc)
    return float(sum(pc.crown_areas))


def charging_ratio_report(
    pc: PackingCrowns | TilePacking,
    bound: Callable[[float], float],
    tol: float = 1e-9,
) -> Report:
    """Per-tile (rho, c_t/|t|, bound(rho), slack); passes iff every slack >= -tol."""
    if isinstance(pc, TilePacking):
        pc = compute_crowns(pc)
    rows = []
    witnesses = []
    for i, (t, c) in enumerate(zip(pc.packing.tiles, pc.crowns)):
        rho = t.density
        ratio = c.total_area / t.area
        bnd = bound(rho)
        slack = ratio - bnd
        rows.append({"tile_index": i, "rho": rho, "ratio": ratio, "bound": bnd, "slack": slack})
        if slack < -tol:
            witnesses.append(rows[-1])
    min_slack = min((r["slack"] for r in rows), default=0.0)
    return Report("ratios", not witnesses, witnesses, {"tiles": rows, "min_slack": min_slack})


def tile_ratio_row(t: Union[Tile, GeneralizedTile], bound: Callable[[float], float]) -> dict:
    rho = t.density
    ratio = charging_ratio(t)
    return {"rho": rho, "ratio": ratio, "bound": bound(rho), "slack": ratio - bound(rho)}


def hyperbola_tower_identity(x_prev: float, x_cur: float) -> tuple[float, float]:
    """Tower over consecutive unit-hyperbola points and the incremental rectangle R.

    Returns ``(tower_area, R)`` where R = (x_cur - x_prev)/x_cur; the tower
    equals R (1 + x_prev x_cur)² / (2 x_prev x_cur).
    """
    T = Tower(Point(0.0, 0.0), Point(x_prev, 1.0 / x_prev), Point(x_cur, 1.0 / x_cur))
    return T.area, (x_cur - x_prev) / x_cur
