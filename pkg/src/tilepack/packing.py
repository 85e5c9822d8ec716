"""The greedy TilePacking algorithm and structural checks on its output."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from sortedcontainers import SortedList

from .geometry import (
    GeneralPositionError,
    Instance,
    Point,
    Rect,
    Tile,
    general_position_violations,
    lower_staircase_points,
    processing_order,
)


@dataclass
class Report:
    """Outcome of one verification check."""

    check: str
    passed: bool
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"check": self.check, "pass": self.passed, "witnesses": self.witnesses, **self.details}


@dataclass(frozen=True)
class TilePacking:
    """One tile per input point, listed in processing order."""

    tiles: tuple[Tile, ...]
    points: tuple[Point, ...] = ()

    @property
    def chosen_rects(self) -> list[Rect]:
        return [t.max_rect[0] for t in self.tiles]

    @property
    def coverage(self) -> float:
        return coverage(self)

    def __len__(self):
        return len(self.tiles)


def pack(inst: Instance) -> TilePacking:
    """Run TilePacking on ``inst``.

    Points are swept by decreasing x + y while keeping the Pareto-minimal
    frontier of the points seen so far (sorted by x, hence by decreasing y).
    A new point strictly dominates nothing on the frontier from below, so
    its tile is bounded by the frontier points strictly above-right of it,
    capped by the nearest frontier point on either side (or the square).
    """
    inst.validate()
    bad = general_position_violations(inst.points)
    if bad:
        kind, i, j = bad[0]
        raise GeneralPositionError(
            f"points {i} and {j} share {kind}; perturb the instance first "
            "(geometry.perturb_general_position)"
        )
    pts = inst.points
    order = processing_order(pts)
    frontier = SortedList()  # (x, y)
    tiles = []
    for idx in order:
        px, py = pts[idx]
        lo = frontier.bisect_left((px, -1.0))
        # frontier[lo:] has x > px; those with y > py form a prefix of it
        hi = lo
        n_front = len(frontier)
        while hi < n_front and frontier[hi][1] > py:
            hi += 1
        top = frontier[lo - 1][1] if lo > 0 else 1.0
        right = frontier[hi][0] if hi < n_front else 1.0
        above = frontier[lo:hi]
        if above:
            gamma = [Point(above[0][0], top)]
            gamma += [Point(b[0], a[1]) for a, b in zip(above, above[1:])]
            gamma.append(Point(right, above[-1][1]))
        else:
            gamma = [Point(right, top)]
        tiles.append(Tile(Point(px, py), tuple(gamma)))
        del frontier[lo:hi]
        frontier.add((px, py))
    return TilePacking(tuple(tiles), tuple(pts[i] for i in order))


def pack_bruteforce(inst: Instance) -> TilePacking:
    """Quadratic reference implementation built from clipped blockers."""
    inst.validate()
    pts = inst.points
    order = processing_order(pts)
    tiles = []
    for rank, idx in enumerate(order):
        px, py = pts[idx]
        blockers = {(max(pts[j].x, px), max(pts[j].y, py)) for j in order[:rank]}
        minimal = sorted(
            b for b in blockers
            if not any(c != b and c[0] <= b[0] and c[1] <= b[1] for c in blockers)
        )
        corners = []
        ys = [1.0] + [b[1] for b in minimal]
        xs = [b[0] for b in minimal] + [1.0]
        for x, y in zip(xs, ys):
            if x > px and y > py:
                corners.append(Point(x, y))
        tiles.append(Tile(Point(px, py), tuple(corners)))
    return TilePacking(tuple(tiles), tuple(pts[i] for i in order))


def coverage(pk: TilePacking) -> float:
    return float(sum(t.max_rect[0].area for t in pk.tiles))


def verify_partition(pk: TilePacking, samples: int = 100_000, seed: int = 0, tol: float = 1e-9) -> Report:
    """Check Σ|t| = 1 and that random samples land in exactly one tile."""
    total = sum(t.area for t in pk.tiles)
    rng = np.random.default_rng(seed)
    pts = rng.random((samples, 2))
    counts = np.zeros(samples, dtype=int)
    for t in pk.tiles:
        counts += t.contains_many(pts)
    witnesses = []
    if abs(total - 1.0) > tol:
        witnesses.append({"kind": "area-sum", "total": total})
    for k in np.nonzero(counts != 1)[0][:20]:
        owners = [i for i, t in enumerate(pk.tiles) if t.contains(pts[k])]
        witnesses.append({"kind": "membership", "point": pts[k].tolist(), "tiles": owners})
    return Report(
        "partition",
        not witnesses,
        witnesses,
        {"area_sum": total, "bad_samples": int(np.count_nonzero(counts != 1))},
    )


def verify_exclusive_areas(inst: Instance | None, pk: TilePacking) -> Report:
    """No input point lies above a tile's anchor diagonal and strictly under its staircase."""
    pts = (inst.as_array() if inst is not None else np.array(pk.points, dtype=float)).reshape(-1, 2)
    sums = pts[:, 0] + pts[:, 1]
    witnesses = []
    for i, t in enumerate(pk.tiles):
        px, py = t.anchor
        cand = pts[sums > px + py]
        if len(cand) == 0:
            continue
        gx = np.array([g.x for g in t.gamma])
        gy = np.array([g.y for g in t.gamma])
        j = np.searchsorted(gx, cand[:, 0], side="right")
        ok = j < len(gx)
        inside = np.zeros(len(cand), dtype=bool)
        inside[ok] = cand[ok, 1] < gy[j[ok]]
        for q in cand[inside][:5]:
            witnesses.append({"tile_index": i, "point": q.tolist()})
    return Report("exclusive", not witnesses, witnesses)


def verify_lower_staircase(inst: Instance | None, pk: TilePacking) -> Report:
    """Every lower staircase point of every tile is an input point."""
    pts = set(map(tuple, inst.points if inst is not None else pk.points))
    witnesses = []
    for i, t in enumerate(pk.tiles):
        for q in lower_staircase_points(t):
            if tuple(q) not in pts:
                witnesses.append({"tile_index": i, "point": list(q)})
    return Report("lower-staircase", not witnesses, witnesses)


# --------------------------------------------------------------------------
# JSON


def packing_to_json(pk: TilePacking, crowns: list[float] | None = None) -> dict:
    tiles = []
    for i, t in enumerate(pk.tiles):
        rect, _ = t.max_rect
        entry = {
            "anchor": list(t.anchor),
            "gamma": [list(q) for q in t.gamma],
            "rect": {"lower_left": list(rect.lower_left), "width": rect.width, "height": rect.height},
            "area": t.area,
            "density": t.max_rect[0].area / t.area if t.area > 0 else None,
        }
        if crowns is not None:
            entry["crown_area"] = crowns[i]
        tiles.append(entry)
    return {
        "n": len(pk.tiles),
        "coverage": coverage(pk),
        "points": [list(p) for p in pk.points],
        "tiles": tiles,
    }


def packing_from_json(data: dict) -> TilePacking:
    tiles = tuple(Tile.from_json(t) for t in data["tiles"])
    pts = tuple(Point(*p) for p in data.get("points", [t.anchor for t in tiles]))
    return TilePacking(tiles, pts)


def save_packing(pk: TilePacking, path, crowns: list[float] | None = None) -> None:
    Path(path).write_text(json.dumps(packing_to_json(pk, crowns)) + "\n", encoding="utf-8")


def load_packing(path) -> TilePacking:
    return packing_from_json(json.loads(Path(path).read_text(encoding="utf-8")))
