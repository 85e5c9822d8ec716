"""Planar primitives, staircase tiles and generalized tiles.

Coordinates are plain floats. A tile is anchored at ``anchor`` and bounded
above-right by its upper staircase points ``gamma`` (x increasing, y
decreasing). Generalized tiles are always anchored at the origin and
normalized, and may contain slides: arcs of the unit hyperbola ``y = 1/x``.
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import NamedTuple, Sequence, Union

import numpy as np

HYPERBOLA_TOL = 1e-9


class InvalidTileError(ValueError):
    """Raised for malformed tiles (bad ordering, empty gamma, overlapping sections)."""


class DegenerateTileError(ValueError):
    """Raised when a measure is undefined because the tile has zero area."""


class GeneralPositionError(ValueError):
    """Raised when an instance violates the general-position requirement."""


class Point(NamedTuple):
    x: float
    y: float


def dominates(p: Point, q: Point) -> bool:
    """True iff ``p`` is weakly below-left of ``q`` (p ⪯ q)."""
    return p[0] <= q[0] and p[1] <= q[1]


def strictly_dominates(p: Point, q: Point) -> bool:
    """True iff ``p`` is strictly below-left of ``q`` (p ≺ q)."""
    return p[0] < q[0] and p[1] < q[1]


@dataclass(frozen=True)
class Rect:
    lower_left: Point
    width: float
    height: float

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def upper_right(self) -> Point:
        return Point(self.lower_left.x + self.width, self.lower_left.y + self.height)


# --------------------------------------------------------------------------
# Instances


@dataclass(frozen=True)
class Instance:
    points: tuple[Point, ...]
    label: str = ""

    def __post_init__(self):
        pts = tuple(Point(float(x), float(y)) for x, y in self.points)
        object.__setattr__(self, "points", pts)
        for p in pts:
            if not (math.isfinite(p.x) and math.isfinite(p.y)):
                raise ValueError(f"non-finite coordinate in {p}")

    @property
    def contains_origin(self) -> bool:
        return Point(0.0, 0.0) in self.points

    def __len__(self) -> int:
        return len(self.points)

    def as_array(self) -> np.ndarray:
        return np.array(self.points, dtype=float).reshape(-1, 2)

    def validate(self) -> None:
        """Check the origin is present and all points lie in [0, 1)²."""
        if not self.contains_origin:
            raise ValueError("instance must contain the origin (0, 0)")
        for p in self.points:
            if not (0.0 <= p.x < 1.0 and 0.0 <= p.y < 1.0):
                raise ValueError(f"point {tuple(p)} lies outside [0, 1)^2")

    def to_json(self) -> dict:
        return {"label": self.label, "points": [[p.x, p.y] for p in self.points]}

    @classmethod
    def from_json(cls, data: dict) -> "Instance":
        if "points" not in data:
            raise ValueError("instance JSON needs a 'points' list")
        return cls(tuple(Point(*map(float, xy)) for xy in data["points"]), str(data.get("label", "")))

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json()) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> "Instance":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def general_position_violations(points: Sequence[Point]) -> list[tuple[str, int, int]]:
    """Pairs of point indices sharing an x, a y, or a value of x + y."""
    out = []
    arr = np.asarray(points, dtype=float).reshape(-1, 2)
    keys = {"x": arr[:, 0], "y": arr[:, 1], "x+y": arr[:, 0] + arr[:, 1]}
    for name, vals in keys.items():
        order = np.argsort(vals, kind="stable")
        sv = vals[order]
        for k in np.nonzero(sv[1:] == sv[:-1])[0]:
            out.append((name, int(order[k]), int(order[k + 1])))
    return out


def in_general_position(points: Sequence[Point]) -> bool:
    return not general_position_violations(points)


def processing_order(points: Sequence[Point]) -> np.ndarray:
    """Indices sorted by x + y descending (ties by input index)."""
    arr = np.asarray(points, dtype=float).reshape(-1, 2)
    return np.argsort(-(arr[:, 0] + arr[:, 1]), kind="stable")


def perturb_general_position(inst: Instance, delta: float) -> Instance:
    """Shift every non-origin point toward the top right by at most ``delta``.

    The point processed at rank r (0-based, top-right first) among n points
    moves by ``(n - r) * delta / n`` in each coordinate, so earlier points move
    further and ties in x + y are broken in index order without reordering
    anything else.
    """
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if delta == 0:
        return inst
    pts = list(inst.points)
    n = len(pts)
    order = processing_order(pts)
    new = list(pts)
    for rank, idx in enumerate(order):
        p = pts[idx]
        if p == (0.0, 0.0):
            continue
        s = (n - rank) * delta / n
        new[idx] = Point(p.x + s, p.y + s)
    if any(q.x >= 1.0 or q.y >= 1.0 for q in new):
        raise GeneralPositionError(f"delta={delta} pushes points out of the unit square; use a smaller delta")
    sums_after = np.array([new[i].x + new[i].y for i in order])
    if np.any(np.diff(sums_after) >= 0):
        raise GeneralPositionError(
            f"delta={delta} changes the processing order or leaves ties in x+y; use a smaller delta"
        )
    if not in_general_position(new):
        raise GeneralPositionError(f"perturbation by delta={delta} did not reach general position")
    return Instance(tuple(new), inst.label)


def ensure_general_position(inst: Instance, delta: float = 1e-12) -> Instance:
    """Return ``inst`` unchanged if already in general position, else perturb it."""
    if in_general_position(inst.points):
        return inst
    return perturb_general_position(inst, delta)


# --------------------------------------------------------------------------
# Tiles


@dataclass(frozen=True)
class Tile:
    """Staircase tile. Weakly ordered (degenerate) gammas are accepted."""

    anchor: Point
    gamma: tuple[Point, ...]

    def __post_init__(self):
        object.__setattr__(self, "anchor", Point(float(self.anchor[0]), float(self.anchor[1])))
        gamma = tuple(Point(float(q[0]), float(q[1])) for q in self.gamma)
        object.__setattr__(self, "gamma", gamma)
        if not gamma:
            raise InvalidTileError("tile needs at least one upper staircase point")
        px, py = self.anchor
        for q in gamma:
            if q.x < px or q.y < py:
                raise InvalidTileError(f"staircase point {tuple(q)} is not above-right of anchor {tuple(self.anchor)}")
        for a, b in zip(gamma, gamma[1:]):
            if b.x < a.x or b.y > a.y:
                raise InvalidTileError(f"staircase points {tuple(a)}, {tuple(b)} are out of order")

    @property
    def is_degenerate(self) -> bool:
        px, py = self.anchor
        if any(q.x == px or q.y == py for q in self.gamma):
            return True
        return any(b.x == a.x or b.y == a.y for a, b in zip(self.gamma, self.gamma[1:]))

    @cached_property
    def area(self) -> float:
        return tile_area(self)

    @cached_property
    def max_rect(self) -> tuple[Rect, Point]:
        return max_rectangle(self)

    @property
    def density(self) -> float:
        return density(self)

    def contains(self, q) -> bool:
        """Point membership: q ⪰ anchor and q ≺ q' for some q' in gamma."""
        if q[0] < self.anchor.x or q[1] < self.anchor.y:
            return False
        xs = [g.x for g in self.gamma]
        i = bisect.bisect_right(xs, q[0])
        return i < len(xs) and q[1] < self.gamma[i].y

    def contains_many(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        gx = np.array([g.x for g in self.gamma])
        gy = np.array([g.y for g in self.gamma])
        i = np.searchsorted(gx, pts[:, 0], side="right")
        ok = (i < len(gx)) & (pts[:, 0] >= self.anchor.x) & (pts[:, 1] >= self.anchor.y)
        out = np.zeros(len(pts), dtype=bool)
        out[ok] = pts[ok, 1] < gy[i[ok]]
        return out

    def polygon(self) -> list[Point]:
        """Boundary vertices counter-clockwise, starting at the anchor."""
        px, py = self.anchor
        verts = [self.anchor]
        last = self.gamma[-1]
        verts.append(Point(last.x, py))
        for a, b in zip(reversed(self.gamma[1:]), reversed(self.gamma[:-1])):
            verts.append(a)
            verts.append(Point(b.x, a.y))
        first = self.gamma[0]
        verts.append(first)
        verts.append(Point(px, first.y))
        return verts

    def to_json(self) -> dict:
        return {"anchor": list(self.anchor), "gamma": [list(q) for q in self.gamma]}

    @classmethod
    def from_json(cls, data: dict) -> "Tile":
        return cls(Point(*data["anchor"]), tuple(Point(*q) for q in data["gamma"]))


def tile_area(t: Tile) -> float:
    """Column sum Σ (x_i - x_{i-1}) (y_i - y(p)) with x_0 = x(p)."""
    px, py = t.anchor
    total = 0.0
    prev = px
    for q in t.gamma:
        total += (q.x - prev) * (q.y - py)
        prev = q.x
    return total


def max_rectangle(t: Tile) -> tuple[Rect, Point]:
    """Largest anchored rectangle; ties go to the smallest x."""
    px, py = t.anchor
    best = None
    best_area = -1.0
    for q in t.gamma:
        a = (q.x - px) * (q.y - py)
        if a > best_area:
            best, best_area = q, a
    return Rect(t.anchor, best.x - px, best.y - py), best


def density(t: Tile) -> float:
    area = t.area
    if area <= 0.0:
        raise DegenerateTileError("density of a zero-area tile is undefined")
    return t.max_rect[0].area / area


def on_hyperbola(t: Tile, q, tol: float = HYPERBOLA_TOL) -> bool:
    """Whether ``q`` spans a maximal rectangle, i.e. lies on the anchor-translated hyperbola."""
    px, py = t.anchor
    return abs((q[0] - px) * (q[1] - py) - t.max_rect[0].area) <= tol


def lower_staircase_points(t: Tile) -> list[Point]:
    """Reflex corners (x(q_{i-1}), y(q_i)) between consecutive staircase points."""
    return [Point(a.x, b.y) for a, b in zip(t.gamma, t.gamma[1:])]


# --------------------------------------------------------------------------
# Generalized tiles


class PointSection(NamedTuple):
    q: Point

    @property
    def left(self) -> float:
        return self.q[0]

    @property
    def right(self) -> float:
        return self.q[0]


class SlideSection(NamedTuple):
    """Arc of y = 1/x over [a, b]; a == b is allowed and acts as a single point."""

    a: float
    b: float

    @property
    def left(self) -> float:
        return self.a

    @property
    def right(self) -> float:
        return self.b


Section = Union[PointSection, SlideSection]


@dataclass(frozen=True)
class GeneralizedTile:
    """Normalized tile anchored at the origin whose boundary may contain slides."""

    sections: tuple[Section, ...]
    tol: float = field(default=HYPERBOLA_TOL, compare=False)

    def __post_init__(self):
        secs = []
        for s in self.sections:
            if isinstance(s, SlideSection):
                secs.append(SlideSection(float(s.a), float(s.b)))
            elif isinstance(s, PointSection):
                secs.append(PointSection(Point(float(s.q[0]), float(s.q[1]))))
            else:
                raise InvalidTileError(f"unknown section {s!r}")
        secs = tuple(secs)
        object.__setattr__(self, "sections", secs)
        if not secs:
            raise InvalidTileError("generalized tile needs at least one section")
        prev_right, prev_h = 0.0, math.inf
        best = 0.0
        for s in secs:
            if isinstance(s, SlideSection):
                if not 0.0 < s.a <= s.b:
                    raise InvalidTileError(f"slide needs 0 < a <= b, got {s}")
                top, bottom = 1.0 / s.a, 1.0 / s.b
                best = max(best, 1.0)
            else:
                if s.q.x <= 0.0 or s.q.y <= 0.0:
                    raise InvalidTileError(f"point {s.q} must lie strictly above-right of the origin")
                top = bottom = s.q.y
                best = max(best, s.q.x * s.q.y)
            if s.left < prev_right:
                raise InvalidTileError(f"section {s} overlaps its predecessor")
            if top > prev_h + self.tol:
                raise InvalidTileError(f"section {s} is higher than its predecessor")
            prev_right, prev_h = s.right, bottom
        if abs(best - 1.0) > self.tol:
            raise InvalidTileError(f"generalized tile is not normalized (max rectangle {best})")

    def boundary_points(self) -> list[Point]:
        """Section endpoints in order; slides contribute both ends."""
        pts = []
        for s in self.sections:
            if isinstance(s, SlideSection):
                pts.append(Point(s.a, 1.0 / s.a))
                if s.b != s.a:
                    pts.append(Point(s.b, 1.0 / s.b))
            else:
                pts.append(s.q)
        return pts

    @property
    def area(self) -> float:
        return generalized_area(self)

    @property
    def density(self) -> float:
        return 1.0 / self.area

    def section_kinds(self) -> list[tuple[str, tuple[int, ...]]]:
        """Classify the boundary into steps, slides, double steps and corners.

        Returns ``(kind, section_indices)`` pairs. Raises if an off-hyperbola
        point is adjacent to another off-hyperbola point, where no kind applies.
        """
        secs = self.sections
        on_h = []
        for s in secs:
            if isinstance(s, SlideSection):
                on_h.append(True)
            else:
                on_h.append(abs(s.q.x * s.q.y - 1.0) <= self.tol)
        k = len(secs)
        kinds = []
        for i, s in enumerate(secs):
            if isinstance(s, SlideSection) and s.a < s.b:
                kinds.append(("slide", (i,)))
        for i in range(k - 1):
            if on_h[i] and on_h[i + 1]:
                kinds.append(("step", (i, i + 1)))
        for i in range(k):
            if on_h[i]:
                continue
            left_ok = i > 0 and on_h[i - 1]
            right_ok = i < k - 1 and on_h[i + 1]
            if left_ok and right_ok:
                kinds.append(("double step", (i - 1, i, i + 1)))
            elif i == 0 and right_ok:
                kinds.append(("corner", (0, 1)))
            elif i == k - 1 and left_ok:
                kinds.append(("corner", (k - 2, k - 1)))
            else:
                raise InvalidTileError(f"section {i} is off the hyperbola without hyperbola neighbours")
        kinds.sort(key=lambda kv: kv[1])
        return kinds

    def to_json(self) -> dict:
        out = []
        for s in self.sections:
            if isinstance(s, SlideSection):
                out.append({"slide": [s.a, s.b]})
            else:
                out.append({"point": list(s.q)})
        return {"sections": out}

    @classmethod
    def from_json(cls, data: dict) -> "GeneralizedTile":
        secs = []
        for s in data["sections"]:
            if "slide" in s:
                secs.append(SlideSection(*s["slide"]))
            else:
                secs.append(PointSection(Point(*s["point"])))
        return cls(tuple(secs))

    @classmethod
    def from_tile(cls, t: Tile) -> "GeneralizedTile":
        """Wrap a normalized point tile."""
        if t.anchor != (0.0, 0.0):
            raise InvalidTileError("only origin-anchored tiles convert to generalized tiles")
        return cls(tuple(PointSection(q) for q in t.gamma))


def generalized_area(gt: GeneralizedTile) -> float:
    total = 0.0
    prev = 0.0
    for s in gt.sections:
        if isinstance(s, SlideSection):
            total += (s.a - prev) / s.a + math.log(s.b / s.a)
            prev = s.b
        else:
            total += (s.q.x - prev) * s.q.y
            prev = s.q.x
    return total


def discretize(gt: GeneralizedTile, m: int) -> Tile:
    """Replace every slide by ``m`` hyperbola points equally spaced in ln x."""
    if m < 2:
        raise ValueError("need at least two points per slide")
    pts: list[Point] = []
    for s in gt.sections:
        if isinstance(s, SlideSection):
            if s.a == s.b:
                new = [Point(s.a, 1.0 / s.a)]
            else:
                xs = np.exp(np.linspace(math.log(s.a), math.log(s.b), m))
                xs[0], xs[-1] = s.a, s.b
                new = [Point(float(x), 1.0 / float(x)) for x in xs]
        else:
            new = [s.q]
        for q in new:
            if pts and pts[-1] == q:
                continue
            pts.append(q)
    return Tile(Point(0.0, 0.0), tuple(pts))
