"""Deterministic SVG drawings of packings, their maximal rectangles and crowns."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .charging import PENTAGON, PackingCrowns
from .packing import TilePacking

STYLE_ENV = "TILEPACK_STYLE"

# world window: the pentagon reaches down to -1/2 on both axes
WORLD_MIN, WORLD_MAX = -0.55, 1.05


@dataclass(frozen=True)
class RenderStyle:
    tile_fill: str = "#cfe2f3"
    tile_stroke: str = "#6d9eeb"
    rect_fill: str = "#1c4587"
    rect_opacity: float = 0.85
    crown_fill: str = "#ffd966"
    crown_opacity: float = 0.8
    crown_stroke: str = "#bf9000"
    point_fill: str = "#cc0000"
    origin_fill: str = "#000000"
    square_stroke: str = "#000000"
    pentagon_stroke: str = "#7f6000"
    stroke_width: float = 0.75
    point_radius: float = 2.0
    size_px: int = 600

    @classmethod
    def from_json(cls, data: dict) -> "RenderStyle":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown style keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path) -> "RenderStyle":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))

    def to_json(self) -> dict:
        return asdict(self)


def default_style() -> RenderStyle:
    """Style from the file named by $TILEPACK_STYLE, else the built-in one."""
    path = os.environ.get(STYLE_ENV)
    return RenderStyle.load(path) if path else RenderStyle()


def _fmt(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


class _Canvas:
    def __init__(self, size: int):
        self.size = size
        self.scale = size / (WORLD_MAX - WORLD_MIN)

    def xy(self, x: float, y: float) -> str:
        # SVG y grows downwards; flip so the picture is y-up
        sx = (x - WORLD_MIN) * self.scale
        sy = (WORLD_MAX - y) * self.scale
        return f"{_fmt(sx)},{_fmt(sy)}"

    def path(self, pts) -> str:
        return "M" + " L".join(self.xy(*p) for p in pts) + " Z"


def svg_string(
    pk: TilePacking | PackingCrowns,
    style: RenderStyle | None = None,
    show_crowns: bool = True,
    show_pentagon: bool = True,
) -> str:
    style = style or default_style()
    if isinstance(pk, PackingCrowns):
        crowns, packing = pk.crowns, pk.packing
    else:
        crowns, packing = [], pk
    cv = _Canvas(style.size_px)
    sw = _fmt(style.stroke_width)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{style.size_px}" height="{style.size_px}" '
        f'viewBox="0 0 {style.size_px} {style.size_px}">',
        '<rect width="100%" height="100%" fill="#ffffff"/>',
    ]
    out.append(f'<g id="tiles" fill="{style.tile_fill}" stroke="{style.tile_stroke}" stroke-width="{sw}">')
    for t in packing.tiles:
        out.append(f'<path d="{cv.path(t.polygon())}"/>')
    out.append("</g>")
    out.append(f'<g id="rects" fill="{style.rect_fill}" fill-opacity="{_fmt(style.rect_opacity)}">')
    for t in packing.tiles:
        r = t.max_rect[0]
        (x0, y0), (x1, y1) = r.lower_left, r.upper_right
        out.append(f'<path d="{cv.path([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])}"/>')
    out.append("</g>")
    if show_crowns and crowns:
        out.append(
            f'<g id="crowns" fill="{style.crown_fill}" fill-opacity="{_fmt(style.crown_opacity)}" '
            f'stroke="{style.crown_stroke}" stroke-width="{sw}">'
        )
        for c in crowns:
            for T in c.towers:
                if not T.is_degenerate:
                    out.append(f'<path d="{cv.path(T.vertices())}"/>')
        out.append("</g>")
    out.append(
        f'<path id="square" d="{cv.path([(0, 0), (1, 0), (1, 1), (0, 1)])}" fill="none" '
        f'stroke="{style.square_stroke}" stroke-width="{_fmt(2 * style.stroke_width)}"/>'
    )
    if show_pentagon:
        out.append(
            f'<path id="pentagon" d="{cv.path(PENTAGON)}" fill="none" stroke="{style.pentagon_stroke}" '
            f'stroke-width="{sw}" stroke-dasharray="4 3"/>'
        )
    out.append('<g id="points">')
    r = _fmt(style.point_radius)
    for p in packing.points:
        fill = style.origin_fill if p == (0.0, 0.0) else style.point_fill
        cx, cy = cv.xy(*p).split(",")
        out.append(f'<circle cx="{cx}" cy="{cy}" r="{r}" fill="{fill}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_svg(pk: TilePacking | PackingCrowns, style: RenderStyle | None = None, path=None, **kw) -> str:
    """Render to ``path`` (if given) and return the SVG text."""
    text = svg_string(pk, style, **kw)
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
