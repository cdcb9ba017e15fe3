"""Deterministic state renderers: SVG for the tilings, ASCII for quick looks.

SVG output is assembled from formatted strings with fixed precision, so a
given state renders to identical bytes on every platform; the golden-file
tests depend on that.  No drawing library is involved.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import UnsupportedFamily
from .families.boxes import BoxesParams, PlanePartition, plane_partition_to_lozenges
from .families.domino import DominoRegion

_SQ3_2 = 0.8660254037844386  # sqrt(3)/2

FORMATS = ("json", "svg", "ascii")

#: fills per lozenge orientation (X, Y, Z faces)
LOZENGE_PALETTE = {"X": "#4878a8", "Y": "#d8a048", "Z": "#e8e0d0"}
#: fills per domino orientation
DOMINO_PALETTE = {"h": "#4878a8", "v": "#d8a048"}

_ASCII_DOMINO_LIMIT = 60


@dataclass(frozen=True)
class RenderSpec:
    """Output options shared by the renderers."""

    format: str = "svg"
    scale: float = 24.0
    palette: dict | None = None

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}, got {self.format!r}")
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    def colors(self, default: dict) -> dict:
        if self.palette is None:
            return default
        if set(self.palette) != set(default):
            raise ValueError(
                f"palette must have exactly the keys {sorted(default)}"
            )
        return self.palette


def _project(x: float, y: float, z: float, s: float) -> tuple[float, float]:
    # isometric: x-axis toward lower left, y toward lower right, z up;
    # SVG y grows downward, hence the sign flip
    return ((y - x) * _SQ3_2 * s, ((x + y) / 2.0 - z) * s)


def _fmt(v: float) -> str:
    out = "%.2f" % v
    return "0.00" if out == "-0.00" else out


def _points(pts) -> str:
    return " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in pts)


def _svg_document(body: list, xs: list, ys: list, margin: float) -> str:
    x0, y0 = min(xs) - margin, min(ys) - margin
    w, h = max(xs) - min(xs) + 2 * margin, max(ys) - min(ys) + 2 * margin
    head = (
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{_fmt(x0)} {_fmt(y0)} {_fmt(w)} {_fmt(h)}" '
        f'width="{_fmt(w)}" height="{_fmt(h)}">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"


def render_lozenge_svg(pp: PlanePartition, params: BoxesParams, spec: RenderSpec) -> str:
    """The stacking's visible surface as a rhombus tiling of a hexagon.

    Exactly bc + ac + ab rhombi, filled by orientation, plus the hexagon
    outline.  Byte-deterministic for fixed input.
    """
    colors = spec.colors(LOZENGE_PALETTE)
    s = spec.scale
    a, b, c = params.a, params.b, params.c
    outline3 = [(a, 0, 0), (a, 0, c), (0, 0, c), (0, b, c), (0, b, 0), (a, b, 0)]
    outline = [_project(*v, s) for v in outline3]
    xs = [p[0] for p in outline]
    ys = [p[1] for p in outline]
    sw = 0.04 * s
    body = [f'<g stroke="#303030" stroke-width="{_fmt(sw)}" stroke-linejoin="round">']
    for tile in plane_partition_to_lozenges(pp, params):
        pts = [_project(*corner, s) for corner in tile.corners()]
        body.append(
            f'<polygon points="{_points(pts)}" fill="{colors[tile.orientation]}"/>'
        )
    body.append("</g>")
    body.append(
        f'<polygon points="{_points(outline)}" fill="none" '
        f'stroke="#303030" stroke-width="{_fmt(2 * sw)}" stroke-linejoin="round"/>'
    )
    return _svg_document(body, xs, ys, margin=0.5 * s + 2 * sw)


def render_domino_svg(region: DominoRegion, dominoes, spec: RenderSpec) -> str:
    """The tiling as rounded rectangles, one per domino, filled by orientation."""
    colors = spec.colors(DOMINO_PALETTE)
    s = spec.scale
    xs, ys = [], []
    for cx, cy in region.cells:
        xs.extend((cx * s, (cx + 1) * s))
        ys.extend((-cy * s, -(cy + 1) * s))
    inset = 0.06 * s
    sw = 0.04 * s
    body = [f'<g stroke="#303030" stroke-width="{_fmt(sw)}">']
    for pair in sorted(tuple(tuple(c) for c in d) for d in dominoes):
        (x1, y1), (x2, y2) = sorted(pair)
        horizontal = y1 == y2
        w = (2.0 if horizontal else 1.0) * s - 2 * inset
        h = (1.0 if horizontal else 2.0) * s - 2 * inset
        # cell (x, y) spans [x,x+1] x [y,y+1]; flip y for screen coords
        rx = x1 * s + inset
        ry = -(max(y1, y2) + 1) * s + inset
        body.append(
            f'<rect x="{_fmt(rx)}" y="{_fmt(ry)}" width="{_fmt(w)}" height="{_fmt(h)}" '
            f'rx="{_fmt(0.15 * s)}" fill="{colors["h" if horizontal else "v"]}"/>'
        )
    body.append("</g>")
    return _svg_document(body, xs, ys, margin=0.25 * s)


# ---------------------------------------------------------------------------
# ASCII
# ---------------------------------------------------------------------------


def _ascii_parts(parts) -> str:
    rows = [list(r) for r in parts]
    if rows and max((max(r) for r in rows if r), default=0) > 9:
        return "\n".join(" ".join(f"{v}" for v in r) for r in rows)
    return "\n".join("".join(str(v) for v in r) for r in rows)


_ASM_CHARS = {1: "+", 0: "0", -1: "-"}


def _ascii_asm(matrix) -> str:
    return "\n".join("".join(_ASM_CHARS[v] for v in row) for row in matrix)


def _ascii_indep(payload: dict) -> str:
    blk = ", ".join(str(v) for v in payload["black"])
    wht = ", ".join(str(v) for v in payload["white"])
    return f"black: {blk}\nwhite: {wht}"


def _ascii_ideal(payload: dict) -> str:
    inside = ", ".join(str(v) for v in payload["members"])
    return "{" + inside + "}"


def _ascii_domino(region: DominoRegion, dominoes) -> str:
    cells = region.cells
    min_x = min(c[0] for c in cells)
    max_x = max(c[0] for c in cells)
    min_y = min(c[1] for c in cells)
    max_y = max(c[1] for c in cells)
    if max_x - min_x + 1 > _ASCII_DOMINO_LIMIT or max_y - min_y + 1 > _ASCII_DOMINO_LIMIT:
        raise UnsupportedFamily(
            f"region too large for ascii output (over {_ASCII_DOMINO_LIMIT} cells wide); use svg"
        )
    grid = {}
    for d in dominoes:
        (x1, y1), (x2, y2) = sorted(tuple(c) for c in d)
        if y1 == y2:
            grid[(x1, y1)] = "["
            grid[(x2, y2)] = "]"
        else:
            grid[(x1, y1)] = "v"
            grid[(x2, y2)] = "^"
    lines = []
    for y in range(max_y, min_y - 1, -1):
        lines.append("".join(grid.get((x, y), " ") for x in range(min_x, max_x + 1)).rstrip())
    return "\n".join(lines)


def render_ascii(payload: dict, kind: str, carrier=None) -> str:
    """Text rendering of an encoded state, dispatched on the family kind."""
    if kind == "plane-partition":
        return _ascii_parts(payload["parts"])
    if kind == "asm":
        return _ascii_asm(payload["matrix"])
    if kind == "path":
        return payload["word"]
    if kind == "indep":
        return _ascii_indep(payload)
    if kind == "domino":
        return _ascii_domino(carrier, payload["dominoes"])
    if kind == "ideal":
        return _ascii_ideal(payload)
    raise UnsupportedFamily(f"no ascii renderer for kind {kind!r}")


def render_state(instance, payload: dict, spec: RenderSpec) -> str:
    """Render one encoded state per its RenderSpec; the main entry used by the CLI."""
    if spec.format == "json":
        return json.dumps(payload, sort_keys=True) + "\n"
    if spec.format == "ascii":
        return render_ascii(payload, instance.kind, instance.carrier) + "\n"
    if instance.kind == "plane-partition":
        pp = PlanePartition(tuple(tuple(r) for r in payload["parts"]))
        return render_lozenge_svg(pp, instance.carrier, spec)
    if instance.kind == "domino":
        return render_domino_svg(instance.carrier, payload["dominoes"], spec)
    raise UnsupportedFamily(f"no svg renderer for family {instance.family!r}")
