"""Plot emission for trajectories: ascii frames and a static SVG figure.

Each pile becomes a column of glyphs ('#' sand, '.' air) clipped to a
vertical window; frames are stacked per step.  The SVG variant draws the
same clipped columns as filled rectangles, one frame per step, and is a
static figure rather than anything interactive.
"""

from __future__ import annotations

from .heights import is_finite
from .lattice import Configuration, height_at
from .sa import OrbitRecord


def default_window(records: list[OrbitRecord]) -> tuple[int, int, int, int]:
    """(hlo, hhi, vlo, vhi) covering every core with one cell of slack."""
    hlo, hhi = -1, 1
    vlo, vhi = -1, 1
    for rec in records:
        x = rec.config
        e = x.extent()
        hlo, hhi = min(hlo, -e), max(hhi, e)
        for v in x.heights():
            if is_finite(v):
                vlo, vhi = min(vlo, v - 1), max(vhi, v + 1)
    return hlo, hhi, vlo, vhi


def ascii_frame(x: Configuration, hlo: int, hhi: int, vlo: int, vhi: int) -> str:
    if x.dim != 1:
        raise ValueError("rendering is for 1-d configurations")
    lines = []
    for v in range(vhi, vlo - 1, -1):
        row = "".join("#" if height_at(x, i) >= v else "." for i in range(hlo, hhi + 1))
        lines.append(row)
    return "\n".join(lines)


def render_ascii(records: list[OrbitRecord], window=None) -> str:
    if window is None:
        window = default_window(records)
    hlo, hhi, vlo, vhi = window
    frames = []
    for rec in records:
        frames.append(f"step {rec.step}\n" + ascii_frame(rec.config, hlo, hhi, vlo, vhi))
    return "\n\n".join(frames) + "\n"


_CELL = 12
_GAP = 18


def render_svg(records: list[OrbitRecord], window=None) -> str:
    if window is None:
        window = default_window(records)
    hlo, hhi, vlo, vhi = window
    cols = hhi - hlo + 1
    rows = vhi - vlo + 1
    frame_h = rows * _CELL
    width = cols * _CELL + 2 * _GAP
    height = len(records) * (frame_h + _GAP) + _GAP
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for k, rec in enumerate(records):
        y0 = _GAP + k * (frame_h + _GAP)
        parts.append(
            f'<text x="{_GAP}" y="{y0 - 4}" font-family="monospace" font-size="10">'
            f"step {rec.step}</text>"
        )
        parts.append(
            f'<rect x="{_GAP}" y="{y0}" width="{cols * _CELL}" height="{frame_h}" '
            'fill="none" stroke="#888"/>'
        )
        for c, i in enumerate(range(hlo, hhi + 1)):
            h = height_at(rec.config, i)
            # number of filled cells visible in the window
            if h >= vhi:
                filled = rows
            elif h < vlo:
                filled = 0
            else:
                filled = int(h) - vlo + 1
            if filled:
                x = _GAP + c * _CELL
                y = y0 + (rows - filled) * _CELL
                parts.append(
                    f'<rect x="{x}" y="{y}" width="{_CELL}" '
                    f'height="{filled * _CELL}" fill="#c2803d" stroke="#7a4a14"/>'
                )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
